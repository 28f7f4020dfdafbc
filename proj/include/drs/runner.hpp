#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drs/backend.hpp"
#include "drs/baselines.hpp"
#include "drs/dataset.hpp"
#include "drs/evaluation.hpp"
#include "drs/search.hpp"

namespace drs {

struct RunConfig {
    Method method = Method::drs;
    BackendConfig backend;
    BackendConfig judge_backend;
    SearchConfig search;
    std::string dataset_path;
    std::optional<std::string> exemplars_path;
    std::optional<std::string> mock_script_path;
    std::string prompts_dir = "prompts";
    std::string output_dir = "out";
    int worker_count = 1;

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json(const nlohmann::json& j);
    void validate() const;  // throws ConfigInvalid before any call is made
};

struct SubsetAccuracy {
    size_t records = 0;
    size_t successes = 0;
    double accuracy_pct = 0.0;
};

struct RecordRow {
    size_t index = 0;
    std::string record_id;
    std::string subset;
    std::string status;  // reformulated | failed | error
    std::string final_question;
    bool answerable = false;
    int overlap_count = 0;
    int labeled_count = 1;
    bool success = false;
    int pipeline_calls = 0;
    int judge_calls = 0;
    double wall_time_s = 0.0;  // volatile; kept out of report.md / report.json
};

// Accuracy tables plus timing. The tables are a pure function of the trace
// file; wall-clock timing is reported separately so replayed runs regenerate
// byte-identical reports.
struct AccuracyReport {
    std::string method;
    std::string dataset;
    std::string model;
    std::map<std::string, SubsetAccuracy> per_subset;
    size_t total_records = 0;
    size_t total_successes = 0;
    double average_accuracy_pct = 0.0;  // micro-average over the union of records
    std::vector<RecordRow> records;
    double mean_wall_time_s = 0.0;
    double std_wall_time_s = 0.0;
};

// Processes every unanswerable record with the configured method, judges each
// outcome, and writes trace.jsonl, report.md, report.json, verdicts.jsonl and
// timing.json under output_dir. Per-record failures count as misses.
AccuracyReport run(const RunConfig& config);

enum class SweepParameter { temperature, max_candidates };

// One run per setting (temperature {0.0,0.3,0.5,0.7,1.0} or candidates 1..5
// by default), each in its own subdirectory, plus a sweep.csv of
// (setting, subset, accuracy).
std::vector<AccuracyReport> sweep(const RunConfig& config, SweepParameter parameter,
                                  const std::vector<double>& settings);
std::vector<double> default_sweep_settings(SweepParameter parameter);

struct TimingSummary {
    double mean_s = 0.0;
    double std_s = 0.0;
    size_t records = 0;
};

// Full run; returns per-sample wall-clock statistics (dataset load excluded,
// all model calls included).
TimingSummary time_run(const RunConfig& config, AccuracyReport* report_out = nullptr);

// Rebuilds the report from a trace file alone.
AccuracyReport report_from_trace(const std::string& trace_path);

std::string render_report_markdown(const AccuracyReport& report);
nlohmann::json report_to_json(const AccuracyReport& report);

}  // namespace drs
