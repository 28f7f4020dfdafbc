#include "drs/runner.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "drs/errors.hpp"
#include "drs/pipeline.hpp"
#include "drs/util.hpp"

namespace drs {

using nlohmann::json;
namespace fs = std::filesystem;

RunConfig RunConfig::from_json_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigInvalid("bad config file " + path + ": " + e.what());
    }
    return from_json(j);
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    if (j.contains("method")) {
        auto m = parse_method(j["method"].get<std::string>());
        if (!m) throw ConfigInvalid("unknown method: " + j["method"].get<std::string>());
        c.method = *m;
    }
    if (j.contains("backend")) c.backend = BackendConfig::from_json(j["backend"]);
    if (j.contains("judge_backend")) c.judge_backend = BackendConfig::from_json(j["judge_backend"]);
    if (j.contains("search")) {
        const auto& s = j["search"];
        c.search.max_candidates = s.value("max_candidates", 3);
        c.search.max_depth = s.value("max_depth", 0);
        c.search.temperature = s.value("temperature", 0.0);
    }
    c.dataset_path = j.value("dataset", "");
    if (j.contains("exemplars") && !j["exemplars"].is_null())
        c.exemplars_path = j["exemplars"].get<std::string>();
    if (j.contains("mock_script") && !j["mock_script"].is_null())
        c.mock_script_path = j["mock_script"].get<std::string>();
    c.prompts_dir = j.value("prompts_dir", "prompts");
    c.output_dir = j.value("output_dir", "out");
    c.worker_count = j.value("workers", 1);
    return c;
}

void RunConfig::validate() const {
    if (dataset_path.empty()) throw ConfigInvalid("dataset path is required");
    if (worker_count < 1) throw ConfigInvalid("workers must be >= 1");
    search.validate();
    const bool mocked = mock_script_path.has_value();
    backend.validate(/*require_endpoint=*/!mocked);
    judge_backend.validate(/*require_endpoint=*/!mocked);
    if ((method == Method::few || method == Method::few_cot) && !exemplars_path)
        throw ConfigInvalid("few-shot methods require an exemplars file");
}

namespace {

struct RecordOutput {
    RecordRow row;
    std::vector<json> events;
};

struct RunContext {
    const RunConfig* config;
    const PromptCatalog* prompts;
    std::shared_ptr<Backend> pipeline_backend;
    std::shared_ptr<Backend> judge_backend;
    std::vector<FewShotExemplar> exemplars;
};

RecordOutput process_record(const RunContext& ctx, const DatasetRecord& record, size_t index) {
    const RunConfig& cfg = *ctx.config;
    RecordTrace trace;
    RecordOutput out;
    out.row.index = index;
    out.row.record_id = record.id;
    out.row.subset = record.subset;
    out.row.labeled_count = static_cast<int>(record.labeled_entities.size());

    LlmClient pipeline_client{ctx.pipeline_backend.get(), cfg.backend.model_id,
                              cfg.search.temperature, cfg.backend.max_output_tokens, &trace};
    // judge runs at fixed deterministic settings configured on its backend
    LlmClient judge_client{ctx.judge_backend.get(), cfg.judge_backend.model_id, 0.0,
                           cfg.judge_backend.max_output_tokens, &trace};

    const auto started = std::chrono::steady_clock::now();
    std::string final_question;
    std::string status = "failed";
    try {
        if (cfg.method == Method::drs) {
            auto outcome =
                reformulate_drs(record.document, record.question, cfg.search, pipeline_client,
                                *ctx.prompts, trace);
            if (outcome.status == ReformulationOutcome::Status::reformulated) {
                final_question = *outcome.final_question;
                status = "reformulated";
            }
        } else {
            final_question = baseline_reformulate(cfg.method, record.document, record.question,
                                                  ctx.exemplars, pipeline_client, *ctx.prompts,
                                                  &trace);
            if (!final_question.empty()) status = "reformulated";
        }

        if (status == "reformulated") {
            auto judged = judge_answerable(record.document, final_question, judge_client,
                                           *ctx.prompts, &trace);
            int overlap = judge_overlap(record.question, record.labeled_entities, final_question,
                                        judge_client, *ctx.prompts, &trace);
            out.row.answerable = judged.answerable;
            out.row.overlap_count = overlap;
            out.row.success = judge_success(judged.answerable, overlap, out.row.labeled_count);
        }
    } catch (const Error& e) {
        // a broken record never aborts the run; it is scored as a miss
        status = "error";
        trace.add({{"type", "record_error"}, {"error", e.what()}});
    }
    out.row.status = status;
    out.row.final_question = final_question;
    out.row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out.row.pipeline_calls = trace.count_calls() - trace.count_calls("judge_");
    out.row.judge_calls = trace.count_calls("judge_");

    trace.add({{"type", "record_result"},
               {"index", index},
               {"record_id", record.id},
               {"subset", record.subset},
               {"method", to_string(cfg.method)},
               {"status", status},
               {"final_question", final_question},
               {"answerable", out.row.answerable},
               {"overlap_count", out.row.overlap_count},
               {"labeled_count", out.row.labeled_count},
               {"success", out.row.success},
               {"pipeline_calls", out.row.pipeline_calls},
               {"judge_calls", out.row.judge_calls},
               {"wall_time_s", out.row.wall_time_s}});

    // stamp record identity on every event
    out.events.reserve(trace.events().size());
    for (auto e : trace.events()) {
        if (!e.contains("record_id")) e["record_id"] = record.id;
        if (!e.contains("index")) e["index"] = index;
        out.events.push_back(std::move(e));
    }
    return out;
}

AccuracyReport build_report(const std::string& method, const std::string& dataset,
                            const std::string& model, std::vector<RecordRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const RecordRow& a, const RecordRow& b) { return a.index < b.index; });

    AccuracyReport report;
    report.method = method;
    report.dataset = dataset;
    report.model = model;
    report.total_records = rows.size();

    std::vector<double> wall_times;
    for (const auto& row : rows) {
        auto& sub = report.per_subset[row.subset];
        ++sub.records;
        if (row.success) {
            ++sub.successes;
            ++report.total_successes;
        }
        wall_times.push_back(row.wall_time_s);
    }
    for (auto& [_, sub] : report.per_subset)
        sub.accuracy_pct = sub.records == 0
                               ? 0.0
                               : 100.0 * static_cast<double>(sub.successes) /
                                     static_cast<double>(sub.records);
    report.average_accuracy_pct =
        rows.empty() ? 0.0
                     : 100.0 * static_cast<double>(report.total_successes) /
                           static_cast<double>(rows.size());

    auto t = mean_std(wall_times);
    report.mean_wall_time_s = t.mean;
    report.std_wall_time_s = t.stddev;
    report.records = std::move(rows);
    return report;
}

void write_outputs(const AccuracyReport& report, const std::string& output_dir) {
    write_file((fs::path(output_dir) / "report.md").string(), render_report_markdown(report));
    write_file((fs::path(output_dir) / "report.json").string(),
               report_to_json(report).dump(2) + "\n");

    std::string verdicts;
    for (const auto& row : report.records) {
        EvalVerdict v;
        v.record_id = row.record_id;
        v.method = report.method;
        v.final_question = row.final_question;
        v.answerable = row.answerable;
        v.overlap_count = row.overlap_count;
        v.labeled_count = row.labeled_count;
        v.success = row.success;
        verdicts += v.to_json().dump();
        verdicts.push_back('\n');
    }
    write_file((fs::path(output_dir) / "verdicts.jsonl").string(), verdicts);

    json timing{{"mean_wall_time_s", report.mean_wall_time_s},
                {"std_wall_time_s", report.std_wall_time_s},
                {"records", report.total_records}};
    write_file((fs::path(output_dir) / "timing.json").string(), timing.dump(2) + "\n");
}

}  // namespace

AccuracyReport run(const RunConfig& config) {
    config.validate();

    auto prompts = PromptCatalog::load(config.prompts_dir);
    auto records = filter_unanswerable(load_dataset(config.dataset_path));

    RunContext ctx;
    ctx.config = &config;
    ctx.prompts = &prompts;

    std::optional<MockScript> mock;
    if (config.mock_script_path) mock = MockScript::load(*config.mock_script_path);

    // one cache instance per distinct path, shared between pipeline and judge
    std::shared_ptr<ResponseCache> pipeline_cache, judge_cache;
    if (config.backend.cache_path)
        pipeline_cache = std::make_shared<ResponseCache>(*config.backend.cache_path);
    if (config.judge_backend.cache_path) {
        if (config.backend.cache_path &&
            *config.judge_backend.cache_path == *config.backend.cache_path)
            judge_cache = pipeline_cache;
        else
            judge_cache = std::make_shared<ResponseCache>(*config.judge_backend.cache_path);
    }

    if (mock) {
        // a single scripted backend serves pipeline and judge prompts
        auto shared_mock = std::make_shared<MockBackend>(*mock);
        ctx.pipeline_backend = pipeline_cache
                                   ? std::static_pointer_cast<Backend>(
                                         std::make_shared<CachingBackend>(shared_mock,
                                                                          pipeline_cache))
                                   : std::static_pointer_cast<Backend>(shared_mock);
        ctx.judge_backend = judge_cache ? std::static_pointer_cast<Backend>(
                                              std::make_shared<CachingBackend>(shared_mock,
                                                                               judge_cache))
                                        : std::static_pointer_cast<Backend>(shared_mock);
    } else {
        ctx.pipeline_backend = make_backend(config.backend, std::nullopt, pipeline_cache);
        ctx.judge_backend = make_backend(config.judge_backend, std::nullopt, judge_cache);
    }

    if (config.exemplars_path) ctx.exemplars = load_exemplars(*config.exemplars_path);

    fs::create_directories(config.output_dir);
    TraceWriter trace_writer((fs::path(config.output_dir) / "trace.jsonl").string());
    trace_writer.write({{"type", "run_meta"},
                        {"method", to_string(config.method)},
                        {"dataset", config.dataset_path},
                        {"model", config.backend.model_id},
                        {"judge_model", config.judge_backend.model_id},
                        {"max_candidates", config.search.max_candidates},
                        {"temperature", config.search.temperature}});

    std::vector<RecordRow> rows(records.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= records.size()) return;
            RecordOutput out = process_record(ctx, records[i], i);
            trace_writer.write_block(out.events);
            rows[i] = std::move(out.row);
        }
    };

    const int workers = std::min<int>(config.worker_count, std::max<size_t>(records.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    auto report = build_report(to_string(config.method), config.dataset_path,
                               config.backend.model_id, std::move(rows));
    write_outputs(report, config.output_dir);
    return report;
}

std::vector<double> default_sweep_settings(SweepParameter parameter) {
    if (parameter == SweepParameter::temperature) return {0.0, 0.3, 0.5, 0.7, 1.0};
    return {1, 2, 3, 4, 5};
}

std::vector<AccuracyReport> sweep(const RunConfig& config, SweepParameter parameter,
                                  const std::vector<double>& settings) {
    if (settings.empty()) throw ConfigInvalid("sweep settings list is empty");
    config.validate();

    std::vector<AccuracyReport> reports;
    std::string csv = "setting,subset,accuracy\n";
    for (double setting : settings) {
        RunConfig cfg = config;
        std::string label;
        if (parameter == SweepParameter::temperature) {
            cfg.search.temperature = setting;
            label = format_double(setting, 1);
            cfg.output_dir =
                (fs::path(config.output_dir) / ("sweep_temperature_" + label)).string();
        } else {
            if (setting < 1.0) throw ConfigInvalid("max_candidates setting must be >= 1");
            cfg.search.max_candidates = static_cast<int>(setting);
            label = std::to_string(cfg.search.max_candidates);
            cfg.output_dir =
                (fs::path(config.output_dir) / ("sweep_candidates_" + label)).string();
        }

        AccuracyReport report = run(cfg);
        for (const auto& [subset, acc] : report.per_subset)
            csv += label + "," + subset + "," + format_double(acc.accuracy_pct, 2) + "\n";
        csv += label + ",Average," + format_double(report.average_accuracy_pct, 2) + "\n";
        reports.push_back(std::move(report));
    }
    write_file((fs::path(config.output_dir) / "sweep.csv").string(), csv);
    return reports;
}

TimingSummary time_run(const RunConfig& config, AccuracyReport* report_out) {
    AccuracyReport report = run(config);
    TimingSummary t;
    t.mean_s = report.mean_wall_time_s;
    t.std_s = report.std_wall_time_s;
    t.records = report.total_records;
    if (report_out) *report_out = std::move(report);
    return t;
}

AccuracyReport report_from_trace(const std::string& trace_path) {
    std::string method, dataset, model;
    std::vector<RecordRow> rows;
    for (const auto& e : read_trace(trace_path)) {
        const std::string type = e.value("type", "");
        if (type == "run_meta") {
            method = e.value("method", "");
            dataset = e.value("dataset", "");
            model = e.value("model", "");
        } else if (type == "record_result") {
            RecordRow row;
            row.index = e.value("index", size_t{0});
            row.record_id = e.value("record_id", "");
            row.subset = e.value("subset", "");
            row.status = e.value("status", "");
            row.final_question = e.value("final_question", "");
            row.answerable = e.value("answerable", false);
            row.overlap_count = e.value("overlap_count", 0);
            row.labeled_count = e.value("labeled_count", 1);
            row.success = e.value("success", false);
            row.pipeline_calls = e.value("pipeline_calls", 0);
            row.judge_calls = e.value("judge_calls", 0);
            row.wall_time_s = e.value("wall_time_s", 0.0);
            rows.push_back(std::move(row));
        }
    }
    return build_report(method, dataset, model, std::move(rows));
}

std::string render_report_markdown(const AccuracyReport& report) {
    std::string md = "# Accuracy Report\n\n";
    md += "- method: " + report.method + "\n";
    md += "- model: " + report.model + "\n";
    md += "- dataset: " + report.dataset + "\n\n";

    md += "| Subset | Records | Successes | Accuracy (%) |\n|---|---|---|---|\n";
    for (const auto& [subset, acc] : report.per_subset)
        md += "| " + subset + " | " + std::to_string(acc.records) + " | " +
              std::to_string(acc.successes) + " | " + format_double(acc.accuracy_pct, 2) +
              " |\n";
    md += "| **Average** | " + std::to_string(report.total_records) + " | " +
          std::to_string(report.total_successes) + " | " +
          format_double(report.average_accuracy_pct, 2) + " |\n\n";

    md += "## Per-record verdicts\n\n";
    md += "| # | Record | Subset | Status | Answerable | Overlap | Labeled | Success | Calls "
          "(pipeline+judge) | Final question |\n";
    md += "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : report.records) {
        md += "| " + std::to_string(row.index) + " | " + row.record_id + " | " + row.subset +
              " | " + row.status + " | " + (row.answerable ? "yes" : "no") + " | " +
              std::to_string(row.overlap_count) + " | " + std::to_string(row.labeled_count) +
              " | " + (row.success ? "yes" : "no") + " | " + std::to_string(row.pipeline_calls) +
              "+" + std::to_string(row.judge_calls) + " | " + row.final_question + " |\n";
    }
    return md;
}

json report_to_json(const AccuracyReport& report) {
    json per_subset = json::object();
    for (const auto& [subset, acc] : report.per_subset)
        per_subset[subset] = {{"records", acc.records},
                              {"successes", acc.successes},
                              {"accuracy_pct", acc.accuracy_pct}};

    json rows = json::array();
    for (const auto& row : report.records)
        rows.push_back({{"index", row.index},
                        {"record_id", row.record_id},
                        {"subset", row.subset},
                        {"status", row.status},
                        {"final_question", row.final_question},
                        {"answerable", row.answerable},
                        {"overlap_count", row.overlap_count},
                        {"labeled_count", row.labeled_count},
                        {"success", row.success},
                        {"pipeline_calls", row.pipeline_calls},
                        {"judge_calls", row.judge_calls}});

    return {{"method", report.method},
            {"model", report.model},
            {"dataset", report.dataset},
            {"per_subset", per_subset},
            {"total_records", report.total_records},
            {"total_successes", report.total_successes},
            {"average_accuracy_pct", report.average_accuracy_pct},
            {"records", rows}};
}

}  // namespace drs
