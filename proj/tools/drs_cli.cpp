// Command-line front end: run an experiment, sweep a parameter, time a run,
// print dataset statistics, convert a raw export, or rebuild a report from an
// existing trace.

#include <CLI11.hpp>

#include <iostream>

#include "drs/dataset.hpp"
#include "drs/errors.hpp"
#include "drs/runner.hpp"
#include "drs/util.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string method;
    std::string dataset;
    std::string mock_script;
    std::string output_dir;
    int max_candidates = 0;
    double temperature = -1.0;
    int workers = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration");
    cmd->add_option("--method", flags.method, "drs | zero | zero_cot | few | few_cot");
    cmd->add_option("--dataset", flags.dataset, "JSONL dataset path");
    cmd->add_option("--mock-script", flags.mock_script, "scripted mock backend (offline runs)");
    cmd->add_option("--output-dir", flags.output_dir, "where reports and traces are written");
    cmd->add_option("--max-candidates", flags.max_candidates, "candidate question cap");
    cmd->add_option("--temperature", flags.temperature, "pipeline sampling temperature");
    cmd->add_option("--workers", flags.workers, "concurrent record workers");
}

// CLI flags override config-file fields.
drs::RunConfig resolve_config(const CommonFlags& flags) {
    drs::RunConfig config;
    if (!flags.config_path.empty())
        config = drs::RunConfig::from_json_file(flags.config_path);
    if (!flags.method.empty()) {
        auto m = drs::parse_method(flags.method);
        if (!m) throw drs::ConfigInvalid("unknown method: " + flags.method);
        config.method = *m;
    }
    if (!flags.dataset.empty()) config.dataset_path = flags.dataset;
    if (!flags.mock_script.empty()) config.mock_script_path = flags.mock_script;
    if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
    if (flags.max_candidates > 0) config.search.max_candidates = flags.max_candidates;
    if (flags.temperature >= 0.0) config.search.temperature = flags.temperature;
    if (flags.workers > 0) config.worker_count = flags.workers;
    return config;
}

void print_summary(const drs::AccuracyReport& report) {
    std::cout << "method " << report.method << ": " << report.total_successes << "/"
              << report.total_records << " reformulated successfully ("
              << drs::format_double(report.average_accuracy_pct, 2) << "%)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DFS-guided question reformulation experiments"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* cmd_run = app.add_subcommand("run", "run one method over a dataset");
    add_common_flags(cmd_run, flags);

    auto* cmd_sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common_flags(cmd_sweep, flags);
    std::string sweep_param = "candidates";
    std::string sweep_values;
    cmd_sweep->add_option("--parameter", sweep_param, "temperature | candidates");
    cmd_sweep->add_option("--values", sweep_values, "comma-separated settings (optional)");

    auto* cmd_time = app.add_subcommand("time", "measure per-sample wall time");
    add_common_flags(cmd_time, flags);

    auto* cmd_stats = app.add_subcommand("stats", "dataset statistics");
    std::string stats_dataset;
    cmd_stats->add_option("--dataset", stats_dataset, "JSONL dataset path")->required();

    auto* cmd_convert = app.add_subcommand("convert", "map a raw JSONL export into this schema");
    std::string conv_in, conv_out, conv_subset = "user-defined";
    cmd_convert->add_option("--input", conv_in, "raw JSONL file")->required();
    cmd_convert->add_option("--output", conv_out, "converted JSONL file")->required();
    cmd_convert->add_option("--subset", conv_subset, "subset name when the export has none");

    auto* cmd_report = app.add_subcommand("report", "rebuild report files from a trace");
    std::string report_trace, report_out = "out";
    cmd_report->add_option("--from-trace", report_trace, "trace.jsonl path")->required();
    cmd_report->add_option("--output-dir", report_out, "where to write report.md/report.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            print_summary(drs::run(resolve_config(flags)));
        } else if (cmd_sweep->parsed()) {
            drs::SweepParameter param;
            if (sweep_param == "temperature")
                param = drs::SweepParameter::temperature;
            else if (sweep_param == "candidates")
                param = drs::SweepParameter::max_candidates;
            else
                throw drs::ConfigInvalid("unknown sweep parameter: " + sweep_param);

            std::vector<double> settings;
            if (!sweep_values.empty()) {
                size_t pos = 0;
                while (pos <= sweep_values.size()) {
                    size_t comma = sweep_values.find(',', pos);
                    if (comma == std::string::npos) comma = sweep_values.size();
                    std::string tok = drs::trim(sweep_values.substr(pos, comma - pos));
                    if (!tok.empty()) settings.push_back(std::stod(tok));
                    pos = comma + 1;
                }
            } else {
                settings = drs::default_sweep_settings(param);
            }

            auto reports = drs::sweep(resolve_config(flags), param, settings);
            for (const auto& r : reports) print_summary(r);
        } else if (cmd_time->parsed()) {
            auto t = drs::time_run(resolve_config(flags));
            std::cout << "per-sample wall time over " << t.records
                      << " records: " << drs::format_double(t.mean_s, 3) << "s ± "
                      << drs::format_double(t.std_s, 3) << "s\n";
        } else if (cmd_stats->parsed()) {
            auto records = drs::load_dataset(stats_dataset);
            std::cout << drs::render_stats_markdown(drs::dataset_stats(records));
        } else if (cmd_convert->parsed()) {
            auto result = drs::convert_dataset(conv_in, conv_subset);
            drs::save_dataset(conv_out, result.records);
            std::cout << "wrote " << result.records.size() << " records";
            if (result.dropped)
                std::cout << " (dropped " << result.dropped
                          << " unanswerable records without entities)";
            std::cout << "\n";
        } else if (cmd_report->parsed()) {
            auto report = drs::report_from_trace(report_trace);
            drs::write_file(report_out + "/report.md", drs::render_report_markdown(report));
            drs::write_file(report_out + "/report.json",
                            drs::report_to_json(report).dump(2) + "\n");
            print_summary(report);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
