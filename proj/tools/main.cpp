#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "graphonlab/harness.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output_override) {
    using namespace graphonlab;
    ExperimentConfig cfg = ExperimentConfig::load(config_path);
    cfg.validate();
    if (!output_override.empty()) cfg.output = output_override;
    if (cfg.output.empty()) {
        std::cerr << "error: no output prefix (config field 'output' or --output)\n";
        return 1;
    }
    const ExperimentResult result = run_experiment(cfg);
    write_outputs(result, cfg.output);
    std::cout << result.summary.dump(2) << "\n";
    std::cout << "records: " << cfg.output << ".csv (+ .jsonl, .summary.json)\n";
    if (!result.gates_pass) {
        for (const auto& f : result.gate_failures) std::cout << "gate failure: " << f << "\n";
        return 2;
    }
    return 0;
}

int cmd_validate(const std::string& config_path) {
    using namespace graphonlab;
    const ExperimentConfig cfg = ExperimentConfig::load(config_path);
    cfg.validate();
    std::cout << "OK: " << cfg.experiment << " (" << cfg.regime << " regime)\n";
    return 0;
}

int cmd_report(const std::string& records_path) {
    using namespace graphonlab;
    const bool jsonl = records_path.size() > 6 &&
                       records_path.compare(records_path.size() - 6, 6, ".jsonl") == 0;
    const RecordTable table =
        jsonl ? RecordTable::read_jsonl(records_path) : RecordTable::read_csv(records_path);
    std::cout << summarize_records(table).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification laboratory for interacting diffusions with "
                 "graphon-structured coupling"};
    app.require_subcommand(1);

    std::string config_path, output_override, records_path;

    CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "JSON experiment config")->required();
    run->add_option("--output", output_override, "Override the output prefix");

    CLI::App* validate = app.add_subcommand("validate", "Validate a config file");
    validate->add_option("config", config_path, "JSON experiment config")->required();

    CLI::App* report = app.add_subcommand("report", "Summarize a records file (.csv or .jsonl)");
    report->add_option("records", records_path, "Records file produced by run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, output_override);
        if (validate->parsed()) return cmd_validate(config_path);
        if (report->parsed()) return cmd_report(records_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
