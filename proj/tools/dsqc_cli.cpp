// dsqc: run protocol scenarios, replay reports, list presets.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dsqc/harness.hpp"
#include "dsqc/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Deterministic secure quantum communication simulator"};
    app.require_subcommand(1);

    // run: preset or config file first, then flag overrides.
    auto* run = app.add_subcommand("run", "Run a scenario and write its report");
    std::string config_path, preset_name, out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    unsigned threads = 1;
    auto* config_opt = run->add_option("--config", config_path, "Scenario config file (JSON)");
    run->add_option("--preset", preset_name, "Named preset instead of a config file")->excludes(config_opt);
    run->add_option("--seed", seed, "Master seed (overrides the config)");
    run->add_option("--trials", trials, "Number of trials (overrides the config)");
    run->add_option("--out", out_path, "Report path; transcripts go to <out>.transcripts.jsonl");
    run->add_option("--threads", threads, "Worker threads; results do not depend on this")->check(CLI::PositiveNumber);

    auto* replay = app.add_subcommand("replay", "Re-run a report from its seed and verify it");
    std::string report_path;
    replay->add_option("--report", report_path, "Report written by `run`")->required();
    replay->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* presets_cmd = app.add_subcommand("presets", "Preset scenarios");
    presets_cmd->require_subcommand(1);
    auto* presets_list = presets_cmd->add_subcommand("list", "List preset names");
    auto* presets_show = presets_cmd->add_subcommand("show", "Print a preset as a config file");
    std::string show_name;
    presets_show->add_option("name", show_name)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            dsqc::ScenarioConfig cfg;
            if (!config_path.empty())
                cfg = dsqc::load_config(config_path);
            else if (!preset_name.empty())
                cfg = dsqc::find_preset(preset_name).config;
            else
                throw std::invalid_argument("run needs --config or --preset");
            if (seed) cfg.seed = *seed;
            if (trials) cfg.trials = *trials;
            cfg.validate();

            if (out_path.empty()) {
                dsqc::RunOptions opts;
                opts.threads = threads;
                std::cout << dsqc::render_report(dsqc::run_scenario(cfg, opts));
            } else {
                const auto summary = dsqc::run_and_emit(cfg, out_path, threads);
                std::cout << dsqc::summary_to_json(summary)["aggregates"].dump(2) << "\n";
            }
        } else if (*replay) {
            const auto report = dsqc::load_report(report_path);
            const auto result = dsqc::replay_report(report, threads);
            if (result.identical) {
                std::cout << "replay: identical\n";
                return 0;
            }
            std::cout << "replay: MISMATCH\n";
            for (const auto& m : result.mismatches) std::cout << "  " << m << "\n";
            return 1;
        } else if (*presets_list) {
            for (const auto& p : dsqc::presets()) std::cout << p.name << "\t" << p.description << "\n";
        } else if (*presets_show) {
            std::cout << dsqc::config_to_json(dsqc::find_preset(show_name).config).dump(2) << "\n";
        }
    } catch (const dsqc::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
