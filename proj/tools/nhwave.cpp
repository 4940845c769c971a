// nhwave: run scenario files or named presets.
//
//   nhwave simulate <config.yaml | preset> [--precision-bits B] [--jobs J] [--output-dir D] [--strict]
//                   [--threshold-log10 T]
//   nhwave predict  <config.yaml | preset> [--precision-bits B] [--output-dir D] [--strict]
//   nhwave presets  [name]
//
// Exit codes: 0 ok, 1 invalid configuration, 2 numeric / precision failure, 3 I/O.

#include "nhwave/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

int load(const std::string& source, bool strict, nhwave::ScenarioConfig& cfg) {
    std::vector<std::string> warnings;
    try {
        if (std::filesystem::exists(source)) {
            cfg = nhwave::load_scenario(source, strict, &warnings);
        } else if (const auto* p = nhwave::find_preset(source)) {
            cfg = nhwave::parse_scenario(p->yaml, strict, &warnings);
        } else {
            std::cerr << "error: no such file or preset: " << source << '\n';
            return 3;
        }
    } catch (const nhwave::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Hermitian lattice wave-packet simulator"};
    app.require_subcommand(1);

    std::string source;
    std::optional<long> bits;
    int jobs = 1;
    std::optional<std::string> out_dir;
    bool strict = false;

    auto* sim = app.add_subcommand("simulate", "Evolve a scenario and write trajectories, analytics and events");
    auto* pred = app.add_subcommand("predict", "Write closed-form analytics for a scenario without evolving");
    for (auto* sub : {sim, pred}) {
        sub->add_option("config", source, "Scenario YAML file or preset name")->required();
        sub->add_option("--precision-bits", bits, "Override evolution.precision_bits")->check(CLI::Range(53L, 1L << 20));
        sub->add_option("--output-dir", out_dir, "Override output.directory");
        sub->add_flag("--strict", strict, "Treat unknown configuration keys as errors");
    }
    std::optional<double> threshold;
    sim->add_option("--threshold-log10", threshold, "Override analysis.threshold_log10 for front detection")
        ->check(CLI::Range(-1000.0, -1e-9));
    sim->add_option("--jobs", jobs, "Ensemble members evolved concurrently")->check(CLI::PositiveNumber);

    std::string preset_name;
    auto* pre = app.add_subcommand("presets", "List presets, or print one preset's YAML");
    pre->add_option("name", preset_name, "Preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (*pre) {
        if (preset_name.empty()) {
            for (const auto& p : nhwave::list_presets()) std::cout << p.name << "\t" << p.description << '\n';
            return 0;
        }
        const auto* p = nhwave::find_preset(preset_name);
        if (!p) {
            std::cerr << "error: unknown preset " << preset_name << '\n';
            return 1;
        }
        std::cout << p->yaml;
        return 0;
    }

    nhwave::ScenarioConfig cfg;
    if (const int rc = load(source, strict, cfg)) return rc;
    if (threshold) cfg.analysis.threshold_log10 = *threshold;
    nhwave::RunOptions opt;
    if (bits) opt.precision_bits = static_cast<nhwave::Bits>(*bits);
    opt.jobs = jobs;
    opt.output_dir = out_dir;
    if (*sim) return nhwave::run_scenario(cfg, opt, std::cerr);
    return nhwave::predict(cfg, opt, std::cout, std::cerr);
}
