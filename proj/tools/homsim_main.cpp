#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "homsim/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
    std::string out_dir;
    std::string seed;
    std::string trials;
    bool plot = false;
};

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw homsim::ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

homsim::ExperimentConfig load_config(const std::string& json_text,
                                     const Overrides& ov) {
    homsim::ExperimentConfig cfg = homsim::parse_config(json_text);
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    if (!ov.seed.empty()) cfg.seed = std::stoull(ov.seed);
    if (!ov.trials.empty()) cfg.trials = std::stoull(ov.trials);
    if (ov.plot) cfg.plot = true;
    cfg.validate();
    return cfg;
}

int run_and_report(const homsim::ExperimentConfig& cfg) {
    const homsim::RunResult result = homsim::run_experiment(cfg);
    for (const std::string& f : result.files_written) {
        std::cout << "wrote " << f << "\n";
    }
    return 0;
}

void check_mode(const homsim::ExperimentConfig& cfg,
                std::initializer_list<homsim::ExperimentMode> allowed,
                const std::string& command) {
    for (homsim::ExperimentMode m : allowed) {
        if (cfg.mode == m) return;
    }
    throw homsim::ConfigError("config mode '" + homsim::to_string(cfg.mode) +
                              "' does not belong to the '" + command +
                              "' command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "homsim - two-photon and weak-coherent-state interference "
        "simulator for beam-splitter networks"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;
    app.add_option("--out", ov.out_dir, "override output directory");
    app.add_option("--seed", ov.seed, "override RNG seed");
    app.add_option("--trials", ov.trials, "override Monte Carlo trials/point");
    app.add_flag("--plot", ov.plot, "also write an SVG plot");

    CLI::App* scan = app.add_subcommand(
        "scan", "run an analytic or Monte Carlo interferogram scan");
    scan->add_option("--config", config_path, "experiment config (JSON)")
        ->required();

    CLI::App* hbt = app.add_subcommand(
        "hbt", "run a heralded HBT g2(0) scan");
    hbt->add_option("--config", config_path, "experiment config (JSON)")
        ->required();

    CLI::App* fit_cmd = app.add_subcommand(
        "fit", "fit the Gaussian-beat model to a scan CSV");
    fit_cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();

    CLI::App* recipes = app.add_subcommand("recipes", "bundled experiment recipes");
    recipes->require_subcommand(1);
    CLI::App* recipes_list = recipes->add_subcommand("list", "list recipes");
    CLI::App* recipes_run = recipes->add_subcommand("run", "run a recipe");
    std::string recipe_name;
    recipes_run->add_option("name", recipe_name, "recipe name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) {
            homsim::ExperimentConfig cfg = load_config(read_file(config_path), ov);
            check_mode(cfg,
                       {homsim::ExperimentMode::AnalyticDip,
                        homsim::ExperimentMode::AnalyticPeak,
                        homsim::ExperimentMode::WcsDip,
                        homsim::ExperimentMode::WcsPeak},
                       "scan");
            return run_and_report(cfg);
        }
        if (hbt->parsed()) {
            homsim::ExperimentConfig cfg = load_config(read_file(config_path), ov);
            check_mode(cfg, {homsim::ExperimentMode::HbtScan}, "hbt");
            return run_and_report(cfg);
        }
        if (fit_cmd->parsed()) {
            homsim::ExperimentConfig cfg = load_config(read_file(config_path), ov);
            check_mode(cfg, {homsim::ExperimentMode::Fit}, "fit");
            return run_and_report(cfg);
        }
        if (recipes_list->parsed()) {
            for (const std::string& name : homsim::recipe_names()) {
                std::cout << name << "  -  "
                          << homsim::recipe_description(name) << "\n";
            }
            return 0;
        }
        if (recipes_run->parsed()) {
            homsim::ExperimentConfig cfg =
                load_config(homsim::recipe_json(recipe_name), ov);
            return run_and_report(cfg);
        }
    } catch (const homsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
