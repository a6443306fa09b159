#include "afcsim/presets.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

void print_error(const std::string& kind, const std::string& message) {
    nlohmann::json err;
    err["error"] = kind;
    err["message"] = message;
    std::cerr << err.dump() << "\n";
}

int cmd_run(const std::string& preset, const std::string& config_path, std::uint64_t seed,
            bool seed_given, const std::string& out_dir) {
    afcsim::ExperimentConfig config;
    try {
        config = afcsim::load_config_file(config_path);
    } catch (const std::invalid_argument& e) {
        print_error("config", e.what());
        return kExitConfigError;
    }
    if (seed_given) config.detector.seed = seed;

    try {
        const afcsim::PresetResult result = afcsim::run_preset(preset, config, out_dir);
        for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        print_error("config", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return kExitRuntimeError;
    }
}

int cmd_validate(const std::string& config_path) {
    nlohmann::json raw;
    if (config_path.empty()) {
        raw = afcsim::to_json(afcsim::default_config());
    } else {
        std::ifstream in(config_path);
        if (!in) {
            print_error("config", "cannot open config file: " + config_path);
            return kExitConfigError;
        }
        try {
            in >> raw;
        } catch (const nlohmann::json::exception& e) {
            print_error("config", std::string("config is not valid JSON: ") + e.what());
            return kExitConfigError;
        }
    }

    const auto errors = afcsim::validate_config_json(raw);
    if (errors.empty()) {
        std::cout << "config ok\n";
        return kExitOk;
    }
    nlohmann::json report;
    report["error"] = "config";
    report["violations"] = nlohmann::json::array();
    for (const auto& e : errors)
        report["violations"].push_back({{"path", e.path}, {"message", e.message}});
    std::cerr << report.dump(2) << "\n";
    return kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"afcsim - atomic-frequency-comb spin-wave memory simulator"};
    app.require_subcommand(1);

    std::string preset, config_path, out_dir = "out";
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "run a named experiment preset");
    run->add_option("preset", preset, "preset name (see list-presets)")->required();
    run->add_option("--config", config_path, "JSON config file (defaults when omitted)");
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--out", out_dir, "output directory");

    auto* validate = app.add_subcommand("validate", "validate a config file");
    validate->add_option("--config", config_path, "JSON config file")->required();

    auto* list = app.add_subcommand("list-presets", "list available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    }

    if (run->parsed()) return cmd_run(preset, config_path, seed, seed_opt->count() > 0, out_dir);
    if (validate->parsed()) return cmd_validate(config_path);
    if (list->parsed()) {
        for (const auto& [name, blurb] : afcsim::list_presets())
            std::cout << name << "  -  " << blurb << "\n";
        return kExitOk;
    }
    return kExitConfigError;
}
