// Command-line front end. Every subcommand wraps one pipeline stage; a full
// run is `rbmflow pipeline --config experiment.json`.

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "rbmflow/pipeline.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonOptions& options) {
    cmd->add_option("--config", options.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", options.seed, "override the config seed")
        ->each([&](const std::string&) { options.seed_set = true; });
    cmd->add_option("--out", options.out_dir, "override the output directory");
    cmd->add_option("--workers", options.workers,
                    "worker threads (default: config, RBMFLOW_WORKERS, hardware)");
}

rbmflow::ExperimentConfig resolve(const CommonOptions& options) {
    rbmflow::ExperimentConfig config = rbmflow::load_config(options.config_path);
    if (options.seed_set) config.seed = options.seed;
    if (!options.out_dir.empty()) config.out_dir = options.out_dir;
    if (options.workers >= 0) config.workers = options.workers;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ising / RBM reconstruction-flow laboratory"};
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, std::function<void(
                                              const rbmflow::ExperimentConfig&)>>>
        commands = {
            {"generate", {"generate Metropolis datasets", rbmflow::cmd_generate}},
            {"calibrate", {"fit the T-E calibration curves", rbmflow::cmd_calibrate}},
            {"train", {"train one machine per N_h grid point", rbmflow::cmd_train}},
            {"flow", {"iterate reconstruction on the test ensembles", rbmflow::cmd_flow}},
            {"sweep", {"train + flow + fixed point across the N_h grid",
                       rbmflow::cmd_sweep}},
            {"spectra", {"eigen-analysis of W W^T per trained model",
                         rbmflow::cmd_spectra}},
            {"fit", {"fit the minimum-energy law over N_temp", rbmflow::cmd_fit}},
            {"report", {"assemble summary.txt from emitted CSVs", rbmflow::cmd_report}},
            {"pipeline", {"run every stage in order", rbmflow::cmd_pipeline}},
        };

    std::map<std::string, CommonOptions> options;
    for (const auto& [name, entry] : commands)
        add_common(app.add_subcommand(name, entry.first), options[name]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "{\"error\":\"" << e.get_name() << ": " << e.what() << "\"}\n";
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    }

    for (const auto& [name, entry] : commands) {
        if (!app.got_subcommand(name)) continue;
        try {
            entry.second(resolve(options[name]));
        } catch (const std::exception& e) {
            std::cerr << "{\"error\":\"" << e.what() << "\"}\n";
            return 1;
        }
    }
    return 0;
}
