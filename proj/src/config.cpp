#include "rbmflow/config.hpp"

#include <cstdlib>
#include <stdexcept>

#include "json.hpp"
#include "rbmflow/csv.hpp"
#include "rbmflow/parallel.hpp"

namespace rbmflow {

namespace {

using nlohmann::ordered_json;

template <typename T>
void read_into(const ordered_json& node, const char* key, T& value) {
    if (node.contains(key)) value = node.at(key).get<T>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }

    ExperimentConfig config;
    read_into(root, "out_dir", config.out_dir);
    read_into(root, "seed", config.seed);
    read_into(root, "workers", config.workers);
    read_into(root, "lattice_sides", config.lattice_sides);
    read_into(root, "n_temps", config.n_temps);
    read_into(root, "nh_grid", config.nh_grid);
    if (root.contains("sampler")) read_into(root.at("sampler"), "sweeps", config.sweeps);
    if (root.contains("train")) {
        const auto& t = root.at("train");
        read_into(t, "learning_rate", config.train.learning_rate);
        read_into(t, "momentum", config.train.momentum);
        read_into(t, "epochs", config.train.epochs);
        read_into(t, "minibatch", config.train.minibatch);
        read_into(t, "eval_subsample", config.train.eval_subsample);
    }
    if (root.contains("flow")) {
        const auto& f = root.at("flow");
        read_into(f, "max_iters", config.flow.max_iters);
        read_into(f, "window", config.flow.window);
        read_into(f, "tolerance", config.flow.tolerance);
    }
    if (root.contains("fit")) read_into(root.at("fit"), "min_ntemp", config.fit_min_ntemp);

    if (config.lattice_sides.empty()) throw std::invalid_argument("config: lattice_sides empty");
    if (config.n_temps.empty()) throw std::invalid_argument("config: n_temps empty");
    for (int side : config.lattice_sides)
        if (side < 2) throw std::invalid_argument("config: lattice side must be >= 2");
    for (int n : config.n_temps)
        if (n < 2) throw std::invalid_argument("config: n_temps entries must be >= 2");
    for (int nh : config.nh_grid)
        if (nh < 1) throw std::invalid_argument("config: nh_grid entries must be >= 1");
    if (config.sweeps < 1) throw std::invalid_argument("config: sweeps must be >= 1");
    if (config.train.epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (config.train.minibatch < 1)
        throw std::invalid_argument("config: minibatch must be >= 1");
    if (config.train.learning_rate <= 0.0)
        throw std::invalid_argument("config: learning_rate must be > 0");
    if (config.train.momentum < 0.0 || config.train.momentum >= 1.0)
        throw std::invalid_argument("config: momentum must be in [0, 1)");
    if (config.flow.max_iters < config.flow.window + 1)
        throw std::invalid_argument("config: flow max_iters must exceed the window");
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_file(path));
}

std::string config_to_json(const ExperimentConfig& config) {
    ordered_json root;
    root["out_dir"] = config.out_dir;
    root["seed"] = config.seed;
    root["workers"] = config.workers;
    root["lattice_sides"] = config.lattice_sides;
    root["n_temps"] = config.n_temps;
    root["nh_grid"] = config.nh_grid;
    root["sampler"] = {{"sweeps", config.sweeps}};
    root["train"] = {{"learning_rate", config.train.learning_rate},
                     {"momentum", config.train.momentum},
                     {"epochs", config.train.epochs},
                     {"minibatch", config.train.minibatch},
                     {"eval_subsample", config.train.eval_subsample}};
    root["flow"] = {{"max_iters", config.flow.max_iters},
                    {"window", config.flow.window},
                    {"tolerance", config.flow.tolerance}};
    root["fit"] = {{"min_ntemp", config.fit_min_ntemp}};
    return root.dump(2) + "\n";
}

std::vector<int> nh_grid_for_side(const ExperimentConfig& config, int side) {
    if (!config.nh_grid.empty()) {
        for (int nh : config.nh_grid)
            if (nh > side * side)
                throw std::invalid_argument("config: nh_grid entry exceeds N_v");
        return config.nh_grid;
    }
    std::vector<int> grid;
    for (int k = 1; k * k <= side * side; ++k) grid.push_back(k * k);
    return grid;
}

int effective_workers(const ExperimentConfig& config) {
    if (config.workers > 0) return config.workers;
    if (const char* env = std::getenv("RBMFLOW_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return resolve_workers(0);
}

}  // namespace rbmflow
