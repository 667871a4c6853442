// Experiment configuration: one JSON file determines every run exactly
// (together with the root seed). Defaults follow the reference protocol:
// learning rate 1e-3, momentum 0.5, 100 sweeps per chain, 1e5 epochs;
// desk-scale runs are expected to override epochs explicitly.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbmflow/flow.hpp"
#include "rbmflow/rbm.hpp"

namespace rbmflow {

struct ExperimentConfig {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = RBMFLOW_WORKERS env var, else hardware count
    std::vector<int> lattice_sides{7};
    std::vector<int> n_temps{30};
    std::vector<int> nh_grid;  // empty = every square 1, 4, ..., L*L
    int sweeps = kDefaultSweeps;
    TrainConfig train;
    FlowParams flow;
    double fit_min_ntemp = 100.0;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// effective JSON echo, stable key order (goes into the run manifest)
std::string config_to_json(const ExperimentConfig& config);

std::vector<int> nh_grid_for_side(const ExperimentConfig& config, int side);

int effective_workers(const ExperimentConfig& config);

}  // namespace rbmflow
