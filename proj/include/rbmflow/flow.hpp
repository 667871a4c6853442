// Iterated reconstruction of an ensemble through a trained machine and the
// fixed point of the resulting drift in energy/temperature.
//
// Each iteration pushes every ensemble member through one stochastic
// v -> h -> v~ pass; the trajectory records mean/std per-site energy and the
// thermometer readout per iteration (iteration 0 is the input ensemble).
// Convergence: sliding windows of `window` iterations, converged at the first
// iteration where consecutive window means differ by less than `tolerance`.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbmflow/rbm.hpp"
#include "rbmflow/thermometer.hpp"

namespace rbmflow {

struct FlowParams {
    int max_iters = 50;
    int window = 5;
    double tolerance = 0.01;
};

struct FlowRecord {
    int iteration = 0;
    double mean_energy = 0.0;
    double std_energy = 0.0;
    double temperature = 0.0;
    double temperature_spread = 0.0;
};

struct FlowTrajectory {
    std::vector<FlowRecord> records;
    int ensemble_size = 0;
    std::uint64_t seed = 0;
};

struct FixedPointEstimate {
    double energy = 0.0;
    double temperature = 0.0;
    int iterations = 0;  // iteration index at which convergence was declared
    bool converged = false;
};

FlowTrajectory run_flow(const RbmModel& model, const std::vector<SpinConfig>& ensemble,
                        const CalibrationCurve& curve, const FlowParams& params,
                        std::uint64_t seed, int workers = 1);

// Non-converged trajectories still yield the final-window averages, with the
// flag left false.
FixedPointEstimate find_fixed_point(const FlowTrajectory& trajectory,
                                    const FlowParams& params);

struct SweepEntry {
    int n_hidden = 0;
    FixedPointEstimate fixed_point;
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    int n_h_min = 0;       // grid value with the lowest fixed-point energy
    double e_min = 0.0;    // that energy
    bool any_ok = false;
};

// Called once per successful grid point; must be safe to invoke from worker
// threads (grid points never share an index).
using SweepObserver =
    std::function<void(std::size_t grid_index, const TrainReport& report,
                       const FlowTrajectory& trajectory)>;

// Trains one machine per grid value (seeds derived from base_seed), flows the
// pooled test half, and locates each fixed point. Individual failures are
// recorded and the sweep continues. Ties in the argmin go to the smaller grid
// value.
SweepResult sweep_nh(const Dataset& dataset, const CalibrationCurve& curve,
                     const std::vector<int>& nh_grid, const TrainConfig& train_config,
                     const FlowParams& flow_params, std::uint64_t base_seed,
                     int workers = 1, const SweepObserver& observer = {});

std::string trajectory_to_csv(const FlowTrajectory& trajectory);
std::string sweep_to_csv(const SweepResult& sweep);

}  // namespace rbmflow
