#include "rbmflow/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "rbmflow/csv.hpp"
#include "rbmflow/parallel.hpp"

namespace rbmflow {

namespace {

FlowRecord measure(int iteration, const std::vector<SpinConfig>& ensemble,
                   const CalibrationCurve& curve) {
    const std::vector<double> energies = per_site_energies(ensemble);
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= static_cast<double>(energies.size());
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    var /= static_cast<double>(energies.size());
    const TemperatureEstimate t = estimate_temperature(curve, energies);
    return FlowRecord{iteration, mean, std::sqrt(var), t.mean, t.spread};
}

double window_mean(const std::vector<FlowRecord>& records, int last, int window) {
    double sum = 0.0;
    for (int i = last - window + 1; i <= last; ++i) sum += records[i].mean_energy;
    return sum / window;
}

}  // namespace

FlowTrajectory run_flow(const RbmModel& model, const std::vector<SpinConfig>& ensemble,
                        const CalibrationCurve& curve, const FlowParams& params,
                        std::uint64_t seed, int workers) {
    if (ensemble.empty()) throw std::invalid_argument("run_flow: empty ensemble");
    validate(model);
    const int side = ensemble.front().side;
    if (side * side != model.n_visible)
        throw std::invalid_argument("run_flow: model size does not match lattice");
    if (params.max_iters < 1 || params.window < 1)
        throw std::invalid_argument("run_flow: bad flow parameters");

    FlowTrajectory trajectory;
    trajectory.ensemble_size = static_cast<int>(ensemble.size());
    trajectory.seed = seed;
    trajectory.records.reserve(static_cast<std::size_t>(params.max_iters) + 1);

    std::vector<SpinConfig> current = ensemble;
    trajectory.records.push_back(measure(0, current, curve));

    std::vector<SpinConfig> next(current.size());
    for (int iter = 1; iter <= params.max_iters; ++iter) {
        parallel_for(current.size(), workers, [&](std::size_t member) {
            // fresh stream per (member, iteration): scheduling-independent
            Xoshiro256pp rng(derive_seed(seed, {seed_tag::flow,
                                                static_cast<std::uint64_t>(member),
                                                static_cast<std::uint64_t>(iter)}));
            const Eigen::VectorXd v = to_vector(current[member]);
            next[member] = to_config(reconstruct(model, v, rng), side);
        });
        current.swap(next);
        trajectory.records.push_back(measure(iter, current, curve));
    }
    return trajectory;
}

FixedPointEstimate find_fixed_point(const FlowTrajectory& trajectory,
                                    const FlowParams& params) {
    const auto& records = trajectory.records;
    const int window = params.window;
    if (static_cast<int>(records.size()) < window + 1)
        throw std::invalid_argument("find_fixed_point: trajectory shorter than window");

    FixedPointEstimate estimate;
    int settle = -1;
    for (int last = window; last < static_cast<int>(records.size()); ++last) {
        const double current = window_mean(records, last, window);
        const double previous = window_mean(records, last - 1, window);
        if (std::abs(current - previous) < params.tolerance) {
            settle = last;
            break;
        }
    }
    const int last = settle >= 0 ? settle : static_cast<int>(records.size()) - 1;
    double e_sum = 0.0;
    double t_sum = 0.0;
    for (int i = last - window + 1; i <= last; ++i) {
        e_sum += records[i].mean_energy;
        t_sum += records[i].temperature;
    }
    estimate.energy = e_sum / window;
    estimate.temperature = t_sum / window;
    estimate.iterations = last;
    estimate.converged = settle >= 0;
    return estimate;
}

SweepResult sweep_nh(const Dataset& dataset, const CalibrationCurve& curve,
                     const std::vector<int>& nh_grid, const TrainConfig& train_config,
                     const FlowParams& flow_params, std::uint64_t base_seed,
                     int workers, const SweepObserver& observer) {
    if (nh_grid.empty()) throw std::invalid_argument("sweep_nh: empty grid");

    SweepResult sweep;
    sweep.entries.resize(nh_grid.size());
    const std::vector<SpinConfig> ensemble = dataset_half(dataset, true);

    parallel_for(nh_grid.size(), workers, [&](std::size_t g) {
        SweepEntry& entry = sweep.entries[g];
        entry.n_hidden = nh_grid[g];
        try {
            TrainConfig config = train_config;
            config.seed = derive_seed(base_seed, {seed_tag::train,
                                                  static_cast<std::uint64_t>(nh_grid[g])});
            const TrainReport report = train(dataset, nh_grid[g], config);
            const std::uint64_t flow_seed =
                derive_seed(base_seed, {seed_tag::flow,
                                        static_cast<std::uint64_t>(nh_grid[g])});
            const FlowTrajectory trajectory =
                run_flow(report.model, ensemble, curve, flow_params, flow_seed, 1);
            entry.fixed_point = find_fixed_point(trajectory, flow_params);
            entry.ok = true;
            if (observer) observer(g, report, trajectory);
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.error = e.what();
        }
    });

    sweep.any_ok = false;
    for (const auto& entry : sweep.entries) {
        if (!entry.ok) continue;
        const bool better =
            !sweep.any_ok || entry.fixed_point.energy < sweep.e_min ||
            (entry.fixed_point.energy == sweep.e_min && entry.n_hidden < sweep.n_h_min);
        if (better) {
            sweep.any_ok = true;
            sweep.e_min = entry.fixed_point.energy;
            sweep.n_h_min = entry.n_hidden;
        }
    }
    return sweep;
}

std::string trajectory_to_csv(const FlowTrajectory& trajectory) {
    CsvTable table;
    table.header = {"iter", "mean_E", "std_E", "T_est", "T_spread"};
    for (const auto& r : trajectory.records)
        table.rows.push_back({std::to_string(r.iteration), format_double(r.mean_energy),
                              format_double(r.std_energy), format_double(r.temperature),
                              format_double(r.temperature_spread)});
    return table.to_string();
}

std::string sweep_to_csv(const SweepResult& sweep) {
    CsvTable table;
    table.header = {"N_h", "E_star", "T_star", "converged", "iters"};
    for (const auto& entry : sweep.entries) {
        if (entry.ok) {
            table.rows.push_back({std::to_string(entry.n_hidden),
                                  format_double(entry.fixed_point.energy),
                                  format_double(entry.fixed_point.temperature),
                                  entry.fixed_point.converged ? "1" : "0",
                                  std::to_string(entry.fixed_point.iterations)});
        } else {
            table.rows.push_back(
                {std::to_string(entry.n_hidden), "nan", "nan", "0", "0"});
        }
    }
    return table.to_string();
}

}  // namespace rbmflow
