// Metropolis Monte Carlo sampling of Ising configurations and the
// multi-temperature dataset used everywhere downstream.
//
// Protocol: start from a uniformly random configuration and attempt
// sweeps * N_v single-spin flips in raster order, accepting each with
// p = min(1, exp(-dE/T)). The dataset holds the same number of equilibrated
// configurations at temperatures T = 0, 0.1, ..., 0.1*(n_temps-1); T = 0 is
// simulated as 1e-6. Every chain is an independent stream derived from the
// dataset seed, so generation is reproducible and embarrassingly parallel.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbmflow/lattice.hpp"
#include "rbmflow/rng.hpp"

namespace rbmflow {

inline constexpr double kTemperatureFloor = 1e-6;  // stands in for T = 0
inline constexpr int kDefaultSweeps = 100;

struct SamplerParams {
    double temperature = 0.0;  // grid value; 0 means "simulate at the floor"
    int sweeps = kDefaultSweeps;
    std::uint64_t seed = 0;
};

// Grid temperature -> temperature actually used in the acceptance ratio.
double simulated_temperature(double grid_temperature);

// One Metropolis update of a single site, driven by an externally supplied
// uniform [0,1) draw. Flips iff draw < min(1, exp(-dE/T)).
SpinConfig metropolis_step(const LatticeGeometry& geom, SpinConfig config, int site,
                           double temperature, double uniform_draw);

// In-place sweeps over all sites in raster order, one uniform draw per
// attempt. This is the hot kernel behind equilibrate; exposed so chains can
// be continued or started from chosen configurations.
void raster_sweeps(const LatticeGeometry& geom, SpinConfig& config, double temperature,
                   int sweeps, Xoshiro256pp& rng);

// Random start, then params.sweeps raster sweeps at params.temperature.
SpinConfig equilibrate(const LatticeGeometry& geom, const SamplerParams& params);

struct Dataset {
    int side = 0;
    std::vector<double> temperatures;
    std::vector<std::vector<SpinConfig>> configs;  // [temperature][sample]
    std::uint64_t base_seed = 0;
    std::string rng_id;

    int n_temps() const { return static_cast<int>(temperatures.size()); }
    int configs_per_temp() const {
        return configs.empty() ? 0 : static_cast<int>(configs.front().size());
    }
};

// N_conf = min(2000, 2 * floor(1e5 / n_temps)); floored so the even/odd
// train/test halves stay equal.
int configs_per_temperature(int n_temps);

Dataset generate_dataset(int side, int n_temps, std::uint64_t base_seed, int workers = 1);

// Deterministic even/odd split per temperature: even sample indices are the
// training half, odd ones the test half.
std::vector<SpinConfig> dataset_half(const Dataset& dataset, bool test_half);
std::vector<SpinConfig> dataset_half_at(const Dataset& dataset, int t_index,
                                        bool test_half);

std::vector<double> per_site_energies(const std::vector<SpinConfig>& configs);

}  // namespace rbmflow
