#include "rbmflow/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rbmflow/parallel.hpp"

namespace rbmflow {

double simulated_temperature(double grid_temperature) {
    if (grid_temperature < 0.0)
        throw std::invalid_argument("temperature must be >= 0");
    return grid_temperature == 0.0 ? kTemperatureFloor : grid_temperature;
}

SpinConfig metropolis_step(const LatticeGeometry& geom, SpinConfig config, int site,
                           double temperature, double uniform_draw) {
    if (temperature <= 0.0)
        throw std::invalid_argument("metropolis_step: temperature must be > 0");
    if (site < 0 || site >= geom.n_sites())
        throw std::out_of_range("metropolis_step: site out of range");
    const double delta = flip_delta(geom, config, site);
    const double p = delta <= 0.0 ? 1.0 : std::exp(-delta / temperature);
    if (uniform_draw < p)
        config.spins[site] = static_cast<std::int8_t>(-config.spins[site]);
    return config;
}

namespace {

void random_fill(std::vector<std::int8_t>& spins, Xoshiro256pp& rng) {
    for (auto& s : spins) s = rng.uniform01() < 0.5 ? std::int8_t{-1} : std::int8_t{1};
}

}  // namespace

// Neighbour sums are in {-4,-2,0,2,4}, so dE = 2*s*sum is in {-8,-4,0,4,8};
// only the two uphill acceptance probabilities need exp().
void raster_sweeps(const LatticeGeometry& geom, SpinConfig& config, double temperature,
                   int sweeps, Xoshiro256pp& rng) {
    if (temperature <= 0.0)
        throw std::invalid_argument("raster_sweeps: temperature must be > 0");
    if (config.side != geom.side() ||
        config.spins.size() != static_cast<std::size_t>(geom.n_sites()))
        throw std::invalid_argument("raster_sweeps: configuration does not fit lattice");
    const double accept4 = std::exp(-4.0 / temperature);
    const double accept8 = std::exp(-8.0 / temperature);
    std::int8_t* spins = config.spins.data();
    const int n = geom.n_sites();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int site = 0; site < n; ++site) {
            const auto& nbr = geom.neighbors(site);
            const int sum = spins[nbr[0]] + spins[nbr[1]] + spins[nbr[2]] + spins[nbr[3]];
            const int delta = 2 * spins[site] * sum;
            const double u = rng.uniform01();
            if (delta <= 0 || u < (delta == 4 ? accept4 : accept8))
                spins[site] = static_cast<std::int8_t>(-spins[site]);
        }
    }
}

SpinConfig equilibrate(const LatticeGeometry& geom, const SamplerParams& params) {
    if (params.sweeps < 1)
        throw std::invalid_argument("equilibrate: sweeps must be >= 1");
    const double temperature = simulated_temperature(params.temperature);
    Xoshiro256pp rng(params.seed);
    SpinConfig config;
    config.side = geom.side();
    config.spins.resize(static_cast<std::size_t>(geom.n_sites()));
    random_fill(config.spins, rng);
    raster_sweeps(geom, config, temperature, params.sweeps, rng);
    return config;
}

int configs_per_temperature(int n_temps) {
    if (n_temps < 1) throw std::invalid_argument("n_temps must be >= 1");
    return std::min(2000, 2 * (100000 / n_temps));
}

Dataset generate_dataset(int side, int n_temps, std::uint64_t base_seed, int workers) {
    if (side < 2) throw std::invalid_argument("generate_dataset: side must be >= 2");
    if (n_temps < 2) throw std::invalid_argument("generate_dataset: n_temps must be >= 2");

    const int n_conf = configs_per_temperature(n_temps);
    Dataset dataset;
    dataset.side = side;
    dataset.base_seed = base_seed;
    dataset.rng_id = kRngId;
    dataset.temperatures.resize(static_cast<std::size_t>(n_temps));
    for (int t = 0; t < n_temps; ++t) dataset.temperatures[t] = 0.1 * t;
    dataset.configs.assign(static_cast<std::size_t>(n_temps), {});
    for (auto& block : dataset.configs)
        block.resize(static_cast<std::size_t>(n_conf));

    const LatticeGeometry geom(side);
    const std::size_t total = static_cast<std::size_t>(n_temps) * n_conf;
    parallel_for(total, workers, [&](std::size_t item) {
        const int t_index = static_cast<int>(item / static_cast<std::size_t>(n_conf));
        const int sample = static_cast<int>(item % static_cast<std::size_t>(n_conf));
        SamplerParams params;
        params.temperature = dataset.temperatures[t_index];
        params.sweeps = kDefaultSweeps;
        params.seed = derive_seed(base_seed, {seed_tag::dataset,
                                              static_cast<std::uint64_t>(t_index),
                                              static_cast<std::uint64_t>(sample)});
        dataset.configs[t_index][sample] = equilibrate(geom, params);
    });
    return dataset;
}

std::vector<SpinConfig> dataset_half(const Dataset& dataset, bool test_half) {
    std::vector<SpinConfig> out;
    for (int t = 0; t < dataset.n_temps(); ++t) {
        auto block = dataset_half_at(dataset, t, test_half);
        out.insert(out.end(), std::make_move_iterator(block.begin()),
                   std::make_move_iterator(block.end()));
    }
    return out;
}

std::vector<SpinConfig> dataset_half_at(const Dataset& dataset, int t_index,
                                        bool test_half) {
    if (t_index < 0 || t_index >= dataset.n_temps())
        throw std::out_of_range("dataset_half_at: temperature index out of range");
    const auto& block = dataset.configs[t_index];
    std::vector<SpinConfig> out;
    out.reserve(block.size() / 2 + 1);
    for (std::size_t i = test_half ? 1 : 0; i < block.size(); i += 2)
        out.push_back(block[i]);
    return out;
}

std::vector<double> per_site_energies(const std::vector<SpinConfig>& configs) {
    std::vector<double> energies(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i)
        energies[i] = total_energy_per_site(configs[i]);
    return energies;
}

}  // namespace rbmflow
