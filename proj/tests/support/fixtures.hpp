// Shared test datasets, built through the library sampler but with a free
// choice of ensemble size so unit suites stay fast.

#pragma once

#include "rbmflow/sampler.hpp"

namespace fixtures {

inline rbmflow::Dataset make_dataset(int side, int n_temps, int n_conf,
                                     std::uint64_t seed, int sweeps = 100) {
    rbmflow::Dataset dataset;
    dataset.side = side;
    dataset.base_seed = seed;
    dataset.rng_id = rbmflow::kRngId;
    dataset.temperatures.resize(static_cast<std::size_t>(n_temps));
    dataset.configs.assign(static_cast<std::size_t>(n_temps), {});
    const rbmflow::LatticeGeometry geom(side);
    for (int t = 0; t < n_temps; ++t) {
        dataset.temperatures[t] = 0.1 * t;
        dataset.configs[t].reserve(static_cast<std::size_t>(n_conf));
        for (int i = 0; i < n_conf; ++i) {
            rbmflow::SamplerParams params;
            params.temperature = dataset.temperatures[t];
            params.sweeps = sweeps;
            params.seed = rbmflow::derive_seed(
                seed, {rbmflow::seed_tag::dataset, static_cast<std::uint64_t>(t),
                       static_cast<std::uint64_t>(i)});
            dataset.configs[t].push_back(rbmflow::equilibrate(geom, params));
        }
    }
    return dataset;
}

// 10x10, 30 temperatures, 400 configurations each; built once per process
inline const rbmflow::Dataset& desk_dataset() {
    static const rbmflow::Dataset dataset = make_dataset(10, 30, 400, 0xD45Cu);
    return dataset;
}

// 20x20 calibration-grade dataset; larger lattice, smaller energy noise
inline const rbmflow::Dataset& l20_dataset() {
    static const rbmflow::Dataset dataset = make_dataset(20, 30, 300, 0xC20u);
    return dataset;
}

}  // namespace fixtures
