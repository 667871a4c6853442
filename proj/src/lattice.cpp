#include "rbmflow/lattice.hpp"

#include <stdexcept>
#include <string>

namespace rbmflow {

SpinConfig uniform_config(int side, std::int8_t value) {
    SpinConfig config;
    config.side = side;
    config.spins.assign(static_cast<std::size_t>(side) * side, value);
    validate(config);
    return config;
}

SpinConfig checkerboard_config(int side) {
    SpinConfig config;
    config.side = side;
    config.spins.resize(static_cast<std::size_t>(side) * side);
    for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col)
            config.spins[static_cast<std::size_t>(row) * side + col] =
                ((row + col) % 2 == 0) ? std::int8_t{1} : std::int8_t{-1};
    validate(config);
    return config;
}

void validate(const SpinConfig& config) {
    if (config.side < 2)
        throw std::invalid_argument("SpinConfig: side must be >= 2, got " +
                                    std::to_string(config.side));
    const std::size_t expected =
        static_cast<std::size_t>(config.side) * static_cast<std::size_t>(config.side);
    if (config.spins.size() != expected)
        throw std::invalid_argument("SpinConfig: expected " + std::to_string(expected) +
                                    " spins, got " + std::to_string(config.spins.size()));
    for (std::int8_t s : config.spins)
        if (s != 1 && s != -1)
            throw std::invalid_argument("SpinConfig: spins must be exactly -1 or +1");
}

LatticeGeometry::LatticeGeometry(int side) : side_(side) {
    if (side < 2)
        throw std::invalid_argument("LatticeGeometry: side must be >= 2");
    neighbors_.resize(static_cast<std::size_t>(side) * side);
    for (int row = 0; row < side; ++row) {
        for (int col = 0; col < side; ++col) {
            const int right = (col + 1 == side) ? 0 : col + 1;
            const int left = (col == 0) ? side - 1 : col - 1;
            const int down = (row + 1 == side) ? 0 : row + 1;
            const int up = (row == 0) ? side - 1 : row - 1;
            auto& entry = neighbors_[static_cast<std::size_t>(row) * side + col];
            entry[0] = static_cast<std::int32_t>(row * side + right);
            entry[1] = static_cast<std::int32_t>(row * side + left);
            entry[2] = static_cast<std::int32_t>(down * side + col);
            entry[3] = static_cast<std::int32_t>(up * side + col);
        }
    }
}

long total_energy_units(const SpinConfig& config) {
    validate(config);
    const int side = config.side;
    long bond_sum = 0;
    // right + down covers every unordered bond exactly once for L >= 3 and,
    // on L = 2, hits each doubled wraparound bond twice as intended.
    for (int row = 0; row < side; ++row) {
        for (int col = 0; col < side; ++col) {
            const int site = row * side + col;
            const int right = row * side + ((col + 1 == side) ? 0 : col + 1);
            const int down = ((row + 1 == side) ? 0 : row + 1) * side + col;
            bond_sum += config.spins[site] * (config.spins[right] + config.spins[down]);
        }
    }
    return -bond_sum;
}

double total_energy_per_site(const SpinConfig& config) {
    return static_cast<double>(total_energy_units(config)) /
           (static_cast<double>(config.side) * config.side);
}

int neighbor_spin_sum(const LatticeGeometry& geom, const SpinConfig& config, int site) {
    const auto& nbr = geom.neighbors(site);
    return config.spins[nbr[0]] + config.spins[nbr[1]] + config.spins[nbr[2]] +
           config.spins[nbr[3]];
}

double flip_delta(const LatticeGeometry& geom, const SpinConfig& config, int site) {
    if (site < 0 || site >= geom.n_sites())
        throw std::out_of_range("flip_delta: site " + std::to_string(site) +
                                " outside lattice of " + std::to_string(geom.n_sites()) +
                                " sites");
    return 2.0 * config.spins[site] * neighbor_spin_sum(geom, config, site);
}

}  // namespace rbmflow
