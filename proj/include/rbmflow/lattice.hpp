// Square-lattice Ising geometry and energy.
//
// H = -sum_<ij> s_i s_j over nearest-neighbour pairs with periodic wrap,
// coupling and k_B fixed to 1. Energies are reported per site, so they
// always lie in [-2, +2]. On a 2x2 torus the wraparound duplicates every
// bond; we keep the uniform 4-neighbour table and count those duplicates.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rbmflow {

// One +-1 configuration on an L x L periodic lattice, row-major.
struct SpinConfig {
    int side = 0;
    std::vector<std::int8_t> spins;
};

SpinConfig uniform_config(int side, std::int8_t value);
SpinConfig checkerboard_config(int side);

// Throws std::invalid_argument if side < 2, the size mismatches, or any
// entry is not exactly +-1.
void validate(const SpinConfig& config);

class LatticeGeometry {
public:
    explicit LatticeGeometry(int side);

    int side() const { return side_; }
    int n_sites() const { return side_ * side_; }
    const std::array<std::int32_t, 4>& neighbors(int site) const {
        return neighbors_[static_cast<std::size_t>(site)];
    }

private:
    int side_;
    std::vector<std::array<std::int32_t, 4>> neighbors_;  // right, left, down, up
};

// Total H as an exact integer; each unordered bond counted once
// (twice on the 2x2 torus where the bond multiset is doubled).
long total_energy_units(const SpinConfig& config);

double total_energy_per_site(const SpinConfig& config);

int neighbor_spin_sum(const LatticeGeometry& geom, const SpinConfig& config, int site);

// Energy change of flipping one spin: dE = 2 * s_site * sum of neighbour spins.
// Total change, not per site. Throws std::out_of_range on a bad site index.
double flip_delta(const LatticeGeometry& geom, const SpinConfig& config, int site);

}  // namespace rbmflow
