// Seeded, splittable pseudo-randomness for all stochastic components.
//
// Every random stream in the project is derived from a single 64-bit seed
// through derive_seed(), so a run is fully determined by (config, root seed)
// no matter how work is scheduled across threads.
//
// Stream derivation rule (recorded in dataset headers as "splitmix64/xoshiro256++ v1"):
//   child = splitmix64 chain over (parent, index_0 + 1, index_1 + 1, ...)
// Generator: xoshiro256++ with state expanded from the child seed by splitmix64.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace rbmflow {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Folds a path of indices into a parent seed. The +1 keeps index 0 from
// acting as a no-op on a zero parent.
inline std::uint64_t derive_seed(std::uint64_t parent,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = parent;
    splitmix64_next(state);
    for (std::uint64_t part : path) {
        state ^= part + 1;
        splitmix64_next(state);
    }
    return state;
}

// Fixed component tags so different pipeline stages never share a stream.
namespace seed_tag {
inline constexpr std::uint64_t dataset = 0x01;
inline constexpr std::uint64_t train = 0x02;
inline constexpr std::uint64_t flow = 0x03;
inline constexpr std::uint64_t null_model = 0x04;
}  // namespace seed_tag

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        // empty xoshiro state is invalid; splitmix expansion avoids it
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform double in [0, 1), 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound) via rejection-free multiply-shift;
    // bias is < 2^-32 for the bounds used here (lattice sites, shuffles)
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

inline constexpr const char* kRngId = "splitmix64/xoshiro256++ v1";

}  // namespace rbmflow
