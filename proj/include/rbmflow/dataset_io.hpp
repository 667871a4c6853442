// Binary dataset persistence.
//
// Layout (little-endian):
//   magic "IRBM" | u32 version | u32 L | u32 n_temps | u32 n_conf |
//   u64 base_seed | u32 rng_id_len | rng_id bytes |
//   then per temperature (ascending), n_conf configurations, each bit-packed
//   row-major at 1 bit/spin, LSB-first within each byte, 0 -> -1, 1 -> +1.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbmflow/sampler.hpp"

namespace rbmflow {

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

std::vector<std::uint8_t> pack_spins(const std::vector<std::int8_t>& spins);
std::vector<std::int8_t> unpack_spins(const std::vector<std::uint8_t>& bytes,
                                      std::size_t n_spins);

std::string serialize_dataset(const Dataset& dataset);
Dataset deserialize_dataset(const std::string& bytes);

void save_dataset(const std::string& path, const Dataset& dataset);
Dataset load_dataset(const std::string& path);

}  // namespace rbmflow
