#include "rbmflow/dataset_io.hpp"

#include <cstring>
#include <stdexcept>

#include "rbmflow/csv.hpp"

namespace rbmflow {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
                 << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
                 << (8 * i);
        pos_ += 8;
        return v;
    }

    std::string chunk(std::size_t n) {
        need(n);
        std::string out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size())
            throw std::runtime_error("dataset file truncated");
    }
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> pack_spins(const std::vector<std::int8_t>& spins) {
    std::vector<std::uint8_t> bytes((spins.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < spins.size(); ++i)
        if (spins[i] > 0) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return bytes;
}

std::vector<std::int8_t> unpack_spins(const std::vector<std::uint8_t>& bytes,
                                      std::size_t n_spins) {
    if (bytes.size() != (n_spins + 7) / 8)
        throw std::runtime_error("unpack_spins: byte count mismatch");
    std::vector<std::int8_t> spins(n_spins);
    for (std::size_t i = 0; i < n_spins; ++i)
        spins[i] = (bytes[i / 8] >> (i % 8)) & 1u ? std::int8_t{1} : std::int8_t{-1};
    return spins;
}

std::string serialize_dataset(const Dataset& dataset) {
    if (dataset.side < 2 || dataset.configs.empty())
        throw std::invalid_argument("serialize_dataset: empty dataset");
    const int n_conf = dataset.configs_per_temp();
    for (const auto& block : dataset.configs)
        if (static_cast<int>(block.size()) != n_conf)
            throw std::invalid_argument("serialize_dataset: ragged temperature blocks");

    std::string out;
    out.append("IRBM");
    put_u32(out, kDatasetFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(dataset.side));
    put_u32(out, static_cast<std::uint32_t>(dataset.n_temps()));
    put_u32(out, static_cast<std::uint32_t>(n_conf));
    put_u64(out, dataset.base_seed);
    put_u32(out, static_cast<std::uint32_t>(dataset.rng_id.size()));
    out.append(dataset.rng_id);

    const std::size_t n_spins =
        static_cast<std::size_t>(dataset.side) * static_cast<std::size_t>(dataset.side);
    for (const auto& block : dataset.configs) {
        for (const auto& config : block) {
            if (config.side != dataset.side ||
                config.spins.size() != n_spins)
                throw std::invalid_argument("serialize_dataset: inconsistent config");
            const auto packed = pack_spins(config.spins);
            out.append(reinterpret_cast<const char*>(packed.data()), packed.size());
        }
    }
    return out;
}

Dataset deserialize_dataset(const std::string& bytes) {
    Reader reader(bytes);
    if (reader.chunk(4) != "IRBM")
        throw std::runtime_error("dataset file: bad magic");
    const std::uint32_t version = reader.u32();
    if (version != kDatasetFormatVersion)
        throw std::runtime_error("dataset file: unsupported version " +
                                 std::to_string(version));
    Dataset dataset;
    dataset.side = static_cast<int>(reader.u32());
    const std::uint32_t n_temps = reader.u32();
    const std::uint32_t n_conf = reader.u32();
    dataset.base_seed = reader.u64();
    dataset.rng_id = reader.chunk(reader.u32());
    if (dataset.side < 2 || n_temps < 1 || n_conf < 1)
        throw std::runtime_error("dataset file: bad header");

    dataset.temperatures.resize(n_temps);
    for (std::uint32_t t = 0; t < n_temps; ++t) dataset.temperatures[t] = 0.1 * t;

    const std::size_t n_spins =
        static_cast<std::size_t>(dataset.side) * static_cast<std::size_t>(dataset.side);
    const std::size_t packed_size = (n_spins + 7) / 8;
    dataset.configs.assign(n_temps, {});
    for (std::uint32_t t = 0; t < n_temps; ++t) {
        dataset.configs[t].resize(n_conf);
        for (std::uint32_t i = 0; i < n_conf; ++i) {
            const std::string chunk = reader.chunk(packed_size);
            std::vector<std::uint8_t> packed(chunk.begin(), chunk.end());
            SpinConfig& config = dataset.configs[t][i];
            config.side = dataset.side;
            config.spins = unpack_spins(packed, n_spins);
        }
    }
    if (!reader.exhausted())
        throw std::runtime_error("dataset file: trailing bytes");
    return dataset;
}

void save_dataset(const std::string& path, const Dataset& dataset) {
    write_file_atomic(path, serialize_dataset(dataset));
}

Dataset load_dataset(const std::string& path) {
    return deserialize_dataset(read_file(path));
}

}  // namespace rbmflow
