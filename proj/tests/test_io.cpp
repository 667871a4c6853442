#include <filesystem>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "rbmflow/csv.hpp"
#include "rbmflow/dataset_io.hpp"
#include "rbmflow/rbm.hpp"

using namespace rbmflow;

TEST_SUITE("io") {

TEST_CASE("bit packing round trip at awkward lengths") {
    Xoshiro256pp rng(1);
    for (std::size_t n : {1u, 7u, 8u, 9u, 16u, 49u, 70u}) {
        std::vector<std::int8_t> spins(n);
        for (auto& s : spins) s = rng.uniform01() < 0.5 ? std::int8_t{-1} : std::int8_t{1};
        const auto packed = pack_spins(spins);
        CHECK(packed.size() == (n + 7) / 8);
        CHECK(unpack_spins(packed, n) == spins);
    }
    CHECK_THROWS(unpack_spins({0x00}, 9));
}

TEST_CASE("dataset round trip is exact") {
    const Dataset dataset = fixtures::make_dataset(5, 4, 6, 0x10);
    const std::string bytes = serialize_dataset(dataset);
    CHECK(bytes.substr(0, 4) == "IRBM");
    const Dataset copy = deserialize_dataset(bytes);
    CHECK(copy.side == dataset.side);
    CHECK(copy.base_seed == dataset.base_seed);
    CHECK(copy.rng_id == dataset.rng_id);
    REQUIRE(copy.n_temps() == dataset.n_temps());
    for (int t = 0; t < dataset.n_temps(); ++t) {
        CHECK(copy.temperatures[t] == dataset.temperatures[t]);
        REQUIRE(copy.configs[t].size() == dataset.configs[t].size());
        for (std::size_t i = 0; i < copy.configs[t].size(); ++i)
            CHECK(copy.configs[t][i].spins == dataset.configs[t][i].spins);
    }
    // re-serialization is byte-identical
    CHECK(serialize_dataset(copy) == bytes);
}

TEST_CASE("dataset deserialization rejects damage") {
    const Dataset dataset = fixtures::make_dataset(4, 3, 4, 0x11);
    std::string bytes = serialize_dataset(dataset);
    CHECK_THROWS(deserialize_dataset(bytes.substr(0, bytes.size() - 1)));
    CHECK_THROWS(deserialize_dataset(bytes + "x"));
    std::string corrupted = bytes;
    corrupted[0] = 'X';
    CHECK_THROWS(deserialize_dataset(corrupted));
    std::string wrong_version = bytes;
    wrong_version[4] = 9;
    CHECK_THROWS(deserialize_dataset(wrong_version));
}

TEST_CASE("model checkpoint round trip") {
    const RbmModel model = init_model(12, 5, 77);
    const std::string bytes = serialize_model(model);
    CHECK(bytes.substr(0, 4) == "RBMW");
    CHECK(bytes.size() == 4 + 4 + 4 + 4 + 8u * (12 * 5 + 12 + 5));
    const RbmModel copy = deserialize_model(bytes);
    CHECK(copy.n_visible == 12);
    CHECK(copy.n_hidden == 5);
    CHECK(copy.weights == model.weights);
    CHECK(copy.visible_bias == model.visible_bias);
    CHECK(copy.hidden_bias == model.hidden_bias);
    CHECK_THROWS(deserialize_model(bytes.substr(0, 30)));
    CHECK_THROWS(deserialize_model(bytes + "y"));
}

TEST_CASE("doubles survive the csv round trip") {
    Xoshiro256pp rng(3);
    for (int i = 0; i < 200; ++i) {
        const double value = (rng.uniform01() - 0.5) * std::pow(10.0, i % 15);
        CHECK(parse_double(format_double(value)) == value);
    }
    CHECK(format_double(-1.7) == "-1.7");
    CHECK_THROWS(parse_double("1.2.3"));
    CHECK_THROWS(parse_double(""));
}

TEST_CASE("csv tables parse back") {
    CsvTable table;
    table.header = {"x", "label"};
    table.rows = {{"1.5", "alpha"}, {"-2", "beta"}};
    const CsvTable parsed = parse_csv(table.to_string());
    CHECK(parsed.header == table.header);
    CHECK(parsed.rows == table.rows);
    CHECK(parsed.column("label") == 1);
    CHECK(parsed.column("missing") == -1);
}

TEST_CASE("atomic writes leave no temporaries") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rbmflow_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "artifact.bin").string();
    write_file_atomic(path, "payload");
    CHECK(read_file(path) == "payload");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    write_file_atomic(path, "rewritten");
    CHECK(read_file(path) == "rewritten");
    fs::remove_all(dir);

    CHECK_THROWS(write_file_atomic("/nonexistent-dir/x/y", "data"));
    CHECK_THROWS(read_file("/nonexistent-file-xyz"));
}

}  // TEST_SUITE
