#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rbmflow/spectral.hpp"

using namespace rbmflow;

namespace {

RbmModel gaussian_model(int n_visible, int n_hidden, double scale, std::uint64_t seed) {
    RbmModel model = init_model(n_visible, n_hidden, seed);
    model.weights *= scale / 0.01 * std::sqrt(static_cast<double>(n_visible));
    return model;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("rank-one weight matrix") {
    RbmModel model = init_model(16, 3, 1);
    model.weights.setZero();
    model.weights(0, 0) = 2.5;
    const SpectralReport report = weight_spectrum(model);
    CHECK(report.rank == 1);
    CHECK(report.entries[0].eigenvalue == doctest::Approx(6.25).epsilon(1e-12));
    CHECK(std::abs(report.entries[0].vector[0]) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < report.entries.size(); ++k)
        CHECK(std::abs(report.entries[k].eigenvalue) < 1e-12);
}

TEST_CASE("rank equals the hidden layer size for generic weights") {
    const RbmModel model = gaussian_model(64, 16, 1.0, 7);
    const SpectralReport report = weight_spectrum(model);
    CHECK(report.rank == 16);
    CHECK(report.residual < 1e-8);
    CHECK(static_cast<int>(report.entries.size()) == 64);
    // eigenvalues sorted by magnitude, PSD up to round-off
    for (std::size_t k = 1; k < report.entries.size(); ++k) {
        CHECK(std::abs(report.entries[k - 1].eigenvalue) >=
              std::abs(report.entries[k].eigenvalue));
        CHECK(report.entries[k].eigenvalue > -1e-10);
    }
}

TEST_CASE("eigenvectors are orthonormal") {
    const RbmModel model = gaussian_model(25, 9, 1.0, 8);
    const SpectralReport report = weight_spectrum(model);
    Eigen::MatrixXd basis(25, 25);
    for (int k = 0; k < 25; ++k) basis.col(k) = report.entries[k].vector;
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    CHECK((gram - Eigen::MatrixXd::Identity(25, 25)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spectrum is independent of the hidden basis") {
    const RbmModel model = gaussian_model(36, 9, 1.0, 9);
    Eigen::MatrixXd random(9, 9);
    Xoshiro256pp rng(10);
    for (int c = 0; c < 9; ++c)
        for (int r = 0; r < 9; ++r) random(r, c) = 2.0 * rng.uniform01() - 1.0;
    const Eigen::MatrixXd orthogonal =
        Eigen::HouseholderQR<Eigen::MatrixXd>(random).householderQ();
    RbmModel rotated = model;
    rotated.weights = model.weights * orthogonal;

    const SpectralReport a = weight_spectrum(model);
    const SpectralReport b = weight_spectrum(rotated);
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
        const double scale = std::max(1.0, std::abs(a.entries[k].eigenvalue));
        CHECK(std::abs(a.entries[k].eigenvalue - b.entries[k].eigenvalue) <=
              1e-9 * scale);
    }
}

TEST_CASE("pattern statistic on the canonical patterns") {
    const int side = 6;
    const int n = side * side;
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / side);
    CHECK(pattern_statistic(uniform, side) == doctest::Approx(2.0).epsilon(1e-12));

    Eigen::VectorXd board(n);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c)
            board[r * side + c] = ((r + c) % 2 == 0 ? 1.0 : -1.0) / side;
    CHECK(pattern_statistic(board, side) == doctest::Approx(-2.0).epsilon(1e-12));

    const NullModelStats& null_stats = null_model_stats(side);
    CHECK(classify_pattern(uniform, side, null_stats) == PatternClass::kNonRandom);
    CHECK(classify_pattern(board, side, null_stats) == PatternClass::kNonRandom);
}

TEST_CASE("random unit vectors read as random-like") {
    const int side = 7;
    const NullModelStats& null_stats = null_model_stats(side);
    CHECK(null_stats.sigma > 0.1);
    CHECK(null_stats.sigma < 0.35);
    CHECK(std::abs(null_stats.mean) < 0.02);

    Xoshiro256pp rng(2029);
    int random_like = 0;
    const int draws = 200;
    for (int d = 0; d < draws; ++d) {
        Eigen::VectorXd u(side * side);
        for (int i = 0; i < u.size(); ++i) {
            double g1 = rng.uniform01();
            while (g1 == 0.0) g1 = rng.uniform01();
            u[i] = std::sqrt(-2.0 * std::log(g1)) *
                   std::cos(2.0 * M_PI * rng.uniform01());
        }
        u.normalize();
        random_like +=
            classify_pattern(u, side, null_stats) == PatternClass::kRandomLike;
    }
    CHECK(random_like >= draws * 99 / 100);
}

TEST_CASE("untrained weights classify as noise") {
    const RbmModel model = gaussian_model(100, 16, 1.0, 3);
    SpectralReport report = weight_spectrum(model);
    classify_report(report);
    CHECK(nonrandom_ratio(report, 16) < 0.1);
    CHECK_THROWS_AS(nonrandom_ratio(report, 0), std::invalid_argument);
}

TEST_CASE("classification is required before the ratio") {
    const RbmModel model = gaussian_model(16, 4, 1.0, 4);
    const SpectralReport report = weight_spectrum(model);
    CHECK_THROWS_AS(nonrandom_ratio(report, 4), std::invalid_argument);
}

TEST_CASE("gap profile on constructed spectra") {
    SpectralReport report;
    report.side = 4;
    report.n_hidden = 8;
    auto push = [&](double value) {
        EigenPattern entry;
        entry.eigenvalue = value;
        entry.vector = Eigen::VectorXd::Zero(16);
        report.entries.push_back(entry);
    };
    for (double v : {10.0, 9.5, 9.0, 8.5, 8.0, 7.5, 7.0, 6.5}) push(v);
    GapProfile smooth = eigenvalue_gap_profile(report, 8, 2);
    CHECK(smooth.largest_gap_ratio < 1.1);

    report.entries.clear();
    for (double v : {100.0, 90.0, 80.0, 70.0, 7.0, 6.0, 5.0, 4.0}) push(v);
    GapProfile jump = eigenvalue_gap_profile(report, 8, 0);
    CHECK(jump.largest_gap_index == 3);
    CHECK(jump.largest_gap_ratio == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(jump.near_degeneracy_cv > 0.0);
}

TEST_CASE("near-degenerate tail has a lower spread than a random baseline") {
    SpectralReport tight;
    tight.side = 4;
    auto fill = [&](SpectralReport& r, std::initializer_list<double> values) {
        for (double v : values) {
            EigenPattern entry;
            entry.eigenvalue = v;
            r.entries.push_back(entry);
        }
    };
    fill(tight, {50.0, 40.0, 10.0, 9.8, 10.2, 9.9, 10.1, 9.95});
    SpectralReport loose;
    loose.side = 4;
    fill(loose, {50.0, 40.0, 18.0, 3.0, 11.0, 7.0, 1.0, 14.0});
    CHECK(eigenvalue_gap_profile(tight, 8, 2).near_degeneracy_cv <
          eigenvalue_gap_profile(loose, 8, 2).near_degeneracy_cv);
}

TEST_CASE("classification and statistic ignore the eigenvector sign") {
    const int side = 5;
    const NullModelStats& null_stats = null_model_stats(side);
    Eigen::VectorXd u = Eigen::VectorXd::Constant(side * side, 1.0 / side);
    double s_plus = 0.0;
    double s_minus = 0.0;
    const PatternClass a = classify_pattern(u, side, null_stats, &s_plus);
    const PatternClass b = classify_pattern(-u, side, null_stats, &s_minus);
    CHECK(a == b);
    CHECK(s_plus == doctest::Approx(s_minus).epsilon(1e-12));
}

TEST_CASE("pgm rendering maps the value range to 0..255") {
    Eigen::VectorXd u(4);
    u << -1.0, 1.0, 0.0, 0.5;
    const std::string pgm = eigenvector_to_pgm(u, 2);
    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(pgm.size() == header.size() + 4);
    CHECK(pgm.substr(0, header.size()) == header);
    const auto* pixels =
        reinterpret_cast<const unsigned char*>(pgm.data() + header.size());
    CHECK(pixels[0] == 0);
    CHECK(pixels[1] == 255);
    CHECK(pixels[2] == 128);
    CHECK(pixels[3] == 191);

    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 0.3);
    const std::string flat_pgm = eigenvector_to_pgm(flat, 2);
    CHECK(static_cast<unsigned char>(flat_pgm[header.size()]) == 0);
}

}  // TEST_SUITE
