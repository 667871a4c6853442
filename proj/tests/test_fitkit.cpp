#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rbmflow/fitkit.hpp"
#include "rbmflow/rng.hpp"

using namespace rbmflow;

namespace {

std::vector<EminPoint> law_points(double a, double b, const std::vector<double>& grid) {
    std::vector<EminPoint> points;
    for (double n : grid)
        points.push_back({n, -2.0 * std::exp(-a * std::pow(n, b))});
    return points;
}

double gaussian(Xoshiro256pp& rng) {
    double u1 = rng.uniform01();
    while (u1 == 0.0) u1 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * rng.uniform01());
}

}  // namespace

TEST_SUITE("fitkit") {

TEST_CASE("noiseless generated data inverts exactly") {
    std::vector<double> grid;
    for (double n = 100; n <= 1000; n += 100) grid.push_back(n);
    const FitResult fit = fit_emin_law(law_points(0.16, 0.3, grid), 100.0);
    CHECK(std::abs(fit.a - 0.16) < 1e-8);
    CHECK(std::abs(fit.b - 0.3) < 1e-8);
    CHECK(fit.rss < 1e-16);
    CHECK(fit.n_points == 10);
    CHECK_FALSE(fit.clamped);
}

TEST_CASE("the cutoff drops small grids before fitting") {
    std::vector<double> grid{30, 50, 70, 100, 200, 300, 400};
    // corrupt the sub-cutoff points; the fit must not see them
    auto points = law_points(0.2, 0.25, grid);
    points[0].e_min = -1.99;
    points[1].e_min = -1.98;
    points[2].e_min = -1.97;
    const FitResult fit = fit_emin_law(points, 100.0);
    CHECK(fit.n_points == 4);
    CHECK(std::abs(fit.a - 0.2) < 1e-8);
    CHECK(std::abs(fit.b - 0.25) < 1e-8);
}

TEST_CASE("one percent multiplicative noise: parameters within 5% (median)") {
    std::vector<double> grid;
    for (double n = 100; n <= 2080; n += 20) grid.push_back(n);
    const auto clean = law_points(0.16, 0.3, grid);
    std::vector<double> err_a, err_b;
    for (int trial = 0; trial < 100; ++trial) {
        Xoshiro256pp rng(derive_seed(0xF17, {static_cast<std::uint64_t>(trial)}));
        auto noisy = clean;
        for (auto& p : noisy) p.e_min *= 1.0 + 0.01 * gaussian(rng);
        const FitResult fit = fit_emin_law(noisy, 100.0);
        err_a.push_back(std::abs(fit.a - 0.16) / 0.16);
        err_b.push_back(std::abs(fit.b - 0.3) / 0.3);
    }
    std::sort(err_a.begin(), err_a.end());
    std::sort(err_b.begin(), err_b.end());
    CHECK(err_a[50] < 0.05);
    CHECK(err_b[50] < 0.05);
}

TEST_CASE("flat data recovers b = 0 and a = -ln(-E/2)") {
    const double a = 0.21;
    std::vector<EminPoint> points;
    for (double n : {100.0, 200.0, 400.0, 800.0})
        points.push_back({n, -2.0 * std::exp(-a)});
    const FitResult fit = fit_emin_law(points, 100.0);
    CHECK(std::abs(fit.b) < 1e-12);
    CHECK(fit.a == doctest::Approx(a).epsilon(1e-10));
}

TEST_CASE("boundary energies and short inputs are rejected") {
    std::vector<EminPoint> points{{100, -2.0}, {200, -1.5}, {300, -1.4}};
    CHECK_THROWS_AS(fit_emin_law(points, 100.0), std::invalid_argument);
    points[0].e_min = 0.0;
    CHECK_THROWS_AS(fit_emin_law(points, 100.0), std::invalid_argument);
    points[0].e_min = -1.6;
    CHECK_NOTHROW(fit_emin_law(points, 100.0));
    CHECK_THROWS_AS(fit_emin_law({{100, -1.5}, {200, -1.4}}, 100.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_emin_law(law_points(0.16, 0.3, {100, 200, 300}), 1000.0),
                    std::invalid_argument);
}

TEST_CASE("extrapolation follows the law") {
    FitResult fit;
    fit.a = 0.16;
    fit.b = 0.3;
    std::vector<double> grid{100, 200, 400};
    const auto points = law_points(0.16, 0.3, grid);
    for (const auto& p : points)
        CHECK(extrapolate(fit, p.n_temp) == doctest::Approx(p.e_min).epsilon(1e-12));
    CHECK(std::abs(extrapolate(fit, 1e9)) < 1e-3);  // E -> 0 as N -> inf

    FitResult frozen;
    frozen.a = 0.16;
    frozen.b = 0.0;
    const double limit = -2.0 * std::exp(-0.16);
    CHECK(extrapolate(frozen, 17.0) == doctest::Approx(limit).epsilon(1e-13));
    CHECK(extrapolate(frozen, 1e6) == doctest::Approx(limit).epsilon(1e-13));
    CHECK_THROWS_AS(extrapolate(frozen, 0.0), std::invalid_argument);
}

TEST_CASE("rescaling the grid moves a by the exact power and keeps b") {
    std::vector<double> grid;
    for (double n = 100; n <= 700; n += 100) grid.push_back(n);
    const auto base = law_points(0.16, 0.3, grid);
    const FitResult fit = fit_emin_law(base, 0.0);

    const double c = 3.0;
    auto scaled = base;
    for (auto& p : scaled) p.n_temp *= c;
    const FitResult refit = fit_emin_law(scaled, 0.0);
    CHECK(refit.b == doctest::Approx(fit.b).epsilon(1e-9));
    CHECK(refit.a == doctest::Approx(fit.a * std::pow(c, -fit.b)).epsilon(1e-9));
}

TEST_CASE("parameter trends across lattice sizes") {
    auto make = [](double a, double b) {
        FitResult fit;
        fit.a = a;
        fit.b = b;
        return fit;
    };
    const TrendSummary trend = parameter_trend(
        {{49.0, make(0.10, 0.40)}, {400.0, make(0.16, 0.20)}, {100.0, make(0.13, 0.30)}});
    CHECK(trend.a_trend == Monotonicity::kIncreasing);
    CHECK(trend.b_trend == Monotonicity::kDecreasing);
    CHECK(trend.by_size.front().first == 49.0);
    CHECK(trend.by_size.back().first == 400.0);
    CHECK(std::string(monotonicity_name(trend.b_trend)) == "decreasing");

    CHECK_THROWS_AS(parameter_trend({{49.0, make(0.1, 0.4)}}), std::invalid_argument);
}

TEST_CASE("fit csv layout") {
    FitResult fit;
    fit.a = 0.5;
    fit.b = 0.25;
    fit.rss = 0.0;
    fit.n_points = 7;
    fit.cutoff = 100.0;
    CHECK(fit_to_csv(fit) == "a,b,rss,n_points,cutoff\n0.5,0.25,0,7,100\n");
}

}  // TEST_SUITE
