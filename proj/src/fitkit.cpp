#include "rbmflow/fitkit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbmflow/csv.hpp"

namespace rbmflow {

FitResult fit_emin_law(const std::vector<EminPoint>& points, double min_ntemp_cutoff) {
    std::vector<EminPoint> used;
    for (const auto& p : points)
        if (p.n_temp >= min_ntemp_cutoff) used.push_back(p);
    if (used.size() < 3)
        throw std::invalid_argument("fit_emin_law: need at least 3 points after cutoff");
    for (const auto& p : used) {
        if (!(p.e_min > -2.0 && p.e_min < 0.0))
            throw std::invalid_argument("fit_emin_law: E_min must lie strictly in (-2, 0)");
        if (p.n_temp <= 0.0)
            throw std::invalid_argument("fit_emin_law: N_temp must be positive");
    }

    // y = ln(-ln(-E/2)) = ln a + b ln N
    const std::size_t n = used.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : used) {
        const double x = std::log(p.n_temp);
        const double y = std::log(-std::log(-p.e_min / 2.0));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_emin_law: degenerate N_temp values");
    double b = (n * sxy - sx * sy) / denom;
    double log_a = (sy - b * sx) / n;
    double a = std::exp(log_a);

    FitResult result;
    if (b < 0.0) {
        b = 0.0;
        result.clamped = true;
    }
    if (!(a >= 0.0)) {  // exp() keeps a > 0; guard stays for NaN safety
        a = 0.0;
        result.clamped = true;
    }
    result.a = a;
    result.b = b;
    result.n_points = static_cast<int>(n);
    result.cutoff = min_ntemp_cutoff;
    for (const auto& p : used) {
        const double fitted = -2.0 * std::exp(-a * std::pow(p.n_temp, b));
        result.rss += (fitted - p.e_min) * (fitted - p.e_min);
    }
    return result;
}

double extrapolate(const FitResult& result, double n_temp) {
    if (n_temp <= 0.0) throw std::invalid_argument("extrapolate: N_temp must be positive");
    return -2.0 * std::exp(-result.a * std::pow(n_temp, result.b));
}

namespace {

Monotonicity classify_sequence(const std::vector<double>& values) {
    bool increased = false;
    bool decreased = false;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[i - 1]) increased = true;
        if (values[i] < values[i - 1]) decreased = true;
    }
    if (increased && decreased) return Monotonicity::kNonMonotonic;
    if (increased) return Monotonicity::kIncreasing;
    if (decreased) return Monotonicity::kDecreasing;
    return Monotonicity::kConstant;
}

}  // namespace

TrendSummary parameter_trend(const std::vector<std::pair<double, FitResult>>& results) {
    if (results.size() < 2)
        throw std::invalid_argument("parameter_trend: need at least two lattice sizes");
    TrendSummary summary;
    summary.by_size = results;
    std::sort(summary.by_size.begin(), summary.by_size.end(),
              [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    std::vector<double> a_values, b_values;
    for (const auto& [n_v, fit] : summary.by_size) {
        a_values.push_back(fit.a);
        b_values.push_back(fit.b);
    }
    summary.a_trend = classify_sequence(a_values);
    summary.b_trend = classify_sequence(b_values);
    return summary;
}

const char* monotonicity_name(Monotonicity m) {
    switch (m) {
        case Monotonicity::kIncreasing: return "increasing";
        case Monotonicity::kDecreasing: return "decreasing";
        case Monotonicity::kNonMonotonic: return "non-monotonic";
        case Monotonicity::kConstant: return "constant";
    }
    return "unknown";
}

std::string fit_to_csv(const FitResult& result) {
    CsvTable table;
    table.header = {"a", "b", "rss", "n_points", "cutoff"};
    table.rows.push_back({format_double(result.a), format_double(result.b),
                          format_double(result.rss), std::to_string(result.n_points),
                          format_double(result.cutoff)});
    return table.to_string();
}

}  // namespace rbmflow
