#include "rbmflow/thermometer.hpp"

#include <cmath>
#include <stdexcept>

#include "rbmflow/csv.hpp"

namespace rbmflow {

namespace {

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

Moments moments(const std::vector<double>& values) {
    Moments m;
    if (values.empty()) return m;
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    return m;
}

// Knots with strictly increasing mean energy; pooled runs of equal means
// collapse to one knot at their average temperature so inversion stays
// single-valued.
struct Knots {
    std::vector<double> energy;
    std::vector<double> temperature;
};

Knots compress(const CalibrationCurve& curve) {
    Knots knots;
    std::size_t i = 0;
    const auto& pts = curve.points;
    while (i < pts.size()) {
        std::size_t j = i;
        double t_sum = 0.0;
        while (j < pts.size() && pts[j].mean_energy == pts[i].mean_energy) {
            t_sum += pts[j].temperature;
            ++j;
        }
        knots.energy.push_back(pts[i].mean_energy);
        knots.temperature.push_back(t_sum / static_cast<double>(j - i));
        i = j;
    }
    return knots;
}

}  // namespace

void isotonic_non_decreasing(std::vector<double>& values) {
    // classic PAV with equal weights: merge blocks while a violation remains
    std::vector<double> block_sum;
    std::vector<int> block_count;
    block_sum.reserve(values.size());
    block_count.reserve(values.size());
    for (double v : values) {
        block_sum.push_back(v);
        block_count.push_back(1);
        while (block_sum.size() > 1) {
            const std::size_t last = block_sum.size() - 1;
            if (block_sum[last - 1] / block_count[last - 1] <=
                block_sum[last] / block_count[last])
                break;
            block_sum[last - 1] += block_sum[last];
            block_count[last - 1] += block_count[last];
            block_sum.pop_back();
            block_count.pop_back();
        }
    }
    std::size_t out = 0;
    for (std::size_t b = 0; b < block_sum.size(); ++b) {
        const double level = block_sum[b] / block_count[b];
        for (int k = 0; k < block_count[b]; ++k) values[out++] = level;
    }
}

CalibrationCurve calibrate(const Dataset& dataset) {
    if (dataset.n_temps() == 0 || dataset.configs_per_temp() == 0)
        throw std::invalid_argument("calibrate: empty dataset");
    CalibrationCurve curve;
    curve.side = dataset.side;
    std::vector<double> means(static_cast<std::size_t>(dataset.n_temps()));
    curve.points.resize(means.size());
    for (int t = 0; t < dataset.n_temps(); ++t) {
        const auto m = moments(per_site_energies(dataset.configs[t]));
        means[t] = m.mean;
        curve.points[t].temperature = dataset.temperatures[t];
        curve.points[t].std_energy = m.stddev;
    }
    isotonic_non_decreasing(means);
    for (std::size_t t = 0; t < means.size(); ++t)
        curve.points[t].mean_energy = means[t];
    return curve;
}

double invert_energy(const CalibrationCurve& curve, double energy) {
    if (curve.points.empty())
        throw std::invalid_argument("invert_energy: empty curve");
    const Knots knots = compress(curve);
    if (energy <= knots.energy.front()) return curve.points.front().temperature;
    if (energy >= knots.energy.back()) return curve.points.back().temperature;
    std::size_t hi = 1;
    while (knots.energy[hi] < energy) ++hi;
    const double e0 = knots.energy[hi - 1];
    const double e1 = knots.energy[hi];
    const double t0 = knots.temperature[hi - 1];
    const double t1 = knots.temperature[hi];
    return t0 + (energy - e0) * (t1 - t0) / (e1 - e0);
}

TemperatureEstimate estimate_temperature(const CalibrationCurve& curve,
                                         const std::vector<double>& energies) {
    if (energies.empty())
        throw std::invalid_argument("estimate_temperature: no energies given");
    std::vector<double> estimates(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i)
        estimates[i] = invert_energy(curve, energies[i]);
    const auto m = moments(estimates);
    return TemperatureEstimate{m.mean, m.stddev};
}

std::string curve_to_csv(const CalibrationCurve& curve) {
    CsvTable table;
    table.header = {"T", "mean_energy", "std_energy"};
    for (const auto& p : curve.points)
        table.rows.push_back({format_double(p.temperature), format_double(p.mean_energy),
                              format_double(p.std_energy)});
    return table.to_string();
}

CalibrationCurve curve_from_csv(const std::string& text, int side) {
    const CsvTable table = parse_csv(text);
    const int c_t = table.column("T");
    const int c_mean = table.column("mean_energy");
    const int c_std = table.column("std_energy");
    if (c_t < 0 || c_mean < 0 || c_std < 0)
        throw std::runtime_error("calibration csv: missing columns");
    CalibrationCurve curve;
    curve.side = side;
    for (const auto& row : table.rows)
        curve.points.push_back({parse_double(row[c_t]), parse_double(row[c_mean]),
                                parse_double(row[c_std])});
    return curve;
}

}  // namespace rbmflow
