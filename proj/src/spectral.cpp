#include "rbmflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "rbmflow/csv.hpp"
#include "rbmflow/lattice.hpp"

namespace rbmflow {

namespace {

double gaussian(Xoshiro256pp& rng) {
    double u1 = rng.uniform01();
    while (u1 == 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

double pattern_statistic(const Eigen::VectorXd& u, int side) {
    if (u.size() != static_cast<Eigen::Index>(side) * side)
        throw std::invalid_argument("pattern_statistic: vector does not fit lattice");
    const LatticeGeometry geom(side);
    double sum = 0.0;
    for (int site = 0; site < geom.n_sites(); ++site) {
        const auto& nbr = geom.neighbors(site);
        sum += u[site] * (u[nbr[0]] + u[nbr[1]] + u[nbr[2]] + u[nbr[3]]);
    }
    return 0.5 * sum;  // each unordered bond once
}

const NullModelStats& null_model_stats(int side, int draws) {
    static std::map<std::pair<int, int>, NullModelStats> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(side, draws);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // seed fixed per side so classification thresholds are run-independent
    Xoshiro256pp rng(derive_seed(0x5eedu, {seed_tag::null_model,
                                           static_cast<std::uint64_t>(side)}));
    const int n = side * side;
    std::vector<double> stats(static_cast<std::size_t>(draws));
    Eigen::VectorXd u(n);
    for (int d = 0; d < draws; ++d) {
        for (int i = 0; i < n; ++i) u[i] = gaussian(rng);
        u.normalize();
        stats[static_cast<std::size_t>(d)] = pattern_statistic(u, side);
    }
    NullModelStats out;
    out.side = side;
    out.draws = draws;
    for (double s : stats) out.mean += s;
    out.mean /= static_cast<double>(draws);
    for (double s : stats) out.sigma += (s - out.mean) * (s - out.mean);
    out.sigma = std::sqrt(out.sigma / static_cast<double>(draws));
    return cache.emplace(key, out).first->second;
}

SpectralReport weight_spectrum(const RbmModel& model) {
    validate(model);
    const int side = static_cast<int>(std::lround(std::sqrt(model.n_visible)));
    if (side * side != model.n_visible)
        throw std::invalid_argument("weight_spectrum: n_visible is not a square");

    const Eigen::MatrixXd product = model.weights * model.weights.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(product);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("weight_spectrum: eigendecomposition failed");

    SpectralReport report;
    report.side = side;
    report.n_hidden = model.n_hidden;

    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(values[a]) > std::abs(values[b]);
    });

    report.entries.resize(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        report.entries[k].eigenvalue = values[order[k]];
        report.entries[k].vector = vectors.col(order[k]);
    }

    const double norm = product.norm();
    const Eigen::MatrixXd rebuilt = vectors * values.asDiagonal() * vectors.transpose();
    report.residual = norm == 0.0 ? 0.0 : (product - rebuilt).norm() / norm;

    const double lambda_max = std::abs(report.entries.front().eigenvalue);
    const double threshold = std::max(
        static_cast<double>(model.n_visible) *
            std::numeric_limits<double>::epsilon() * lambda_max,
        1e-300);
    report.rank = 0;
    for (const auto& entry : report.entries)
        if (std::abs(entry.eigenvalue) > threshold) ++report.rank;
    return report;
}

PatternClass classify_pattern(const Eigen::VectorXd& u, int side,
                              const NullModelStats& null_stats, double* statistic) {
    const double s = pattern_statistic(u, side);
    if (statistic) *statistic = s;
    return std::abs(s) > 3.0 * null_stats.sigma ? PatternClass::kNonRandom
                                                : PatternClass::kRandomLike;
}

void classify_report(SpectralReport& report) {
    const NullModelStats& null_stats = null_model_stats(report.side);
    for (auto& entry : report.entries) {
        entry.pattern = classify_pattern(entry.vector, report.side, null_stats,
                                         &entry.statistic);
        entry.classified = true;
    }
}

double nonrandom_ratio(const SpectralReport& report, int n_hidden) {
    if (n_hidden < 1 || n_hidden > static_cast<int>(report.entries.size()))
        throw std::invalid_argument("nonrandom_ratio: bad n_hidden");
    int count = 0;
    for (int k = 0; k < n_hidden; ++k) {
        if (!report.entries[static_cast<std::size_t>(k)].classified)
            throw std::invalid_argument("nonrandom_ratio: report not classified");
        if (report.entries[static_cast<std::size_t>(k)].pattern ==
            PatternClass::kNonRandom)
            ++count;
    }
    return static_cast<double>(count) / n_hidden;
}

GapProfile eigenvalue_gap_profile(const SpectralReport& report, int n_hidden,
                                  int head_exclude) {
    if (n_hidden < 1 || n_hidden > static_cast<int>(report.entries.size()))
        throw std::invalid_argument("eigenvalue_gap_profile: bad n_hidden");
    GapProfile profile;
    profile.head_exclude = head_exclude;
    for (int k = 0; k + 1 < n_hidden; ++k) {
        const double a = std::abs(report.entries[static_cast<std::size_t>(k)].eigenvalue);
        const double b =
            std::abs(report.entries[static_cast<std::size_t>(k) + 1].eigenvalue);
        const double ratio = b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
        profile.consecutive_ratios.push_back(ratio);
        if (ratio > profile.largest_gap_ratio) {
            profile.largest_gap_ratio = ratio;
            profile.largest_gap_index = k;
        }
    }
    double mean = 0.0;
    int count = 0;
    for (int k = head_exclude; k < n_hidden; ++k) {
        mean += std::abs(report.entries[static_cast<std::size_t>(k)].eigenvalue);
        ++count;
    }
    if (count > 1) {
        mean /= count;
        double var = 0.0;
        for (int k = head_exclude; k < n_hidden; ++k) {
            const double d =
                std::abs(report.entries[static_cast<std::size_t>(k)].eigenvalue) - mean;
            var += d * d;
        }
        var /= count;
        profile.near_degeneracy_cv = mean == 0.0 ? 0.0 : std::sqrt(var) / mean;
    }
    return profile;
}

std::string spectral_report_to_csv(const SpectralReport& report) {
    CsvTable table;
    table.header = {"rank", "eigenvalue", "S_statistic", "class"};
    for (std::size_t k = 0; k < report.entries.size(); ++k) {
        const auto& entry = report.entries[k];
        table.rows.push_back(
            {std::to_string(k), format_double(entry.eigenvalue),
             entry.classified ? format_double(entry.statistic) : "nan",
             entry.classified
                 ? (entry.pattern == PatternClass::kNonRandom ? "non-random"
                                                              : "random-like")
                 : "unclassified"});
    }
    return table.to_string();
}

std::string eigenvector_to_pgm(const Eigen::VectorXd& u, int side) {
    if (u.size() != static_cast<Eigen::Index>(side) * side)
        throw std::invalid_argument("eigenvector_to_pgm: vector does not fit lattice");
    const double lo = u.minCoeff();
    const double hi = u.maxCoeff();
    const double span = hi - lo;
    std::string out = "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double scaled = span == 0.0 ? 0.0 : (u[i] - lo) / span * 255.0;
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
    }
    return out;
}

}  // namespace rbmflow
