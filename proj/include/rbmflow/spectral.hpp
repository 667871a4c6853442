// Eigen-analysis of W W^T and classification of eigenvector patterns.
//
// W W^T is independent of the hidden basis, positive semidefinite, and of
// rank at most N_h. Each eigenvector, reshaped to the L x L lattice, is
// scored by its nearest-neighbour autocorrelation S = sum_<ij> u_i u_j
// (S in [-2, 2] for unit u); |S| beyond 3 sigma of the random-unit-vector
// null marks the pattern as non-random. Null sigma is tabulated once per
// lattice side from 10^4 draws with a fixed seed and cached.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rbmflow/rbm.hpp"

namespace rbmflow {

enum class PatternClass { kRandomLike, kNonRandom };

struct EigenPattern {
    double eigenvalue = 0.0;
    Eigen::VectorXd vector;          // unit norm, length N_v
    double statistic = 0.0;          // S
    PatternClass pattern = PatternClass::kRandomLike;
    bool classified = false;
};

struct SpectralReport {
    int side = 0;
    int n_hidden = 0;
    std::vector<EigenPattern> entries;  // descending |eigenvalue|, N_v of them
    double residual = 0.0;              // ||WW^T - U L U^T|| / ||WW^T||
    int rank = 0;                       // eigenvalues above the zero threshold
};

struct NullModelStats {
    int side = 0;
    int draws = 0;
    double mean = 0.0;
    double sigma = 0.0;
};

// Cached per side; deterministic (fixed internal seed).
const NullModelStats& null_model_stats(int side, int draws = 10000);

// Decomposition only; classification deferred to classify_report.
SpectralReport weight_spectrum(const RbmModel& model);

double pattern_statistic(const Eigen::VectorXd& u, int side);

PatternClass classify_pattern(const Eigen::VectorXd& u, int side,
                              const NullModelStats& null_stats, double* statistic = nullptr);

void classify_report(SpectralReport& report);

// Fraction of non-random patterns among the top n_hidden eigenvectors.
double nonrandom_ratio(const SpectralReport& report, int n_hidden);

struct GapProfile {
    std::vector<double> consecutive_ratios;  // lambda_k / lambda_{k+1}, top N_h
    int largest_gap_index = -1;              // k of the largest ratio
    double largest_gap_ratio = 0.0;
    // spread of the eigenvalues after dropping `head_exclude` leading ones
    double near_degeneracy_cv = 0.0;
    int head_exclude = 5;
};

GapProfile eigenvalue_gap_profile(const SpectralReport& report, int n_hidden,
                                  int head_exclude = 5);

std::string spectral_report_to_csv(const SpectralReport& report);

// P5 graymap of one eigenvector, values mapped affinely from [min,max] to 0..255.
std::string eigenvector_to_pgm(const Eigen::VectorXd& u, int side);

}  // namespace rbmflow
