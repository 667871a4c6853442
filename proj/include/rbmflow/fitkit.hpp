// Fit of the fixed-point minimum energy law E_min(N_temp) = -2 exp(-a N^b).
//
// The law linearizes exactly: ln(-ln(-E/2)) = ln a + b ln N, so the fit is
// ordinary least squares in that plane; residuals are reported back in E
// space. Boundary values E <= -2 or E >= 0 carry no information under the
// transform and are rejected.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rbmflow {

struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double rss = 0.0;        // residual sum of squares in E space
    int n_points = 0;
    double cutoff = 0.0;     // minimum N_temp admitted
    bool clamped = false;    // OLS gave a negative a or b, clamped to 0
};

struct EminPoint {
    double n_temp = 0.0;
    double e_min = 0.0;
};

FitResult fit_emin_law(const std::vector<EminPoint>& points, double min_ntemp_cutoff = 100.0);

double extrapolate(const FitResult& result, double n_temp);

enum class Monotonicity { kIncreasing, kDecreasing, kNonMonotonic, kConstant };

struct TrendSummary {
    std::vector<std::pair<double, FitResult>> by_size;  // ascending N_v
    Monotonicity a_trend = Monotonicity::kConstant;
    Monotonicity b_trend = Monotonicity::kConstant;
};

// Pairwise monotonicity verdicts across lattice sizes; no functional fit.
TrendSummary parameter_trend(const std::vector<std::pair<double, FitResult>>& results);

const char* monotonicity_name(Monotonicity m);

std::string fit_to_csv(const FitResult& result);

}  // namespace rbmflow
