// Energy-based thermometer: calibrate the mean energy vs temperature
// relation on a dataset, then read temperatures back off the inverted curve.
//
// The raw per-temperature means can wiggle by Monte Carlo noise, so a
// pool-adjacent-violators pass makes them non-decreasing before inversion.
// Inversion is piecewise linear between the pooled knots; each configuration
// is inverted on its own and the ensemble temperature is the mean of those
// per-configuration estimates. Energies outside the calibrated range clamp
// to the first / last grid temperature.

#pragma once

#include <vector>

#include "rbmflow/sampler.hpp"

namespace rbmflow {

struct CalibrationPoint {
    double temperature = 0.0;
    double mean_energy = 0.0;  // isotonic-adjusted mean per-site energy
    double std_energy = 0.0;
};

struct CalibrationCurve {
    int side = 0;
    std::vector<CalibrationPoint> points;
};

struct TemperatureEstimate {
    double mean = 0.0;
    double spread = 0.0;  // std over per-configuration estimates
};

CalibrationCurve calibrate(const Dataset& dataset);

// In-place pool-adjacent-violators, equal weights, non-decreasing output.
void isotonic_non_decreasing(std::vector<double>& values);

double invert_energy(const CalibrationCurve& curve, double energy);

TemperatureEstimate estimate_temperature(const CalibrationCurve& curve,
                                         const std::vector<double>& energies);

std::string curve_to_csv(const CalibrationCurve& curve);
CalibrationCurve curve_from_csv(const std::string& text, int side);

}  // namespace rbmflow
