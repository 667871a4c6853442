// End-to-end orchestration behind the CLI subcommands. Every artifact is a
// pure function of (config, seed, format versions): seeds are derived per
// (side, n_temp) run and per grid point, writes are temp-then-rename, and
// the reporter only rearranges numbers already present in the CSVs.
//
// Artifact layout under out_dir:
//   manifest.json
//   L{L}_T{n}/dataset.bin, calibration.csv, sweep.csv
//   L{L}_T{n}/models/nh{k}.rbm, train_nh{k}.csv, flow_nh{k}.csv
//   L{L}_T{n}/spectra/nh{k}.csv, nh{k}_eig{r}.pgm (top N_h eigenvectors)
//   L{L}/emin_vs_ntemp.csv, fit.csv
//   trend.csv, summary.txt

#pragma once

#include <string>

#include "rbmflow/config.hpp"

namespace rbmflow {

struct RunPaths {
    std::string dir;
    std::string dataset;
    std::string calibration;
    std::string sweep;
    std::string models_dir;
    std::string spectra_dir;

    std::string model(int n_hidden) const;
    std::string train_report(int n_hidden) const;
    std::string trajectory(int n_hidden) const;
    std::string spectrum(int n_hidden) const;
    std::string eigen_image(int n_hidden, int rank) const;
};

RunPaths run_paths(const ExperimentConfig& config, int side, int n_temp);
std::uint64_t run_seed(const ExperimentConfig& config, int side, int n_temp);

void cmd_generate(const ExperimentConfig& config);
void cmd_calibrate(const ExperimentConfig& config);
void cmd_train(const ExperimentConfig& config);
void cmd_flow(const ExperimentConfig& config);
void cmd_sweep(const ExperimentConfig& config);
void cmd_spectra(const ExperimentConfig& config);
void cmd_fit(const ExperimentConfig& config);
void cmd_report(const ExperimentConfig& config);
void cmd_pipeline(const ExperimentConfig& config);

}  // namespace rbmflow
