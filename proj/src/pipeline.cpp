#include "rbmflow/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rbmflow/csv.hpp"
#include "rbmflow/dataset_io.hpp"
#include "rbmflow/fitkit.hpp"
#include "rbmflow/spectral.hpp"

namespace rbmflow {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const std::string& leaf) {
    return (fs::path(dir) / leaf).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

std::string nh_name(int n_hidden) { return "nh" + std::to_string(n_hidden); }

struct ArgminRow {
    int n_h_min = 0;
    double e_min = 0.0;
    bool found = false;
};

// smallest E_star over the sweep CSV, ties toward smaller N_h
ArgminRow sweep_argmin(const CsvTable& sweep) {
    const int c_nh = sweep.column("N_h");
    const int c_e = sweep.column("E_star");
    ArgminRow out;
    for (const auto& row : sweep.rows) {
        if (row[c_e] == "nan") continue;
        const double e = parse_double(row[c_e]);
        const int nh = static_cast<int>(parse_double(row[c_nh]));
        if (!out.found || e < out.e_min || (e == out.e_min && nh < out.n_h_min)) {
            out.found = true;
            out.e_min = e;
            out.n_h_min = nh;
        }
    }
    return out;
}

std::string side_dir(const ExperimentConfig& config, int side) {
    return join(config.out_dir, "L" + std::to_string(side));
}

}  // namespace

std::string RunPaths::model(int n_hidden) const {
    return join(models_dir, nh_name(n_hidden) + ".rbm");
}
std::string RunPaths::train_report(int n_hidden) const {
    return join(dir, "train_" + nh_name(n_hidden) + ".csv");
}
std::string RunPaths::trajectory(int n_hidden) const {
    return join(dir, "flow_" + nh_name(n_hidden) + ".csv");
}
std::string RunPaths::spectrum(int n_hidden) const {
    return join(spectra_dir, nh_name(n_hidden) + ".csv");
}
std::string RunPaths::eigen_image(int n_hidden, int rank) const {
    char leaf[64];
    std::snprintf(leaf, sizeof(leaf), "nh%d_eig%03d.pgm", n_hidden, rank);
    return join(spectra_dir, leaf);
}

RunPaths run_paths(const ExperimentConfig& config, int side, int n_temp) {
    RunPaths paths;
    paths.dir = join(config.out_dir,
                     "L" + std::to_string(side) + "_T" + std::to_string(n_temp));
    paths.dataset = join(paths.dir, "dataset.bin");
    paths.calibration = join(paths.dir, "calibration.csv");
    paths.sweep = join(paths.dir, "sweep.csv");
    paths.models_dir = join(paths.dir, "models");
    paths.spectra_dir = join(paths.dir, "spectra");
    return paths;
}

std::uint64_t run_seed(const ExperimentConfig& config, int side, int n_temp) {
    return derive_seed(config.seed, {static_cast<std::uint64_t>(side),
                                     static_cast<std::uint64_t>(n_temp)});
}

void cmd_generate(const ExperimentConfig& config) {
    const int workers = effective_workers(config);
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            ensure_dir(paths.dir);
            Dataset dataset = generate_dataset(side, n_temp,
                                               run_seed(config, side, n_temp), workers);
            save_dataset(paths.dataset, dataset);
            std::cout << "generated " << paths.dataset << " (" << dataset.n_temps()
                      << " temperatures x " << dataset.configs_per_temp()
                      << " configurations)\n";
            runs.push_back({{"side", side},
                            {"n_temp", n_temp},
                            {"run_seed", run_seed(config, side, n_temp)},
                            {"dataset", paths.dataset}});
        }
    }
    nlohmann::ordered_json manifest;
    manifest["format_versions"] = {{"dataset", kDatasetFormatVersion},
                                   {"model", kModelFormatVersion}};
    manifest["rng"] = kRngId;
    manifest["config"] = nlohmann::ordered_json::parse(config_to_json(config));
    manifest["runs"] = runs;
    write_file_atomic(join(config.out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

void cmd_calibrate(const ExperimentConfig& config) {
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            const Dataset dataset = load_dataset(paths.dataset);
            write_file_atomic(paths.calibration, curve_to_csv(calibrate(dataset)));
            std::cout << "calibrated " << paths.calibration << "\n";
        }
    }
}

void cmd_train(const ExperimentConfig& config) {
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            const Dataset dataset = load_dataset(paths.dataset);
            ensure_dir(paths.models_dir);
            const std::uint64_t seed = run_seed(config, side, n_temp);
            for (int nh : nh_grid_for_side(config, side)) {
                TrainConfig train_config = config.train;
                train_config.seed =
                    derive_seed(seed, {seed_tag::train, static_cast<std::uint64_t>(nh)});
                const TrainReport report = train(dataset, nh, train_config);
                save_model(paths.model(nh), report.model);
                write_file_atomic(paths.train_report(nh), train_report_to_csv(report));
                std::cout << "trained " << paths.model(nh) << " ("
                          << report.errors.back().test_error << " final test error)\n";
            }
        }
    }
}

void cmd_flow(const ExperimentConfig& config) {
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            const Dataset dataset = load_dataset(paths.dataset);
            const CalibrationCurve curve =
                curve_from_csv(read_file(paths.calibration), side);
            const std::vector<SpinConfig> ensemble = dataset_half(dataset, true);
            const std::uint64_t seed = run_seed(config, side, n_temp);
            for (int nh : nh_grid_for_side(config, side)) {
                const RbmModel model = load_model(paths.model(nh));
                const FlowTrajectory trajectory = run_flow(
                    model, ensemble, curve, config.flow,
                    derive_seed(seed, {seed_tag::flow, static_cast<std::uint64_t>(nh)}),
                    effective_workers(config));
                write_file_atomic(paths.trajectory(nh), trajectory_to_csv(trajectory));
                std::cout << "flowed " << paths.trajectory(nh) << "\n";
            }
        }
    }
}

void cmd_sweep(const ExperimentConfig& config) {
    const int workers = effective_workers(config);
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            const Dataset dataset = load_dataset(paths.dataset);
            const CalibrationCurve curve =
                curve_from_csv(read_file(paths.calibration), side);
            ensure_dir(paths.models_dir);
            const std::vector<int> grid = nh_grid_for_side(config, side);
            const auto observer = [&](std::size_t g, const TrainReport& report,
                                      const FlowTrajectory& trajectory) {
                const int nh = grid[g];
                save_model(paths.model(nh), report.model);
                write_file_atomic(paths.train_report(nh), train_report_to_csv(report));
                write_file_atomic(paths.trajectory(nh), trajectory_to_csv(trajectory));
            };
            const SweepResult sweep =
                sweep_nh(dataset, curve, grid, config.train, config.flow,
                         run_seed(config, side, n_temp), workers, observer);
            write_file_atomic(paths.sweep, sweep_to_csv(sweep));
            for (const auto& entry : sweep.entries)
                if (!entry.ok)
                    std::cout << "sweep point N_h=" << entry.n_hidden
                              << " failed: " << entry.error << "\n";
            std::cout << "swept " << paths.sweep;
            if (sweep.any_ok)
                std::cout << " (N_h_min=" << sweep.n_h_min << ", E_min=" << sweep.e_min
                          << ")";
            std::cout << "\n";
        }
    }
}

void cmd_spectra(const ExperimentConfig& config) {
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            ensure_dir(paths.spectra_dir);
            for (int nh : nh_grid_for_side(config, side)) {
                const RbmModel model = load_model(paths.model(nh));
                SpectralReport report = weight_spectrum(model);
                classify_report(report);
                write_file_atomic(paths.spectrum(nh), spectral_report_to_csv(report));
                for (int rank = 0; rank < nh; ++rank)
                    write_file_atomic(
                        paths.eigen_image(nh, rank),
                        eigenvector_to_pgm(report.entries[rank].vector, side));
                std::cout << "spectra " << paths.spectrum(nh) << " (ratio "
                          << nonrandom_ratio(report, nh) << " over top " << nh << ")\n";
            }
        }
    }
}

void cmd_fit(const ExperimentConfig& config) {
    for (int side : config.lattice_sides) {
        std::vector<EminPoint> points;
        CsvTable emin_table;
        emin_table.header = {"N_temp", "E_min", "N_h_min"};
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            const CsvTable sweep = parse_csv(read_file(paths.sweep));
            const ArgminRow argmin = sweep_argmin(sweep);
            if (!argmin.found) continue;
            points.push_back({static_cast<double>(n_temp), argmin.e_min});
            emin_table.rows.push_back({std::to_string(n_temp),
                                       format_double(argmin.e_min),
                                       std::to_string(argmin.n_h_min)});
        }
        ensure_dir(side_dir(config, side));
        write_file_atomic(join(side_dir(config, side), "emin_vs_ntemp.csv"),
                          emin_table.to_string());
        const FitResult fit = fit_emin_law(points, config.fit_min_ntemp);
        write_file_atomic(join(side_dir(config, side), "fit.csv"), fit_to_csv(fit));
        std::cout << "fit L=" << side << ": a=" << fit.a << " b=" << fit.b << "\n";
    }
}

namespace {

// ratio of "non-random" among the top n_h rows of a spectra CSV
double ratio_from_spectrum_csv(const std::string& path, int n_h) {
    const CsvTable table = parse_csv(read_file(path));
    const int c_class = table.column("class");
    int non_random = 0;
    for (int k = 0; k < n_h && k < static_cast<int>(table.rows.size()); ++k)
        if (table.rows[static_cast<std::size_t>(k)][c_class] == "non-random")
            ++non_random;
    return static_cast<double>(non_random) / n_h;
}

}  // namespace

void cmd_report(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "== fixed points (per N_h) ==\n";
    out << "L,N_temp,N_h,E_star,T_star,converged,iters\n";
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            if (!fs::exists(paths.sweep)) continue;
            const CsvTable sweep = parse_csv(read_file(paths.sweep));
            for (const auto& row : sweep.rows) {
                out << side << ',' << n_temp;
                for (const auto& field : row) out << ',' << field;
                out << '\n';
            }
        }
    }

    out << "\n== minimum-energy fixed point ==\n";
    out << "L,N_temp,N_h_min,E_min\n";
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            if (!fs::exists(paths.sweep)) continue;
            const ArgminRow argmin = sweep_argmin(parse_csv(read_file(paths.sweep)));
            if (!argmin.found) {
                out << side << ',' << n_temp << ",none,nan\n";
                continue;
            }
            out << side << ',' << n_temp << ',' << argmin.n_h_min << ','
                << format_double(argmin.e_min) << '\n';
        }
    }

    out << "\n== non-random pattern ratio at N_h_min ==\n";
    out << "L,N_temp,N_h_min,ratio\n";
    for (int side : config.lattice_sides) {
        for (int n_temp : config.n_temps) {
            const RunPaths paths = run_paths(config, side, n_temp);
            if (!fs::exists(paths.sweep)) continue;
            const ArgminRow argmin = sweep_argmin(parse_csv(read_file(paths.sweep)));
            if (!argmin.found || !fs::exists(paths.spectrum(argmin.n_h_min))) continue;
            out << side << ',' << n_temp << ',' << argmin.n_h_min << ','
                << format_double(
                       ratio_from_spectrum_csv(paths.spectrum(argmin.n_h_min),
                                               argmin.n_h_min))
                << '\n';
        }
    }

    out << "\n== E_min law fit: E_min = -2 exp(-a N_temp^b) ==\n";
    out << "L,a,b,rss,n_points,cutoff\n";
    std::vector<std::pair<double, FitResult>> fits;
    for (int side : config.lattice_sides) {
        const std::string fit_path = join(side_dir(config, side), "fit.csv");
        if (!fs::exists(fit_path)) {
            out << side << ",not available\n";
            continue;
        }
        const CsvTable table = parse_csv(read_file(fit_path));
        if (table.rows.empty()) continue;
        const auto& row = table.rows.front();
        out << side;
        for (const auto& field : row) out << ',' << field;
        out << '\n';
        FitResult fit;
        fit.a = parse_double(row[0]);
        fit.b = parse_double(row[1]);
        fits.push_back({static_cast<double>(side) * side, fit});
    }

    out << "\n== fit parameter trend vs N_v ==\n";
    if (fits.size() >= 2) {
        const TrendSummary trend = parameter_trend(fits);
        out << "a: " << monotonicity_name(trend.a_trend) << '\n';
        out << "b: " << monotonicity_name(trend.b_trend) << '\n';
        CsvTable trend_table;
        trend_table.header = {"N_v", "a", "b"};
        for (const auto& [n_v, fit] : trend.by_size)
            trend_table.rows.push_back(
                {format_double(n_v), format_double(fit.a), format_double(fit.b)});
        write_file_atomic(join(config.out_dir, "trend.csv"), trend_table.to_string());
    } else {
        out << "not available (need fits for at least two lattice sizes)\n";
    }

    write_file_atomic(join(config.out_dir, "summary.txt"), out.str());
    std::cout << "report " << join(config.out_dir, "summary.txt") << "\n";
}

void cmd_pipeline(const ExperimentConfig& config) {
    cmd_generate(config);
    cmd_calibrate(config);
    cmd_sweep(config);
    cmd_spectra(config);
    try {
        cmd_fit(config);
    } catch (const std::exception& e) {
        std::cout << "fit skipped: " << e.what() << "\n";
    }
    cmd_report(config);
}

}  // namespace rbmflow
