#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage/config error,
// 2 numerical failure, with the failing operation named on stderr.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "slrc/bench.hpp"
#include "slrc/config.hpp"
#include "slrc/io.hpp"
#include "slrc/model_io.hpp"
#include "slrc/pipeline.hpp"
#include "slrc/report_io.hpp"

namespace slrc::cli {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::string input_path;   // spectrum
    std::string model_path;   // forecast
    long snapshot_every = 0;  // slwave field dump
    bool seed_given = false;
    std::uint64_t seed = 0;
    int verbosity = 1;
    bool reference = false;
};

namespace detail {

inline std::filesystem::path resolve_out(const Options& opt) {
    namespace fs = std::filesystem;
    const char* root = std::getenv("SLRC_OUT_ROOT");
    fs::path base = root && *root ? fs::path(root) : fs::path(".");
    if (opt.out_dir.empty()) return base;
    fs::path out(opt.out_dir);
    return out.is_absolute() ? out : base / out;
}

inline ExperimentConfig build_config(const Options& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) config::load_file(cfg, opt.config_path);
    for (const auto& kv : opt.overrides) config::apply_override(cfg, kv);
    if (opt.seed_given) cfg.seed = opt.seed;
    return cfg;
}

inline void info(const Options& opt, const std::string& msg) {
    if (opt.verbosity >= 1) std::cout << msg << "\n";
}

inline int cmd_gen_signal(const Options& opt) {
    const ExperimentConfig cfg = build_config(opt);
    DownsampleInfo ds_info;
    TimeSeries ts;
    {
        // generate_signal with an aliasing check on the downsampling stage
        SignalSpec spec = cfg.signal;
        const long factor = spec.downsample_factor;
        spec.downsample_factor = 1;
        ts = generate_signal(spec);
        if (factor > 1)
            ts = downsample(ts, factor, DownsampleOptions{cfg.signal.downsample_prefilter},
                            &ds_info);
    }
    if (ds_info.aliasing_warning)
        std::cerr << "warning (gen-signal): downsampling aliases spectral content above the "
                     "new Nyquist frequency\n";
    const auto out = resolve_out(opt);
    write_timeseries_csv(out / "signal.csv", ts);
    info(opt, "wrote " + (out / "signal.csv").string() + " (" + std::to_string(ts.size()) +
                  " samples, dt " + format_double(ts.dt) + ")");
    return 0;
}

inline int cmd_spectrum(const Options& opt) {
    if (opt.input_path.empty())
        throw ParameterError("spectrum: --input <csv> is required");
    const TimeSeries ts = read_timeseries_csv(opt.input_path);
    const Spectrum spec = magnitude_spectrum(ts);
    const auto out = resolve_out(opt);
    write_spectrum_csv(out / "spectrum.csv", spec);
    info(opt, "wrote " + (out / "spectrum.csv").string() + " (peak at " +
                  format_double(spec.peak_freq()) + " Hz)");
    return 0;
}

inline int cmd_train(const Options& opt) {
    const ExperimentConfig cfg = build_config(opt);
    const TrainedSystem sys = train(cfg);
    const auto out = resolve_out(opt);
    save_system(sys, out / "model.json");
    atomic_write(out / "config.echo", config::echo(sys.config));
    info(opt, "trained " + std::string(sys.config.backend == Backend::esn      ? "esn"
                                       : sys.config.backend == Backend::slwave ? "slwave"
                                                                               : "ngrc") +
                  " backend; training NRMSE " + format_double(sys.training_nrmse) +
                  "; model at " + (out / "model.json").string());
    return 0;
}

inline void dump_snapshots(const Options& opt, const TrainedSystem& sys,
                           const std::filesystem::path& out) {
    if (opt.snapshot_every <= 0 || sys.config.backend != Backend::slwave) return;
    TimeSeries drive = sys.train_series;
    if (sys.drive_offset != 0.0)
        for (double& v : drive.values) v -= sys.drive_offset;
    std::string csv = "t,x,h\n";
    const double dx = sys.film.dx();
    respond(sys.film, drive, opt.snapshot_every,
            [&](double t, const std::vector<double>& h) {
                for (std::size_t i = 0; i < h.size(); ++i) {
                    csv += format_double(t) + ',' +
                           format_double(static_cast<double>(i) * dx) + ',' +
                           format_double(h[i]) + '\n';
                }
            });
    atomic_write(out / "film_snapshots.csv", csv);
}

inline int cmd_forecast(const Options& opt) {
    TrainedSystem sys;
    if (!opt.model_path.empty()) {
        sys = load_system(opt.model_path);
    } else {
        sys = train(build_config(opt));
    }
    const ForecastReport report = forecast(sys, sys.config.horizon);
    const auto out = resolve_out(opt);
    write_forecast_report(out, report, config::echo(sys.config));
    dump_snapshots(opt, sys, out);
    info(opt, "forecast of " + std::to_string(report.forecast.size()) + " samples, NRMSE " +
                  (report.nrmse_defined ? format_double(report.nrmse) : std::string("n/a")) +
                  (report.truncated ? " (target truncated)" : "") + "; report in " +
                  out.string());
    return 0;
}

inline int cmd_bench(const Options& opt) {
    const auto out = resolve_out(opt);
    std::filesystem::create_directories(out / "bench_work");
    const auto results = bench::run_all(out / "bench_work");
    const std::string table = bench::summary_table(results);
    std::cout << table;
    atomic_write(out / "bench_summary.txt", table);
    for (const auto& r : results)
        if (!r.pass) {
            std::cerr << "error (bench): criterion " << r.id << " (" << r.name << ") failed\n";
            return 2;
        }
    return 0;
}

inline int cmd_calibrate_film(const Options& opt) {
    const ExperimentConfig base = build_config(opt);
    const TimeSeries drive = sinusoid(1.0, 1.0, 0.0, 0.02, 1024);

    struct Candidate {
        double eps, gain, db2, db3;
    };
    std::vector<Candidate> table;
    for (double eps : {0.25, 0.5, 1.0, 2.0}) {
        for (double gain : {0.25, 0.5, 1.0}) {
            FilmParams p = base.film;
            p.eps_nl = eps;
            p.drive_gain = gain;
            p.dt_pde = 0.0;
            p.substeps_per_sample = 0;
            try {
                const TimeSeries probe = respond(p, drive);
                TimeSeries steady;
                steady.dt = probe.dt;
                steady.values.assign(probe.values.begin() + 256, probe.values.end());
                const Spectrum s = magnitude_spectrum(steady);
                std::vector<double> sorted = s.magnitudes;
                std::sort(sorted.begin(), sorted.end());
                const double floor = std::max(sorted[sorted.size() / 2], 1e-300);
                table.push_back({eps, gain,
                                 20.0 * std::log10(s.peak_in_band(1.8, 2.2) / floor),
                                 20.0 * std::log10(s.peak_in_band(2.7, 3.3) / floor)});
            } catch (const NumericError&) {
                table.push_back({eps, gain, -1.0, -1.0});  // blew up: reject
            }
        }
    }

    const Candidate* best = nullptr;
    for (const auto& c : table) {
        if (c.db2 < 20.0 || c.db3 < 20.0) continue;
        if (!best || std::min(c.db2, c.db3) > std::min(best->db2, best->db3)) best = &c;
    }
    if (opt.verbosity >= 2)
        for (const auto& c : table)
            std::cout << "eps_nl " << c.eps << " drive_gain " << c.gain << " -> 2nd "
                      << c.db2 << " dB, 3rd " << c.db3 << " dB\n";
    if (!best) {
        std::cerr << "error (calibrate-film): no parameter combination reached 20 dB "
                     "harmonics\n";
        return 2;
    }
    const auto out = resolve_out(opt);
    std::string snippet = "[slwave]\n";
    snippet += "eps_nl = " + format_double(best->eps) + "\n";
    snippet += "drive_gain = " + format_double(best->gain) + "\n";
    atomic_write(out / "calibrated_film.conf", snippet);
    info(opt, "calibrated eps_nl " + format_double(best->eps) + ", drive_gain " +
                  format_double(best->gain) + " (2nd " + format_double(best->db2) + " dB, 3rd " +
                  format_double(best->db3) + " dB); wrote " +
                  (out / "calibrated_film.conf").string());
    return 0;
}

}  // namespace detail

/// Entry point shared by the binary and the tests.
inline int run(std::vector<std::string> args) {
    CLI::App app{"slrc: reservoir forecasting with echo-state, next-generation, and "
                 "solitary-wave backends"};
    app.require_subcommand(0, 1);

    Options opt;
    app.add_option("--config", opt.config_path, "experiment config file (key = value)");
    app.add_option("--out", opt.out_dir, "output directory (under SLRC_OUT_ROOT if relative)");
    app.add_option("--set", opt.overrides, "config override key=value (repeatable)")
        ->take_all();
    auto* seed_opt = app.add_option("--seed", opt.seed, "override the config seed");
    app.add_flag_callback("--quiet", [&] { opt.verbosity = 0; }, "suppress progress output");
    app.add_flag_callback("--verbose", [&] { opt.verbosity = 2; }, "extra diagnostics");
    app.add_flag("--reference", opt.reference,
                 "print the annotated default configuration and exit");

    auto* gen = app.add_subcommand("gen-signal", "generate the configured signal as CSV");
    auto* spectrum = app.add_subcommand("spectrum", "magnitude spectrum of a series CSV");
    spectrum->add_option("--input", opt.input_path, "input t,value CSV")->required();
    auto* train_cmd = app.add_subcommand("train", "train a system and persist it");
    auto* forecast_cmd =
        app.add_subcommand("forecast", "train (or load) a system and write a forecast report");
    forecast_cmd->add_option("--model", opt.model_path, "forecast from a saved model.json");
    forecast_cmd->add_option("--snapshots", opt.snapshot_every,
                             "dump film snapshots every k-th training sample (slwave)");
    auto* bench_cmd =
        app.add_subcommand("bench", "run the reproduction suite and write a summary table");
    auto* calibrate =
        app.add_subcommand("calibrate-film", "sweep film nonlinearity for the harmonic "
                                             "criterion and write calibrated defaults");

    std::vector<const char*> argv;
    argv.push_back("slrc");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    opt.seed_given = seed_opt->count() > 0;

    if (opt.reference) {
        std::cout << config::echo(ExperimentConfig{}, /*with_docs=*/true);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << "error: a subcommand is required (gen-signal | spectrum | train | "
                     "forecast | bench | calibrate-film)\n";
        return 1;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (gen->parsed()) return detail::cmd_gen_signal(opt);
        if (spectrum->parsed()) return detail::cmd_spectrum(opt);
        if (train_cmd->parsed()) return detail::cmd_train(opt);
        if (forecast_cmd->parsed()) return detail::cmd_forecast(opt);
        if (bench_cmd->parsed()) return detail::cmd_bench(opt);
        if (calibrate->parsed()) return detail::cmd_calibrate_film(opt);
    } catch (const ParameterError& e) {
        std::cerr << "error (" << name << "): " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure (" << name << "): " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace slrc::cli
