#pragma once

// The benchmark/acceptance suite: property checks plus desk-scale
// reproductions of the sinusoid and Mackey-Glass experiments, with pinned
// thresholds. Used by both the `bench` CLI subcommand and the acceptance
// test binary so CI and humans run the same checks.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slrc/config.hpp"
#include "slrc/esn.hpp"
#include "slrc/io.hpp"
#include "slrc/ngrc.hpp"
#include "slrc/numerics.hpp"
#include "slrc/pipeline.hpp"
#include "slrc/report_io.hpp"
#include "slrc/signals.hpp"
#include "slrc/slwave.hpp"

namespace slrc::bench {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double runtime_s = 0.0;
    double runtime_limit_s = 0.0;
};

namespace oracle {

/// Brute-force ridge regression through an explicitly inverted Gram matrix
/// (Gauss-Jordan); intentionally independent of the LDLT solve path.
inline Matrix ridge_explicit_inverse(const Matrix& x, const Matrix& y, double beta) {
    const Eigen::Index n = x.rows();
    Matrix g = x * x.transpose();
    for (Eigen::Index i = 0; i < n; ++i) g(i, i) += beta;

    Matrix inv = Matrix::Identity(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < n; ++r)
            if (std::abs(g(r, col)) > std::abs(g(pivot, col))) pivot = r;
        g.row(col).swap(g.row(pivot));
        inv.row(col).swap(inv.row(pivot));
        const double p = g(col, col);
        g.row(col) /= p;
        inv.row(col) /= p;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = g(r, col);
            g.row(r) -= f * g.row(col);
            inv.row(r) -= f * inv.row(col);
        }
    }
    return y * x.transpose() * inv;
}

/// Full dense eigendecomposition as the spectral-radius reference.
inline double radius_dense(const Matrix& w) {
    Eigen::EigenSolver<Matrix> solver(w, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace oracle

// ---------------------------------------------------------------------------
// Committed benchmark configurations
// ---------------------------------------------------------------------------

/// Fig. 3c analog: feedback-free slwave continuation of a 1 Hz sinusoid.
inline ExperimentConfig sinusoid_slwave_config() {
    ExperimentConfig cfg;
    cfg.backend = Backend::slwave;
    cfg.signal.source = SignalSource::sinusoid;
    cfg.signal.freq_hz = 1.0;
    cfg.signal.amplitude = 1.0;
    cfg.signal.dt = 0.02;
    cfg.signal.n_samples = 1000;  // 10 periods train + 10 periods target
    cfg.train_samples = 500;
    cfg.horizon = 500;
    cfg.beta = 1e-6;
    cfg.generative_mode = GenerativeMode::feedback_free;
    cfg.drive_mode = DriveMode::delayed_replica;
    cfg.postprocess = Postprocess::remove_dc;
    cfg.sl_washout = 100;
    cfg.sl_features = SlFeatureSpec{16, 1, true, true};
    cfg.film = FilmParams{};  // calibrated defaults
    return cfg;
}

/// Fig. 4b analog: 1000-neuron ESN free-running forecast of the MGTS.
inline ExperimentConfig mg_esn_config() {
    ExperimentConfig cfg;
    cfg.backend = Backend::esn;
    cfg.signal.source = SignalSource::mackey_glass;
    cfg.signal.mg = MGParams{};   // tau 17, q 10, beta 0.2, gamma 0.1, dt 0.1
    cfg.signal.n_samples = 50000;
    cfg.signal.discard = 10000;   // attractor transient
    cfg.signal.downsample_factor = 10;  // dt 1.0 after decimation
    cfg.signal.downsample_prefilter = false;
    cfg.train_samples = 3000;
    cfg.horizon = 500;
    cfg.beta = 1e-8;
    cfg.generative_mode = GenerativeMode::closed_loop;
    cfg.seed = 1;
    cfg.esn.n_x = 1000;
    cfg.esn.alpha = 0.3;
    cfg.esn.rho = 1.25;
    cfg.esn.input_scale = 0.5;
    cfg.esn.density = 1.0;
    cfg.esn.washout = 100;
    return cfg;
}

/// Fig. 4a analog: feedback-free slwave forecast of the MGTS trained on only
/// six pseudo-periods.
inline ExperimentConfig mg_slwave_config() {
    ExperimentConfig cfg;
    cfg.backend = Backend::slwave;
    cfg.signal.source = SignalSource::mackey_glass;
    cfg.signal.mg = MGParams{};
    cfg.signal.n_samples = 18000;
    cfg.signal.discard = 12700;   // committed split point; see bench notes
    cfg.signal.downsample_factor = 10;
    cfg.signal.downsample_prefilter = false;
    cfg.train_samples = 0;
    cfg.train_pseudo_periods = 6.0;
    cfg.horizon = 0;  // derived from the pseudo-period at run time
    cfg.beta = 1e-6;
    cfg.generative_mode = GenerativeMode::feedback_free;
    cfg.drive_mode = DriveMode::delayed_replica;
    cfg.center_drive = true;
    cfg.sl_washout = 60;
    cfg.sl_features = SlFeatureSpec{16, 3, true, true};
    cfg.film.c0 = 0.10;
    cfg.film.eps_nl = 0.8;
    cfg.film.mu_disp = 1e-5;
    cfg.film.nu_visc = 2e-3;
    cfg.film.drive_gain = 0.8;
    cfg.film.probe_pos = 0.7;
    return cfg;
}

/// Quadratic NG-RC one-step prediction of the MGTS.
inline ExperimentConfig mg_ngrc_config() {
    ExperimentConfig cfg = mg_esn_config();
    cfg.backend = Backend::ngrc;
    cfg.generative_mode = GenerativeMode::feedback_free;
    cfg.beta = 1e-8;
    cfg.ngrc = NgrcSpec{4, 1, 2, true};
    return cfg;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
CheckResult timed(int id, const std::string& name, double limit_s, Fn&& fn) {
    CheckResult result;
    result.id = id;
    result.name = name;
    result.runtime_limit_s = limit_s;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(result);
    } catch (const std::exception& e) {
        result.pass = false;
        result.detail += std::string(" exception: ") + e.what();
    }
    result.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (result.runtime_s > limit_s) {
        result.pass = false;
        result.detail += " [runtime limit exceeded]";
    }
    return result;
}

inline double u01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline bool single_dominant_peak(const Spectrum& s, double f0, double rel_floor = 0.05) {
    const std::size_t peak = s.peak_index();
    const double df = s.freqs_hz[1] - s.freqs_hz[0];
    if (std::abs(s.freqs_hz[peak] - f0) > df * 1.5) return false;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        if (k + 2 > peak && k < peak + 2) continue;  // within one bin of the peak
        if (s.magnitudes[k] >= s.magnitudes[k - 1] && s.magnitudes[k] >= s.magnitudes[k + 1] &&
            s.magnitudes[k] > rel_floor * s.magnitudes[peak])
            return false;
    }
    return true;
}

}  // namespace detail

inline CheckResult check_1_mg_integrator_order() {
    return detail::timed(1, "mg-integrator-order", 5.0, [](CheckResult& r) {
        MGParams p;  // paper parameters
        const double t_final = 100.0;
        const auto terminal = [&](double dt) {
            MGParams q = p;
            q.dt = dt;
            const long n = static_cast<long>(std::lround(t_final / dt)) + 1;
            return mackey_glass(q, n).values.back();
        };
        const double ref = terminal(0.1 / 16.0);
        const double e1 = std::abs(terminal(0.1) - ref);
        const double e2 = std::abs(terminal(0.05) - ref);
        const double ratio = e1 / e2;
        r.pass = ratio >= 8.0 && ratio <= 32.0;
        r.detail = "error ratio dt=0.1 vs dt=0.05: " + format_double(ratio) +
                   " (expected within [8, 32])";
    });
}

inline CheckResult check_2_linear_algebra_oracles() {
    return detail::timed(2, "ridge-eigen-oracles", 10.0, [](CheckResult& r) {
        std::mt19937_64 eng(12345);
        double worst_ridge = 0.0, worst_radius = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const long nf = 2 + static_cast<long>(eng() % 11);  // <= 12
            const long t = nf + static_cast<long>(eng() % 6);
            const long no = 1 + static_cast<long>(eng() % 3);
            Matrix x(nf, t), y(no, t);
            for (long i = 0; i < nf; ++i)
                for (long j = 0; j < t; ++j) x(i, j) = 2.0 * detail::u01(eng) - 1.0;
            for (long i = 0; i < no; ++i)
                for (long j = 0; j < t; ++j) y(i, j) = 2.0 * detail::u01(eng) - 1.0;
            const double beta = std::pow(10.0, -2.0 - 4.0 * detail::u01(eng));
            const Matrix got = ridge_solve(x, y, beta);
            const Matrix want = oracle::ridge_explicit_inverse(x, y, beta);
            const double rel = (got - want).norm() / std::max(want.norm(), 1e-30);
            worst_ridge = std::max(worst_ridge, rel);
        }
        for (int trial = 0; trial < 200; ++trial) {
            const long n = 2 + static_cast<long>(eng() % 11);
            Matrix w(n, n);
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j) w(i, j) = 2.0 * detail::u01(eng) - 1.0;
            const double got = spectral_radius(w);
            const double want = oracle::radius_dense(w);
            const double rel = std::abs(got - want) / std::max(want, 1e-30);
            worst_radius = std::max(worst_radius, rel);
        }
        r.pass = worst_ridge <= 1e-8 && worst_radius <= 1e-6;
        r.detail = "worst ridge rel err " + format_double(worst_ridge) +
                   " (<= 1e-8), worst radius rel err " + format_double(worst_radius) +
                   " (<= 1e-6)";
    });
}

inline CheckResult check_3_state_range_invariant() {
    return detail::timed(3, "esn-state-range", 10.0, [](CheckResult& r) {
        EsnConfig cfg;
        cfg.n_x = 50;
        cfg.alpha = 0.7;
        cfg.rho = 1.3;
        cfg.seed = 7;
        cfg.washout = 0;
        EsnModel model = init_esn(cfg);
        std::mt19937_64 eng(99);
        long violations = 0;
        for (long step = 0; step < 100000; ++step) {
            if (step % 10000 == 0)
                for (Eigen::Index i = 0; i < model.state.size(); ++i)
                    model.state(i) = 2.0 * detail::u01(eng) - 1.0;
            const double u = 4.0 * detail::u01(eng) - 2.0;
            const Vector& x = update_state(model, u);
            for (Eigen::Index i = 0; i < x.size(); ++i)
                if (x(i) < -1.0 || x(i) > 1.0) ++violations;
        }
        r.pass = violations == 0;
        r.detail = std::to_string(violations) + " range violations over 1e5 steps";
    });
}

inline CheckResult check_4_harmonic_generation() {
    return detail::timed(4, "slwave-harmonics", 60.0, [](CheckResult& r) {
        const TimeSeries drive = sinusoid(1.0, 1.0, 0.0, 0.02, 4096);
        const TimeSeries probe = respond(FilmParams{}, drive);

        TimeSeries steady;  // drop the fill-in transient
        steady.dt = probe.dt;
        steady.values.assign(probe.values.begin() + 500, probe.values.end());
        const Spectrum ps = magnitude_spectrum(steady);

        std::vector<double> sorted = ps.magnitudes;
        std::sort(sorted.begin(), sorted.end());
        const double floor = sorted[sorted.size() / 2];
        const double p2 = ps.peak_in_band(1.8, 2.2);
        const double p3 = ps.peak_in_band(2.7, 3.3);
        const double db2 = 20.0 * std::log10(p2 / std::max(floor, 1e-300));
        const double db3 = 20.0 * std::log10(p3 / std::max(floor, 1e-300));

        const Spectrum ds = magnitude_spectrum(drive);
        const bool drive_clean = detail::single_dominant_peak(ds, 1.0);

        r.pass = db2 >= 20.0 && db3 >= 20.0 && drive_clean;
        r.detail = "2nd harmonic " + format_double(db2) + " dB, 3rd harmonic " +
                   format_double(db3) + " dB above median floor (>= 20 dB); drive single-peak: " +
                   (drive_clean ? "yes" : "no");
    });
}

inline CheckResult check_5_sinusoid_free_run() {
    return detail::timed(5, "slwave-sinusoid-forecast", 60.0, [](CheckResult& r) {
        const ExperimentConfig cfg = sinusoid_slwave_config();
        const TrainedSystem sys = train(cfg);
        const ForecastReport report = forecast_feedback_free(sys, cfg.horizon);

        const Spectrum fs = magnitude_spectrum(report.forecast);
        const double f_peak = fs.peak_freq();
        const bool freq_ok = std::abs(f_peak - 1.0) <= 0.05;
        const bool nrmse_ok = report.nrmse_defined && report.nrmse < 0.3;
        r.pass = freq_ok && nrmse_ok;
        r.detail = "dominant freq " + format_double(f_peak) + " Hz (within 5% of 1 Hz), NRMSE " +
                   format_double(report.nrmse) + " (< 0.3 over 10 periods)";
    });
}

inline CheckResult check_6_mg_esn_closed_loop() {
    return detail::timed(6, "esn-mg-free-run", 30.0, [](CheckResult& r) {
        const ExperimentConfig cfg = mg_esn_config();
        const TrainedSystem sys = train(cfg);
        const ForecastReport report = forecast_closed_loop(sys, cfg.horizon);
        if (report.forecast.size() != static_cast<std::size_t>(cfg.horizon)) {
            r.pass = false;
            r.detail = "forecast stopped early";
            return;
        }
        const long p = estimate_pseudo_period(sys.train_series);
        TimeSeries head = report.forecast, thead = report.target;
        head.values.resize(static_cast<std::size_t>(p));
        thead.values.resize(static_cast<std::size_t>(p));
        const double err = nrmse(head, thead);
        r.pass = err < 0.5;
        r.detail = "NRMSE " + format_double(err) + " over first pseudo-period (" +
                   std::to_string(p) + " samples, < 0.5); 500 steps without divergence";
    });
}

inline CheckResult check_7_mg_slwave_feedback_free() {
    return detail::timed(7, "slwave-mg-feedback-free", 120.0, [](CheckResult& r) {
        ExperimentConfig cfg = mg_slwave_config();
        TrainedSystem sys = train(cfg);
        const long p = sys.pseudo_period;
        const long horizon = 2 * p;
        const ForecastReport report = forecast_feedback_free(sys, horizon);
        std::vector<double> f(report.forecast.values.begin(),
                              report.forecast.values.begin() + horizon);
        std::vector<double> t(report.target.values.begin(),
                              report.target.values.begin() + horizon);
        const double corr = pearson(f, t);
        const ExperimentConfig esn_cfg = mg_esn_config();
        const bool shorter = static_cast<long>(sys.train_series.size()) < esn_cfg.train_samples;
        r.pass = corr >= 0.8 && shorter;
        r.detail = "Pearson " + format_double(corr) + " over 2 pseudo-periods (>= 0.8); " +
                   "training segment " + std::to_string(sys.train_series.size()) +
                   " samples (6 pseudo-periods of " + std::to_string(p) +
                   ") vs esn's " + std::to_string(esn_cfg.train_samples);
    });
}

inline CheckResult check_8_fading_memory() {
    return detail::timed(8, "slwave-fading-memory", 30.0, [](CheckResult& r) {
        FilmParams params = resolve_timestep(FilmParams{}, 0.02);
        const TimeSeries drive = sinusoid(1.0, 1.0, 0.0, 0.02, 200);

        FilmState a = init_film(params);
        FilmState b = init_film(params);
        const double dx = params.dx();
        for (long i = 0; i < params.n_grid; ++i) {
            const double x = static_cast<double>(i) * dx;
            b.h[static_cast<std::size_t>(i)] =
                0.3 * std::exp(-(x - 0.4) * (x - 0.4) / 0.01);
        }
        std::vector<double> diff;
        for (std::size_t k = 0; k < drive.size(); ++k) {
            const double pa = step_sample(a, params, drive.values[k]);
            const double pb = step_sample(b, params, drive.values[k]);
            if (k >= drive.size() - 50) diff.push_back(pa - pb);
        }
        const double tail_rms = rms(diff);
        r.pass = tail_rms < 1e-6;
        r.detail = "probe difference RMS " + format_double(tail_rms) +
                   " over the last 50 of 200 samples (< 1e-6)";
    });
}

inline CheckResult check_9_ngrc_one_step() {
    return detail::timed(9, "ngrc-one-step", 10.0, [](CheckResult& r) {
        const ExperimentConfig cfg = mg_ngrc_config();
        const TrainedSystem sys = train(cfg);

        // one-step predictions on held-out data
        const TimeSeries& held = sys.target_series;
        const Matrix feats = nvar_features(held, cfg.ngrc);
        const long n = feats.cols() - 1;
        TimeSeries pred, want;
        pred.dt = want.dt = held.dt;
        pred.values.resize(static_cast<std::size_t>(n));
        want.values.resize(static_cast<std::size_t>(n));
        const long start = cfg.ngrc.tap_span();
        for (long c = 0; c < n; ++c) {
            pred.values[static_cast<std::size_t>(c)] = (sys.readout.w_out * feats.col(c))(0);
            want.values[static_cast<std::size_t>(c)] =
                held.values[static_cast<std::size_t>(start + c + 1)];
        }
        const double err = nrmse(pred, want);
        r.pass = err < 0.05;
        r.detail = "held-out one-step NRMSE " + format_double(err) + " (< 0.05, " +
                   std::to_string(n) + " samples)";
    });
}

inline CheckResult check_10_determinism(const std::filesystem::path& work_dir) {
    return detail::timed(10, "forecast-determinism", 120.0, [&](CheckResult& r) {
        namespace fs = std::filesystem;
        const ExperimentConfig cfg = sinusoid_slwave_config();
        const std::string echo = config::echo(cfg);
        for (int run = 0; run < 2; ++run) {
            const TrainedSystem sys = train(cfg);
            const ForecastReport report = forecast(sys, cfg.horizon);
            write_forecast_report(work_dir / ("determinism_run" + std::to_string(run)),
                                  report, echo);
        }
        const auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string a = slurp(work_dir / "determinism_run0" / "forecast.csv");
        const std::string b = slurp(work_dir / "determinism_run1" / "forecast.csv");
        r.pass = !a.empty() && a == b;
        r.detail = r.pass ? "forecast.csv byte-identical across two runs"
                          : "forecast.csv differs between identical runs";
    });
}

inline std::vector<CheckResult> run_all(const std::filesystem::path& work_dir) {
    std::vector<CheckResult> results;
    results.push_back(check_1_mg_integrator_order());
    results.push_back(check_2_linear_algebra_oracles());
    results.push_back(check_3_state_range_invariant());
    results.push_back(check_4_harmonic_generation());
    results.push_back(check_5_sinusoid_free_run());
    results.push_back(check_6_mg_esn_closed_loop());
    results.push_back(check_7_mg_slwave_feedback_free());
    results.push_back(check_8_fading_memory());
    results.push_back(check_9_ngrc_one_step());
    results.push_back(check_10_determinism(work_dir));
    return results;
}

inline std::string format_line(const CheckResult& r) {
    std::string line = r.pass ? "[PASS] " : "[FAIL] ";
    line += std::to_string(r.id) + " " + r.name + ": " + r.detail + " (" +
            format_double(r.runtime_s) + " s, limit " + format_double(r.runtime_limit_s) + " s)";
    return line;
}

inline std::string summary_table(const std::vector<CheckResult>& results) {
    std::string out;
    int passed = 0;
    for (const auto& r : results) {
        out += format_line(r) + "\n";
        if (r.pass) ++passed;
    }
    out += std::to_string(passed) + "/" + std::to_string(results.size()) + " checks passed\n";
    return out;
}

}  // namespace slrc::bench
