#pragma once

// End-to-end experiment orchestration: signal generation, backend training
// with the ridge readout, closed-loop generative runs (ESN backend), the
// feedback-free generative protocol (all backends), and forecast metrics.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/esn.hpp"
#include "slrc/ngrc.hpp"
#include "slrc/numerics.hpp"
#include "slrc/signals.hpp"
#include "slrc/slwave.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

enum class Backend { esn, slwave, ngrc };
enum class GenerativeMode { closed_loop, feedback_free };
enum class Postprocess { none, remove_dc };
enum class SignalSource { mackey_glass, sinusoid, sum_of_sinusoids };

struct SignalSpec {
    SignalSource source = SignalSource::mackey_glass;
    long n_samples = 16000;        // before discard/downsampling
    long discard = 0;              // leading samples dropped after generation
    long downsample_factor = 1;
    bool downsample_prefilter = true;
    double dt = 0.1;               // sample interval; the mg integration step too
    MGParams mg;                   // mg.dt is overridden by dt above
    double freq_hz = 1.0;          // sinusoid source
    double amplitude = 1.0;
    double phase_rad = 0.0;
    std::vector<SineComponent> components;  // sum_of_sinusoids source
};

struct ExperimentConfig {
    Backend backend = Backend::esn;
    SignalSpec signal;
    long train_samples = 0;            // 0 = use train_pseudo_periods
    double train_pseudo_periods = 6.0; // training length in estimated pseudo-periods
    double beta = 1e-6;
    long horizon = 500;
    GenerativeMode generative_mode = GenerativeMode::feedback_free;
    DriveMode drive_mode = DriveMode::delayed_replica;
    Postprocess postprocess = Postprocess::none;
    bool center_drive = false;  // subtract the training mean before driving the film
    std::uint64_t seed = 1;

    EsnConfig esn;
    FilmParams film;
    SlFeatureSpec sl_features;
    long sl_washout = 100;
    NgrcSpec ngrc;

    void validate() const {
        if (horizon < 0) throw ParameterError("config: horizon must be >= 0");
        if (beta < 0.0) throw ParameterError("config: beta must be >= 0");
        if (generative_mode == GenerativeMode::closed_loop && backend != Backend::esn)
            throw ParameterError("config: closed_loop is only valid for the esn backend");
    }
};

struct ForecastReport {
    TimeSeries forecast;
    TimeSeries target;
    TimeSeries abs_error;
    double nrmse = 0.0;
    bool nrmse_defined = false;
    bool truncated = false;  // horizon exceeded the available target
    std::string config_echo;
    double runtime_ms = 0.0;
};

/// Pointwise |y - target| over the overlapping range.
inline TimeSeries abs_error(const TimeSeries& y, const TimeSeries& target) {
    if (std::abs(y.dt - target.dt) > 1e-12 * std::max(std::abs(y.dt), std::abs(target.dt)))
        throw ParameterError("abs_error: sample intervals differ");
    TimeSeries out;
    out.dt = y.dt;
    out.t0 = y.t0;
    const std::size_t n = std::min(y.size(), target.size());
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = std::abs(y.values[i] - target.values[i]);
    return out;
}

/// Root-mean-square error normalized by the target's standard deviation.
inline double nrmse(const TimeSeries& y, const TimeSeries& target) {
    if (y.size() != target.size())
        throw ParameterError("nrmse: length mismatch (" + std::to_string(y.size()) + " vs " +
                             std::to_string(target.size()) + ")");
    if (y.size() < 2) throw ParameterError("nrmse: need at least 2 samples");
    const double sd = stddev(target.values);
    if (sd <= 0.0) throw ParameterError("nrmse: target variance is zero; metric undefined");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y.values[i] - target.values[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(y.size())) / sd;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ParameterError("pearson: need two equal-length series of >= 2 samples");
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0)
        throw ParameterError("pearson: zero-variance input");
    return sab / std::sqrt(saa * sbb);
}

/// Generates the configured source signal with discard and downsampling
/// applied.
inline TimeSeries generate_signal(const SignalSpec& spec) {
    TimeSeries ts;
    switch (spec.source) {
        case SignalSource::mackey_glass:
            ts = mackey_glass(spec.mg, spec.n_samples);
            break;
        case SignalSource::sinusoid:
            ts = sinusoid(spec.freq_hz, spec.amplitude, spec.phase_rad, spec.dt, spec.n_samples);
            break;
        case SignalSource::sum_of_sinusoids:
            ts = sum_of_sinusoids(spec.components, spec.dt, spec.n_samples);
            break;
    }
    if (spec.discard > 0) {
        if (static_cast<std::size_t>(spec.discard) >= ts.size())
            throw ParameterError("signal: discard leaves no samples");
        ts.t0 += static_cast<double>(spec.discard) * ts.dt;
        ts.values.erase(ts.values.begin(), ts.values.begin() + spec.discard);
    }
    if (spec.downsample_factor > 1)
        ts = downsample(ts, spec.downsample_factor,
                        DownsampleOptions{spec.downsample_prefilter});
    return ts;
}

/// A frozen, trained experiment. Immutable after train(); forecast calls copy
/// the reservoir state they need, so concurrent forecasts are safe.
struct TrainedSystem {
    ExperimentConfig config;
    TimeSeries train_series;
    TimeSeries target_series;
    ReadoutModel readout;
    double training_nrmse = 0.0;
    long pseudo_period = 0;    // estimated on the generated signal (0 if unused)
    double drive_offset = 0.0; // subtracted from film drives when center_drive

    // esn backend: model with the post-training state
    EsnModel esn_model;
    // slwave backend: film state and probe tail at the end of training
    FilmParams film;  // resolved timestep
    FilmState film_state;
    std::vector<double> probe_tail;  // last tap_span probe samples
    // ngrc backend: trailing inputs covering the tap span
    std::vector<double> input_tail;
};

namespace detail {

inline TimeSeries targets_for(const TimeSeries& train, long feature_start, long n_cols) {
    // feature column c corresponds to input index feature_start + c; the
    // one-step-ahead target is the next training sample
    TimeSeries t;
    t.dt = train.dt;
    t.t0 = train.t0 + static_cast<double>(feature_start + 1) * train.dt;
    t.values.assign(train.values.begin() + feature_start + 1,
                    train.values.begin() + feature_start + 1 + n_cols);
    return t;
}

inline double readout_apply(const ReadoutModel& readout, const Vector& features) {
    return (readout.w_out * features)(0);
}

}  // namespace detail

inline TrainedSystem train(const ExperimentConfig& config_in) {
    ExperimentConfig config = config_in;
    config.validate();
    config.esn.seed = config.seed;

    TrainedSystem sys;
    const TimeSeries full = generate_signal(config.signal);

    long train_samples = config.train_samples;
    if (train_samples <= 0) {
        if (config.train_pseudo_periods <= 0.0)
            throw ParameterError("config: either train_samples or train_pseudo_periods "
                                 "must be positive");
        sys.pseudo_period = estimate_pseudo_period(full);
        train_samples = static_cast<long>(config.train_pseudo_periods *
                                          static_cast<double>(sys.pseudo_period));
    }
    if (train_samples <= 0 || static_cast<std::size_t>(train_samples) >= full.size())
        throw ParameterError("config: training segment (" + std::to_string(train_samples) +
                             " samples) must be shorter than the generated signal (" +
                             std::to_string(full.size()) + ")");

    auto [train_series, target_series] = split(full, train_samples);
    sys.config = config;
    sys.train_series = std::move(train_series);
    sys.target_series = std::move(target_series);

    Matrix features;
    long feature_start = 0;  // input index of the first feature column

    switch (config.backend) {
        case Backend::esn: {
            sys.esn_model = init_esn(config.esn);
            if (static_cast<long>(sys.train_series.size()) <
                config.esn.washout + 2)
                throw ParameterError("train: training segment shorter than the esn washout");
            features = harvest(sys.esn_model, sys.train_series);
            feature_start = config.esn.washout;
            break;
        }
        case Backend::slwave: {
            sys.drive_offset = config.center_drive ? mean(sys.train_series.values) : 0.0;
            TimeSeries drive = sys.train_series;
            if (sys.drive_offset != 0.0)
                for (double& v : drive.values) v -= sys.drive_offset;
            sys.film = resolve_timestep(config.film, drive.dt);
            // single pass both harvests the probe and leaves the film in its
            // end-of-training state for seamless exploitation
            sys.film_state = init_film(sys.film);
            TimeSeries probe;
            probe.dt = drive.dt;
            probe.t0 = drive.t0;
            probe.values.resize(drive.size());
            for (std::size_t k = 0; k < drive.size(); ++k)
                probe.values[k] = step_sample(sys.film_state, sys.film, drive.values[k]);
            const long span = config.sl_features.tap_span();
            if (span > 0)
                sys.probe_tail.assign(probe.values.end() - span, probe.values.end());
            features = assemble_features(probe, sys.train_series, config.sl_features,
                                         config.sl_washout);
            feature_start = config.sl_washout + span;
            break;
        }
        case Backend::ngrc: {
            features = nvar_features(sys.train_series, config.ngrc);
            feature_start = config.ngrc.tap_span();
            const long span = config.ngrc.tap_span();
            if (span > 0)
                sys.input_tail.assign(sys.train_series.values.end() - span,
                                      sys.train_series.values.end());
            break;
        }
    }

    // drop the final column: its one-step target lies beyond the segment
    const long n_cols = features.cols() - 1;
    if (n_cols < 1) throw ParameterError("train: training segment too short for the backend");
    const Matrix x = features.leftCols(n_cols);
    const TimeSeries targets = detail::targets_for(sys.train_series, feature_start, n_cols);

    sys.readout = train_readout(x, targets, config.beta);

    TimeSeries fitted = targets;
    for (long c = 0; c < n_cols; ++c)
        fitted.values[static_cast<std::size_t>(c)] = detail::readout_apply(
            sys.readout, x.col(c));
    sys.training_nrmse = nrmse(fitted, targets);
    return sys;
}

namespace detail {

/// Probe-tap ring shared by training tail and exploitation steps.
class TapRing {
  public:
    TapRing(const std::vector<double>& tail, long span) : span_(span) {
        for (double v : tail) buf_.push_back(v);
    }
    void push(double v) {
        buf_.push_back(v);
        while (static_cast<long>(buf_.size()) > span_ + 1) buf_.pop_front();
    }
    double at_lag(long lag) const {  // lag 0 = newest
        return buf_[buf_.size() - 1 - static_cast<std::size_t>(lag)];
    }

  private:
    long span_;
    std::deque<double> buf_;
};

inline void score_report(ForecastReport& report, const TrainedSystem& sys, long horizon) {
    if (horizon > static_cast<long>(sys.target_series.size())) report.truncated = true;
    const std::size_t n = std::min(report.forecast.size(), sys.target_series.size());
    report.target.dt = sys.target_series.dt;
    report.target.t0 = sys.target_series.t0;
    report.target.values.assign(sys.target_series.values.begin(),
                                sys.target_series.values.begin() + n);
    if (n > 0) {
        TimeSeries head = report.forecast;
        head.values.resize(n);
        report.abs_error = abs_error(head, report.target);
        if (n >= 2 && variance(report.target.values) > 0.0) {
            report.nrmse = nrmse(head, report.target);
            report.nrmse_defined = true;
        }
    }
}

}  // namespace detail

/// The feedback-free generative protocol: drives the frozen backend with a
/// surrogate signal and reads out per step; the output never feeds back into
/// the reservoir.
inline ForecastReport forecast_feedback_free(const TrainedSystem& sys, long horizon) {
    const auto t_start = std::chrono::steady_clock::now();
    if (horizon < 0) throw ParameterError("forecast: horizon must be >= 0");

    ForecastReport report;
    report.forecast.dt = sys.train_series.dt;
    report.forecast.t0 = sys.train_series.end_time();

    if (horizon > 0) {
        const TimeSeries drive = surrogate_drive(sys.train_series, sys.config.drive_mode,
                                                 horizon, sys.config.seed);
        report.forecast.values.reserve(static_cast<std::size_t>(horizon));

        switch (sys.config.backend) {
            case Backend::esn: {
                EsnModel model = sys.esn_model;  // private state copy
                Vector feat(sys.readout.layout.total());
                for (double u : drive.values) {
                    const Vector& x = update_state(model, u);
                    feat(0) = 1.0;
                    feat(1) = u;
                    feat.tail(model.config.n_x) = x;
                    report.forecast.values.push_back(
                        detail::readout_apply(sys.readout, feat));
                }
                break;
            }
            case Backend::slwave: {
                FilmState state = sys.film_state;  // private state copy
                detail::TapRing ring(sys.probe_tail, sys.config.sl_features.tap_span());
                const SlFeatureSpec& fs = sys.config.sl_features;
                Vector feat(fs.total());
                for (double u_raw : drive.values) {
                    const double u = u_raw - sys.drive_offset;
                    const double p = step_sample(state, sys.film, u);
                    ring.push(p);
                    long row = 0;
                    feat(row++) = 1.0;
                    if (fs.include_input) feat(row++) = u_raw;
                    for (long j = 0; j < fs.n_taps; ++j)
                        feat(row++) = ring.at_lag(j * fs.tap_spacing);
                    if (fs.include_square)
                        for (long j = 0; j < fs.n_taps; ++j) {
                            const double v = ring.at_lag(j * fs.tap_spacing);
                            feat(row++) = v * v;
                        }
                    report.forecast.values.push_back(
                        detail::readout_apply(sys.readout, feat));
                }
                break;
            }
            case Backend::ngrc: {
                detail::TapRing ring(sys.input_tail, sys.config.ngrc.tap_span());
                std::vector<std::vector<long>> monomials;
                for (long d = 2; d <= sys.config.ngrc.poly_order; ++d)
                    detail::enumerate_monomials(sys.config.ngrc.k_delays, d, monomials);
                Vector feat(feature_count(sys.config.ngrc));
                for (double u : drive.values) {
                    ring.push(u);
                    long row = 0;
                    if (sys.config.ngrc.include_constant) feat(row++) = 1.0;
                    for (long j = 0; j < sys.config.ngrc.k_delays; ++j)
                        feat(row++) = ring.at_lag(j * sys.config.ngrc.spacing);
                    for (const auto& mono : monomials) {
                        double v = 1.0;
                        for (long i : mono) v *= ring.at_lag(i * sys.config.ngrc.spacing);
                        feat(row++) = v;
                    }
                    report.forecast.values.push_back(
                        detail::readout_apply(sys.readout, feat));
                }
                break;
            }
        }

        if (sys.config.postprocess == Postprocess::remove_dc) {
            const double m = mean(report.forecast.values);
            for (double& v : report.forecast.values) v -= m;
        }
    }

    detail::score_report(report, sys, horizon);
    report.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
    return report;
}

/// Closed-loop free-running forecast (ESN backend only): wraps run_generative
/// with the training series as the primer.
inline ForecastReport forecast_closed_loop(const TrainedSystem& sys, long horizon) {
    const auto t_start = std::chrono::steady_clock::now();
    if (sys.config.backend != Backend::esn)
        throw ParameterError("forecast_closed_loop: only the esn backend supports the "
                             "closed loop");
    if (horizon < 0) throw ParameterError("forecast: horizon must be >= 0");

    ForecastReport report;
    EsnModel model = sys.esn_model;  // private copy; run_generative resets it
    report.forecast = run_generative(model, sys.readout, horizon, sys.train_series);
    if (sys.config.postprocess == Postprocess::remove_dc && !report.forecast.empty()) {
        const double m = mean(report.forecast.values);
        for (double& v : report.forecast.values) v -= m;
    }
    detail::score_report(report, sys, horizon);
    report.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
    return report;
}

inline ForecastReport forecast(const TrainedSystem& sys, long horizon) {
    return sys.config.generative_mode == GenerativeMode::closed_loop
               ? forecast_closed_loop(sys, horizon)
               : forecast_feedback_free(sys, horizon);
}

}  // namespace slrc
