#pragma once

// Signal generation and transformation: Mackey-Glass series, sinusoids,
// downsampling, train/target splitting, and surrogate exploitation drives.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/numerics.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

/// Parameters of the Mackey-Glass delay differential equation
///   x'(t) = beta * x(t - tau) / (1 + x(t - tau)^q) - gamma * x(t).
struct MGParams {
    double beta = 0.2;
    double gamma = 0.1;
    double tau = 17.0;     // delay, model time units
    double q = 10.0;       // nonlinearity exponent
    double dt = 0.1;       // integration step == sample interval
    double history = 1.2;  // constant value on [-tau, 0]

    void validate() const {
        if (beta < 0.0) throw ParameterError("mackey_glass: beta must be >= 0");
        if (gamma < 0.0) throw ParameterError("mackey_glass: gamma must be >= 0");
        if (tau <= 0.0) throw ParameterError("mackey_glass: tau must be > 0");
        if (q <= 0.0) throw ParameterError("mackey_glass: q must be > 0");
        if (dt <= 0.0) throw ParameterError("mackey_glass: dt must be > 0");
        if (dt > tau / 10.0)
            throw ParameterError("mackey_glass: dt must be <= tau/10 (" +
                                 std::to_string(tau / 10.0) + ")");
    }
};

namespace detail {

// Ring of (value, derivative) knots at t_k = k*dt supporting cubic Hermite
// evaluation of the delayed term. Queries at t <= 0 return the constant
// history.
class MGHistory {
  public:
    MGHistory(double dt, double tau, double history)
        : dt_(dt), history_(history),
          cap_(static_cast<std::size_t>(std::ceil(tau / dt)) + 4),
          x_(cap_), d_(cap_) {}

    void push(double x, double xdot) {
        x_[head_ % cap_] = x;
        d_[head_ % cap_] = xdot;
        ++head_;
    }

    // Value at time t; knots 0 .. head_-1 are known.
    double at(double t) const {
        if (t <= 0.0) return history_;
        const double fk = t / dt_;
        std::size_t k = static_cast<std::size_t>(fk);
        if (k + 1 >= head_) k = head_ - 2;
        const double th = fk - static_cast<double>(k);
        const double x0 = x_[k % cap_], x1 = x_[(k + 1) % cap_];
        const double d0 = d_[k % cap_], d1 = d_[(k + 1) % cap_];
        const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
        const double h10 = th * (1.0 - th) * (1.0 - th);
        const double h01 = th * th * (3.0 - 2.0 * th);
        const double h11 = th * th * (th - 1.0);
        return h00 * x0 + h10 * dt_ * d0 + h01 * x1 + h11 * dt_ * d1;
    }

  private:
    double dt_, history_;
    std::size_t cap_;
    std::vector<double> x_, d_;
    std::size_t head_ = 0;
};

}  // namespace detail

/// Integrates the Mackey-Glass equation with fixed-step RK4 and cubic Hermite
/// interpolation of the ring-buffer history for the delayed term. Sample k is
/// x(k*dt), starting from x(0) = history.
inline TimeSeries mackey_glass(const MGParams& p, long n_samples) {
    p.validate();
    if (n_samples < 1) throw ParameterError("mackey_glass: n_samples must be >= 1");

    const auto f = [&](double x, double xd) {
        return p.beta * xd / (1.0 + std::pow(xd, p.q)) - p.gamma * x;
    };

    TimeSeries out;
    out.dt = p.dt;
    out.t0 = 0.0;
    out.values.resize(static_cast<std::size_t>(n_samples));

    detail::MGHistory hist(p.dt, p.tau, p.history);
    double x = p.history;
    hist.push(x, f(x, p.history));
    out.values[0] = x;

    for (long n = 1; n < n_samples; ++n) {
        const double t = static_cast<double>(n - 1) * p.dt;
        const double xd1 = hist.at(t - p.tau);
        const double k1 = f(x, xd1);
        const double xd2 = hist.at(t + 0.5 * p.dt - p.tau);
        const double k2 = f(x + 0.5 * p.dt * k1, xd2);
        const double k3 = f(x + 0.5 * p.dt * k2, xd2);
        const double xd4 = hist.at(t + p.dt - p.tau);
        const double k4 = f(x + p.dt * k3, xd4);
        x += p.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(x))
            throw DivergenceError("mackey_glass: non-finite value at step " + std::to_string(n),
                                  n);
        hist.push(x, f(x, xd4));
        out.values[static_cast<std::size_t>(n)] = x;
    }
    return out;
}

inline TimeSeries sinusoid(double freq_hz, double amplitude, double phase_rad, double dt,
                           long n_samples, double t0 = 0.0) {
    if (freq_hz <= 0.0) throw ParameterError("sinusoid: freq_hz must be > 0");
    if (dt <= 0.0) throw ParameterError("sinusoid: dt must be > 0");
    if (n_samples < 1) throw ParameterError("sinusoid: n_samples must be >= 1");
    if (freq_hz >= 0.5 / dt)
        throw ParameterError("sinusoid: freq_hz " + std::to_string(freq_hz) +
                             " at/above Nyquist " + std::to_string(0.5 / dt));
    TimeSeries out;
    out.dt = dt;
    out.t0 = t0;
    out.values.resize(static_cast<std::size_t>(n_samples));
    for (long k = 0; k < n_samples; ++k)
        out.values[static_cast<std::size_t>(k)] =
            amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * out.time_at(k) + phase_rad);
    return out;
}

struct SineComponent {
    double freq_hz = 1.0;
    double amplitude = 1.0;
    double phase_rad = 0.0;
};

inline TimeSeries sum_of_sinusoids(const std::vector<SineComponent>& components, double dt,
                                   long n_samples, double t0 = 0.0) {
    if (components.empty()) throw ParameterError("sum_of_sinusoids: component list is empty");
    TimeSeries out = sinusoid(components[0].freq_hz, components[0].amplitude,
                              components[0].phase_rad, dt, n_samples, t0);
    for (std::size_t i = 1; i < components.size(); ++i) {
        const TimeSeries part = sinusoid(components[i].freq_hz, components[i].amplitude,
                                         components[i].phase_rad, dt, n_samples, t0);
        for (std::size_t k = 0; k < out.size(); ++k) out.values[k] += part.values[k];
    }
    return out;
}

struct DownsampleOptions {
    bool prefilter = true;  // moving average of width = factor before decimation
};

struct DownsampleInfo {
    bool aliasing_warning = false;
};

/// Keeps every factor-th sample starting at index 0; new dt = dt * factor.
/// With prefilter on, each kept sample is the mean of the factor-wide block
/// starting at it. Sets info->aliasing_warning when the input has significant
/// spectral content above the new Nyquist frequency.
inline TimeSeries downsample(const TimeSeries& ts, long factor, DownsampleOptions opt = {},
                             DownsampleInfo* info = nullptr) {
    if (factor < 1) throw ParameterError("downsample: factor must be >= 1");
    if (ts.empty()) throw ParameterError("downsample: empty series");
    if (info) info->aliasing_warning = false;

    if (info && factor > 1 && ts.size() >= 16) {
        const Spectrum s = magnitude_spectrum(ts);
        const double new_nyquist = 0.5 / (ts.dt * static_cast<double>(factor));
        double above = 0.0, total = 0.0;
        for (std::size_t k = 1; k < s.size(); ++k) {
            const double e = s.magnitudes[k] * s.magnitudes[k];
            total += e;
            if (s.freqs_hz[k] >= new_nyquist) above += e;
        }
        if (total > 0.0 &&
            (above / total >= 0.01 || s.peak_freq() >= new_nyquist))
            info->aliasing_warning = true;
    }

    TimeSeries out;
    out.dt = ts.dt * static_cast<double>(factor);
    out.t0 = ts.t0;
    const std::size_t n = ts.size();
    for (std::size_t k = 0; k < n; k += static_cast<std::size_t>(factor)) {
        if (opt.prefilter && factor > 1) {
            const std::size_t end = std::min(n, k + static_cast<std::size_t>(factor));
            double s = 0.0;
            for (std::size_t j = k; j < end; ++j) s += ts.values[j];
            out.values.push_back(s / static_cast<double>(end - k));
        } else {
            out.values.push_back(ts.values[k]);
        }
    }
    return out;
}

/// First train_samples samples vs. the remainder; the target continues the
/// time axis.
inline std::pair<TimeSeries, TimeSeries> split(const TimeSeries& ts, long train_samples) {
    if (train_samples <= 0 || static_cast<std::size_t>(train_samples) >= ts.size())
        throw ParameterError("split: train_samples must be in (0, length); got " +
                             std::to_string(train_samples) + " of " + std::to_string(ts.size()));
    TimeSeries train, target;
    train.dt = target.dt = ts.dt;
    train.t0 = ts.t0;
    target.t0 = ts.t0 + static_cast<double>(train_samples) * ts.dt;
    train.values.assign(ts.values.begin(), ts.values.begin() + train_samples);
    target.values.assign(ts.values.begin() + train_samples, ts.values.end());
    return {std::move(train), std::move(target)};
}

enum class DriveMode { delayed_replica, sinusoid_sum };

/// Builds the exploitation drive for feedback-free operation. delayed_replica
/// tiles the training signal cyclically. sinusoid_sum fits the mean plus the
/// K largest spectral peaks of the training signal and synthesizes their sum
/// as a phase-coherent continuation, rescaled to the training RMS.
inline TimeSeries surrogate_drive(const TimeSeries& train, DriveMode mode, long horizon,
                                  [[maybe_unused]] std::uint64_t seed = 0, int k_peaks = 8) {
    if (horizon < 1) throw ParameterError("surrogate_drive: horizon must be >= 1");
    if (train.empty()) throw ParameterError("surrogate_drive: empty training signal");

    TimeSeries out;
    out.dt = train.dt;
    out.t0 = train.end_time();
    out.values.resize(static_cast<std::size_t>(horizon));
    const std::size_t n = train.size();

    if (mode == DriveMode::delayed_replica) {
        for (long k = 0; k < horizon; ++k)
            out.values[static_cast<std::size_t>(k)] =
                train.values[static_cast<std::size_t>(k) % n];
        return out;
    }

    // sinusoid_sum: raw DFT, pick the k_peaks largest one-sided local maxima
    const auto spec = detail::dft_real(train.values);
    const std::size_t half = n / 2 + 1;
    std::vector<std::size_t> candidates;
    for (std::size_t k = 1; k + 1 < half; ++k)
        if (std::abs(spec[k]) >= std::abs(spec[k - 1]) &&
            std::abs(spec[k]) >= std::abs(spec[k + 1]))
            candidates.push_back(k);
    if (candidates.empty())
        for (std::size_t k = 1; k < half; ++k) candidates.push_back(k);
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(spec[a]) > std::abs(spec[b]);
    });
    if (candidates.size() > static_cast<std::size_t>(k_peaks))
        candidates.resize(static_cast<std::size_t>(k_peaks));

    const double dc = mean(train.values);
    for (long m = 0; m < horizon; ++m) {
        // continuation index n + m on the training time grid, reduced mod n
        const std::size_t idx = static_cast<std::size_t>(m) % n;
        double v = dc;
        for (std::size_t k : candidates) {
            const double amp = 2.0 * std::abs(spec[k]) / static_cast<double>(n);
            const double phase = std::arg(spec[k]);
            const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) *
                                   static_cast<double>(idx) / static_cast<double>(n) +
                               phase;
            v += amp * std::cos(arg);
        }
        out.values[static_cast<std::size_t>(m)] = v;
    }

    const double r_train = rms(train.values);
    const double r_out = rms(out.values);
    if (r_out > 0.0 && r_train > 0.0) {
        const double scale = r_train / r_out;
        for (double& v : out.values) v *= scale;
    }
    return out;
}

/// Lag (in samples) of the first autocorrelation maximum beyond lag 0,
/// located after the first zero crossing of the autocorrelation.
inline long estimate_pseudo_period(const TimeSeries& ts, long max_lag = 0) {
    const long n = static_cast<long>(ts.size());
    if (n < 8) throw ParameterError("estimate_pseudo_period: series too short");
    if (max_lag <= 0) max_lag = n / 2;
    max_lag = std::min(max_lag, n - 2);

    const double m = mean(ts.values);
    std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (long lag = 0; lag <= max_lag; ++lag) {
        double s = 0.0;
        for (long i = 0; i + lag < n; ++i)
            s += (ts.values[static_cast<std::size_t>(i)] - m) *
                 (ts.values[static_cast<std::size_t>(i + lag)] - m);
        r[static_cast<std::size_t>(lag)] = s;
    }
    if (r[0] <= 0.0) throw ParameterError("estimate_pseudo_period: zero-variance series");

    long first_neg = -1;
    for (long lag = 1; lag <= max_lag; ++lag)
        if (r[static_cast<std::size_t>(lag)] < 0.0) { first_neg = lag; break; }
    const long start = first_neg > 0 ? first_neg : 1;
    for (long lag = std::max(start, 2L); lag < max_lag; ++lag) {
        const double prev = r[static_cast<std::size_t>(lag - 1)];
        const double cur = r[static_cast<std::size_t>(lag)];
        const double next = r[static_cast<std::size_t>(lag + 1)];
        if (cur >= prev && cur >= next && cur > 0.0) return lag;
    }
    throw ParameterError("estimate_pseudo_period: no autocorrelation maximum found");
}

}  // namespace slrc
