#pragma once

// Traditional echo-state reservoir: random sparse recurrent matrix scaled to
// a target spectral radius, leaky-tanh state update, state harvesting, and
// predictive / free-running execution.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/numerics.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

struct EsnConfig {
    long n_x = 100;            // reservoir size
    long n_u = 1;              // input size; this artifact supports scalar input only
    double alpha = 0.3;        // leak rate in (0, 1]
    double rho = 0.95;         // target spectral radius of the recurrent matrix
    double input_scale = 1.0;  // W_in entries uniform in [-input_scale, input_scale]
    double density = 1.0;      // fraction of nonzero recurrent entries in (0, 1]
    std::uint64_t seed = 1;
    long washout = 100;        // harvested columns to discard

    void validate() const {
        if (n_x < 1) throw ParameterError("esn: n_x must be >= 1");
        if (n_u != 1) throw ParameterError("esn: only scalar input (n_u = 1) is supported");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw ParameterError("esn: alpha must lie in (0, 1]; got " + std::to_string(alpha));
        if (rho <= 0.0) throw ParameterError("esn: rho must be > 0");
        if (!(density > 0.0 && density <= 1.0))
            throw ParameterError("esn: density must lie in (0, 1]");
        if (washout < 0) throw ParameterError("esn: washout must be >= 0");
    }
};

/// Feature vectors are [1; u_n; x_n] in that order.
struct FeatureLayout {
    long n_u = 1;
    long n_state = 0;

    long total() const { return 1 + n_u + n_state; }
    bool operator==(const FeatureLayout&) const = default;
};

struct ReadoutModel {
    Matrix w_out;  // [n_out x (1 + n_u + n_state)]
    FeatureLayout layout;
};

namespace detail {

// Deterministic uniform doubles; fixed mapping so models are reproducible
// bit-for-bit from the seed.
inline double u01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + u01(eng) * (hi - lo);
}

}  // namespace detail

struct EsnModel {
    Matrix w_in;   // [n_x x (1 + n_u)], bias column first
    Matrix w;      // [n_x x n_x], scaled to radius rho
    Vector state;  // length n_x
    EsnConfig config;

    void reset_state() { state.setZero(); }
};

/// Builds a reservoir from the seed: W_in uniform in +/- input_scale, W
/// uniform in [-1, 1] with the configured density, rescaled to the target
/// spectral radius. The state starts at zero.
inline EsnModel init_esn(const EsnConfig& config) {
    config.validate();
    std::mt19937_64 eng(config.seed);

    EsnModel model;
    model.config = config;
    model.w_in.resize(config.n_x, 1 + config.n_u);
    for (Eigen::Index i = 0; i < model.w_in.rows(); ++i)
        for (Eigen::Index j = 0; j < model.w_in.cols(); ++j)
            model.w_in(i, j) = detail::uniform(eng, -config.input_scale, config.input_scale);

    Matrix w(config.n_x, config.n_x);
    long nnz = 0;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            const double value = detail::uniform(eng, -1.0, 1.0);
            const double keep = detail::u01(eng);
            if (keep < config.density) {
                w(i, j) = value;
                ++nnz;
            } else {
                w(i, j) = 0.0;
            }
        }
    if (nnz == 0)
        throw DegenerateMatrixError("init_esn: recurrent matrix is all zero after "
                                    "sparsification; increase density or n_x");
    model.w = scale_to_radius(w, config.rho);
    model.state = Vector::Zero(config.n_x);
    return model;
}

/// Leaky-tanh update x <- (1-a) x + a tanh(W_in [1; u] + W x); returns the
/// new state.
inline const Vector& update_state(EsnModel& model, double u) {
    if (!std::isfinite(u)) throw ParameterError("update_state: non-finite input");
    Vector pre = model.w_in.col(0) + model.w_in.col(1) * u + model.w * model.state;
    const double a = model.config.alpha;
    for (Eigen::Index i = 0; i < pre.size(); ++i)
        model.state(i) = (1.0 - a) * model.state(i) + a * std::tanh(pre(i));
    return model.state;
}

/// Resets the state, drives the reservoir through the inputs, and collects
/// per-step feature columns [1; u_n; x_n], discarding the first `washout`.
inline Matrix harvest(EsnModel& model, const TimeSeries& inputs) {
    const long t = static_cast<long>(inputs.size());
    const long washout = model.config.washout;
    if (t <= washout)
        throw ParameterError("harvest: series length " + std::to_string(t) +
                             " does not exceed washout " + std::to_string(washout));
    model.reset_state();
    Matrix features(2 + model.config.n_x, t - washout);
    for (long n = 0; n < t; ++n) {
        const double u = inputs.values[static_cast<std::size_t>(n)];
        const Vector& x = update_state(model, u);
        if (n < washout) continue;
        const long col = n - washout;
        features(0, col) = 1.0;
        features(1, col) = u;
        features.col(col).tail(model.config.n_x) = x;
    }
    return features;
}

/// Ridge-solves the readout on harvested features. target[n] must correspond
/// to feature column n (one-step-ahead alignment is the caller's concern).
inline ReadoutModel train_readout(const Matrix& features, const TimeSeries& target,
                                  double beta) {
    if (static_cast<long>(target.size()) != features.cols())
        throw ShapeError("train_readout: " + std::to_string(features.cols()) +
                         " feature columns vs " + std::to_string(target.size()) +
                         " target samples");
    Matrix y(1, features.cols());
    for (Eigen::Index i = 0; i < y.cols(); ++i)
        y(0, i) = target.values[static_cast<std::size_t>(i)];
    ReadoutModel readout;
    readout.w_out = ridge_solve(features, y, beta);
    readout.layout = FeatureLayout{1, features.rows() - 2};
    return readout;
}

inline void check_layout(const EsnModel& model, const ReadoutModel& readout, const char* op) {
    if (readout.layout.n_state != model.config.n_x ||
        readout.w_out.cols() != readout.layout.total())
        throw ShapeError(std::string(op) + ": readout layout does not match the model (" +
                         std::to_string(readout.w_out.cols()) + " readout columns, reservoir " +
                         std::to_string(model.config.n_x) + ")");
}

/// One-step-ahead prediction driven by externally supplied inputs. The state
/// is reset first; one output per input sample.
inline TimeSeries run_predictive(EsnModel& model, const ReadoutModel& readout,
                                 const TimeSeries& inputs) {
    check_layout(model, readout, "run_predictive");
    model.reset_state();
    TimeSeries out;
    out.dt = inputs.dt;
    out.t0 = inputs.t0;
    out.values.resize(inputs.size());
    Vector feat(readout.layout.total());
    for (std::size_t n = 0; n < inputs.size(); ++n) {
        const double u = inputs.values[n];
        const Vector& x = update_state(model, u);
        feat(0) = 1.0;
        feat(1) = u;
        feat.tail(model.config.n_x) = x;
        out.values[n] = (readout.w_out * feat)(0);
    }
    return out;
}

/// Free-running forecast: warms the state on the primer, then closes the loop
/// with u_n = y_{n-1}; the last primer value seeds the first fed-back input.
inline TimeSeries run_generative(EsnModel& model, const ReadoutModel& readout, long n_steps,
                                 const TimeSeries& primer) {
    check_layout(model, readout, "run_generative");
    if (primer.empty()) throw ParameterError("run_generative: primer must be non-empty");
    if (n_steps < 0) throw ParameterError("run_generative: n_steps must be >= 0");

    model.reset_state();
    for (std::size_t n = 0; n + 1 < primer.size(); ++n) update_state(model, primer.values[n]);

    TimeSeries out;
    out.dt = primer.dt;
    out.t0 = primer.end_time();
    out.values.reserve(static_cast<std::size_t>(n_steps));
    Vector feat(readout.layout.total());
    double u = primer.values.back();
    for (long k = 0; k < n_steps; ++k) {
        const Vector& x = update_state(model, u);
        feat(0) = 1.0;
        feat(1) = u;
        feat.tail(model.config.n_x) = x;
        const double y = (readout.w_out * feat)(0);
        if (!std::isfinite(y))
            throw DivergenceError("run_generative: non-finite output at step " +
                                  std::to_string(k) + " (spurious data point)", k);
        out.values.push_back(y);
        u = y;
    }
    return out;
}

}  // namespace slrc
