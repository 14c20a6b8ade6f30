#pragma once

// Simulated solitary-like-wave reservoir: a driven KdV-Burgers surrogate for
// the flowing liquid film. The drive forces the inflow boundary, the probe
// reads the surface height downstream, and feature vectors are assembled
// from delayed (and optionally squared) probe samples.
//
//   h_t + d/dx( c_eff h + eps_nl h^2 / 2 ) + mu_disp h_xxx - nu_visc h_xx = 0
//
// with c_eff = c0 + eps_nl * base_level. Advection uses a Rusanov
// (upwind-biased) flux so that mass telescopes exactly on a periodic domain;
// second and third derivatives are centered; time stepping is classic RK4.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/numerics.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

enum class FilmBoundary {
    inflow_outflow,  // forced Dirichlet inflow, extrapolated outflow
    periodic         // conservation tests only
};

struct FilmParams {
    double domain_length = 1.0;  // meters
    long n_grid = 257;
    double c0 = 1.0;             // linear advection speed, m/s
    double eps_nl = 1.0;         // nonlinear steepening coefficient
    double mu_disp = 1e-6;       // third-derivative dispersion coefficient
    double nu_visc = 1e-3;       // second-derivative dissipation coefficient, >= 0
    double base_level = 0.0;     // mean film height; shifts the advection speed
    double drive_gain = 0.5;     // boundary height units per unit input
    double probe_pos = 0.75;     // meters, strictly inside the domain
    double dt_pde = 0.0;         // PDE substep; 0 = derive from the stability bound
    long substeps_per_sample = 0;  // 0 = derive for a given sample interval
    double drive_amp_limit = 4.0;  // inputs beyond this are clipped (with a counter)
    FilmBoundary boundary = FilmBoundary::inflow_outflow;

    double dx() const { return domain_length / static_cast<double>(n_grid - 1); }
    long probe_index() const { return static_cast<long>(std::lround(probe_pos / dx())); }

    /// Largest stable PDE substep for the explicit RK4 scheme, assuming
    /// |h| stays below the clipped drive excursion.
    double stable_dt() const {
        const double h_max = std::abs(drive_gain) * drive_amp_limit + std::abs(base_level);
        const double a_max = std::abs(c0) + std::abs(eps_nl) * (h_max + std::abs(base_level));
        const double d = dx();
        const double lam = 2.0 * a_max / d + 2.598 * std::abs(mu_disp) / (d * d * d) +
                           4.0 * nu_visc / (d * d);
        return 2.0 / std::max(lam, 1e-300);
    }

    void validate() const {
        if (n_grid < 64) throw ParameterError("film: n_grid must be >= 64");
        if (domain_length <= 0.0) throw ParameterError("film: domain_length must be > 0");
        if (nu_visc < 0.0) throw ParameterError("film: nu_visc must be >= 0");
        if (drive_amp_limit <= 0.0) throw ParameterError("film: drive_amp_limit must be > 0");
        if (!(probe_pos > 0.0 && probe_pos < domain_length))
            throw ParameterError("film: probe_pos must lie strictly inside the domain");
        const long pi = probe_index();
        if (pi < 1 || pi > n_grid - 2)
            throw ParameterError("film: probe index must be strictly interior");
        if (dt_pde <= 0.0) throw ParameterError("film: dt_pde must be > 0");
        if (substeps_per_sample < 1)
            throw ParameterError("film: substeps_per_sample must be >= 1");
        const double bound = stable_dt();
        if (dt_pde > bound)
            throw StabilityError("film: dt_pde " + std::to_string(dt_pde) +
                                 " exceeds the stability bound " + std::to_string(bound));
    }
};

/// Fills in dt_pde / substeps_per_sample so that one input sample of length
/// `sample_dt` is an integer number of stable substeps.
inline FilmParams resolve_timestep(FilmParams p, double sample_dt) {
    if (sample_dt <= 0.0) throw ParameterError("film: sample interval must be > 0");
    if (p.dt_pde > 0.0 && p.substeps_per_sample > 0) {
        const double implied = p.dt_pde * static_cast<double>(p.substeps_per_sample);
        if (std::abs(implied - sample_dt) > 1e-9 * sample_dt)
            throw ParameterError("film: dt_pde * substeps_per_sample = " +
                                 std::to_string(implied) + " does not match the sample "
                                 "interval " + std::to_string(sample_dt));
        return p;
    }
    const double bound = 0.9 * p.stable_dt();
    p.substeps_per_sample = std::max(1L, static_cast<long>(std::ceil(sample_dt / bound)));
    p.dt_pde = sample_dt / static_cast<double>(p.substeps_per_sample);
    return p;
}

struct FilmState {
    std::vector<double> h;  // surface-height deviation on the grid
    double t = 0.0;
    long clip_count = 0;    // drive samples clipped at the amplitude limit
};

inline FilmState init_film(const FilmParams& params) {
    params.validate();
    FilmState state;
    state.h.assign(static_cast<std::size_t>(params.n_grid), 0.0);
    state.t = 0.0;
    return state;
}

namespace detail {

class FilmStepper {
  public:
    explicit FilmStepper(const FilmParams& p)
        : p_(p), n_(static_cast<std::size_t>(p.n_grid)), dx_(p.dx()),
          c_eff_(p.c0 + p.eps_nl * p.base_level),
          he_(n_ + 4), flux_(n_ + 3), k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_) {}

    // One RK4 substep with the boundary value held at hb.
    void substep(std::vector<double>& h, double hb) {
        const double dt = p_.dt_pde;
        rhs(h, hb, k1_);
        axpy(h, k1_, 0.5 * dt, tmp_);
        rhs(tmp_, hb, k2_);
        axpy(h, k2_, 0.5 * dt, tmp_);
        rhs(tmp_, hb, k3_);
        axpy(h, k3_, dt, tmp_);
        rhs(tmp_, hb, k4_);
        for (std::size_t i = 0; i < n_; ++i)
            h[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        if (p_.boundary == FilmBoundary::inflow_outflow) h[0] = hb;
    }

  private:
    static void axpy(const std::vector<double>& h, const std::vector<double>& k, double a,
                     std::vector<double>& out) {
        for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] + a * k[i];
    }

    void rhs(const std::vector<double>& h, double hb, std::vector<double>& out) {
        // ghost extension he_[j] = h[j - 2]
        if (p_.boundary == FilmBoundary::periodic) {
            for (std::size_t i = 0; i < n_; ++i) he_[i + 2] = h[i];
            he_[1] = h[n_ - 1];
            he_[0] = h[n_ - 2];
            he_[n_ + 2] = h[0];
            he_[n_ + 3] = h[1];
        } else {
            for (std::size_t i = 0; i < n_; ++i) he_[i + 2] = h[i];
            he_[2] = hb;
            he_[1] = hb;
            he_[0] = hb;
            he_[n_ + 2] = 2.0 * he_[n_ + 1] - he_[n_];      // linear extrapolation
            he_[n_ + 3] = 2.0 * he_[n_ + 2] - he_[n_ + 1];
        }

        // Rusanov flux for f(h) = c_eff h + eps h^2/2 at the n_+3 interfaces
        const double eps = p_.eps_nl;
        for (std::size_t j = 0; j + 1 < n_ + 4; ++j) {
            const double hl = he_[j], hr = he_[j + 1];
            const double fl = c_eff_ * hl + 0.5 * eps * hl * hl;
            const double fr = c_eff_ * hr + 0.5 * eps * hr * hr;
            const double a = std::abs(c_eff_ + 0.5 * eps * (hl + hr));
            flux_[j] = 0.5 * (fl + fr) - 0.5 * a * (hr - hl);
        }

        const double inv_dx = 1.0 / dx_;
        const double inv_dx2 = inv_dx * inv_dx;
        const double inv_2dx3 = 0.5 * inv_dx * inv_dx2;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = i + 2;  // index into he_
            const double adv = (flux_[j] - flux_[j - 1]) * inv_dx;
            const double hxx = (he_[j + 1] - 2.0 * he_[j] + he_[j - 1]) * inv_dx2;
            const double hxxx =
                (he_[j + 2] - 2.0 * he_[j + 1] + 2.0 * he_[j - 1] - he_[j - 2]) * inv_2dx3;
            out[i] = -adv - p_.mu_disp * hxxx + p_.nu_visc * hxx;
        }
        if (p_.boundary == FilmBoundary::inflow_outflow) out[0] = 0.0;  // node held
    }

    FilmParams p_;
    std::size_t n_;
    double dx_;
    double c_eff_;
    std::vector<double> he_, flux_, k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace detail

/// Holds the inflow boundary at drive_gain * u_n for one input sample,
/// advances substeps_per_sample RK4 substeps, and returns the probe height.
inline double step_sample(FilmState& state, const FilmParams& params, double u_n) {
    if (!std::isfinite(u_n)) throw ParameterError("step_sample: non-finite drive sample");
    double u = u_n;
    if (std::abs(u) > params.drive_amp_limit) {
        u = std::copysign(params.drive_amp_limit, u);
        ++state.clip_count;
    }
    const double hb = params.drive_gain * u;

    detail::FilmStepper stepper(params);
    for (long s = 0; s < params.substeps_per_sample; ++s) {
        stepper.substep(state.h, hb);
        state.t += params.dt_pde;
    }
    const double probe = state.h[static_cast<std::size_t>(params.probe_index())];
    if (!std::isfinite(probe)) {
        const long step = static_cast<long>(std::lround(state.t / params.dt_pde));
        throw DivergenceError("step_sample: field blew up near substep " + std::to_string(step),
                              step);
    }
    return probe;
}

/// Optional sink for field snapshots (CSV rows t,x,h via the CLI).
using SnapshotSink = std::function<void(double t, const std::vector<double>& h)>;

/// Drives a fresh film through the whole signal; returns the probe series.
inline TimeSeries respond(const FilmParams& params_in, const TimeSeries& drive,
                          long snapshot_every = 0, const SnapshotSink& sink = {}) {
    if (drive.empty()) throw ParameterError("respond: empty drive");
    require_finite(drive, "respond");
    const FilmParams params = resolve_timestep(params_in, drive.dt);
    params.validate();

    FilmState state = init_film(params);
    detail::FilmStepper stepper(params);

    TimeSeries probe;
    probe.dt = drive.dt;
    probe.t0 = drive.t0;
    probe.values.resize(drive.size());
    const std::size_t pi = static_cast<std::size_t>(params.probe_index());
    for (std::size_t k = 0; k < drive.size(); ++k) {
        double u = drive.values[k];
        if (std::abs(u) > params.drive_amp_limit) {
            u = std::copysign(params.drive_amp_limit, u);
            ++state.clip_count;
        }
        const double hb = params.drive_gain * u;
        for (long s = 0; s < params.substeps_per_sample; ++s) {
            stepper.substep(state.h, hb);
            state.t += params.dt_pde;
        }
        const double p = state.h[pi];
        if (!std::isfinite(p))
            throw DivergenceError("respond: field blew up at sample " + std::to_string(k),
                                  static_cast<long>(k));
        probe.values[k] = p;
        if (snapshot_every > 0 && sink && k % static_cast<std::size_t>(snapshot_every) == 0)
            sink(state.t, state.h);
    }
    return probe;
}

/// Delay-tap feature layout for the probe signal.
struct SlFeatureSpec {
    long n_taps = 16;
    long tap_spacing = 1;
    bool include_input = true;
    bool include_square = true;

    void validate() const {
        if (n_taps < 1) throw ParameterError("sl features: n_taps must be >= 1");
        if (tap_spacing < 1) throw ParameterError("sl features: tap_spacing must be >= 1");
    }
    long tap_span() const { return (n_taps - 1) * tap_spacing; }
    long total() const {
        return 1 + (include_input ? 1 : 0) + n_taps + (include_square ? n_taps : 0);
    }
};

/// Column n holds [1; (u_n); probe_n, probe_{n-s}, ..., probe_{n-(k-1)s};
/// (squared taps)]. The first washout + (k-1)s columns are dropped.
inline Matrix assemble_features(const TimeSeries& probe, const TimeSeries& drive,
                                const SlFeatureSpec& spec, long washout) {
    spec.validate();
    if (washout < 0) throw ParameterError("assemble_features: washout must be >= 0");
    if (probe.size() != drive.size())
        throw ParameterError("assemble_features: probe/drive length mismatch");
    const long t = static_cast<long>(probe.size());
    const long start = washout + spec.tap_span();
    if (t <= start)
        throw ParameterError("assemble_features: series length " + std::to_string(t) +
                             " too short for washout " + std::to_string(washout) +
                             " plus tap span " + std::to_string(spec.tap_span()));

    Matrix features(spec.total(), t - start);
    for (long n = start; n < t; ++n) {
        const long col = n - start;
        long row = 0;
        features(row++, col) = 1.0;
        if (spec.include_input)
            features(row++, col) = drive.values[static_cast<std::size_t>(n)];
        for (long j = 0; j < spec.n_taps; ++j)
            features(row++, col) =
                probe.values[static_cast<std::size_t>(n - j * spec.tap_spacing)];
        if (spec.include_square)
            for (long j = 0; j < spec.n_taps; ++j) {
                const double v = probe.values[static_cast<std::size_t>(n - j * spec.tap_spacing)];
                features(row++, col) = v * v;
            }
    }
    return features;
}

}  // namespace slrc
