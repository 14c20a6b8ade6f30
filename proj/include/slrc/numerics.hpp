#pragma once

// Shared numerical kernels: ridge readout solve, spectral radius via power
// iteration, and windowed magnitude spectra.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One-sided magnitude spectrum. freqs_hz[0] = 0, uniform spacing 1/(n*dt).
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> magnitudes;

    std::size_t size() const { return freqs_hz.size(); }

    /// Index of the largest magnitude.
    std::size_t peak_index() const {
        return static_cast<std::size_t>(
            std::max_element(magnitudes.begin(), magnitudes.end()) - magnitudes.begin());
    }
    double peak_freq() const { return freqs_hz[peak_index()]; }

    /// Largest magnitude among bins within [f_lo, f_hi].
    double peak_in_band(double f_lo, double f_hi) const {
        double best = 0.0;
        for (std::size_t i = 0; i < freqs_hz.size(); ++i)
            if (freqs_hz[i] >= f_lo && freqs_hz[i] <= f_hi) best = std::max(best, magnitudes[i]);
        return best;
    }
};

/// Solves (X X^T + beta I) W^T = X Y^T through an LDL^T factorization of the
/// Gram matrix; the explicit inverse is never formed.
///   X: [n_feat x T] feature columns, Y: [n_out x T] targets.
/// Returns W_out [n_out x n_feat].
inline Matrix ridge_solve(const Matrix& features, const Matrix& targets, double beta) {
    if (features.cols() != targets.cols())
        throw ShapeError("ridge_solve: feature/target column counts differ (" +
                         std::to_string(features.cols()) + " vs " +
                         std::to_string(targets.cols()) + ")");
    if (features.cols() < 1) throw ParameterError("ridge_solve: needs at least one column");
    if (beta < 0.0) throw ParameterError("ridge_solve: beta must be >= 0");
    if (!features.allFinite() || !targets.allFinite())
        throw ParameterError("ridge_solve: non-finite entries in input");

    const Eigen::Index n = features.rows();
    Matrix gram = features * features.transpose();
    gram.diagonal().array() += beta;

    Eigen::LDLT<Matrix> ldlt(gram);
    const Vector d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    const bool singular = ldlt.info() != Eigen::Success || dmax <= 0.0 ||
                          d.minCoeff() <= dmax * 1e-13 * static_cast<double>(n);
    if (beta == 0.0 && singular)
        throw SingularityError(
            "ridge_solve: X X^T is singular with beta = 0; use a regularisation beta > 0");

    const Matrix rhs = features * targets.transpose();  // [n_feat x n_out]
    return ldlt.solve(rhs).transpose();
}

/// Largest eigenvalue magnitude, by power iteration from a fixed start vector.
/// The per-step estimate comes from a two-term recurrence fit over successive
/// iterates, which also converges when the dominant eigenvalues are a complex
/// or a +/- real pair. Falls back to a second deterministic start if the first
/// stagnates.
inline double spectral_radius(const Matrix& w, long max_iter = 10000, double tol = 1e-10) {
    if (w.rows() != w.cols())
        throw ShapeError("spectral_radius: matrix is not square (" + std::to_string(w.rows()) +
                         "x" + std::to_string(w.cols()) + ")");
    if (!w.allFinite()) throw ParameterError("spectral_radius: non-finite entries");
    const Eigen::Index n = w.rows();
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(w(0, 0));

    double best = 0.0;
    int deaths = 0;  // Krylov sequences that hit exact zero; two means nilpotent
    for (int attempt = 0; attempt < 2; ++attempt) {
        Vector prev(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = static_cast<double>(i);
            prev(i) = attempt == 0 ? 1.0 + std::sin(x) : std::cos(3.0 * x + 1.0) + 0.25;
        }
        prev.normalize();
        Vector cur = w * prev;
        if (cur.norm() == 0.0) {
            if (++deaths == 2) return 0.0;
            continue;
        }

        double est_prev = -1.0;
        int stable = 0;
        bool dead = false;
        for (long k = 0; k < max_iter; ++k) {
            Vector next = w * cur;
            const double g11 = cur.squaredNorm();
            const double g12 = cur.dot(prev);
            const double g22 = prev.squaredNorm();
            const double b1 = cur.dot(next);
            const double b2 = prev.dot(next);
            const double det = g11 * g22 - g12 * g12;

            double est;
            if (det > 1e-12 * g11 * g22) {
                // least-squares fit next ~ a*cur + b*prev; |lambda| from the
                // roots of mu^2 - a mu - b
                const double a = (g22 * b1 - g12 * b2) / det;
                const double b = (-g12 * b1 + g11 * b2) / det;
                const double disc = a * a + 4.0 * b;
                if (disc >= 0.0) {
                    const double s = std::sqrt(disc);
                    est = std::max(std::abs(0.5 * (a + s)), std::abs(0.5 * (a - s)));
                } else {
                    est = std::sqrt(-b);  // conjugate pair: |mu|^2 = product of roots
                }
            } else {
                est = next.norm() / cur.norm();
            }

            if (est_prev >= 0.0 && std::abs(est - est_prev) <= tol * std::max(est, 1e-300)) {
                if (++stable >= 2 && k >= 5) return est;
            } else {
                stable = 0;
            }
            est_prev = est;
            best = est;

            const double s = next.norm();
            if (s == 0.0) { dead = true; break; }  // Krylov sequence died
            prev = cur / s;
            cur = next / s;
        }
        if (dead && ++deaths == 2) return 0.0;
    }
    throw ConvergenceError("spectral_radius: power iteration did not converge after fallback "
                           "(best estimate " + std::to_string(best) + ")",
                           best);
}

/// Rescales a square matrix so its spectral radius equals rho_target.
inline Matrix scale_to_radius(const Matrix& w, double rho_target) {
    if (rho_target <= 0.0) throw ParameterError("scale_to_radius: target radius must be > 0");
    const double rho = spectral_radius(w);
    if (rho <= 0.0)
        throw DegenerateMatrixError("scale_to_radius: matrix has zero spectral radius");
    return w * (rho_target / rho);
}

namespace detail {

inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1 : -1);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

/// DFT of arbitrary length: radix-2 when n is a power of two, otherwise
/// Bluestein's chirp-z transform on a padded power-of-two convolution.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        auto a = in;
        fft_radix2(a, false);
        return a;
    }
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<std::complex<double>> a(m, 0.0), b(m, 0.0);
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the chirp argument small for large n
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = std::complex<double>(std::cos(ang), -std::sin(ang));
    }
    for (std::size_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_radix2(a, false);
    fft_radix2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_radix2(a, true);
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    return out;
}

inline std::vector<std::complex<double>> dft_real(const std::vector<double>& x) {
    std::vector<std::complex<double>> in(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) in[i] = x[i];
    return dft(in);
}

inline double hann(std::size_t k, std::size_t n) {
    return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(n)));
}

}  // namespace detail

/// One-sided magnitude spectrum after mean removal and a Hann window, scaled
/// so a unit-amplitude sinusoid at a bin center reads 1.0 at its peak.
inline Spectrum magnitude_spectrum(const TimeSeries& ts) {
    const std::size_t n = ts.size();
    if (n < 8) throw ParameterError("magnitude_spectrum: need at least 8 samples, got " +
                                    std::to_string(n));
    require_finite(ts, "magnitude_spectrum");

    const double m = mean(ts.values);
    std::vector<double> x(n);
    double wsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = detail::hann(k, n);
        x[k] = (ts.values[k] - m) * w;
        wsum += w;
    }
    const auto spec = detail::dft_real(x);

    const std::size_t half = n / 2 + 1;
    Spectrum out;
    out.freqs_hz.resize(half);
    out.magnitudes.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        const bool mirrored = k != 0 && !(n % 2 == 0 && k == n / 2);
        out.freqs_hz[k] = static_cast<double>(k) / (static_cast<double>(n) * ts.dt);
        out.magnitudes[k] = (mirrored ? 2.0 : 1.0) * std::abs(spec[k]) / wsum;
    }
    return out;
}

}  // namespace slrc
