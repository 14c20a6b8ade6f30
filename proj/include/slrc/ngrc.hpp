#pragma once

// Next-generation RC features: current and delayed input taps plus their
// polynomial monomials, trained with the same ridge readout.

#include <string>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/numerics.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

struct NgrcSpec {
    long k_delays = 4;
    long spacing = 1;
    long poly_order = 2;
    bool include_constant = true;

    void validate() const {
        if (k_delays < 1) throw ParameterError("ngrc: k_delays must be >= 1");
        if (spacing < 1) throw ParameterError("ngrc: spacing must be >= 1");
        if (poly_order < 1) throw ParameterError("ngrc: poly_order must be >= 1");
    }
    long tap_span() const { return (k_delays - 1) * spacing; }
};

namespace detail {

/// Monomial exponent tuples as non-decreasing index multisets, enumerated in
/// lexicographic order: for k=2, d=2 that is (0,0), (0,1), (1,1).
inline void enumerate_monomials(long k, long degree,
                                std::vector<std::vector<long>>& out) {
    std::vector<long> idx(static_cast<std::size_t>(degree), 0);
    while (true) {
        out.push_back(idx);
        long pos = degree - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - 1) --pos;
        if (pos < 0) return;
        const long next = idx[static_cast<std::size_t>(pos)] + 1;
        for (long j = pos; j < degree; ++j) idx[static_cast<std::size_t>(j)] = next;
    }
}

inline long binomial(long n, long r) {
    if (r < 0 || r > n) return 0;
    long result = 1;
    for (long i = 1; i <= r; ++i) result = result * (n - r + i) / i;
    return result;
}

}  // namespace detail

/// Closed-form width of the feature vector: constant + taps + multiset
/// monomials of each degree 2..poly_order.
inline long feature_count(const NgrcSpec& spec) {
    spec.validate();
    long total = spec.include_constant ? 1 : 0;
    for (long d = 1; d <= spec.poly_order; ++d)
        total += detail::binomial(spec.k_delays + d - 1, d);
    return total;
}

/// Column n holds [1 (if flagged); u_n, u_{n-s}, ...; monomials of total
/// degree 2..poly_order in deterministic lexicographic order]. Columns before
/// the first fully-defined tap window are dropped.
inline Matrix nvar_features(const TimeSeries& inputs, const NgrcSpec& spec) {
    spec.validate();
    const long t = static_cast<long>(inputs.size());
    const long start = spec.tap_span();
    if (t <= start)
        throw ParameterError("nvar_features: series length " + std::to_string(t) +
                             " too short for tap span " + std::to_string(start));

    std::vector<std::vector<long>> monomials;
    for (long d = 2; d <= spec.poly_order; ++d)
        detail::enumerate_monomials(spec.k_delays, d, monomials);

    Matrix features(feature_count(spec), t - start);
    std::vector<double> taps(static_cast<std::size_t>(spec.k_delays));
    for (long n = start; n < t; ++n) {
        const long col = n - start;
        for (long j = 0; j < spec.k_delays; ++j)
            taps[static_cast<std::size_t>(j)] =
                inputs.values[static_cast<std::size_t>(n - j * spec.spacing)];
        long row = 0;
        if (spec.include_constant) features(row++, col) = 1.0;
        for (long j = 0; j < spec.k_delays; ++j)
            features(row++, col) = taps[static_cast<std::size_t>(j)];
        for (const auto& mono : monomials) {
            double v = 1.0;
            for (long i : mono) v *= taps[static_cast<std::size_t>(i)];
            features(row++, col) = v;
        }
    }
    return features;
}

}  // namespace slrc
