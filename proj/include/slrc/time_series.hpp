#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "slrc/errors.hpp"

namespace slrc {

/// Uniformly sampled scalar signal. The universal currency between modules.
struct TimeSeries {
    double dt = 1.0;               // seconds per sample, > 0
    double t0 = 0.0;               // start time in seconds
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double end_time() const { return time_at(values.size()); }

    double& operator[](std::size_t k) { return values[k]; }
    double operator[](std::size_t k) const { return values[k]; }
};

inline double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double rms(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

/// Population variance.
inline double variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) { return std::sqrt(variance(v)); }

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline void require_finite(const TimeSeries& ts, const char* what) {
    if (!all_finite(ts.values))
        throw ParameterError(std::string(what) + ": series contains non-finite samples");
}

}  // namespace slrc
