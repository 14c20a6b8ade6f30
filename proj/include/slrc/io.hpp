#pragma once

// CSV artifacts and atomic file writes. Doubles are rendered with the
// shortest representation that round-trips exactly.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/numerics.hpp"
#include "slrc/time_series.hpp"

namespace slrc {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc())
        throw ParameterError(context + ": cannot parse number '" + std::string(s) + "'");
    return v;
}

/// Writes content to a temporary file in the target directory, then renames
/// it into place; a killed run never leaves a truncated file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParameterError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw ParameterError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ParameterError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
    }
}

inline void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts) {
    std::string out = "t,value\n";
    for (std::size_t k = 0; k < ts.size(); ++k) {
        out += format_double(ts.time_at(k));
        out += ',';
        out += format_double(ts.values[k]);
        out += '\n';
    }
    atomic_write(path, out);
}

inline TimeSeries read_timeseries_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParameterError(path.string() + ": empty file");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "t,value")
        throw ParameterError(path.string() + ": expected header 't,value', got '" + line + "'");

    std::vector<double> times;
    TimeSeries ts;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParameterError(path.string() + ":" + std::to_string(lineno) +
                                 ": expected 't,value' row");
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        times.push_back(parse_double(std::string_view(line).substr(0, comma), ctx));
        ts.values.push_back(parse_double(std::string_view(line).substr(comma + 1), ctx));
    }
    if (ts.values.empty()) throw ParameterError(path.string() + ": no data rows");
    ts.t0 = times.front();
    ts.dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    if (ts.dt <= 0.0) throw ParameterError(path.string() + ": non-increasing time axis");
    return ts;
}

inline void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec) {
    std::string out = "freq_hz,magnitude\n";
    for (std::size_t k = 0; k < spec.size(); ++k) {
        out += format_double(spec.freqs_hz[k]);
        out += ',';
        out += format_double(spec.magnitudes[k]);
        out += '\n';
    }
    atomic_write(path, out);
}

}  // namespace slrc
