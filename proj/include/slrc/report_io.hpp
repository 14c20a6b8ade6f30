#pragma once

// ForecastReport persistence: a directory with forecast.csv, target.csv,
// abs_error.csv, report.txt (key=value metrics) and config.echo.

#include <filesystem>
#include <string>

#include "slrc/io.hpp"
#include "slrc/pipeline.hpp"

namespace slrc {

inline void write_forecast_report(const std::filesystem::path& dir, const ForecastReport& report,
                                  const std::string& config_echo) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_timeseries_csv(dir / "forecast.csv", report.forecast);
    write_timeseries_csv(dir / "target.csv", report.target);
    write_timeseries_csv(dir / "abs_error.csv", report.abs_error);

    std::string txt;
    txt += "nrmse = " + (report.nrmse_defined ? format_double(report.nrmse)
                                              : std::string("undefined")) + "\n";
    txt += "forecast_samples = " + std::to_string(report.forecast.size()) + "\n";
    txt += "target_samples = " + std::to_string(report.target.size()) + "\n";
    txt += "truncated = " + std::string(report.truncated ? "true" : "false") + "\n";
    txt += "runtime_ms = " + format_double(report.runtime_ms) + "\n";
    atomic_write(dir / "report.txt", txt);
    atomic_write(dir / "config.echo", config_echo);
}

}  // namespace slrc
