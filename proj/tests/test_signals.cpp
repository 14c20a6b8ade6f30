#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <random>

#include "slrc/io.hpp"
#include "slrc/signals.hpp"

using namespace slrc;

TEST_CASE("mackey_glass fixed point at history 1.0") {
    // x* = (beta/gamma - 1)^(1/q) = 1 for the default coefficients
    MGParams p;
    p.history = 1.0;
    const TimeSeries ts = mackey_glass(p, 200);
    for (double v : ts.values) REQUIRE(v == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("mackey_glass decays exponentially without the delay term") {
    MGParams p;
    p.beta = 0.0;
    p.gamma = 0.1;
    p.history = 1.0;
    p.dt = 0.1;
    const TimeSeries ts = mackey_glass(p, 100);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double want = std::exp(-0.1 * 0.1 * static_cast<double>(k));
        REQUIRE(ts.values[k] == Catch::Approx(want).margin(1e-10));
    }
}

TEST_CASE("mackey_glass default run matches the fine-step oracle envelope") {
    // frozen from the dt = 0.01 oracle run of this integrator
    const double oracle_min = 0.41818781885083522;
    const double oracle_max = 1.3189947881072632;

    MGParams p;
    const TimeSeries ts = mackey_glass(p, 5000);
    const double mn = *std::min_element(ts.values.begin(), ts.values.end());
    const double mx = *std::max_element(ts.values.begin(), ts.values.end());
    REQUIRE(mn == Catch::Approx(oracle_min).margin(1e-3));
    REQUIRE(mx == Catch::Approx(oracle_max).margin(1e-3));
    REQUIRE(mn > 0.0);
    REQUIRE(mx < 2.0);
}

TEST_CASE("mackey_glass stays bounded on long runs") {
    MGParams p;
    const TimeSeries ts = mackey_glass(p, 100000);
    for (double v : ts.values) {
        REQUIRE(v > 0.0);
        REQUIRE(v < 2.0);
    }
}

TEST_CASE("mackey_glass shows fourth-order convergence") {
    const double t_final = 100.0;
    const auto terminal = [&](double dt) {
        MGParams p;
        p.dt = dt;
        return mackey_glass(p, static_cast<long>(std::lround(t_final / dt)) + 1).values.back();
    };
    const double ref = terminal(0.1 / 16.0);
    const double ratio = std::abs(terminal(0.1) - ref) / std::abs(terminal(0.05) - ref);
    REQUIRE(ratio >= 8.0);
    REQUIRE(ratio <= 32.0);
}

TEST_CASE("mackey_glass rejects invalid parameters") {
    MGParams p;
    p.dt = 3.0;  // > tau/10
    REQUIRE_THROWS_AS(mackey_glass(p, 10), ParameterError);
    MGParams q;
    REQUIRE_THROWS_AS(mackey_glass(q, 0), ParameterError);
}

TEST_CASE("mackey_glass reports the first divergent step") {
    MGParams p;
    p.q = 0.5;  // non-integer exponent of a negative history -> NaN immediately
    p.history = -1.0;
    try {
        mackey_glass(p, 100);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        REQUIRE(e.step >= 1);
        REQUIRE(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("sinusoid samples the quarter period exactly") {
    const TimeSeries ts = sinusoid(1.0, 1.0, 0.0, 0.25, 5);
    const double want[] = {0.0, 1.0, 0.0, -1.0, 0.0};
    for (int k = 0; k < 5; ++k)
        REQUIRE(ts.values[static_cast<std::size_t>(k)] == Catch::Approx(want[k]).margin(1e-12));
}

TEST_CASE("sinusoid with zero amplitude is identically zero") {
    const TimeSeries ts = sinusoid(2.0, 0.0, 1.0, 0.01, 50);
    for (double v : ts.values) REQUIRE(v == 0.0);
}

TEST_CASE("sinusoid rejects frequencies at or above Nyquist") {
    REQUIRE_THROWS_AS(sinusoid(50.0, 1.0, 0.0, 0.01, 10), ParameterError);
    REQUIRE_THROWS_AS(sinusoid(60.0, 1.0, 0.0, 0.01, 10), ParameterError);
}

TEST_CASE("sinusoid spectrum has a single dominant peak at its frequency") {
    const TimeSeries ts = sinusoid(1.0, 1.0, 0.0, 0.01, 1000);
    const Spectrum s = magnitude_spectrum(ts);
    const double bin = 1.0 / (0.01 * 1000.0);
    REQUIRE(std::abs(s.peak_freq() - 1.0) <= bin);
}

TEST_CASE("sum_of_sinusoids with one component equals sinusoid") {
    const TimeSeries a = sum_of_sinusoids({{1.5, 0.7, 0.3}}, 0.01, 256);
    const TimeSeries b = sinusoid(1.5, 0.7, 0.3, 0.01, 256);
    for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(a.values[k] == b.values[k]);
}

TEST_CASE("sum_of_sinusoids shows both component peaks") {
    const TimeSeries ts = sum_of_sinusoids({{1.0, 1.0, 0.0}, {2.0, 0.8, 0.0}}, 0.01, 2000);
    const Spectrum s = magnitude_spectrum(ts);
    const double p1 = s.peak_in_band(0.9, 1.1);
    const double p2 = s.peak_in_band(1.9, 2.1);
    const double rest = s.peak_in_band(2.5, 45.0);
    REQUIRE(p1 > 10.0 * rest);
    REQUIRE(p2 > 10.0 * rest);
}

TEST_CASE("sum_of_sinusoids rejects an empty component list") {
    REQUIRE_THROWS_AS(sum_of_sinusoids({}, 0.01, 100), ParameterError);
}

TEST_CASE("downsample factor 1 is the identity") {
    const TimeSeries ts = sinusoid(1.0, 1.0, 0.0, 0.01, 100);
    const TimeSeries d = downsample(ts, 1);
    REQUIRE(d.dt == ts.dt);
    REQUIRE(d.values == ts.values);
}

TEST_CASE("downsample keeps every factor-th sample without the prefilter") {
    TimeSeries ts;
    ts.dt = 0.5;
    ts.values = {0, 1, 2, 3, 4, 5};
    const TimeSeries d = downsample(ts, 2, DownsampleOptions{false});
    REQUIRE(d.values == std::vector<double>{0, 2, 4});
    REQUIRE(d.dt == 1.0);
}

TEST_CASE("downsample composes multiplicatively without the prefilter") {
    MGParams p;
    const TimeSeries ts = mackey_glass(p, 600);
    const TimeSeries once = downsample(ts, 6, DownsampleOptions{false});
    const TimeSeries twice =
        downsample(downsample(ts, 2, DownsampleOptions{false}), 3, DownsampleOptions{false});
    REQUIRE(once.values == twice.values);
    REQUIRE(once.dt == Catch::Approx(twice.dt));
}

TEST_CASE("downsample warns when content crosses the new Nyquist") {
    const TimeSeries ts = sinusoid(10.0, 1.0, 0.0, 0.001, 4000);
    DownsampleInfo info;
    downsample(ts, 100, DownsampleOptions{false}, &info);
    REQUIRE(info.aliasing_warning);

    DownsampleInfo ok;
    downsample(ts, 5, DownsampleOptions{false}, &ok);  // new Nyquist 100 Hz
    REQUIRE_FALSE(ok.aliasing_warning);
}

TEST_CASE("downsample rejects factor < 1") {
    const TimeSeries ts = sinusoid(1.0, 1.0, 0.0, 0.01, 16);
    REQUIRE_THROWS_AS(downsample(ts, 0), ParameterError);
}

TEST_CASE("split partitions and continues the time axis") {
    TimeSeries ts;
    ts.dt = 0.5;
    ts.t0 = 2.0;
    ts.values = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto [train, target] = split(ts, 4);
    REQUIRE(train.size() == 4);
    REQUIRE(target.size() == 6);
    REQUIRE(target.t0 == Catch::Approx(2.0 + 4 * 0.5));
    REQUIRE(train.values[3] == 3.0);
    REQUIRE(target.values[0] == 4.0);

    const auto [t2, g2] = split(ts, 9);
    REQUIRE(g2.size() == 1);

    REQUIRE_THROWS_AS(split(ts, 0), ParameterError);
    REQUIRE_THROWS_AS(split(ts, 10), ParameterError);
}

TEST_CASE("split then concatenate reproduces the series") {
    MGParams p;
    const TimeSeries ts = mackey_glass(p, 300);
    const auto [train, target] = split(ts, 120);
    std::vector<double> joined = train.values;
    joined.insert(joined.end(), target.values.begin(), target.values.end());
    REQUIRE(joined == ts.values);
}

TEST_CASE("pseudo-period of the Mackey-Glass series is near 50 time units") {
    MGParams p;
    TimeSeries ts = mackey_glass(p, 40000);
    ts.values.erase(ts.values.begin(), ts.values.begin() + 10000);
    const TimeSeries coarse = downsample(ts, 10, DownsampleOptions{false});
    const long period = estimate_pseudo_period(coarse);
    REQUIRE(period >= 40);   // dt = 1.0 after decimation
    REQUIRE(period <= 60);
}

TEST_CASE("surrogate replica with horizon = train length is an exact copy") {
    MGParams p;
    const TimeSeries train = mackey_glass(p, 400);
    const TimeSeries drive =
        surrogate_drive(train, DriveMode::delayed_replica, 400);
    REQUIRE(drive.values == train.values);
    REQUIRE(drive.t0 == Catch::Approx(train.end_time()));
}

TEST_CASE("surrogate replica tiles the training signal cyclically") {
    TimeSeries train;
    train.dt = 1.0;
    train.values = {1, 2, 3, 4};
    const TimeSeries drive = surrogate_drive(train, DriveMode::delayed_replica, 10);
    const std::vector<double> want = {1, 2, 3, 4, 1, 2, 3, 4, 1, 2};
    REQUIRE(drive.values == want);
}

TEST_CASE("surrogate sinusoid_sum recovers a pure tone") {
    const TimeSeries train = sinusoid(1.0, 0.8, 0.4, 0.02, 500);  // 10 exact periods
    const TimeSeries drive = surrogate_drive(train, DriveMode::sinusoid_sum, 500);
    const Spectrum s = magnitude_spectrum(drive);
    REQUIRE(std::abs(s.peak_freq() - 1.0) <= 0.1);
    // amplitude within 2%: compare peak excursion
    const double amp = *std::max_element(drive.values.begin(), drive.values.end());
    REQUIRE(amp == Catch::Approx(0.8).epsilon(0.02));
    // phase-coherent continuation of the training signal
    const TimeSeries truth = sinusoid(1.0, 0.8, 0.4, 0.02, 500, train.end_time());
    for (std::size_t k = 0; k < 100; ++k)
        REQUIRE(drive.values[k] == Catch::Approx(truth.values[k]).margin(0.02));
}

TEST_CASE("surrogate drives preserve the training RMS within 1%") {
    MGParams p;
    TimeSeries mg = mackey_glass(p, 16000);
    mg.values.erase(mg.values.begin(), mg.values.begin() + 10000);
    const TimeSeries train = downsample(mg, 10, DownsampleOptions{false});

    for (const auto mode : {DriveMode::delayed_replica, DriveMode::sinusoid_sum}) {
        for (const long horizon : {300L, 750L}) {
            const TimeSeries drive = surrogate_drive(train, mode, horizon);
            REQUIRE(rms(drive.values) ==
                    Catch::Approx(rms(train.values)).epsilon(0.01));
        }
    }
}

TEST_CASE("surrogate_drive rejects a bad horizon") {
    const TimeSeries train = sinusoid(1.0, 1.0, 0.0, 0.02, 100);
    REQUIRE_THROWS_AS(surrogate_drive(train, DriveMode::delayed_replica, 0), ParameterError);
}

TEST_CASE("timeseries CSV round-trips bit-exactly") {
    std::mt19937_64 eng(7);
    TimeSeries ts;
    ts.dt = 0.125;  // exactly representable
    ts.t0 = -3.0;
    for (int k = 0; k < 200; ++k) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        ts.values.push_back((u - 0.5) * std::pow(10.0, static_cast<double>(eng() % 20) - 10.0));
    }
    const auto path = std::filesystem::temp_directory_path() / "slrc_ts_roundtrip.csv";
    write_timeseries_csv(path, ts);
    const TimeSeries back = read_timeseries_csv(path);
    REQUIRE(back.values == ts.values);
    REQUIRE(back.t0 == ts.t0);
    REQUIRE(back.dt == ts.dt);
    std::filesystem::remove(path);
}
