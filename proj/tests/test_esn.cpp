#include <Eigen/Eigenvalues>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>

#include "slrc/esn.hpp"
#include "slrc/model_io.hpp"
#include "slrc/signals.hpp"

using namespace slrc;

namespace {

EsnConfig small_config(long n_x = 30, std::uint64_t seed = 11) {
    EsnConfig cfg;
    cfg.n_x = n_x;
    cfg.seed = seed;
    cfg.washout = 10;
    cfg.rho = 0.9;
    cfg.alpha = 0.5;
    return cfg;
}

}  // namespace

TEST_CASE("init_esn is deterministic in the seed") {
    const EsnModel a = init_esn(small_config());
    const EsnModel b = init_esn(small_config());
    REQUIRE((a.w_in - b.w_in).norm() == 0.0);
    REQUIRE((a.w - b.w).norm() == 0.0);

    const EsnModel c = init_esn(small_config(30, 12));
    REQUIRE((a.w - c.w).norm() != 0.0);
}

TEST_CASE("init_esn hits the target spectral radius") {
    EsnConfig cfg = small_config(50);
    cfg.density = 1.0;
    cfg.rho = 0.95;
    const EsnModel model = init_esn(cfg);
    long zero_entries = 0;
    for (Eigen::Index i = 0; i < model.w.size(); ++i)
        if (model.w.data()[i] == 0.0) ++zero_entries;
    REQUIRE(zero_entries == 0);
    const double measured =
        Eigen::EigenSolver<Matrix>(model.w, false).eigenvalues().cwiseAbs().maxCoeff();
    REQUIRE(measured == Catch::Approx(0.95).margin(1e-6));
}

TEST_CASE("init_esn sparsity matches the density within 10%") {
    EsnConfig cfg = small_config(1000, 3);
    cfg.density = 0.02;
    const EsnModel model = init_esn(cfg);
    long nnz = 0;
    for (Eigen::Index i = 0; i < model.w.size(); ++i)
        if (model.w.data()[i] != 0.0) ++nnz;
    REQUIRE(nnz > 18000);
    REQUIRE(nnz < 22000);
}

TEST_CASE("init_esn validates the config") {
    EsnConfig cfg = small_config();
    cfg.alpha = 1.5;
    REQUIRE_THROWS_AS(init_esn(cfg), ParameterError);
    cfg = small_config();
    cfg.density = 0.0;
    REQUIRE_THROWS_AS(init_esn(cfg), ParameterError);
}

TEST_CASE("update_state at the zero model is tanh(0) = 0") {
    EsnModel model = init_esn(small_config(4));
    model.w_in.setZero();
    model.w.setZero();
    model.config.alpha = 1.0;
    update_state(model, 123.0);
    REQUIRE(model.state.norm() == 0.0);
}

TEST_CASE("update_state freezes as alpha approaches zero") {
    EsnModel model = init_esn(small_config(16));
    model.config.alpha = 1e-9;
    model.state.setConstant(0.25);
    const Vector before = model.state;
    update_state(model, 0.8);
    REQUIRE((model.state - before).norm() <= 2e-9 * std::sqrt(16.0));
}

TEST_CASE("update_state matches the hand-evaluated scalar reservoir") {
    // n_x = 1, w_in = [0.3, 0.5], w = [0.4], x0 = 0.2, u = 1, alpha = 0.5
    EsnModel model;
    model.config = small_config(1);
    model.config.alpha = 0.5;
    model.w_in.resize(1, 2);
    model.w_in << 0.3, 0.5;
    model.w.resize(1, 1);
    model.w << 0.4;
    model.state.resize(1);
    model.state << 0.2;
    update_state(model, 1.0);
    const double want = 0.5 * 0.2 + 0.5 * std::tanh(0.3 + 0.5 + 0.4 * 0.2);
    REQUIRE(model.state(0) == Catch::Approx(want).margin(1e-15));
}

TEST_CASE("update_state rejects non-finite input") {
    EsnModel model = init_esn(small_config(4));
    REQUIRE_THROWS_AS(update_state(model, std::nan("")), ParameterError);
}

TEST_CASE("harvest shapes follow the washout") {
    EsnModel model = init_esn(small_config(8));
    const TimeSeries inputs = sinusoid(1.0, 1.0, 0.0, 0.1, 25);

    model.config.washout = 0;
    REQUIRE(harvest(model, inputs).cols() == 25);

    model.config.washout = 24;
    REQUIRE(harvest(model, inputs).cols() == 1);

    model.config.washout = 25;
    REQUIRE_THROWS_AS(harvest(model, inputs), ParameterError);
}

TEST_CASE("harvest resets the state and is repeatable") {
    EsnModel model = init_esn(small_config(12));
    const TimeSeries inputs = sinusoid(0.7, 1.0, 0.0, 0.1, 40);
    const Matrix a = harvest(model, inputs);
    const Matrix b = harvest(model, inputs);
    REQUIRE((a - b).norm() == 0.0);
}

TEST_CASE("harvest washout equals trimming a washout-free harvest") {
    EsnModel model = init_esn(small_config(10));
    const TimeSeries inputs = sinusoid(0.9, 1.0, 0.0, 0.05, 60);
    model.config.washout = 0;
    const Matrix full = harvest(model, inputs);
    model.config.washout = 15;
    const Matrix cut = harvest(model, inputs);
    REQUIRE((cut - full.rightCols(full.cols() - 15)).norm() == 0.0);
}

TEST_CASE("train_readout selects the matching feature row") {
    Matrix features = Matrix::Identity(5, 5);
    TimeSeries target;
    target.values = {0, 0, 1, 0, 0};  // equals feature row 2
    const ReadoutModel readout = train_readout(features, target, 1e-12);
    REQUIRE(readout.w_out(0, 2) == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(readout.w_out.cwiseAbs().sum() == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("train_readout training error grows with beta") {
    EsnModel model = init_esn(small_config(20));
    const TimeSeries inputs = sinusoid(0.5, 1.0, 0.0, 0.1, 120);
    const Matrix features = harvest(model, inputs);
    TimeSeries target;
    target.dt = inputs.dt;
    for (long k = 0; k < features.cols(); ++k)
        target.values.push_back(
            inputs.values[static_cast<std::size_t>(k + model.config.washout)]);

    double prev_err = -1.0;
    for (const double beta : {1e-8, 1e-4, 1.0}) {
        const ReadoutModel readout = train_readout(features, target, beta);
        double err = 0.0;
        for (long c = 0; c < features.cols(); ++c) {
            const double y = (readout.w_out * features.col(c))(0);
            err += (y - target.values[static_cast<std::size_t>(c)]) *
                   (y - target.values[static_cast<std::size_t>(c)]);
        }
        REQUIRE(err >= prev_err);
        prev_err = err;
    }
}

TEST_CASE("train_readout on a zero target returns a zero readout") {
    EsnModel model = init_esn(small_config(10));
    const TimeSeries inputs = sinusoid(0.5, 1.0, 0.0, 0.1, 50);
    const Matrix features = harvest(model, inputs);
    TimeSeries target;
    target.values.assign(static_cast<std::size_t>(features.cols()), 0.0);
    const ReadoutModel readout = train_readout(features, target, 1e-6);
    REQUIRE(readout.w_out.norm() <= 1e-8);
}

TEST_CASE("run_predictive with a zero readout returns zeros") {
    EsnModel model = init_esn(small_config(10));
    ReadoutModel readout;
    readout.w_out = Matrix::Zero(1, 12);
    readout.layout = FeatureLayout{1, 10};
    const TimeSeries out = run_predictive(model, readout, sinusoid(1.0, 1.0, 0.0, 0.1, 30));
    for (double v : out.values) REQUIRE(v == 0.0);
}

TEST_CASE("run_predictive reproduces the training fit") {
    EsnModel model = init_esn(small_config(40));
    const TimeSeries inputs = sinusoid(0.5, 1.0, 0.3, 0.1, 200);
    const Matrix features = harvest(model, inputs);

    // next-step targets over the harvested region
    TimeSeries target;
    target.dt = inputs.dt;
    const long w = model.config.washout;
    for (long c = 0; c + 1 < features.cols(); ++c)
        target.values.push_back(inputs.values[static_cast<std::size_t>(w + c + 1)]);
    const Matrix x = features.leftCols(features.cols() - 1);
    const ReadoutModel readout = train_readout(x, target, 1e-9);

    double train_err = 0.0;
    for (long c = 0; c < x.cols(); ++c) {
        const double d = (readout.w_out * x.col(c))(0) -
                         target.values[static_cast<std::size_t>(c)];
        train_err += d * d;
    }

    const TimeSeries pred = run_predictive(model, readout, inputs);
    double replay_err = 0.0;
    for (long c = 0; c < x.cols(); ++c) {
        const double d = pred.values[static_cast<std::size_t>(w + c)] -
                         target.values[static_cast<std::size_t>(c)];
        replay_err += d * d;
    }
    REQUIRE(replay_err <= train_err * (1.0 + 1e-9) + 1e-12);
}

TEST_CASE("run_predictive output depends on input history") {
    EsnModel model = init_esn(small_config(20));
    TimeSeries inputs = sinusoid(0.5, 1.0, 0.0, 0.1, 80);
    ReadoutModel readout;
    readout.w_out = Matrix::Ones(1, 22);
    readout.layout = FeatureLayout{1, 20};
    const TimeSeries a = run_predictive(model, readout, inputs);
    std::reverse(inputs.values.begin(), inputs.values.end());
    const TimeSeries b = run_predictive(model, readout, inputs);
    double diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) diff += std::abs(a.values[k] - b.values[k]);
    REQUIRE(diff > 1e-6);
}

TEST_CASE("run_generative holds a constant-readout fixed point") {
    EsnModel model = init_esn(small_config(10));
    ReadoutModel readout;
    readout.w_out = Matrix::Zero(1, 12);
    readout.w_out(0, 0) = 0.75;  // bias only: y = 0.75 regardless of features
    readout.layout = FeatureLayout{1, 10};
    const TimeSeries primer = sinusoid(1.0, 1.0, 0.0, 0.1, 20);
    const TimeSeries out = run_generative(model, readout, 50, primer);
    for (double v : out.values) REQUIRE(v == 0.75);
}

TEST_CASE("run_generative stays bounded on a sinusoid task") {
    EsnConfig cfg = small_config(300, 5);
    cfg.washout = 50;
    cfg.rho = 0.95;
    EsnModel model = init_esn(cfg);
    const TimeSeries inputs = sinusoid(1.0, 1.0, 0.0, 0.05, 600);
    const Matrix features = harvest(model, inputs);
    TimeSeries target;
    target.dt = inputs.dt;
    for (long c = 0; c + 1 < features.cols(); ++c)
        target.values.push_back(inputs.values[static_cast<std::size_t>(cfg.washout + c + 1)]);
    const ReadoutModel readout =
        train_readout(features.leftCols(features.cols() - 1), target, 1e-8);

    const TimeSeries out = run_generative(model, readout, 1000, inputs);
    for (double v : out.values) REQUIRE(std::abs(v) <= 2.0);
}

TEST_CASE("run_generative with zero steps returns an empty series") {
    EsnModel model = init_esn(small_config(8));
    ReadoutModel readout;
    readout.w_out = Matrix::Zero(1, 10);
    readout.layout = FeatureLayout{1, 8};
    const TimeSeries out =
        run_generative(model, readout, 0, sinusoid(1.0, 1.0, 0.0, 0.1, 4));
    REQUIRE(out.values.empty());
}

TEST_CASE("state update never leaves [-1, 1] from inside it") {
    EsnConfig cfg = small_config(24, 9);
    cfg.alpha = 0.8;
    cfg.rho = 1.4;
    EsnModel model = init_esn(cfg);
    std::mt19937_64 eng(17);
    const auto u01 = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    for (int step = 0; step < 2000; ++step) {
        if (step % 500 == 0)
            for (Eigen::Index i = 0; i < model.state.size(); ++i)
                model.state(i) = 2.0 * u01() - 1.0;
        update_state(model, 4.0 * u01() - 2.0);
        REQUIRE(model.state.cwiseAbs().maxCoeff() <= 1.0);
    }
}

TEST_CASE("changing rho rescales the recurrent matrix linearly") {
    EsnConfig a = small_config(25, 21);
    a.rho = 0.8;
    EsnConfig b = a;
    b.rho = 1.2;
    const EsnModel ma = init_esn(a);
    const EsnModel mb = init_esn(b);
    REQUIRE((mb.w - ma.w * (1.2 / 0.8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("esn model save/load round-trips matrices bit-exactly") {
    const EsnModel model = init_esn(small_config(35, 77));
    const auto path = std::filesystem::temp_directory_path() / "slrc_esn_roundtrip.json";
    save_esn(model, path);
    const EsnModel back = load_esn(path);
    REQUIRE((back.w - model.w).norm() == 0.0);
    REQUIRE((back.w_in - model.w_in).norm() == 0.0);
    REQUIRE((back.state - model.state).norm() == 0.0);
    REQUIRE(back.config.seed == model.config.seed);
    REQUIRE(back.config.n_x == model.config.n_x);
    std::filesystem::remove(path);
}
