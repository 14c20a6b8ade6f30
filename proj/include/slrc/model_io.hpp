#pragma once

// Self-describing JSON containers for trained models. Matrices round-trip
// bit-exactly (finite doubles serialize with shortest round-trip precision).

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "slrc/config.hpp"
#include "slrc/errors.hpp"
#include "slrc/esn.hpp"
#include "slrc/io.hpp"
#include "slrc/pipeline.hpp"

namespace slrc {

namespace detail {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
    if (!m.allFinite()) throw ParameterError("model save: matrix has non-finite entries");
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ParameterError("model load: matrix data length mismatch");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[k++].get<double>();
    return m;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Vector vector_from_json(const json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

inline json timeseries_to_json(const TimeSeries& ts) {
    return json{{"dt", ts.dt}, {"t0", ts.t0}, {"values", ts.values}};
}

inline TimeSeries timeseries_from_json(const json& j) {
    TimeSeries ts;
    ts.dt = j.at("dt").get<double>();
    ts.t0 = j.at("t0").get<double>();
    ts.values = j.at("values").get<std::vector<double>>();
    return ts;
}

inline json config_to_json(const ExperimentConfig& cfg) {
    json out;
    for (const auto& k : config::registry()) out[k.name] = k.get(cfg);
    return out;
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    for (const auto& k : config::registry())
        if (j.contains(k.name)) k.set(cfg, j.at(k.name).get<std::string>());
    return cfg;
}

}  // namespace detail

inline void save_esn(const EsnModel& model, const std::filesystem::path& path) {
    using detail::json;
    json j;
    j["format"] = "slrc-esn";
    j["version"] = 1;
    j["seed"] = model.config.seed;
    j["config"] = {{"n_x", model.config.n_x},       {"n_u", model.config.n_u},
                   {"alpha", model.config.alpha},   {"rho", model.config.rho},
                   {"input_scale", model.config.input_scale},
                   {"density", model.config.density},
                   {"seed", model.config.seed},     {"washout", model.config.washout}};
    j["w_in"] = detail::matrix_to_json(model.w_in);
    j["w"] = detail::matrix_to_json(model.w);
    j["state"] = detail::vector_to_json(model.state);
    atomic_write(path, j.dump());
}

inline EsnModel load_esn(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path.string());
    detail::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParameterError("model load: " + path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "slrc-esn")
        throw ParameterError("model load: " + path.string() + " is not an slrc-esn container");
    EsnModel model;
    const auto& c = j.at("config");
    model.config.n_x = c.at("n_x").get<long>();
    model.config.n_u = c.at("n_u").get<long>();
    model.config.alpha = c.at("alpha").get<double>();
    model.config.rho = c.at("rho").get<double>();
    model.config.input_scale = c.at("input_scale").get<double>();
    model.config.density = c.at("density").get<double>();
    model.config.seed = c.at("seed").get<std::uint64_t>();
    model.config.washout = c.at("washout").get<long>();
    model.w_in = detail::matrix_from_json(j.at("w_in"));
    model.w = detail::matrix_from_json(j.at("w"));
    model.state = detail::vector_from_json(j.at("state"));
    return model;
}

inline void save_system(const TrainedSystem& sys, const std::filesystem::path& path) {
    using detail::json;
    json j;
    j["format"] = "slrc-system";
    j["version"] = 1;
    j["config"] = detail::config_to_json(sys.config);
    j["train_series"] = detail::timeseries_to_json(sys.train_series);
    j["target_series"] = detail::timeseries_to_json(sys.target_series);
    j["readout"] = {{"w_out", detail::matrix_to_json(sys.readout.w_out)},
                    {"layout_n_u", sys.readout.layout.n_u},
                    {"layout_n_state", sys.readout.layout.n_state}};
    j["training_nrmse"] = sys.training_nrmse;
    j["pseudo_period"] = sys.pseudo_period;
    j["drive_offset"] = sys.drive_offset;
    switch (sys.config.backend) {
        case Backend::esn:
            j["esn"] = {{"w_in", detail::matrix_to_json(sys.esn_model.w_in)},
                        {"w", detail::matrix_to_json(sys.esn_model.w)},
                        {"state", detail::vector_to_json(sys.esn_model.state)}};
            break;
        case Backend::slwave:
            j["film"] = {{"h", sys.film_state.h},
                         {"t", sys.film_state.t},
                         {"clip_count", sys.film_state.clip_count},
                         {"dt_pde", sys.film.dt_pde},
                         {"substeps_per_sample", sys.film.substeps_per_sample},
                         {"probe_tail", sys.probe_tail}};
            break;
        case Backend::ngrc:
            j["ngrc"] = {{"input_tail", sys.input_tail}};
            break;
    }
    atomic_write(path, j.dump());
}

inline TrainedSystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path.string());
    detail::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParameterError("model load: " + path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "slrc-system")
        throw ParameterError("model load: " + path.string() +
                             " is not an slrc-system container");
    TrainedSystem sys;
    sys.config = detail::config_from_json(j.at("config"));
    sys.train_series = detail::timeseries_from_json(j.at("train_series"));
    sys.target_series = detail::timeseries_from_json(j.at("target_series"));
    sys.readout.w_out = detail::matrix_from_json(j.at("readout").at("w_out"));
    sys.readout.layout.n_u = j.at("readout").at("layout_n_u").get<long>();
    sys.readout.layout.n_state = j.at("readout").at("layout_n_state").get<long>();
    sys.training_nrmse = j.at("training_nrmse").get<double>();
    sys.pseudo_period = j.at("pseudo_period").get<long>();
    sys.drive_offset = j.at("drive_offset").get<double>();
    switch (sys.config.backend) {
        case Backend::esn:
            sys.esn_model.config = sys.config.esn;
            sys.esn_model.config.seed = sys.config.seed;
            sys.esn_model.w_in = detail::matrix_from_json(j.at("esn").at("w_in"));
            sys.esn_model.w = detail::matrix_from_json(j.at("esn").at("w"));
            sys.esn_model.state = detail::vector_from_json(j.at("esn").at("state"));
            break;
        case Backend::slwave: {
            const auto& f = j.at("film");
            sys.film = sys.config.film;
            sys.film.dt_pde = f.at("dt_pde").get<double>();
            sys.film.substeps_per_sample = f.at("substeps_per_sample").get<long>();
            sys.film_state.h = f.at("h").get<std::vector<double>>();
            sys.film_state.t = f.at("t").get<double>();
            sys.film_state.clip_count = f.at("clip_count").get<long>();
            sys.probe_tail = f.at("probe_tail").get<std::vector<double>>();
            break;
        }
        case Backend::ngrc:
            sys.input_tail = j.at("ngrc").at("input_tail").get<std::vector<double>>();
            break;
    }
    return sys;
}

}  // namespace slrc
