#pragma once

// Flat, sectioned key=value experiment configuration. Unknown keys are
// errors (with a nearest-key suggestion); an empty file yields the full
// defaults.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "slrc/errors.hpp"
#include "slrc/io.hpp"
#include "slrc/pipeline.hpp"

namespace slrc::config {

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline long parse_long(const std::string& v, const std::string& key) {
    long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParameterError("config: key '" + key + "': expected integer, got '" + v + "'");
    return out;
}

inline double parse_dbl(const std::string& v, const std::string& key) {
    return parse_double(v, "config: key '" + key + "'");
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ParameterError("config: key '" + key + "': expected boolean, got '" + v + "'");
}

inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

template <typename Enum>
struct EnumName {
    Enum value;
    const char* name;
};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& v, const std::string& key,
                const EnumName<Enum> (&names)[N]) {
    for (const auto& e : names)
        if (v == e.name) return e.value;
    std::string options;
    for (const auto& e : names) {
        if (!options.empty()) options += " | ";
        options += e.name;
    }
    throw ParameterError("config: key '" + key + "': unknown value '" + v + "' (expected " +
                         options + ")");
}

template <typename Enum, std::size_t N>
std::string enum_name(Enum v, const EnumName<Enum> (&names)[N]) {
    for (const auto& e : names)
        if (v == e.value) return e.name;
    return "?";
}

inline constexpr EnumName<Backend> kBackends[] = {
    {Backend::esn, "esn"}, {Backend::slwave, "slwave"}, {Backend::ngrc, "ngrc"}};
inline constexpr EnumName<SignalSource> kSources[] = {
    {SignalSource::mackey_glass, "mackey_glass"},
    {SignalSource::sinusoid, "sinusoid"},
    {SignalSource::sum_of_sinusoids, "sum_of_sinusoids"}};
inline constexpr EnumName<GenerativeMode> kGenModes[] = {
    {GenerativeMode::closed_loop, "closed_loop"},
    {GenerativeMode::feedback_free, "feedback_free"}};
inline constexpr EnumName<DriveMode> kDriveModes[] = {
    {DriveMode::delayed_replica, "delayed_replica"},
    {DriveMode::sinusoid_sum, "sinusoid_sum"}};
inline constexpr EnumName<Postprocess> kPostprocess[] = {
    {Postprocess::none, "none"}, {Postprocess::remove_dc, "remove_dc"}};
inline constexpr EnumName<FilmBoundary> kBoundaries[] = {
    {FilmBoundary::inflow_outflow, "inflow_outflow"},
    {FilmBoundary::periodic, "periodic"}};

inline std::vector<SineComponent> parse_components(const std::string& v,
                                                   const std::string& key) {
    // "freq:amp:phase,freq:amp:phase"; phase optional; empty clears the list
    std::vector<SineComponent> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        SineComponent c;
        std::stringstream fs(item);
        std::string field;
        int idx = 0;
        while (std::getline(fs, field, ':')) {
            const double x = parse_dbl(trim(field), key);
            if (idx == 0) c.freq_hz = x;
            else if (idx == 1) c.amplitude = x;
            else if (idx == 2) c.phase_rad = x;
            else throw ParameterError("config: key '" + key + "': too many fields in '" +
                                      item + "'");
            ++idx;
        }
        if (idx < 2)
            throw ParameterError("config: key '" + key + "': component '" + item +
                                 "' needs freq:amp[:phase]");
        out.push_back(c);
    }
    return out;
}

inline std::string components_to_string(const std::vector<SineComponent>& cs) {
    std::string out;
    for (const auto& c : cs) {
        if (!out.empty()) out += ',';
        out += format_double(c.freq_hz) + ':' + format_double(c.amplitude) + ':' +
               format_double(c.phase_rad);
    }
    return out;
}

}  // namespace detail

struct KeyDef {
    const char* section;
    const char* name;
    const char* doc;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

inline const std::vector<KeyDef>& registry() {
    using namespace detail;
    static const std::vector<KeyDef> keys = {
        // ---- run ----
        {"run", "backend", "reservoir backend: esn | slwave | ngrc",
         [](const ExperimentConfig& c) { return enum_name(c.backend, kBackends); },
         [](ExperimentConfig& c, const std::string& v) {
             c.backend = parse_enum(v, "backend", kBackends);
         }},
        {"run", "generative_mode", "closed_loop (esn only) | feedback_free",
         [](const ExperimentConfig& c) { return enum_name(c.generative_mode, kGenModes); },
         [](ExperimentConfig& c, const std::string& v) {
             c.generative_mode = parse_enum(v, "generative_mode", kGenModes);
         }},
        {"run", "drive_mode", "feedback-free surrogate drive: delayed_replica | sinusoid_sum",
         [](const ExperimentConfig& c) { return enum_name(c.drive_mode, kDriveModes); },
         [](ExperimentConfig& c, const std::string& v) {
             c.drive_mode = parse_enum(v, "drive_mode", kDriveModes);
         }},
        {"run", "postprocess", "forecast postprocess: none | remove_dc",
         [](const ExperimentConfig& c) { return enum_name(c.postprocess, kPostprocess); },
         [](ExperimentConfig& c, const std::string& v) {
             c.postprocess = parse_enum(v, "postprocess", kPostprocess);
         }},
        {"run", "seed", "RNG seed for reservoir construction",
         [](const ExperimentConfig& c) { return std::to_string(c.seed); },
         [](ExperimentConfig& c, const std::string& v) {
             c.seed = static_cast<std::uint64_t>(parse_long(v, "seed"));
         }},
        {"run", "horizon", "forecast length in samples",
         [](const ExperimentConfig& c) { return std::to_string(c.horizon); },
         [](ExperimentConfig& c, const std::string& v) {
             c.horizon = parse_long(v, "horizon");
         }},
        {"run", "train_samples", "training length in samples; 0 derives it from "
                                 "train_pseudo_periods",
         [](const ExperimentConfig& c) { return std::to_string(c.train_samples); },
         [](ExperimentConfig& c, const std::string& v) {
             c.train_samples = parse_long(v, "train_samples");
         }},
        {"run", "train_pseudo_periods", "training length in autocorrelation pseudo-periods "
                                        "(used when train_samples = 0)",
         [](const ExperimentConfig& c) { return format_double(c.train_pseudo_periods); },
         [](ExperimentConfig& c, const std::string& v) {
             c.train_pseudo_periods = parse_dbl(v, "train_pseudo_periods");
         }},
        {"run", "beta", "ridge regularisation coefficient, >= 0",
         [](const ExperimentConfig& c) { return format_double(c.beta); },
         [](ExperimentConfig& c, const std::string& v) {
             c.beta = parse_dbl(v, "beta");
             if (c.beta < 0.0) throw ParameterError("config: key 'beta' must be >= 0");
         }},
        {"run", "center_drive", "subtract the training mean before driving the film",
         [](const ExperimentConfig& c) { return c.center_drive ? "true" : "false"; },
         [](ExperimentConfig& c, const std::string& v) {
             c.center_drive = parse_bool(v, "center_drive");
         }},
        // ---- signal ----
        {"signal", "signal", "source: mackey_glass | sinusoid | sum_of_sinusoids",
         [](const ExperimentConfig& c) { return enum_name(c.signal.source, kSources); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.source = parse_enum(v, "signal", kSources);
         }},
        {"signal", "n_samples", "samples generated before discard/downsampling",
         [](const ExperimentConfig& c) { return std::to_string(c.signal.n_samples); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.n_samples = parse_long(v, "n_samples");
         }},
        {"signal", "discard", "leading samples dropped after generation",
         [](const ExperimentConfig& c) { return std::to_string(c.signal.discard); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.discard = parse_long(v, "discard");
         }},
        {"signal", "downsample_factor", "keep every factor-th sample (>= 1)",
         [](const ExperimentConfig& c) { return std::to_string(c.signal.downsample_factor); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.downsample_factor = parse_long(v, "downsample_factor");
         }},
        {"signal", "downsample_prefilter", "moving-average anti-alias prefilter",
         [](const ExperimentConfig& c) {
             return c.signal.downsample_prefilter ? "true" : "false";
         },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.downsample_prefilter = parse_bool(v, "downsample_prefilter");
         }},
        {"signal", "dt", "sample interval; for mackey_glass also the integration step",
         [](const ExperimentConfig& c) { return format_double(c.signal.dt); },
         [](ExperimentConfig& c, const std::string& v) {
             const double dt = parse_dbl(v, "dt");
             if (dt <= 0.0) throw ParameterError("config: key 'dt' must be > 0");
             c.signal.dt = dt;
             c.signal.mg.dt = dt;
         }},
        {"signal", "freq_hz", "sinusoid frequency",
         [](const ExperimentConfig& c) { return format_double(c.signal.freq_hz); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.freq_hz = parse_dbl(v, "freq_hz");
         }},
        {"signal", "amplitude", "sinusoid amplitude",
         [](const ExperimentConfig& c) { return format_double(c.signal.amplitude); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.amplitude = parse_dbl(v, "amplitude");
         }},
        {"signal", "phase_rad", "sinusoid phase",
         [](const ExperimentConfig& c) { return format_double(c.signal.phase_rad); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.phase_rad = parse_dbl(v, "phase_rad");
         }},
        {"signal", "components", "sum_of_sinusoids terms as freq:amp[:phase],...",
         [](const ExperimentConfig& c) { return components_to_string(c.signal.components); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.components = parse_components(v, "components");
         }},
        {"signal", "mg_beta", "Mackey-Glass beta",
         [](const ExperimentConfig& c) { return format_double(c.signal.mg.beta); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.mg.beta = parse_dbl(v, "mg_beta");
         }},
        {"signal", "mg_gamma", "Mackey-Glass gamma",
         [](const ExperimentConfig& c) { return format_double(c.signal.mg.gamma); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.mg.gamma = parse_dbl(v, "mg_gamma");
         }},
        {"signal", "mg_tau", "Mackey-Glass delay",
         [](const ExperimentConfig& c) { return format_double(c.signal.mg.tau); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.mg.tau = parse_dbl(v, "mg_tau");
         }},
        {"signal", "mg_q", "Mackey-Glass exponent",
         [](const ExperimentConfig& c) { return format_double(c.signal.mg.q); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.mg.q = parse_dbl(v, "mg_q");
         }},
        {"signal", "mg_history", "constant initial history on [-tau, 0]",
         [](const ExperimentConfig& c) { return format_double(c.signal.mg.history); },
         [](ExperimentConfig& c, const std::string& v) {
             c.signal.mg.history = parse_dbl(v, "mg_history");
         }},
        // ---- esn ----
        {"esn", "n_x", "reservoir size",
         [](const ExperimentConfig& c) { return std::to_string(c.esn.n_x); },
         [](ExperimentConfig& c, const std::string& v) {
             c.esn.n_x = parse_long(v, "n_x");
         }},
        {"esn", "alpha", "leak rate in (0, 1]",
         [](const ExperimentConfig& c) { return format_double(c.esn.alpha); },
         [](ExperimentConfig& c, const std::string& v) {
             const double a = parse_dbl(v, "alpha");
             if (!(a > 0.0 && a <= 1.0))
                 throw ParameterError("config: key 'alpha' must lie in (0, 1]; got " + v);
             c.esn.alpha = a;
         }},
        {"esn", "rho", "target spectral radius, > 0",
         [](const ExperimentConfig& c) { return format_double(c.esn.rho); },
         [](ExperimentConfig& c, const std::string& v) {
             const double r = parse_dbl(v, "rho");
             if (r <= 0.0) throw ParameterError("config: key 'rho' must be > 0");
             c.esn.rho = r;
         }},
        {"esn", "input_scale", "W_in entries uniform in +/- input_scale",
         [](const ExperimentConfig& c) { return format_double(c.esn.input_scale); },
         [](ExperimentConfig& c, const std::string& v) {
             c.esn.input_scale = parse_dbl(v, "input_scale");
         }},
        {"esn", "density", "fraction of nonzero recurrent entries, in (0, 1]",
         [](const ExperimentConfig& c) { return format_double(c.esn.density); },
         [](ExperimentConfig& c, const std::string& v) {
             const double d = parse_dbl(v, "density");
             if (!(d > 0.0 && d <= 1.0))
                 throw ParameterError("config: key 'density' must lie in (0, 1]");
             c.esn.density = d;
         }},
        {"esn", "washout", "harvested columns discarded before training",
         [](const ExperimentConfig& c) { return std::to_string(c.esn.washout); },
         [](ExperimentConfig& c, const std::string& v) {
             c.esn.washout = parse_long(v, "washout");
         }},
        // ---- slwave ----
        {"slwave", "domain_length", "film domain length, m",
         [](const ExperimentConfig& c) { return format_double(c.film.domain_length); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.domain_length = parse_dbl(v, "domain_length");
         }},
        {"slwave", "n_grid", "grid points (>= 64)",
         [](const ExperimentConfig& c) { return std::to_string(c.film.n_grid); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.n_grid = parse_long(v, "n_grid");
         }},
        {"slwave", "c0", "linear advection speed, m/s",
         [](const ExperimentConfig& c) { return format_double(c.film.c0); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.c0 = parse_dbl(v, "c0");
         }},
        {"slwave", "eps_nl", "nonlinear steepening coefficient",
         [](const ExperimentConfig& c) { return format_double(c.film.eps_nl); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.eps_nl = parse_dbl(v, "eps_nl");
         }},
        {"slwave", "mu_disp", "third-derivative dispersion coefficient",
         [](const ExperimentConfig& c) { return format_double(c.film.mu_disp); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.mu_disp = parse_dbl(v, "mu_disp");
         }},
        {"slwave", "nu_visc", "second-derivative dissipation coefficient, >= 0",
         [](const ExperimentConfig& c) { return format_double(c.film.nu_visc); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.nu_visc = parse_dbl(v, "nu_visc");
         }},
        {"slwave", "base_level", "mean film height (shifts the advection speed)",
         [](const ExperimentConfig& c) { return format_double(c.film.base_level); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.base_level = parse_dbl(v, "base_level");
         }},
        {"slwave", "drive_gain", "boundary height units per unit input",
         [](const ExperimentConfig& c) { return format_double(c.film.drive_gain); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.drive_gain = parse_dbl(v, "drive_gain");
         }},
        {"slwave", "probe_pos", "probe position, m, strictly inside the domain",
         [](const ExperimentConfig& c) { return format_double(c.film.probe_pos); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.probe_pos = parse_dbl(v, "probe_pos");
         }},
        {"slwave", "dt_pde", "PDE substep; 0 derives it from the stability bound",
         [](const ExperimentConfig& c) { return format_double(c.film.dt_pde); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.dt_pde = parse_dbl(v, "dt_pde");
         }},
        {"slwave", "substeps_per_sample", "PDE substeps per input sample; 0 = derive",
         [](const ExperimentConfig& c) { return std::to_string(c.film.substeps_per_sample); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.substeps_per_sample = parse_long(v, "substeps_per_sample");
         }},
        {"slwave", "drive_amp_limit", "inputs beyond this amplitude are clipped",
         [](const ExperimentConfig& c) { return format_double(c.film.drive_amp_limit); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.drive_amp_limit = parse_dbl(v, "drive_amp_limit");
         }},
        {"slwave", "boundary", "inflow_outflow | periodic (conservation tests)",
         [](const ExperimentConfig& c) { return enum_name(c.film.boundary, kBoundaries); },
         [](ExperimentConfig& c, const std::string& v) {
             c.film.boundary = parse_enum(v, "boundary", kBoundaries);
         }},
        {"slwave", "n_taps", "delayed probe samples per feature vector",
         [](const ExperimentConfig& c) { return std::to_string(c.sl_features.n_taps); },
         [](ExperimentConfig& c, const std::string& v) {
             c.sl_features.n_taps = parse_long(v, "n_taps");
         }},
        {"slwave", "tap_spacing", "samples between probe taps",
         [](const ExperimentConfig& c) { return std::to_string(c.sl_features.tap_spacing); },
         [](ExperimentConfig& c, const std::string& v) {
             c.sl_features.tap_spacing = parse_long(v, "tap_spacing");
         }},
        {"slwave", "include_input", "append the raw input to the feature vector",
         [](const ExperimentConfig& c) {
             return c.sl_features.include_input ? "true" : "false";
         },
         [](ExperimentConfig& c, const std::string& v) {
             c.sl_features.include_input = parse_bool(v, "include_input");
         }},
        {"slwave", "include_square", "append squared probe taps",
         [](const ExperimentConfig& c) {
             return c.sl_features.include_square ? "true" : "false";
         },
         [](ExperimentConfig& c, const std::string& v) {
             c.sl_features.include_square = parse_bool(v, "include_square");
         }},
        {"slwave", "sl_washout", "probe samples discarded before training",
         [](const ExperimentConfig& c) { return std::to_string(c.sl_washout); },
         [](ExperimentConfig& c, const std::string& v) {
             c.sl_washout = parse_long(v, "sl_washout");
         }},
        // ---- ngrc ----
        {"ngrc", "k_delays", "input taps",
         [](const ExperimentConfig& c) { return std::to_string(c.ngrc.k_delays); },
         [](ExperimentConfig& c, const std::string& v) {
             c.ngrc.k_delays = parse_long(v, "k_delays");
         }},
        {"ngrc", "ngrc_spacing", "samples between input taps",
         [](const ExperimentConfig& c) { return std::to_string(c.ngrc.spacing); },
         [](ExperimentConfig& c, const std::string& v) {
             c.ngrc.spacing = parse_long(v, "ngrc_spacing");
         }},
        {"ngrc", "poly_order", "maximum monomial degree, >= 1",
         [](const ExperimentConfig& c) { return std::to_string(c.ngrc.poly_order); },
         [](ExperimentConfig& c, const std::string& v) {
             c.ngrc.poly_order = parse_long(v, "poly_order");
         }},
        {"ngrc", "include_constant", "prepend a constant 1 feature",
         [](const ExperimentConfig& c) {
             return c.ngrc.include_constant ? "true" : "false";
         },
         [](ExperimentConfig& c, const std::string& v) {
             c.ngrc.include_constant = parse_bool(v, "include_constant");
         }},
    };
    return keys;
}

inline const KeyDef* find_key(const std::string& name) {
    for (const auto& k : registry())
        if (name == k.name) return &k;
    return nullptr;
}

inline std::string nearest_key(const std::string& name) {
    std::size_t best = static_cast<std::size_t>(-1);
    std::string who;
    for (const auto& k : registry()) {
        const std::size_t d = detail::levenshtein(name, k.name);
        if (d < best) {
            best = d;
            who = k.name;
        }
    }
    return best <= 3 ? who : std::string();
}

inline void set_key(ExperimentConfig& cfg, const std::string& name, const std::string& value) {
    const KeyDef* key = find_key(name);
    if (!key) {
        std::string msg = "config: unknown key '" + name + "'";
        const std::string hint = nearest_key(name);
        if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
        throw ParameterError(msg);
    }
    key->set(cfg, value);
}

/// Applies a `key=value` override string.
inline void apply_override(ExperimentConfig& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw ParameterError("config: override '" + kv + "' is not of the form key=value");
    set_key(cfg, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
}

inline const char* kSections[] = {"run", "signal", "esn", "slwave", "ngrc"};

/// Parses a config file into cfg. Lines are `key = value`, `[section]`
/// headers, blank lines, or comments (# or ;).
inline void load_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open " + path.string());
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParameterError("config: " + path.string() + ":" +
                                     std::to_string(lineno) + ": unterminated section header");
            const std::string section = detail::trim(t.substr(1, t.size() - 2));
            const bool known = std::any_of(std::begin(kSections), std::end(kSections),
                                           [&](const char* s) { return section == s; });
            if (!known)
                throw ParameterError("config: " + path.string() + ":" +
                                     std::to_string(lineno) + ": unknown section [" + section +
                                     "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config: " + path.string() + ":" + std::to_string(lineno) +
                                 ": expected 'key = value'");
        try {
            set_key(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
        } catch (const ParameterError& e) {
            throw ParameterError(std::string(e.what()) + " at " + path.string() + ":" +
                                 std::to_string(lineno));
        }
    }
}

inline ExperimentConfig load(const std::filesystem::path& path) {
    ExperimentConfig cfg;
    load_file(cfg, path);
    return cfg;
}

/// Renders the resolved configuration in the file format.
inline std::string echo(const ExperimentConfig& cfg, bool with_docs = false) {
    std::string out;
    for (const char* section : kSections) {
        out += std::string("[") + section + "]\n";
        for (const auto& k : registry()) {
            if (std::string(k.section) != section) continue;
            if (with_docs) out += std::string("# ") + k.doc + "\n";
            out += std::string(k.name) + " = " + k.get(cfg) + "\n";
        }
        out += "\n";
    }
    return out;
}

}  // namespace slrc::config
