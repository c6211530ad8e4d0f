#include "rydsense/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rydsense/dephasing.hpp"
#include "rydsense/errors.hpp"
#include "rydsense/mzi.hpp"
#include "rydsense/parallel.hpp"
#include "rydsense/presets.hpp"
#include "rydsense/sensing.hpp"

namespace rydsense {

using nlohmann::json;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

struct KindName {
    ScenarioKind kind;
    const char* name;
};

constexpr KindName scenario_table[] = {
    {ScenarioKind::fig2b_at, "fig2b_at"},
    {ScenarioKind::fig3_power, "fig3_power"},
    {ScenarioKind::fig4a_fwhm_vs_density, "fig4a_fwhm_vs_density"},
    {ScenarioKind::fig4b_density_response, "fig4b_density_response"},
    {ScenarioKind::fig5_transit, "fig5_transit"},
    {ScenarioKind::fig6_three_photon, "fig6_three_photon"},
    {ScenarioKind::custom, "custom"},
};

const char* method_name(DopplerMethod m) {
    switch (m) {
        case DopplerMethod::analytic: return "analytic";
        case DopplerMethod::quadrature: return "quadrature";
        case DopplerMethod::none: return "none";
    }
    return "analytic";
}

DopplerMethod parse_method(const std::string& s) {
    if (s == "analytic") return DopplerMethod::analytic;
    if (s == "quadrature") return DopplerMethod::quadrature;
    if (s == "none") return DopplerMethod::none;
    throw ConfigError("numerics.doppler_method: unknown method '" + s + "'");
}

}  // namespace

std::string to_string(ScenarioKind k) {
    for (const auto& e : scenario_table)
        if (e.kind == k) return e.name;
    return "custom";
}

std::string to_string(SystemKind k) {
    switch (k) {
        case SystemKind::cs_3level: return "cs_3level";
        case SystemKind::cs_4level: return "cs_4level";
        case SystemKind::cs_5level: return "cs_5level";
    }
    return "cs_4level";
}

ScenarioKind parse_scenario_kind(const std::string& name) {
    for (const auto& e : scenario_table)
        if (name == e.name) return e.kind;
    throw ConfigError("unknown scenario '" + name + "'");
}

SystemKind parse_system_kind(const std::string& name) {
    if (name == "cs_3level") return SystemKind::cs_3level;
    if (name == "cs_4level") return SystemKind::cs_4level;
    if (name == "cs_5level") return SystemKind::cs_5level;
    throw ConfigError("unknown system '" + name + "'");
}

const std::vector<ScenarioKind>& all_scenarios() {
    static const std::vector<ScenarioKind> all = [] {
        std::vector<ScenarioKind> v;
        for (const auto& e : scenario_table) v.push_back(e.kind);
        return v;
    }();
    return all;
}

const std::vector<ParameterSpec>& parameter_registry() {
    static const std::vector<ParameterSpec> reg = {
        // cell
        {"temperature_k", 294.0, false, "cell temperature"},
        {"density_cm3", std::nullopt, true, "ground-state Cs density; null derives it from temperature"},
        {"cell_length_m", 0.04, false, "vapor cell length"},
        {"probe_diameter_m", 1.36e-3, false, "probe beam diameter"},
        {"coupling_diameter_m", 0.1e-3, false, "coupling beam diameter"},
        // fields, ordinary frequency
        {"probe_rabi_hz", 1.8e6, false, "probe Rabi frequency / 2 pi"},
        {"intermediate_rabi_hz", 0.0, false, "second-step Rabi frequency / 2 pi (cs_5level)"},
        {"coupling_rabi_hz", 0.5e6, false, "coupling Rabi frequency / 2 pi"},
        {"rf_rabi_hz", 0.0, false, "RF Rabi frequency / 2 pi"},
        {"rf_field_v_per_m", std::nullopt, true, "RF field amplitude; when set it replaces rf_rabi_hz"},
        {"probe_detuning_hz", 0.0, false, "probe detuning / 2 pi; traces scan around it"},
        {"intermediate_detuning_hz", 0.0, false, "second-step detuning / 2 pi (cs_5level)"},
        {"coupling_detuning_hz", 0.0, false, "coupling detuning / 2 pi"},
        {"rf_detuning_hz", 0.0, false, "RF detuning / 2 pi"},
        {"rf_dipole_ea0", cs::rf_dipole_ea0, false, "RF transition dipole moment"},
        {"rf_frequency_hz", cs::rf_frequency, false, "RF transition frequency"},
        // dephasing budget, FWHM / 2 pi
        {"transit_hz", std::nullopt, true, "transit broadening; null derives it from the smaller beam"},
        {"collisional_hz", std::nullopt, true, "collisional broadening; null derives it from the density"},
        {"laser_hz", 70e3, false, "laser dephasing"},
        {"magnetic_hz", 50e3, false, "magnetic dephasing"},
        {"rydberg_rydberg_hz", 0.0, false, "Rydberg-Rydberg dephasing"},
        {"polarizability_a03", 402.0, false, "ground-state polarizability"},
        {"scattering_length_a0", -16.6, false, "electron-ground-state s-wave scattering length"},
        {"effective_n", 49.5, false, "effective principal quantum number of the Rydberg level"},
        // detection and sensitivity
        {"probe_power_w", 10e-6, false, "probe power on the detector"},
        {"quantum_efficiency", 0.5, false, "detector quantum efficiency"},
        {"bandwidth_hz", 1.0, false, "detection bandwidth"},
        {"signal_fraction", 1e-3, false, "EIT signal as a fraction of the detected power"},
        {"rydberg_fraction", 1e-3, false, "Rydberg atoms as a fraction of the ground density"},
        {"interaction_diameter_m", 1e-3, false, "beam diameter of the atom shot-noise volume"},
        {"t2_s", 5e-6, false, "dephasing time for the atom shot-noise limit"},
        // interferometer
        {"lo_signal_ratio", 20.0, false, "LO / signal arm power"},
        {"splitter_ratio", 0.5, false, "combiner reflectivity"},
        {"path_phase_rad", units::pi / 2, false, "LO phase"},
        {"path_stability_m", reference_stability, false, "rms path-length stability"},
        {"reference_wavelength_m", reference_wavelength, false, "lock laser wavelength"},
        {"rin_per_rthz", 1.1e-5, false, "probe relative intensity noise"},
        {"detector_nep_w_per_rthz", 2e-12, false, "detector noise-equivalent power"},
        {"coupling_am_noise_w_per_rthz", 0.0, false, "coupling-laser AM noise at the detector"},
    };
    return reg;
}

const ParameterSpec& parameter_spec(const std::string& name) {
    for (const auto& p : parameter_registry())
        if (p.name == name) return p;
    throw ConfigError("unknown parameter '" + name + "'");
}

ParameterSet default_parameters() {
    ParameterSet p;
    for (const auto& s : parameter_registry()) p[s.name] = s.default_value;
    return p;
}

namespace {

std::string unit_of(const std::string& name) {
    static const std::pair<const char*, const char*> suffixes[] = {
        {"_v_per_m", "V/m"}, {"_w_per_rthz", "W/Hz^0.5"}, {"_per_rthz", "1/Hz^0.5"}, {"_cm3", "cm^-3"},
        {"_a03", "a0^3"},    {"_ea0", "e a0"},            {"_a0", "a0"},              {"_rad", "rad"},
        {"_hz", "Hz"},       {"_k", "K"},                 {"_m", "m"},                {"_s", "s"},
        {"_w", "W"},
    };
    for (const auto& [suf, unit] : suffixes) {
        const std::string s(suf);
        if (name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0) return unit;
    }
    return "1";
}

double get(const ParameterSet& p, const std::string& name) {
    auto it = p.find(name);
    if (it == p.end() || !it->second) throw ConfigError("parameter '" + name + "' has no value");
    return *it->second;
}

std::optional<double> get_opt(const ParameterSet& p, const std::string& name) {
    auto it = p.find(name);
    return it == p.end() ? std::nullopt : it->second;
}

SeriesSpec series(const std::string& label, ParameterSet overrides) { return {label, std::move(overrides)}; }

}  // namespace

ScenarioConfig preset(ScenarioKind kind) {
    ScenarioConfig c;
    c.scenario = kind;
    c.parameters = default_parameters();
    auto& p = c.parameters;
    switch (kind) {
        case ScenarioKind::fig2b_at:
            c.system = SystemKind::cs_4level;
            p["probe_rabi_hz"] = 1.8e6;
            p["coupling_rabi_hz"] = 0.5e6;
            c.series = {series("default", {})};
            c.sweep = {"rf_field_v_per_m", 0.15, 0.35, 5};
            c.numerics.detuning_points = 401;
            c.numerics.detuning_span_hz = 10e6;
            break;
        case ScenarioKind::fig3_power:
            c.system = SystemKind::cs_4level;
            p["transit_hz"] = 300e3;
            p["collisional_hz"] = 6e3;
            p["laser_hz"] = 70e3;
            p["magnetic_hz"] = 50e3;
            p["rydberg_rydberg_hz"] = 0.0;
            c.series = {
                series("c3.3MHz_p4.0MHz", {{"coupling_rabi_hz", 3.3e6}, {"probe_rabi_hz", 4.0e6}}),
                series("c3.3MHz_p3.0MHz", {{"coupling_rabi_hz", 3.3e6}, {"probe_rabi_hz", 3.0e6}}),
                series("c2.7MHz_p1.0MHz", {{"coupling_rabi_hz", 2.7e6}, {"probe_rabi_hz", 1.0e6}}),
                series("c2.7MHz_p0.6MHz", {{"coupling_rabi_hz", 2.7e6}, {"probe_rabi_hz", 0.6e6}}),
                series("c2.7MHz_p0.3MHz", {{"coupling_rabi_hz", 2.7e6}, {"probe_rabi_hz", 0.3e6}}),
            };
            c.sweep = {"rf_field_v_per_m", 0.0, 0.1, 21};
            break;
        case ScenarioKind::fig4a_fwhm_vs_density:
            c.system = SystemKind::cs_3level;
            p["probe_rabi_hz"] = 1.8e6;
            p["coupling_rabi_hz"] = 0.5e6;
            c.series = {series("default", {})};
            c.sweep = {"density_cm3", 1e10, 20e10, 20};
            c.numerics.detuning_points = 401;
            c.numerics.detuning_span_hz = 10e6;
            break;
        case ScenarioKind::fig4b_density_response:
            c.system = SystemKind::cs_4level;
            p["probe_rabi_hz"] = 1.3e6;
            p["coupling_rabi_hz"] = 0.8e6;
            p["coupling_diameter_m"] = 0.5e-3;
            c.series = {
                series("294K", {{"temperature_k", 294.0}}),
                series("306K", {{"temperature_k", 306.0}}),
                series("318K", {{"temperature_k", 318.0}}),
                series("330K", {{"temperature_k", 330.0}}),
            };
            c.sweep = {"rf_field_v_per_m", 0.0, 0.1, 21};
            break;
        case ScenarioKind::fig5_transit:
            c.system = SystemKind::cs_4level;
            p["probe_rabi_hz"] = 1.7e6;
            p["coupling_rabi_hz"] = 0.7e6;
            c.series = {
                series("d0.32mm", {{"coupling_diameter_m", 0.32e-3}}),
                series("d0.50mm", {{"coupling_diameter_m", 0.5e-3}}),
                series("d1.10mm", {{"coupling_diameter_m", 1.1e-3}}),
            };
            c.sweep = {"rf_field_v_per_m", 0.0, 0.1, 21};
            break;
        case ScenarioKind::fig6_three_photon:
            c.system = SystemKind::cs_5level;
            p["probe_rabi_hz"] = 1.8e6;
            p["intermediate_rabi_hz"] = 1.8e6;
            p["coupling_rabi_hz"] = 50e3;
            p["probe_detuning_hz"] = 500e6;
            p["intermediate_detuning_hz"] = -500e6;
            p["coupling_detuning_hz"] = 5e3;
            p["rf_detuning_hz"] = 5e3;
            p["probe_diameter_m"] = 5e-3;
            p["coupling_diameter_m"] = 5e-3;
            p["laser_hz"] = 0.0;
            p["magnetic_hz"] = 0.0;
            c.series = {
                series("rf0kHz", {{"rf_rabi_hz", 0.0}}),       series("rf50kHz", {{"rf_rabi_hz", 50e3}}),
                series("rf100kHz", {{"rf_rabi_hz", 100e3}}),   series("rf150kHz", {{"rf_rabi_hz", 150e3}}),
                series("rf200kHz", {{"rf_rabi_hz", 200e3}}),   series("rf300kHz", {{"rf_rabi_hz", 300e3}}),
                series("rf400kHz", {{"rf_rabi_hz", 400e3}}),
            };
            c.sweep = {"rf_field_v_per_m", 0.0, 0.01, 21};
            c.numerics.detuning_points = 601;
            c.numerics.detuning_span_hz = 300e3;
            break;
        case ScenarioKind::custom:
            c.system = SystemKind::cs_4level;
            c.series = {series("default", {})};
            c.sweep = {"rf_field_v_per_m", 0.0, 0.1, 11};
            break;
    }
    return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") + it.key() + "'");
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + " must be finite");
    return x;
}

std::size_t count(const json& v, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(where + " must be an integer");
    const auto n = v.get<long long>();
    if (n < 0) throw ConfigError(where + " must be >= 0");
    return static_cast<std::size_t>(n);
}

void merge_parameters(ParameterSet& into, const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string path = where + "." + it.key();
        const auto& spec = [&]() -> const ParameterSpec& {
            try {
                return parameter_spec(it.key());
            } catch (const ConfigError&) {
                throw ConfigError("unknown key '" + path + "'");
            }
        }();
        if (it.value().is_null()) {
            if (!spec.nullable) throw ConfigError(path + " cannot be null");
            into[spec.name] = std::nullopt;
        } else {
            into[spec.name] = number(it.value(), path);
        }
    }
}

json parameters_json(const ParameterSet& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v ? json(*v) : json(nullptr);
    return j;
}

}  // namespace

void validate(const ScenarioConfig& c) {
    for (const auto& [k, v] : c.parameters) {
        const auto& spec = parameter_spec(k);
        if (!v && !spec.nullable) throw ConfigError("parameters." + k + " cannot be null");
        if (v && !std::isfinite(*v)) throw ConfigError("parameters." + k + " must be finite");
    }
    for (const auto& s : parameter_registry())
        if (!c.parameters.count(s.name)) throw ConfigError("parameters." + s.name + " is missing");
    if (c.series.empty()) throw ConfigError("series must not be empty");
    for (const auto& s : c.series) {
        if (s.label.empty()) throw ConfigError("series labels must not be empty");
        for (const auto& [k, v] : s.parameters) {
            const auto& spec = parameter_spec(k);
            if (!v && !spec.nullable) throw ConfigError("series." + s.label + "." + k + " cannot be null");
        }
    }
    parameter_spec(c.sweep.parameter);
    if (c.sweep.points < 2) throw ConfigError("sweep.points must be >= 2");
    if (!std::isfinite(c.sweep.start) || !std::isfinite(c.sweep.stop))
        throw ConfigError("sweep endpoints must be finite");
    const auto& n = c.numerics;
    if (n.velocity_points < 3 || n.velocity_points % 2 == 0)
        throw ConfigError("numerics.velocity_points must be odd and >= 3");
    if (!(n.velocity_span >= 3.0) || !std::isfinite(n.velocity_span))
        throw ConfigError("numerics.velocity_span must be >= 3");
    if (n.detuning_points < 5) throw ConfigError("numerics.detuning_points must be >= 5");
    if (!(n.detuning_span_hz > 0.0) || !std::isfinite(n.detuning_span_hz))
        throw ConfigError("numerics.detuning_span_hz must be positive");
}

ScenarioConfig parse_config(const json& doc) {
    check_keys(doc, {"scenario", "system", "parameters", "series", "sweep", "numerics", "doppler_free"}, "");
    if (!doc.contains("scenario") || !doc["scenario"].is_string())
        throw ConfigError("'scenario' is required and must be a string");
    ScenarioConfig c = preset(parse_scenario_kind(doc["scenario"].get<std::string>()));

    if (doc.contains("system")) {
        if (!doc["system"].is_string()) throw ConfigError("system must be a string");
        c.system = parse_system_kind(doc["system"].get<std::string>());
    }
    if (doc.contains("parameters")) merge_parameters(c.parameters, doc["parameters"], "parameters");
    if (doc.contains("series")) {
        const auto& arr = doc["series"];
        if (!arr.is_array() || arr.empty()) throw ConfigError("series must be a non-empty array");
        c.series.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "series[" + std::to_string(i) + "]";
            check_keys(arr[i], {"label", "parameters"}, where);
            SeriesSpec s;
            if (!arr[i].contains("label") || !arr[i]["label"].is_string())
                throw ConfigError(where + ".label is required and must be a string");
            s.label = arr[i]["label"].get<std::string>();
            if (arr[i].contains("parameters")) merge_parameters(s.parameters, arr[i]["parameters"], where + ".parameters");
            c.series.push_back(std::move(s));
        }
    }
    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        check_keys(s, {"parameter", "start", "stop", "points"}, "sweep");
        if (s.contains("parameter")) {
            if (!s["parameter"].is_string()) throw ConfigError("sweep.parameter must be a string");
            c.sweep.parameter = s["parameter"].get<std::string>();
            try {
                parameter_spec(c.sweep.parameter);
            } catch (const ConfigError&) {
                throw ConfigError("sweep.parameter: unknown parameter '" + c.sweep.parameter + "'");
            }
        }
        if (s.contains("start")) c.sweep.start = number(s["start"], "sweep.start");
        if (s.contains("stop")) c.sweep.stop = number(s["stop"], "sweep.stop");
        if (s.contains("points")) c.sweep.points = count(s["points"], "sweep.points");
    }
    if (doc.contains("numerics")) {
        const auto& n = doc["numerics"];
        check_keys(n, {"doppler_method", "velocity_points", "velocity_span", "detuning_points", "detuning_span_hz"},
                   "numerics");
        if (n.contains("doppler_method")) {
            if (!n["doppler_method"].is_string()) throw ConfigError("numerics.doppler_method must be a string");
            c.numerics.doppler_method = parse_method(n["doppler_method"].get<std::string>());
        }
        if (n.contains("velocity_points")) c.numerics.velocity_points = count(n["velocity_points"], "numerics.velocity_points");
        if (n.contains("velocity_span")) c.numerics.velocity_span = number(n["velocity_span"], "numerics.velocity_span");
        if (n.contains("detuning_points")) c.numerics.detuning_points = count(n["detuning_points"], "numerics.detuning_points");
        if (n.contains("detuning_span_hz"))
            c.numerics.detuning_span_hz = number(n["detuning_span_hz"], "numerics.detuning_span_hz");
    }
    if (doc.contains("doppler_free")) {
        if (!doc["doppler_free"].is_boolean()) throw ConfigError("doppler_free must be a boolean");
        c.doppler_free = doc["doppler_free"].get<bool>();
    }
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["scenario"] = to_string(c.scenario);
    j["system"] = to_string(c.system);
    j["parameters"] = parameters_json(c.parameters);
    j["series"] = json::array();
    for (const auto& s : c.series) j["series"].push_back({{"label", s.label}, {"parameters", parameters_json(s.parameters)}});
    j["sweep"] = {{"parameter", c.sweep.parameter}, {"start", c.sweep.start}, {"stop", c.sweep.stop},
                  {"points", c.sweep.points}};
    j["numerics"] = {{"doppler_method", method_name(c.numerics.doppler_method)},
                     {"velocity_points", c.numerics.velocity_points},
                     {"velocity_span", c.numerics.velocity_span},
                     {"detuning_points", c.numerics.detuning_points},
                     {"detuning_span_hz", c.numerics.detuning_span_hz}};
    j["doppler_free"] = c.doppler_free;
    return j;
}

std::string config_hash(const ScenarioConfig& c) {
    const std::string text = to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ParameterSet effective_parameters(const ScenarioConfig& c, std::size_t series, std::optional<double> sweep_value) {
    if (series >= c.series.size()) throw ConfigError("series index out of range");
    ParameterSet p = c.parameters;
    for (const auto& [k, v] : c.series[series].parameters) p[k] = v;
    if (sweep_value) p[c.sweep.parameter] = *sweep_value;
    return p;
}

// ---------------------------------------------------------------------------
// model assembly

namespace {

struct Model {
    LadderScheme scheme;
    CellConditions conditions;
    DephasingBudget budget;
    RfTransition rf;
    DopplerSettings doppler;
    ParameterSet p;
    bool has_rf{false};
    std::size_t rf_index{0};
    std::size_t coupling_index{1};  // the laser that opens the Rydberg level

    double probe_wavelength() const { return units::two_pi / std::abs(scheme.probe().wavevector); }

    LadderScheme without_coupling() const {
        LadderScheme s = scheme;
        s.couplings[coupling_index].rabi = 0.0;
        return s;
    }

    LadderScheme without_rf() const {
        LadderScheme s = scheme;
        if (has_rf) s.couplings[rf_index].rabi = 0.0;
        return s;
    }
};

Model build_model(const ScenarioConfig& c, const ParameterSet& p) {
    Model m;
    m.p = p;
    m.rf = {get(p, "rf_dipole_ea0"), get(p, "rf_frequency_hz")};
    validate(m.rf);

    const double rf_rabi = get_opt(p, "rf_field_v_per_m") ? rf_rabi_from_field(get(p, "rf_field_v_per_m"), m.rf)
                                                          : units::angular(get(p, "rf_rabi_hz"));
    const auto w = [&](const char* name) { return units::angular(get(p, name)); };
    switch (c.system) {
        case SystemKind::cs_3level:
            m.scheme = cs::three_level(w("probe_rabi_hz"), w("coupling_rabi_hz"), w("probe_detuning_hz"),
                                       w("coupling_detuning_hz"));
            break;
        case SystemKind::cs_4level:
            m.scheme = cs::four_level({w("probe_rabi_hz"), w("coupling_rabi_hz"), rf_rabi, w("probe_detuning_hz"),
                                       w("coupling_detuning_hz"), w("rf_detuning_hz")});
            m.has_rf = true;
            m.rf_index = 2;
            break;
        case SystemKind::cs_5level:
            m.scheme = cs::five_level({w("probe_rabi_hz"), w("intermediate_rabi_hz"), w("coupling_rabi_hz"), rf_rabi,
                                       w("probe_detuning_hz"), w("intermediate_detuning_hz"),
                                       w("coupling_detuning_hz"), w("rf_detuning_hz")});
            m.has_rf = true;
            m.rf_index = 3;
            m.coupling_index = 2;
            break;
    }
    for (const auto& cp : m.scheme.couplings)
        if (cp.rabi < 0.0) throw ValidationError("Rabi frequencies must be >= 0");

    m.conditions.temperature = get(p, "temperature_k");
    m.conditions.density = get_opt(p, "density_cm3") ? get(p, "density_cm3") * units::per_cm3
                                                     : cs_density(m.conditions.temperature);
    m.conditions.length = get(p, "cell_length_m");
    m.conditions.probe_diameter = get(p, "probe_diameter_m");
    m.conditions.coupling_diameter = get(p, "coupling_diameter_m");
    validate(m.conditions);

    GasParams gas;
    gas.polarizability = get(p, "polarizability_a03");
    gas.s_wave_length = get(p, "scattering_length_a0");
    gas.effective_n = get(p, "effective_n");
    BudgetOverrides o;
    if (get_opt(p, "transit_hz")) o.transit = w("transit_hz");
    if (get_opt(p, "collisional_hz")) o.collisional = w("collisional_hz");
    o.laser = w("laser_hz");
    o.magnetic = w("magnetic_hz");
    o.rydberg_rydberg = w("rydberg_rydberg_hz");
    m.budget = assemble_budget(m.conditions, gas, o);
    validate(m.budget, m.scheme);

    m.doppler.method = c.doppler_free ? DopplerMethod::none : c.numerics.doppler_method;
    m.doppler.velocity_points = c.numerics.velocity_points;
    m.doppler.velocity_span = c.numerics.velocity_span;
    return m;
}

std::vector<double> sweep_values(const ScenarioConfig& c) {
    return linear_grid(c.sweep.start, c.sweep.stop, c.sweep.points);
}

std::string point_label(const ScenarioConfig& c, std::size_t series, std::optional<double> value) {
    std::string s = "series '" + c.series[series].label + "'";
    if (value) s += ", " + c.sweep.parameter + " = " + format_number(*value);
    return s;
}

// Runs f and tags solver failures with the sweep point that produced them.
template <class F>
auto at_point(const ScenarioConfig& c, std::size_t series, std::optional<double> value, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ConfigError(point_label(c, series, value) + ": " + e.what());
    } catch (const SolverError& e) {
        throw SolverError(point_label(c, series, value) + ": " + e.what());
    }
}

std::vector<double> detuning_grid(const Model& m, const NumericsSpec& n) {
    const double center = m.scheme.probe().detuning;
    auto g = linear_grid(-n.detuning_span_hz, n.detuning_span_hz, n.detuning_points);
    for (double& x : g) x = center + units::angular(x);
    return g;
}

json budget_json(const Model& m) {
    const auto hz = [](double w) { return units::hertz(w); };
    return {{"temperature_k", m.conditions.temperature},
            {"density_cm3", m.conditions.density / units::per_cm3},
            {"transit_hz", hz(m.budget.transit)},
            {"collisional_hz", hz(m.budget.collisional)},
            {"laser_hz", hz(m.budget.laser)},
            {"magnetic_hz", hz(m.budget.magnetic)},
            {"rydberg_rydberg_hz", hz(m.budget.rydberg_rydberg)}};
}

json derived_per_series(const ScenarioConfig& c) {
    json d = json::array();
    for (std::size_t s = 0; s < c.series.size(); ++s) {
        const Model m = at_point(c, s, c.sweep.start, [&] { return build_model(c, effective_parameters(c, s, c.sweep.start)); });
        json e = budget_json(m);
        e["label"] = c.series[s].label;
        d.push_back(e);
    }
    return d;
}

double atom_number(const Model& m) {
    const double r = 0.5 * get(m.p, "interaction_diameter_m");
    return get(m.p, "rydberg_fraction") * m.conditions.density * units::pi * r * r * m.conditions.length;
}

json sensitivity_json(const Model& m, const WeakFieldCurve& curve) {
    SensitivityReport r;
    r.photon_snr = photon_shot_noise_snr(get(m.p, "probe_power_w"), get(m.p, "quantum_efficiency"),
                                         get(m.p, "bandwidth_hz"), m.probe_wavelength());
    const double floor = noise_floor_percent(r.photon_snr, get(m.p, "signal_fraction"));
    const double n_atoms = atom_number(m);
    r.atom_shot_limit = atom_shot_noise_limit(n_atoms, get(m.p, "t2_s"), m.rf);
    json j = {{"atom_shot_limit", r.atom_shot_limit},
              {"photon_snr", r.photon_snr},
              {"noise_floor_percent", floor},
              {"atom_number", n_atoms},
              {"slope_at_zero", nullptr},
              {"min_detectable_field", nullptr}};
    // a sweep with identical endpoints has no slope
    bool spread = false;
    for (const auto& p : curve) spread = spread || p.field != curve.front().field;
    if (!spread) return j;
    j["slope_at_zero"] = slope_at_zero(curve);
    try {
        j["min_detectable_field"] = min_detectable_field(curve, floor);
    } catch (const UnmeasurableError&) {
    }
    return j;
}

// ---------------------------------------------------------------------------
// scenarios

struct PointResponse {
    double transmission{0};
    double reference{0};  // RF coupling switched off
    ProbeResponse full;
};

PointResponse respond(const Model& m) {
    PointResponse r;
    r.full = probe_response(m.scheme, m.budget, m.conditions, m.doppler);
    r.transmission = r.full.transmission;
    r.reference = m.has_rf ? probe_response(m.without_rf(), m.budget, m.conditions, m.doppler).transmission
                           : r.transmission;
    return r;
}

double delta_percent(const PointResponse& r) { return 100.0 * (r.transmission - r.reference) / r.reference; }

bool sweeps_field(const ScenarioConfig& c) { return c.sweep.parameter == "rf_field_v_per_m"; }

// Weak-field response of every series along the sweep (Figs. 3, 4b, 5 and custom).
ScenarioResult run_weak_field(const ScenarioConfig& c, unsigned threads) {
    const auto values = sweep_values(c);
    const std::size_t ns = c.series.size(), np = values.size();
    std::vector<Model> models(ns * np);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t i = 0; i < np; ++i)
            models[s * np + i] = at_point(c, s, values[i], [&] { return build_model(c, effective_parameters(c, s, values[i])); });

    std::vector<PointResponse> out(models.size());
    parallel_for(models.size(), threads, [&](std::size_t k) {
        out[k] = at_point(c, k / np, values[k % np], [&] { return respond(models[k]); });
    });

    ScenarioResult res;
    res.derived = derived_per_series(c);
    Table curves{"curves",
                 {{"series", "index"},
                  {c.sweep.parameter, unit_of(c.sweep.parameter)},
                  {"rf_rabi", "Hz"},
                  {"transmission", "1"},
                  {"delta_t", "%"},
                  {"absorption", "1/m"},
                  {"phase", "rad"}},
                 {}};
    for (std::size_t k = 0; k < models.size(); ++k) {
        const auto& m = models[k];
        const double rf = m.has_rf ? units::hertz(m.scheme.couplings[m.rf_index].rabi) : 0.0;
        curves.rows.push_back({static_cast<double>(k / np), values[k % np], rf, out[k].transmission,
                               delta_percent(out[k]), out[k].full.absorption, out[k].full.phase});
    }
    res.tables.push_back(std::move(curves));

    res.report["series"] = json::array();
    if (sweeps_field(c) && models.front().has_rf) {
        Table summary{"summary",
                      {{"series", "index"},
                       {"slope_at_zero", "%/(V/m)"},
                       {"min_detectable_field", "V/m/Hz^0.5"},
                       {"temperature", "K"},
                       {"density", "cm^-3"},
                       {"transit", "Hz"},
                       {"collisional", "Hz"}},
                      {}};
        for (std::size_t s = 0; s < ns; ++s) {
            WeakFieldCurve curve;
            for (std::size_t i = 0; i < np; ++i) curve.push_back({values[i], delta_percent(out[s * np + i])});
            const Model& m = models[s * np];
            json rep = sensitivity_json(m, curve);
            rep["label"] = c.series[s].label;
            auto num = [&](const char* key) { return rep[key].is_null() ? nan_value : rep[key].get<double>(); };
            summary.rows.push_back({static_cast<double>(s), num("slope_at_zero"), num("min_detectable_field"),
                                    m.conditions.temperature, m.conditions.density / units::per_cm3,
                                    units::hertz(m.budget.transit), units::hertz(m.budget.collisional)});
            res.report["series"].push_back(rep);
        }
        res.tables.push_back(std::move(summary));
    }
    return res;
}

SpectralTrace trace_for(const Model& m, const NumericsSpec& n, unsigned threads) {
    return doppler_averaged_trace(m.scheme, m.budget, m.conditions, m.doppler, detuning_grid(m, n), threads);
}

double offset_hz(const SpectralTrace& t, std::size_t i) {
    return units::hertz(t.detunings[i] - t.scheme.probe().detuning);
}

// Coupling-chopped signal: optical depth removed by the coupling beam,
// (alpha(Omega_c = 0) - alpha(Omega_c)) L. Stays linear in density where the
// transmission itself bottoms out.
std::vector<double> chopped_signal(const SpectralTrace& on, const SpectralTrace& off) {
    std::vector<double> d(on.absorption.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (off.absorption[i] - on.absorption[i]) * on.conditions.length;
    return d;
}

ScenarioResult run_fig2b(const ScenarioConfig& c, unsigned threads) {
    const auto values = sweep_values(c);
    ScenarioResult res;
    res.derived = derived_per_series(c);
    Table traces{"traces",
                 {{"series", "index"},
                  {c.sweep.parameter, unit_of(c.sweep.parameter)},
                  {"probe_detuning", "Hz"},
                  {"transmission", "1"},
                  {"phase", "rad"},
                  {"optical_depth", "1"},
                  {"lockin_signal", "1"}},
                 {}};
    Table split{"splitting",
                {{"series", "index"},
                 {c.sweep.parameter, unit_of(c.sweep.parameter)},
                 {"rf_rabi", "Hz"},
                 {"splitting", "Hz"},
                 {"field_from_splitting", "V/m"},
                 {"field_doppler_scaled", "V/m"}},
                {}};
    Table eit{"eit",
              {{"series", "index"},
               {"probe_detuning", "Hz"},
               {"transmission", "1"},
               {"phase", "rad"},
               {"direct_signal", "W"},
               {"homodyne_signal", "W"}},
              {}};
    res.report["series"] = json::array();

    for (std::size_t s = 0; s < c.series.size(); ++s) {
        Model base = at_point(c, s, std::nullopt, [&] { return build_model(c, effective_parameters(c, s)); });
        if (!base.has_rf) throw ConfigError("fig2b_at needs a system with an RF coupling");
        base.scheme = base.without_rf();
        const SpectralTrace t0 = at_point(c, s, std::nullopt, [&] { return trace_for(base, c.numerics, threads); });
        Model dark = base;
        dark.scheme = base.without_coupling();
        const SpectralTrace off = at_point(c, s, std::nullopt, [&] { return trace_for(dark, c.numerics, threads); });

        InterferometerConfig ifc;
        ifc.lo_signal_ratio = get(base.p, "lo_signal_ratio");
        ifc.splitter_ratio = get(base.p, "splitter_ratio");
        ifc.path_phase = get(base.p, "path_phase_rad");
        ifc.phase_stability_rms =
            phase_noise_floor(get(base.p, "path_stability_m"), get(base.p, "reference_wavelength_m")).radians;
        NoiseBudget nb;
        nb.probe_relative_intensity_noise = get(base.p, "rin_per_rthz");
        nb.detector_nep = get(base.p, "detector_nep_w_per_rthz");
        nb.signal_power = get(base.p, "probe_power_w");
        nb.quantum_efficiency = get(base.p, "quantum_efficiency");
        nb.wavelength = base.probe_wavelength();
        nb.coupling_am_noise = get(base.p, "coupling_am_noise_w_per_rthz");
        const SnrComparison snr = at_point(c, s, std::nullopt, [&] { return snr_comparison(t0, ifc, nb); });
        const auto amp = t0.amplitude();
        for (std::size_t i = 0; i < t0.detunings.size(); ++i)
            eit.rows.push_back({static_cast<double>(s), offset_hz(t0, i), t0.transmission[i], t0.phase[i],
                                nb.signal_power * t0.transmission[i],
                                nb.signal_power * homodyne_signal(amp[i], ifc)});

        json rep;
        rep["label"] = c.series[s].label;
        rep["mzi"] = {{"signal_direct", snr.signal_direct}, {"noise_direct", snr.noise_direct},
                      {"signal_mzi", snr.signal_mzi},       {"noise_mzi", snr.noise_mzi},
                      {"snr_direct", snr.snr_direct},       {"snr_mzi", snr.snr_mzi},
                      {"enhancement", snr.enhancement}};
        try {
            rep["eit_fwhm_hz"] = fwhm(t0);
        } catch (const NoPeakError&) {
            rep["eit_fwhm_hz"] = nullptr;
        }

        for (double v : values) {
            const Model m = at_point(c, s, v, [&] { return build_model(c, effective_parameters(c, s, v)); });
            const SpectralTrace t = at_point(c, s, v, [&] { return trace_for(m, c.numerics, threads); });
            // the coupling beam is chopped and the probe demodulated, so the
            // doublet is read off the chopped signal
            const auto y = chopped_signal(t, off);
            std::vector<double> x(t.detunings.size());
            for (std::size_t i = 0; i < t.detunings.size(); ++i) {
                x[i] = offset_hz(t, i);
                traces.rows.push_back({static_cast<double>(s), v, x[i], t.transmission[i], t.phase[i],
                                       t.absorption[i] * t.conditions.length, y[i]});
            }
            double sp = nan_value, field = nan_value, scaled = nan_value;
            try {
                sp = find_at_peaks(x, y).splitting;
                field = at_splitting_to_field(sp, m.rf);
                // thermal atoms put the probe-scan doublet at (k_p/k_c) times the
                // dressed splitting for counterpropagating beams
                const double kp = std::abs(m.scheme.couplings[0].wavevector);
                const double kc = std::abs(m.scheme.couplings[m.coupling_index].wavevector);
                scaled = m.doppler.method == DopplerMethod::none ? field : field * kc / kp;
            } catch (const UnresolvedSplittingError&) {
            } catch (const NoPeakError&) {
            }
            split.rows.push_back(
                {static_cast<double>(s), v, units::hertz(m.scheme.couplings[m.rf_index].rabi), sp, field, scaled});
        }
        res.report["series"].push_back(rep);
    }
    res.tables.push_back(std::move(split));
    res.tables.push_back(std::move(traces));
    res.tables.push_back(std::move(eit));
    return res;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double b = sxy / sxx;
    if (intercept) *intercept = my - b * mx;
    return b;
}

ScenarioResult run_fig4a(const ScenarioConfig& c, unsigned threads) {
    const auto values = sweep_values(c);
    const std::size_t ns = c.series.size(), np = values.size();
    std::vector<Model> models(ns * np);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t i = 0; i < np; ++i)
            models[s * np + i] = at_point(c, s, values[i], [&] { return build_model(c, effective_parameters(c, s, values[i])); });

    struct Widths {
        double thin{nan_value};
        double transmission{nan_value};
    };
    std::vector<Widths> w(models.size());
    parallel_for(models.size(), threads, [&](std::size_t k) {
        const SpectralTrace t = at_point(c, k / np, values[k % np], [&] { return trace_for(models[k], c.numerics, 1); });
        std::vector<double> x(t.detunings.size()), thin(t.detunings.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = units::hertz(t.detunings[i]);
            thin[i] = -t.absorption[i];
        }
        try {
            w[k].thin = fwhm(x, thin);
        } catch (const NoPeakError&) {
        }
        try {
            w[k].transmission = fwhm(x, t.transmission);
        } catch (const NoPeakError&) {
        }
    });

    ScenarioResult res;
    res.derived = derived_per_series(c);
    Table table{"fwhm",
                {{"series", "index"},
                 {"density", "cm^-3"},
                 {"collisional", "Hz"},
                 {"fwhm", "MHz"},
                 {"fwhm_transmission", "MHz"}},
                {}};
    res.report["series"] = json::array();
    for (std::size_t s = 0; s < ns; ++s) {
        std::vector<double> rho, thin, tr;
        for (std::size_t i = 0; i < np; ++i) {
            const Model& m = models[s * np + i];
            const double d = m.conditions.density / units::per_cm3;
            const Widths& x = w[s * np + i];
            table.rows.push_back({static_cast<double>(s), d, units::hertz(m.budget.collisional), x.thin * 1e-6,
                                  x.transmission * 1e-6});
            if (std::isfinite(x.thin) && std::isfinite(x.transmission)) {
                rho.push_back(d);
                thin.push_back(x.thin * 1e-6);
                tr.push_back(x.transmission * 1e-6);
            }
        }
        json rep;
        rep["label"] = c.series[s].label;
        const Model& m0 = models[s * np];
        GasParams gas;
        gas.polarizability = get(m0.p, "polarizability_a03");
        gas.s_wave_length = get(m0.p, "scattering_length_a0");
        gas.effective_n = get(m0.p, "effective_n");
        rep["model_coefficient_cm3_mhz"] =
            elastic_coefficient(gas, m0.conditions.temperature) + inelastic_coefficient(gas);
        if (rho.size() >= 2) {
            double b0 = 0, b1 = 0;
            rep["fwhm_slope_cm3_mhz"] = fit_slope(rho, thin, &b0);
            rep["fwhm_intercept_mhz"] = b0;
            rep["fwhm_transmission_slope_cm3_mhz"] = fit_slope(rho, tr, &b1);
            rep["fwhm_transmission_intercept_mhz"] = b1;
        } else {
            rep["fwhm_slope_cm3_mhz"] = nullptr;
            rep["fwhm_transmission_slope_cm3_mhz"] = nullptr;
        }
        res.report["series"].push_back(rep);
    }
    res.tables.push_back(std::move(table));
    return res;
}


ScenarioResult run_fig6(const ScenarioConfig& c, unsigned threads) {
    if (c.system != SystemKind::cs_5level) throw ConfigError("fig6_three_photon requires system cs_5level");
    ScenarioResult res;
    res.derived = derived_per_series(c);
    Table traces{"traces",
                 {{"series", "index"},
                  {"rf_rabi", "Hz"},
                  {"probe_offset", "Hz"},
                  {"transmission", "1"},
                  {"signal", "1"}},
                 {}};
    Table split{"splitting",
                {{"series", "index"}, {"rf_rabi", "Hz"}, {"rf_field", "V/m"}, {"splitting", "Hz"}},
                {}};

    // the coupling-off background does not depend on the RF drive
    const Model ref = at_point(c, 0, std::nullopt, [&] { return build_model(c, effective_parameters(c, 0)); });
    const SpectralTrace off = at_point(c, 0, std::nullopt, [&] {
        return doppler_averaged_trace(ref.without_coupling(), ref.budget, ref.conditions, ref.doppler,
                                      detuning_grid(ref, c.numerics), threads);
    });

    std::vector<double> rabis, splittings;
    for (std::size_t s = 0; s < c.series.size(); ++s) {
        const Model m = at_point(c, s, std::nullopt, [&] { return build_model(c, effective_parameters(c, s)); });
        const SpectralTrace on = at_point(c, s, std::nullopt, [&] { return trace_for(m, c.numerics, threads); });
        const auto sig = chopped_signal(on, off);
        const double rf_hz = units::hertz(m.scheme.couplings[m.rf_index].rabi);
        std::vector<double> x(sig.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = offset_hz(on, i);
            traces.rows.push_back({static_cast<double>(s), rf_hz, x[i], on.transmission[i], sig[i]});
        }
        double sp = nan_value;
        try {
            sp = find_at_peaks(x, sig).splitting;
        } catch (const UnresolvedSplittingError&) {
        } catch (const NoPeakError&) {
        }
        split.rows.push_back({static_cast<double>(s), rf_hz, field_from_rf_rabi(units::angular(rf_hz), m.rf), sp});
        if (std::isfinite(sp)) {
            rabis.push_back(rf_hz);
            splittings.push_back(sp);
        }
    }

    // on-resonance response against the RF field, first series as the base
    const auto values = sweep_values(c);
    Table response{"response",
                   {{c.sweep.parameter, unit_of(c.sweep.parameter)},
                    {"transmission", "1"},
                    {"delta_t", "%"},
                    {"signal", "1"},
                    {"delta_signal", "%"}},
                   {}};
    std::vector<Model> models(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        models[i] = at_point(c, 0, values[i], [&] { return build_model(c, effective_parameters(c, 0, values[i])); });
    struct Point {
        double t{0}, t0{0}, bg{0};
    };
    std::vector<Point> pts(values.size());
    parallel_for(values.size(), threads, [&](std::size_t i) {
        pts[i] = at_point(c, 0, values[i], [&] {
            const Model& m = models[i];
            Point p;
            p.t = probe_response(m.scheme, m.budget, m.conditions, m.doppler).transmission;
            p.t0 = probe_response(m.without_rf(), m.budget, m.conditions, m.doppler).transmission;
            p.bg = probe_response(m.without_coupling(), m.budget, m.conditions, m.doppler).transmission;
            return p;
        });
    });
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Point& p = pts[i];
        const double sig = p.t - p.bg, sig0 = p.t0 - p.bg;
        response.rows.push_back(
            {values[i], p.t, 100.0 * (p.t - p.t0) / p.t0, sig, sig0 != 0.0 ? 100.0 * (sig - sig0) / sig0 : nan_value});
    }

    res.report["field_at_1khz_rabi_v_per_m"] = field_from_rf_rabi(units::angular(1e3), ref.rf);
    res.report["resolved"] = rabis.size();
    if (rabis.size() >= 2) {
        double b0 = 0;
        res.report["splitting_per_rabi"] = fit_slope(rabis, splittings, &b0);
        res.report["splitting_intercept_hz"] = b0;
    }
    res.tables.push_back(std::move(split));
    res.tables.push_back(std::move(traces));
    res.tables.push_back(std::move(response));
    return res;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, unsigned threads) {
    validate(config);
    if (threads == 0) threads = 1;
    ScenarioResult r;
    switch (config.scenario) {
        case ScenarioKind::fig2b_at: r = run_fig2b(config, threads); break;
        case ScenarioKind::fig4a_fwhm_vs_density: r = run_fig4a(config, threads); break;
        case ScenarioKind::fig6_three_photon: r = run_fig6(config, threads); break;
        case ScenarioKind::fig3_power:
        case ScenarioKind::fig4b_density_response:
        case ScenarioKind::fig5_transit:
        case ScenarioKind::custom: r = run_weak_field(config, threads); break;
    }
    return r;
}

std::vector<std::filesystem::path> write_outputs(const ScenarioConfig& config, const ScenarioResult& result,
                                                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string());
    const std::string name = to_string(config.scenario);
    const CsvHeader header{name, RYDSENSE_VERSION, config_hash(config)};

    // render everything first so a bad table leaves no partial output
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    json sidecar;
    sidecar["scenario"] = name;
    sidecar["version"] = RYDSENSE_VERSION;
    sidecar["config_hash"] = header.config_hash;
    sidecar["config"] = to_json(config);
    sidecar["derived"] = result.derived;
    sidecar["report"] = result.report;
    sidecar["tables"] = json::object();
    for (const auto& t : result.tables) {
        const std::string file = name + "_" + t.name + ".csv";
        files.emplace_back(dir / file, render_csv(t, header));
        sidecar["tables"][t.name] = file;
    }
    files.emplace_back(dir / (name + ".json"), sidecar.dump(2) + "\n");

    std::vector<std::filesystem::path> written;
    for (const auto& [path, content] : files) {
        write_file_atomic(path, content);
        written.push_back(path);
    }
    return written;
}

}  // namespace rydsense
