#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydsense/csv.hpp"
#include "rydsense/spectroscopy.hpp"

namespace rydsense {

enum class ScenarioKind {
    fig2b_at,
    fig3_power,
    fig4a_fwhm_vs_density,
    fig4b_density_response,
    fig5_transit,
    fig6_three_photon,
    custom,
};

enum class SystemKind { cs_3level, cs_4level, cs_5level };

std::string to_string(ScenarioKind k);
std::string to_string(SystemKind k);
ScenarioKind parse_scenario_kind(const std::string& name);  // ConfigError if unknown
SystemKind parse_system_kind(const std::string& name);
const std::vector<ScenarioKind>& all_scenarios();

// Flat physical parameters. Names carry their unit; null marks a value that
// is derived (density from temperature, transit from beam size, ...).
struct ParameterSpec {
    std::string name;
    std::optional<double> default_value;
    bool nullable{false};
    std::string description;
};

const std::vector<ParameterSpec>& parameter_registry();
const ParameterSpec& parameter_spec(const std::string& name);  // ConfigError if unknown

using ParameterSet = std::map<std::string, std::optional<double>>;

ParameterSet default_parameters();

struct SeriesSpec {
    std::string label;
    ParameterSet parameters;  // overrides on top of the scenario parameters
};

struct SweepSpec {
    std::string parameter{"rf_field_v_per_m"};
    double start{0.0};
    double stop{0.1};
    std::size_t points{21};
};

struct NumericsSpec {
    DopplerMethod doppler_method{DopplerMethod::analytic};
    std::size_t velocity_points{default_velocity_points};
    double velocity_span{default_velocity_span};
    std::size_t detuning_points{401};
    double detuning_span_hz{10e6};  // scan covers center +/- span
};

struct ScenarioConfig {
    ScenarioKind scenario{ScenarioKind::custom};
    SystemKind system{SystemKind::cs_4level};
    ParameterSet parameters;
    std::vector<SeriesSpec> series;
    SweepSpec sweep;
    NumericsSpec numerics;
    bool doppler_free{false};
};

void validate(const ScenarioConfig& c);

ScenarioConfig preset(ScenarioKind kind);

// Preset for the document's "scenario" key with the document's overrides
// applied. Unknown keys and malformed values raise ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

// Fully resolved configuration, every default expanded.
nlohmann::json to_json(const ScenarioConfig& c);

// FNV-1a 64-bit hash of the compact resolved JSON, 16 hex digits.
std::string config_hash(const ScenarioConfig& c);

// Parameters for one series, with the sweep axis set to `sweep_value` when given.
ParameterSet effective_parameters(const ScenarioConfig& c, std::size_t series,
                                  std::optional<double> sweep_value = std::nullopt);

struct ScenarioResult {
    std::vector<Table> tables;  // in output order
    nlohmann::json derived;     // per-series budget and conditions
    nlohmann::json report;
};

ScenarioResult run_scenario(const ScenarioConfig& config, unsigned threads = 1);

// <dir>/<scenario>_<table>.csv for every table plus <dir>/<scenario>.json.
// Returns the written paths in order.
std::vector<std::filesystem::path> write_outputs(const ScenarioConfig& config, const ScenarioResult& result,
                                                 const std::filesystem::path& dir);

}  // namespace rydsense
