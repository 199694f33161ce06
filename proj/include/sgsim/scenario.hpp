#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgsim/attack.hpp"
#include "sgsim/control.hpp"
#include "sgsim/detectors.hpp"
#include "sgsim/sg_model.hpp"

namespace sgsim {

// ---------- scenario configuration ----------
//
// Everything a run needs lives in one JSON document. Every field name carries
// its unit; flows are kg/s internally with lb/s accepted on attack values via
// an explicit "unit" tag. Unknown fields anywhere in the document are
// rejected so typos cannot silently fall back to defaults. Only "seed" is
// mandatory; all other fields default to the reference configuration.

struct SensorSuiteConfig {
    int n_lt = 3, n_ft = 2, n_st = 2;
    double sigma_lt_pct = 0.1;   // % of narrow-range span
    double sigma_ft_kg_s = 2.4;  // 0.5% of nominal feed flow
    double sigma_st_kg_s = 2.4;
};

struct KfConfig {
    double q_ws = 0.05;   // (kg/s)^2 random-walk drive, flow state
    double q_z = 1e-5;    // m^2, level state
    double r_ws = 5.76;   // (kg/s)^2 = sigma_ft^2
    double r_z = 2.5e-5;  // m^2 = (0.1% of a 5 m span)^2
    int burn_in_steps = 10;
};

struct DetectorConfig {
    bool pbd_enabled = true;
    double pbd_tol_rel = 1e-2;
    bool osv_enabled = true;
    OsvTolerances osv;
    bool np_enabled = true;
    NpThresholds np;
    int np_lower_hold_steps = 50;
    KfConfig kf;
    bool svm_enabled = false;
    std::string svm_model_path;   // resolved against the scenario file's directory
    bool qsvm_enabled = false;
    std::string qsvm_model_path;
};

struct OutputConfig {
    std::string telemetry_csv;  // single-run per-step log; empty = none
    std::string results_csv;    // batch aggregate; empty = none
    std::string telemetry_dir;  // batch per-case logs; empty = none
};

struct Scenario {
    std::string id;  // row label; defaults to the file stem
    std::uint64_t seed = 0;
    double dt_s = 0.1;
    double max_runtime_s = 180.0;
    std::string initial_condition = "nominal_full_power";
    double initial_level_offset_pct = 0.0;

    SgParams plant;
    ClosureConfig closure;
    double core_power_w = 873'888'000.0; // sg_power(480 kg/s) at reference params

    SglcsController controller;
    SensorSuiteConfig sensors;
    TripConfig trip;

    std::vector<AttackSpec> attacks;
    DetectorConfig detectors;
    OutputConfig output;
};

// Parse + validate a scenario document. base_dir anchors relative model
// paths (pass the scenario file's directory, or "." for inline text).
// Throws std::invalid_argument with a field-path diagnostic on any schema,
// unit, or consistency violation.
Scenario parse_scenario_text(const std::string& json_text, const std::string& base_dir);

Scenario load_scenario_file(const std::string& path);

// Parse with numeric overrides applied first. Paths address existing values
// in the document ("attacks/0/value", "control/level_pi/kp"); overriding a
// path absent from the document is an error, so a design matrix cannot
// silently introduce fields.
Scenario parse_scenario_with_overrides(
    const std::string& json_text, const std::string& base_dir,
    const std::vector<std::pair<std::string, double>>& overrides);

// Semantic cross-checks (ranges, channel counts, attack schedule, model-file
// existence). parse_* call this; exposed for programmatically built configs.
void validate_scenario(const Scenario& s);

// The named initial condition: flows balanced at the implied steam rate,
// valve settled at its matching position, level at setpoint plus offset.
PlantState initial_plant_state(const Scenario& s);

} // namespace sgsim
