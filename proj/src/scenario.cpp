#include "sgsim/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sgsim/units.hpp"

namespace sgsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
    throw std::invalid_argument("scenario: " + ctx + ": " + msg);
}

const json& member(const json& obj, const std::string& key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ctx, "missing required field '" + key + "'");
    return *it;
}

void expect_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) fail(ctx, "expected an object");
}

// Strictness backbone: every object reader enumerates what it accepts.
void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known) fail(ctx, "unknown field '" + item.key() + "'");
    }
}

double num(const json& obj, const std::string& key, const std::string& ctx) {
    const json& v = member(obj, key, ctx);
    if (!v.is_number()) fail(ctx, "field '" + key + "' must be a number");
    return v.get<double>();
}

double num_or(const json& obj, const std::string& key, double dflt, const std::string& ctx) {
    if (!obj.contains(key)) return dflt;
    return num(obj, key, ctx);
}

int integer_or(const json& obj, const std::string& key, int dflt, const std::string& ctx) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(ctx, "field '" + key + "' must be an integer");
    return v.get<int>();
}

bool boolean_or(const json& obj, const std::string& key, bool dflt, const std::string& ctx) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(ctx, "field '" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string text_or(const json& obj, const std::string& key, const std::string& dflt,
                    const std::string& ctx) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(ctx, "field '" + key + "' must be a string");
    return v.get<std::string>();
}

void parse_plant(const json& j, Scenario& s) {
    const std::string ctx = "plant";
    expect_object(j, ctx);
    reject_unknown(j,
                   {"channel_height_m", "flow_area_m2", "wetted_perimeter_m",
                    "heat_transfer_w_m2k", "cs_j_kgk", "hfg_j_kg", "exit_quality", "tp_k",
                    "tsat_k", "ts_in_k", "rho_f_kg_m3", "valve_tau_s", "ws_max_kg_s",
                    "level_span_low_m", "level_span_high_m", "core_power_w"},
                   ctx);
    SgParams& p = s.plant;
    p.channel_height_m = num_or(j, "channel_height_m", p.channel_height_m, ctx);
    p.flow_area_m2 = num_or(j, "flow_area_m2", p.flow_area_m2, ctx);
    p.wetted_perimeter_m = num_or(j, "wetted_perimeter_m", p.wetted_perimeter_m, ctx);
    p.heat_transfer_w_m2k = num_or(j, "heat_transfer_w_m2k", p.heat_transfer_w_m2k, ctx);
    p.cs_j_kgk = num_or(j, "cs_j_kgk", p.cs_j_kgk, ctx);
    p.hfg_j_kg = num_or(j, "hfg_j_kg", p.hfg_j_kg, ctx);
    p.exit_quality = num_or(j, "exit_quality", p.exit_quality, ctx);
    p.tp_k = num_or(j, "tp_k", p.tp_k, ctx);
    p.tsat_k = num_or(j, "tsat_k", p.tsat_k, ctx);
    p.ts_in_k = num_or(j, "ts_in_k", p.ts_in_k, ctx);
    p.rho_f_kg_m3 = num_or(j, "rho_f_kg_m3", p.rho_f_kg_m3, ctx);
    s.closure.valve_tau_s = num_or(j, "valve_tau_s", s.closure.valve_tau_s, ctx);
    s.closure.ws_max_kg_s = num_or(j, "ws_max_kg_s", s.closure.ws_max_kg_s, ctx);
    s.closure.span_low_m = num_or(j, "level_span_low_m", s.closure.span_low_m, ctx);
    s.closure.span_high_m = num_or(j, "level_span_high_m", s.closure.span_high_m, ctx);
    s.core_power_w = num_or(j, "core_power_w", s.core_power_w, ctx);
}

void parse_pi(const json& j, PiController& c, const std::string& ctx) {
    expect_object(j, ctx);
    reject_unknown(j, {"kp", "tau_i_s", "out_min", "out_max"}, ctx);
    c.kp = num_or(j, "kp", c.kp, ctx);
    c.tau_i_s = num_or(j, "tau_i_s", c.tau_i_s, ctx);
    c.out_min = num_or(j, "out_min", c.out_min, ctx);
    c.out_max = num_or(j, "out_max", c.out_max, ctx);
}

void parse_control(const json& j, Scenario& s) {
    const std::string ctx = "control";
    expect_object(j, ctx);
    reject_unknown(j,
                   {"level_setpoint_pct", "valve_bias", "nominal_ws_kg_s", "level_pi",
                    "flow_pi", "sensors", "trip"},
                   ctx);
    SglcsController& c = s.controller;
    c.level_setpoint_pct = num_or(j, "level_setpoint_pct", c.level_setpoint_pct, ctx);
    c.valve_bias = num_or(j, "valve_bias", c.valve_bias, ctx);
    c.nominal_ws_kg_s = num_or(j, "nominal_ws_kg_s", c.nominal_ws_kg_s, ctx);
    if (j.contains("level_pi")) parse_pi(j.at("level_pi"), c.level_pi, ctx + "/level_pi");
    if (j.contains("flow_pi")) parse_pi(j.at("flow_pi"), c.flow_pi, ctx + "/flow_pi");

    if (j.contains("sensors")) {
        const std::string sctx = ctx + "/sensors";
        const json& js = j.at("sensors");
        expect_object(js, sctx);
        reject_unknown(js, {"n_lt", "n_ft", "n_st", "sigma_lt_pct", "sigma_ft_kg_s",
                            "sigma_st_kg_s"},
                       sctx);
        SensorSuiteConfig& ss = s.sensors;
        ss.n_lt = integer_or(js, "n_lt", ss.n_lt, sctx);
        ss.n_ft = integer_or(js, "n_ft", ss.n_ft, sctx);
        ss.n_st = integer_or(js, "n_st", ss.n_st, sctx);
        ss.sigma_lt_pct = num_or(js, "sigma_lt_pct", ss.sigma_lt_pct, sctx);
        ss.sigma_ft_kg_s = num_or(js, "sigma_ft_kg_s", ss.sigma_ft_kg_s, sctx);
        ss.sigma_st_kg_s = num_or(js, "sigma_st_kg_s", ss.sigma_st_kg_s, sctx);
    }
    if (j.contains("trip")) {
        const std::string tctx = ctx + "/trip";
        const json& jt = j.at("trip");
        expect_object(jt, tctx);
        reject_unknown(jt, {"level_low_pct", "level_high_pct"}, tctx);
        s.trip.level_low_pct = num_or(jt, "level_low_pct", s.trip.level_low_pct, tctx);
        s.trip.level_high_pct = num_or(jt, "level_high_pct", s.trip.level_high_pct, tctx);
    }
}

SensorKind sensor_kind_from(const std::string& k, const std::string& ctx) {
    if (k == "lt") return SensorKind::LT;
    if (k == "ft") return SensorKind::FT;
    if (k == "st") return SensorKind::ST;
    fail(ctx, "unknown sensor kind '" + k + "' (expected lt|ft|st)");
}

ControllerParamId param_from(const std::string& p, const std::string& ctx) {
    if (p == "level_kp") return ControllerParamId::LevelKp;
    if (p == "level_tau_i") return ControllerParamId::LevelTau;
    if (p == "flow_kp") return ControllerParamId::FlowKp;
    if (p == "flow_tau_i") return ControllerParamId::FlowTau;
    if (p == "setpoint") return ControllerParamId::Setpoint;
    fail(ctx, "unknown controller parameter '" + p + "'");
}

// The unit tag is mandatory wherever a value is given, and its admissible
// set depends on what the value lands on. Flow spoofs arrive in kg_s or
// lb_s; everything else has exactly one legal unit, which documents itself.
void check_unit(const std::string& unit, const AttackTarget& t, const std::string& ctx) {
    auto expect = [&](std::initializer_list<const char*> ok) {
        for (const char* u : ok)
            if (unit == u) return;
        std::string allowed;
        for (const char* u : ok) allowed += std::string(allowed.empty() ? "" : "|") + u;
        fail(ctx, "unit '" + unit + "' invalid for target " + t.describe() +
                      " (expected " + allowed + ")");
    };
    switch (t.type) {
        case TargetType::Sensor:
            if (t.kind == SensorKind::LT) expect({"pct"});
            else expect({"kg_s", "lb_s"});
            break;
        case TargetType::ValveCommand:
            expect({"fraction"});
            break;
        case TargetType::ControllerParam:
            switch (t.param) {
                case ControllerParamId::LevelKp:
                case ControllerParamId::FlowKp: expect({"gain"}); break;
                case ControllerParamId::LevelTau:
                case ControllerParamId::FlowTau: expect({"s"}); break;
                case ControllerParamId::Setpoint: expect({"pct"}); break;
            }
            break;
    }
}

AttackSpec parse_attack(const json& j, size_t idx) {
    const std::string ctx = "attacks/" + std::to_string(idx);
    expect_object(j, ctx);
    reject_unknown(
        j, {"class", "target", "value", "unit", "noise_sigma", "delay_s", "t_start_s", "t_end_s"},
        ctx);

    AttackSpec a;
    const std::string cls = member(j, "class", ctx).get<std::string>();
    if (cls == "ci") a.cls = AttackClass::CommandInject;
    else if (cls == "dos") a.cls = AttackClass::DenialOfService;
    else if (cls == "mim") a.cls = AttackClass::ManInTheMiddle;
    else fail(ctx, "unknown attack class '" + cls + "' (expected ci|dos|mim)");

    const json& jt = member(j, "target", ctx);
    const std::string tctx = ctx + "/target";
    expect_object(jt, tctx);
    const std::string type = member(jt, "type", tctx).get<std::string>();
    if (type == "sensor") {
        reject_unknown(jt, {"type", "kind", "id"}, tctx);
        a.target.type = TargetType::Sensor;
        a.target.kind = sensor_kind_from(member(jt, "kind", tctx).get<std::string>(), tctx);
        a.target.channel_id = member(jt, "id", tctx).get<int>();
    } else if (type == "valve_command") {
        reject_unknown(jt, {"type"}, tctx);
        a.target.type = TargetType::ValveCommand;
    } else if (type == "controller_param") {
        reject_unknown(jt, {"type", "param"}, tctx);
        a.target.type = TargetType::ControllerParam;
        a.target.param = param_from(member(jt, "param", tctx).get<std::string>(), tctx);
    } else {
        fail(tctx, "unknown target type '" + type + "'");
    }

    a.t_start_s = num(j, "t_start_s", ctx);
    if (j.contains("t_end_s")) a.t_end_s = num(j, "t_end_s", ctx);

    const bool needs_value = a.cls != AttackClass::DenialOfService;
    if (needs_value) {
        double value = num(j, "value", ctx);
        double sigma = num_or(j, "noise_sigma", 0.0, ctx);
        const std::string unit = member(j, "unit", ctx).get<std::string>();
        check_unit(unit, a.target, ctx);
        if (unit == "lb_s") {
            value = lb_s_to_kg_s(value);
            sigma = lb_s_to_kg_s(sigma);
        }
        a.spoof_value = value;
        a.noise_sigma = sigma;
        if (a.cls == AttackClass::CommandInject && j.contains("noise_sigma"))
            fail(ctx, "noise_sigma applies to mim attacks only");
    } else {
        if (j.contains("value") || j.contains("unit") || j.contains("noise_sigma"))
            fail(ctx, "dos attacks hold stale values; value/unit/noise_sigma not allowed");
        a.delay_s = num(j, "delay_s", ctx);
    }
    if (a.cls != AttackClass::DenialOfService && j.contains("delay_s"))
        fail(ctx, "delay_s applies to dos attacks only");
    return a;
}

std::string resolve_path(const std::string& base_dir, const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute() || base_dir.empty()) return rel;
    return (std::filesystem::path(base_dir) / p).string();
}

void parse_detectors(const json& j, Scenario& s, const std::string& base_dir) {
    const std::string ctx = "detectors";
    expect_object(j, ctx);
    reject_unknown(j, {"pbd", "osv", "np", "kf", "svm", "qsvm"}, ctx);
    DetectorConfig& d = s.detectors;

    if (j.contains("pbd")) {
        const json& jp = j.at("pbd");
        const std::string c = ctx + "/pbd";
        expect_object(jp, c);
        reject_unknown(jp, {"enabled", "tol_rel"}, c);
        d.pbd_enabled = boolean_or(jp, "enabled", d.pbd_enabled, c);
        d.pbd_tol_rel = num_or(jp, "tol_rel", d.pbd_tol_rel, c);
    }
    if (j.contains("osv")) {
        const json& jo = j.at("osv");
        const std::string c = ctx + "/osv";
        expect_object(jo, c);
        reject_unknown(jo, {"enabled", "tau_lt_pct", "tau_ft_kg_s", "tau_st_kg_s"}, c);
        d.osv_enabled = boolean_or(jo, "enabled", d.osv_enabled, c);
        d.osv.tau_lt_pct = num_or(jo, "tau_lt_pct", d.osv.tau_lt_pct, c);
        d.osv.tau_ft_kg_s = num_or(jo, "tau_ft_kg_s", d.osv.tau_ft_kg_s, c);
        d.osv.tau_st_kg_s = num_or(jo, "tau_st_kg_s", d.osv.tau_st_kg_s, c);
    }
    if (j.contains("np")) {
        const json& jn = j.at("np");
        const std::string c = ctx + "/np";
        expect_object(jn, c);
        reject_unknown(jn, {"enabled", "window", "eta_lower", "eta_upper", "lower_hold_steps"}, c);
        d.np_enabled = boolean_or(jn, "enabled", d.np_enabled, c);
        d.np.window = integer_or(jn, "window", d.np.window, c);
        d.np.eta_lower = num_or(jn, "eta_lower", d.np.eta_lower, c);
        d.np.eta_upper = num_or(jn, "eta_upper", d.np.eta_upper, c);
        d.np_lower_hold_steps = integer_or(jn, "lower_hold_steps", d.np_lower_hold_steps, c);
    }
    if (j.contains("kf")) {
        const json& jk = j.at("kf");
        const std::string c = ctx + "/kf";
        expect_object(jk, c);
        reject_unknown(jk, {"q_ws", "q_z", "r_ws", "r_z", "burn_in_steps"}, c);
        d.kf.q_ws = num_or(jk, "q_ws", d.kf.q_ws, c);
        d.kf.q_z = num_or(jk, "q_z", d.kf.q_z, c);
        d.kf.r_ws = num_or(jk, "r_ws", d.kf.r_ws, c);
        d.kf.r_z = num_or(jk, "r_z", d.kf.r_z, c);
        d.kf.burn_in_steps = integer_or(jk, "burn_in_steps", d.kf.burn_in_steps, c);
    }
    auto parse_model = [&](const char* key, bool& enabled, std::string& path) {
        if (!j.contains(key)) return;
        const json& jm = j.at(key);
        const std::string c = ctx + "/" + key;
        expect_object(jm, c);
        reject_unknown(jm, {"enabled", "model"}, c);
        enabled = boolean_or(jm, "enabled", enabled, c);
        const std::string rel = text_or(jm, "model", "", c);
        if (!rel.empty()) path = resolve_path(base_dir, rel);
        if (enabled && path.empty()) fail(c, "enabled but no model file given");
    };
    parse_model("svm", d.svm_enabled, d.svm_model_path);
    parse_model("qsvm", d.qsvm_enabled, d.qsvm_model_path);
}

void parse_output(const json& j, Scenario& s) {
    const std::string ctx = "output";
    expect_object(j, ctx);
    reject_unknown(j, {"telemetry_csv", "results_csv", "telemetry_dir"}, ctx);
    s.output.telemetry_csv = text_or(j, "telemetry_csv", "", ctx);
    s.output.results_csv = text_or(j, "results_csv", "", ctx);
    s.output.telemetry_dir = text_or(j, "telemetry_dir", "", ctx);
}

Scenario parse_document(const json& doc, const std::string& base_dir) {
    const std::string ctx = "top-level";
    expect_object(doc, ctx);
    reject_unknown(doc,
                   {"id", "seed", "dt_s", "max_runtime_s", "initial_condition",
                    "initial_level_offset_pct", "plant", "control", "attacks", "detectors",
                    "output"},
                   ctx);

    Scenario s;
    const json& jseed = member(doc, "seed", ctx);
    if (!jseed.is_number_unsigned())
        fail(ctx, "field 'seed' must be a non-negative integer");
    s.seed = jseed.get<std::uint64_t>();

    s.id = text_or(doc, "id", "", ctx);
    s.dt_s = num_or(doc, "dt_s", s.dt_s, ctx);
    s.max_runtime_s = num_or(doc, "max_runtime_s", s.max_runtime_s, ctx);
    s.initial_condition = text_or(doc, "initial_condition", s.initial_condition, ctx);
    s.initial_level_offset_pct =
        num_or(doc, "initial_level_offset_pct", s.initial_level_offset_pct, ctx);

    if (doc.contains("plant")) parse_plant(doc.at("plant"), s);
    if (doc.contains("control")) parse_control(doc.at("control"), s);
    if (doc.contains("attacks")) {
        const json& ja = doc.at("attacks");
        if (!ja.is_array()) fail(ctx, "field 'attacks' must be an array");
        for (size_t i = 0; i < ja.size(); ++i) s.attacks.push_back(parse_attack(ja.at(i), i));
    }
    if (doc.contains("detectors")) parse_detectors(doc.at("detectors"), s, base_dir);
    if (doc.contains("output")) parse_output(doc.at("output"), s);

    s.trip.max_runtime_s = s.max_runtime_s;
    validate_scenario(s);
    return s;
}

json parse_json_text(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw std::invalid_argument("scenario: document is not valid JSON");
    return doc;
}

} // namespace

Scenario parse_scenario_text(const std::string& json_text, const std::string& base_dir) {
    return parse_document(parse_json_text(json_text), base_dir);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario s = parse_scenario_text(buf.str(), std::filesystem::path(path).parent_path().string());
    if (s.id.empty()) s.id = std::filesystem::path(path).stem().string();
    return s;
}

Scenario parse_scenario_with_overrides(
    const std::string& json_text, const std::string& base_dir,
    const std::vector<std::pair<std::string, double>>& overrides) {
    json doc = parse_json_text(json_text);
    for (const auto& [path, value] : overrides) {
        std::string ptr = path.empty() || path[0] == '/' ? path : "/" + path;
        json::json_pointer jp;
        try {
            jp = json::json_pointer(ptr);
        } catch (const json::exception&) {
            throw std::invalid_argument("scenario: bad override path '" + path + "'");
        }
        if (!doc.contains(jp))
            throw std::invalid_argument("scenario: override path '" + path +
                                        "' not present in document");
        doc[jp] = value;
    }
    return parse_document(doc, base_dir);
}

void validate_scenario(const Scenario& s) {
    auto fail_if = [](bool bad, const std::string& msg) {
        if (bad) throw std::invalid_argument("scenario: " + msg);
    };

    fail_if(!(s.dt_s > 0.0), "dt_s must be > 0");
    fail_if(!(s.max_runtime_s > 0.0), "max_runtime_s must be > 0");
    fail_if(s.initial_condition != "nominal_full_power",
            "unknown initial_condition '" + s.initial_condition + "'");

    validate_sg_params(s.plant);
    fail_if(!(s.closure.valve_tau_s >= 0.0), "plant.valve_tau_s must be >= 0");
    fail_if(!(s.closure.ws_max_kg_s > 0.0), "plant.ws_max_kg_s must be > 0");
    fail_if(!(s.closure.span_low_m < s.closure.span_high_m),
            "plant level span must have low < high");
    fail_if(s.closure.span_low_m < 0.0 || s.closure.span_high_m > s.plant.channel_height_m,
            "plant level span must lie within [0, channel height]");
    fail_if(!(s.core_power_w > 0.0), "plant.core_power_w must be > 0");

    const SglcsController& c = s.controller;
    fail_if(!(c.level_pi.kp > 0.0 && c.level_pi.tau_i_s > 0.0), "level_pi needs kp > 0, tau_i_s > 0");
    fail_if(!(c.flow_pi.kp > 0.0 && c.flow_pi.tau_i_s > 0.0), "flow_pi needs kp > 0, tau_i_s > 0");
    fail_if(!(c.level_pi.out_min < c.level_pi.out_max), "level_pi clamp bounds inverted");
    fail_if(!(c.flow_pi.out_min < c.flow_pi.out_max), "flow_pi clamp bounds inverted");
    fail_if(!(c.valve_bias >= 0.0 && c.valve_bias <= 1.0), "control.valve_bias must be in [0,1]");
    fail_if(!(c.nominal_ws_kg_s > 0.0), "control.nominal_ws_kg_s must be > 0");

    const SensorSuiteConfig& ss = s.sensors;
    fail_if(ss.n_lt < 3, "need at least 3 level channels (controller reads channel 3)");
    fail_if(ss.n_ft < 2 || ss.n_st < 2, "need at least 2 channels each of ft and st");
    fail_if(ss.n_lt > 16 || ss.n_ft > 16 || ss.n_st > 16, "channel counts capped at 16");
    fail_if(ss.sigma_lt_pct < 0.0 || ss.sigma_ft_kg_s < 0.0 || ss.sigma_st_kg_s < 0.0,
            "sensor noise sigmas must be >= 0");

    fail_if(!(s.trip.level_low_pct < s.trip.level_high_pct), "trip band inverted");
    const double sp = c.level_setpoint_pct + s.initial_level_offset_pct;
    fail_if(!(sp > s.trip.level_low_pct && sp < s.trip.level_high_pct),
            "initial level must start inside the trip band");

    // initial condition feasibility: balanced flows within valve authority,
    // starting level inside the instrument span and the channel
    const double ws0 = implied_flowrate(s.core_power_w, s.plant);
    fail_if(!(ws0 > 0.0 && ws0 < s.closure.ws_max_kg_s),
            "implied nominal feed flow must lie within (0, ws_max)");
    const double z0 = z0_from_level(sp, s.closure);
    fail_if(!(z0 > 0.0 && z0 < s.plant.channel_height_m),
            "initial level maps outside the heated channel");

    const DetectorConfig& d = s.detectors;
    fail_if(!(d.pbd_tol_rel > 0.0), "detectors.pbd.tol_rel must be > 0");
    fail_if(!(d.osv.tau_lt_pct > 0.0 && d.osv.tau_ft_kg_s > 0.0 && d.osv.tau_st_kg_s > 0.0),
            "detectors.osv tolerances must be > 0");
    fail_if(d.np.window < 2, "detectors.np.window must be >= 2");
    fail_if(!(d.np.eta_lower >= 0.0 && d.np.eta_upper > d.np.eta_lower),
            "detectors.np thresholds need 0 <= eta_lower < eta_upper");
    fail_if(d.np_lower_hold_steps < 1, "detectors.np.lower_hold_steps must be >= 1");
    fail_if(!(d.kf.q_ws > 0.0 && d.kf.q_z > 0.0 && d.kf.r_ws > 0.0 && d.kf.r_z > 0.0),
            "detectors.kf covariances must be > 0");
    fail_if(d.kf.burn_in_steps < 0, "detectors.kf.burn_in_steps must be >= 0");

    auto check_model = [&](bool enabled, const std::string& path, const char* which) {
        if (!enabled) return;
        std::ifstream f(path);
        if (!f)
            throw std::invalid_argument("scenario: detectors." + std::string(which) +
                                        " model file not found: " + path);
    };
    check_model(d.svm_enabled, d.svm_model_path, "svm");
    check_model(d.qsvm_enabled, d.qsvm_model_path, "qsvm");

    validate_attacks(s.attacks, ss.n_lt, ss.n_ft, ss.n_st);
}

PlantState initial_plant_state(const Scenario& s) {
    PlantState ps;
    ps.t_s = 0.0;
    const double ws0 = implied_flowrate(s.core_power_w, s.plant);
    ps.ws_kg_s = ws0;
    ps.wst_kg_s = ws0;
    ps.valve_pos = ws0 / s.closure.ws_max_kg_s;
    ps.level_nr_pct = s.controller.level_setpoint_pct + s.initial_level_offset_pct;
    ps.z0_m = z0_from_level(ps.level_nr_pct, s.closure);
    ps.p_sg_w = sg_power(ws0, s.plant);
    return ps;
}

} // namespace sgsim
