#include "sgsim/sg_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sgsim {

double SgParams::enthalpy_rise_j_kg() const {
    return cs_j_kgk * (tsat_k - ts_in_k) + exit_quality * hfg_j_kg;
}

void validate_sg_params(const SgParams& p) {
    if (p.wetted_perimeter_m <= 0.0 || p.heat_transfer_w_m2k <= 0.0)
        throw std::invalid_argument("validate_sg_params: M and U1 must be positive");
    if (p.cs_j_kgk <= 0.0 || p.hfg_j_kg <= 0.0)
        throw std::invalid_argument("validate_sg_params: Cs and hfg must be positive");
    if (p.exit_quality < 0.0 || p.exit_quality > 1.0)
        throw std::invalid_argument("validate_sg_params: exit quality must lie in [0,1]");
    if (!(p.ts_in_k < p.tsat_k && p.tsat_k < p.tp_k))
        throw std::invalid_argument(
            "validate_sg_params: temperature ordering Ts_in < Tsat < Tp required");
    if (p.channel_height_m <= 0.0 || p.flow_area_m2 <= 0.0 || p.rho_f_kg_m3 <= 0.0)
        throw std::invalid_argument("validate_sg_params: geometry/density must be positive");
}

double fluid_temperature(double z_m, double ws_kg_s, const SgParams& p) {
    if (ws_kg_s <= 0.0)
        throw std::invalid_argument("fluid_temperature: feedwater flow must be positive");
    if (z_m < 0.0)
        throw std::invalid_argument("fluid_temperature: axial position must be >= 0");
    const double k = p.gamma1() / (ws_kg_s * p.cs_j_kgk);
    return p.tp_k + (p.ts_in_k - p.tp_k) * std::exp(-k * z_m);
}

double water_level(double ws_kg_s, const SgParams& p) {
    if (ws_kg_s <= 0.0)
        throw std::invalid_argument("water_level: feedwater flow must be positive");
    const double num = p.tp_k - p.tsat_k;
    const double den = p.tp_k - p.ts_in_k;
    if (num <= 0.0 || den <= 0.0)
        throw std::domain_error("water_level: requires Ts_in < Tsat < Tp");
    const double z0 = -(ws_kg_s * p.cs_j_kgk / p.gamma1()) * std::log(num / den);
    if (z0 < 0.0 || z0 > p.channel_height_m)
        throw std::domain_error("water_level: level " + std::to_string(z0) +
                                " m outside channel [0, " +
                                std::to_string(p.channel_height_m) + "] m");
    return z0;
}

double sg_power(double ws_kg_s, const SgParams& p) {
    if (ws_kg_s <= 0.0)
        throw std::invalid_argument("sg_power: feedwater flow must be positive");
    return ws_kg_s * p.enthalpy_rise_j_kg();
}

double implied_flowrate(double power_w, const SgParams& p) {
    if (power_w <= 0.0)
        throw std::invalid_argument("implied_flowrate: power must be positive");
    return power_w / p.enthalpy_rise_j_kg();
}

double level_from_z0(double z0_m, const ClosureConfig& cfg) {
    return 100.0 * (z0_m - cfg.span_low_m) / (cfg.span_high_m - cfg.span_low_m);
}

double z0_from_level(double level_pct, const ClosureConfig& cfg) {
    return cfg.span_low_m + (level_pct / 100.0) * (cfg.span_high_m - cfg.span_low_m);
}

PlantState step_plant(const PlantState& s, double valve_cmd, double p_core_w,
                      double dt_s, const SgParams& p, const ClosureConfig& cfg) {
    if (dt_s <= 0.0)
        throw std::invalid_argument("step_plant: dt must be positive");
    if (valve_cmd < 0.0 || valve_cmd > 1.0)
        throw std::invalid_argument("step_plant: valve command must lie in [0,1]");
    if (p_core_w <= 0.0)
        throw std::invalid_argument("step_plant: core power must be positive");
    if (cfg.span_high_m <= cfg.span_low_m)
        throw std::invalid_argument("step_plant: level span must have positive width");

    PlantState n = s;
    // exact discrete solution of tau_v * dv/dt = cmd - v; exact for a command
    // held over the step, so the lag itself adds no integration error
    if (cfg.valve_tau_s > 0.0)
        n.valve_pos = valve_cmd + (s.valve_pos - valve_cmd) * std::exp(-dt_s / cfg.valve_tau_s);
    else
        n.valve_pos = valve_cmd;

    n.ws_kg_s = cfg.ws_max_kg_s * n.valve_pos;
    n.wst_kg_s = implied_flowrate(p_core_w, p);
    // level mass balance, explicit Euler on the incompressible liquid inventory
    n.z0_m = s.z0_m + dt_s * (n.ws_kg_s - n.wst_kg_s) / (p.rho_f_kg_m3 * p.flow_area_m2);
    n.level_nr_pct = level_from_z0(n.z0_m, cfg);
    n.p_sg_w = n.ws_kg_s > 0.0 ? sg_power(n.ws_kg_s, p) : 0.0;
    n.t_s = s.t_s + dt_s;

    if (!std::isfinite(n.z0_m) || !std::isfinite(n.ws_kg_s))
        throw std::runtime_error("step_plant: non-finite state");
    return n;
}

} // namespace sgsim
