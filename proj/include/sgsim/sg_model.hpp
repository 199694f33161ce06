#pragma once

namespace sgsim {

// ---------- reduced-order U-tube steam generator, single boiling channel ----------
//
// Subcooled feedwater enters the tube bundle at Ts_in and heats toward the
// primary-side temperature Tp along the channel; the axial location where it
// reaches saturation defines the mixture (water) level z0. Bulk boiling above
// z0 removes the remaining power as latent heat.

struct SgParams {
    double wetted_perimeter_m = 95.0;     // M, total heated perimeter of the bundle
    double heat_transfer_w_m2k = 4000.0;  // U1, subcooled-region HTC
    double cs_j_kgk = 4900.0;             // liquid specific heat near operating pressure
    double hfg_j_kg = 1.6e6;              // latent heat of vaporization
    double exit_quality = 0.997;          // xe, steam quality at bundle exit
    double tp_k = 583.0;                  // primary-side (hot) temperature
    double tsat_k = 546.0;                // secondary saturation temperature
    double ts_in_k = 500.0;               // feedwater inlet temperature
    double channel_height_m = 10.0;       // H, heated channel length
    double flow_area_m2 = 25.0;           // A, effective secondary flow area
    double rho_f_kg_m3 = 767.0;           // saturated liquid density

    double gamma1() const { return wetted_perimeter_m * heat_transfer_w_m2k; }
    // energy absorbed per kg of feedwater turned to exit-quality steam
    double enthalpy_rise_j_kg() const;
};

// Throws std::invalid_argument when a physical precondition is violated
// (non-positive dimensions, temperature ordering Ts_in < Tsat < Tp, xe in [0,1]).
void validate_sg_params(const SgParams& p);

// Axial fluid temperature in the subcooled region, exponential relaxation of
// the inlet temperature toward Tp. Requires Ws > 0, z >= 0.
double fluid_temperature(double z_m, double ws_kg_s, const SgParams& p);

// Water level: axial position where fluid_temperature reaches saturation.
// Requires Ws > 0. Throws std::domain_error when the computed level falls
// outside [0, H] (the operating point has no in-channel boiling boundary);
// the condition is surfaced, never clamped.
double water_level(double ws_kg_s, const SgParams& p);

// Steady secondary-side power removed at feed flow Ws: sensible heat to
// saturation plus latent heat at exit quality.
double sg_power(double ws_kg_s, const SgParams& p);

// Inverse of sg_power: the steam production rate implied by a given thermal
// power. Requires power > 0.
double implied_flowrate(double power_w, const SgParams& p);

// ---------- plant closure around the thermal model ----------

struct ClosureConfig {
    double valve_tau_s = 2.0;        // feedwater valve first-order lag; 0 disables
    double ws_max_kg_s = 960.0;      // flow at fully open valve (linear characteristic)
    double span_low_m = 2.5;         // narrow-range 0% tap elevation
    double span_high_m = 7.5;        // narrow-range 100% tap elevation
};

struct PlantState {
    double t_s = 0.0;
    double z0_m = 0.0;        // mixture level
    double level_nr_pct = 0.0; // narrow-range level, affine in z0, not clamped
    double valve_pos = 0.0;    // actual valve position in [0,1]
    double ws_kg_s = 0.0;      // feedwater flow
    double wst_kg_s = 0.0;     // steam flow
    double p_sg_w = 0.0;       // secondary thermal power at current feed flow
};

double level_from_z0(double z0_m, const ClosureConfig& cfg);
double z0_from_level(double level_pct, const ClosureConfig& cfg);

// Advance the plant one fixed step: exact first-order valve lag, linear valve
// characteristic, steam flow implied by core power, explicit-Euler level mass
// balance. Requires dt > 0, valve_cmd in [0,1], core power > 0.
PlantState step_plant(const PlantState& s, double valve_cmd, double p_core_w,
                      double dt_s, const SgParams& p, const ClosureConfig& cfg);

} // namespace sgsim
