#include "sgsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgsim {

std::string to_string(SensorKind k) {
    switch (k) {
        case SensorKind::LT: return "LT";
        case SensorKind::FT: return "FT";
        case SensorKind::ST: return "ST";
    }
    return "?";
}

double sample_sensor(SensorChannel& ch, double true_value, double t_s, SeededRng& rng) {
    if (ch.noise_sigma < 0.0)
        throw std::invalid_argument("sample_sensor: noise sigma must be >= 0");
    const double reading = rng.gaussian(true_value, ch.noise_sigma);
    ch.last_reading = reading;
    ch.last_sample_t = t_s;
    return reading;
}

double pi_update(PiController& c, double error, double dt_s) {
    if (dt_s <= 0.0)
        throw std::invalid_argument("pi_update: dt must be positive");
    if (c.tau_i_s <= 0.0)
        throw std::invalid_argument("pi_update: integral time constant must be positive");
    if (c.out_min > c.out_max)
        throw std::invalid_argument("pi_update: out_min must not exceed out_max");

    const double trial_integral = c.integral + error * dt_s;
    const double raw = c.kp * (error + trial_integral / c.tau_i_s);
    if (raw > c.out_max) return c.out_max;  // clamped: integral frozen
    if (raw < c.out_min) return c.out_min;  // clamped: integral frozen
    c.integral = trial_integral;
    return raw;
}

double sglcs_step(SglcsController& c, double lt3_reading_pct, double ft_reading_kg_s,
                  double st_reading_kg_s, double dt_s, const ControllerOverrides* ovr) {
    if (c.nominal_ws_kg_s <= 0.0)
        throw std::invalid_argument("sglcs_step: nominal feed flow must be positive");

    double setpoint = c.level_setpoint_pct;
    if (ovr) {
        if (ovr->has_level_kp) c.level_pi.kp = ovr->level_kp;
        if (ovr->has_level_tau) c.level_pi.tau_i_s = ovr->level_tau;
        if (ovr->has_flow_kp) c.flow_pi.kp = ovr->flow_kp;
        if (ovr->has_flow_tau) c.flow_pi.tau_i_s = ovr->flow_tau;
        if (ovr->has_setpoint) setpoint = ovr->setpoint;
    }

    // flow mismatch normalized to % of nominal feed so it shares the level span
    const double scale = 100.0 / c.nominal_ws_kg_s;

    const double e1 = setpoint - lt3_reading_pct;
    const double u1 = pi_update(c.level_pi, e1, dt_s);
    const double e2 = u1 + (st_reading_kg_s - ft_reading_kg_s) * scale;
    const double u2 = pi_update(c.flow_pi, e2, dt_s);
    return std::clamp(c.valve_bias + u2, 0.0, 1.0);
}

std::string to_string(TripStatus s) {
    switch (s) {
        case TripStatus::Running: return "Running";
        case TripStatus::TrippedLevel: return "TrippedLevel";
        case TripStatus::OverTime: return "OverTime";
    }
    return "?";
}

TripStatus check_trip(const PlantState& s, const TripConfig& trip) {
    if (trip.level_low_pct >= trip.level_high_pct)
        throw std::invalid_argument("check_trip: level band must have positive width");
    if (trip.max_runtime_s <= 0.0)
        throw std::invalid_argument("check_trip: max runtime must be positive");

    if (s.level_nr_pct < trip.level_low_pct || s.level_nr_pct > trip.level_high_pct)
        return TripStatus::TrippedLevel;
    const double grid_tol = 1e-9 * std::max(1.0, trip.max_runtime_s);
    if (s.t_s > trip.max_runtime_s + grid_tol)
        return TripStatus::OverTime;
    return TripStatus::Running;
}

} // namespace sgsim
