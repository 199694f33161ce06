#pragma once

#include <string>

#include "sgsim/rng.hpp"
#include "sgsim/sg_model.hpp"

namespace sgsim {

// ---------- instrumentation ----------

enum class SensorKind { LT, FT, ST }; // level, feedwater flow, steam flow

std::string to_string(SensorKind k);

struct SensorChannel {
    SensorKind kind = SensorKind::LT;
    int id = 1;                 // 1-based within its kind
    double noise_sigma = 0.0;   // gaussian std-dev in the channel's own unit
    double last_reading = 0.0;
    double last_sample_t = -1.0;
};

// One noisy sample: true value plus N(0, sigma^2) from the channel's own
// stream. sigma = 0 returns the true value exactly.
double sample_sensor(SensorChannel& ch, double true_value, double t_s, SeededRng& rng);

// ---------- PI controller with clamp-freeze anti-windup ----------

struct PiController {
    double kp = 1.0;
    double tau_i_s = 1.0;     // integral time constant
    double integral = 0.0;    // accumulated error * dt
    double out_min = -1.0;
    double out_max = 1.0;
};

// output = clamp(Kp * (error + integral/tau_i)); the integral absorbs
// error*dt before the output is formed and is frozen whenever the output
// clamps, so it holds its clamp-onset value until the output re-enters range.
double pi_update(PiController& c, double error, double dt_s);

// ---------- cascaded level / flow-mismatch controller ----------
//
// Outer loop turns narrow-range level error (channel-3 transmitter) into a
// flow-mismatch demand; inner loop trims the feedwater valve so measured
// (steam - feed) mismatch tracks that demand. Mismatch is expressed in % of
// nominal feed flow so both loops work on comparable spans.

struct SglcsController {
    PiController level_pi{8.0, 60.0, 0.0, -40.0, 40.0};
    PiController flow_pi{0.005, 10.0, 0.0, -0.5, 0.5};
    double level_setpoint_pct = 50.0;
    double valve_bias = 0.5;             // steady-state valve position
    double nominal_ws_kg_s = 480.0;      // sets the mismatch normalization
};

// Optional live-parameter overrides (command-injection attacks overwrite
// gains without touching controller state).
struct ControllerOverrides {
    bool has_level_kp = false;  double level_kp = 0.0;
    bool has_level_tau = false; double level_tau = 0.0;
    bool has_flow_kp = false;   double flow_kp = 0.0;
    bool has_flow_tau = false;  double flow_tau = 0.0;
    bool has_setpoint = false;  double setpoint = 0.0;
};

// One control step given delivered readings; returns the valve command in [0,1].
double sglcs_step(SglcsController& c, double lt3_reading_pct, double ft_reading_kg_s,
                  double st_reading_kg_s, double dt_s,
                  const ControllerOverrides* ovr = nullptr);

// ---------- trip logic ----------

enum class TripStatus { Running, TrippedLevel, OverTime };

std::string to_string(TripStatus s);

struct TripConfig {
    double level_low_pct = 25.0;
    double level_high_pct = 75.0;
    double max_runtime_s = 180.0;
};

// Level band is checked first; runtime expiry second. The runtime comparison
// carries a relative grid tolerance so t = max_runtime reached by fixed-step
// accumulation does not spuriously expire.
TripStatus check_trip(const PlantState& s, const TripConfig& trip);

} // namespace sgsim
