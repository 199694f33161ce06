#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sgsim/control.hpp"
#include "sgsim/rng.hpp"

namespace sgsim {

// ---------- attack taxonomy ----------

enum class AttackClass { CommandInject, DenialOfService, ManInTheMiddle };
enum class TargetType { Sensor, ValveCommand, ControllerParam };
enum class ControllerParamId { LevelKp, LevelTau, FlowKp, FlowTau, Setpoint };

std::string to_string(AttackClass c);

struct AttackTarget {
    TargetType type = TargetType::Sensor;
    SensorKind kind = SensorKind::LT;                       // sensor targets
    int channel_id = 1;                                     // sensor targets
    ControllerParamId param = ControllerParamId::LevelKp;   // param targets

    bool operator==(const AttackTarget& o) const;
    std::string describe() const;
};

struct AttackSpec {
    AttackClass cls = AttackClass::ManInTheMiddle;
    AttackTarget target;
    double spoof_value = std::numeric_limits<double>::quiet_NaN(); // SI units
    double noise_sigma = 0.0;   // artificial gaussian noise on MiM spoofs
    double delay_s = 0.0;       // DoS stale-hold
    double t_start_s = 0.0;     // active window [t_start, t_end)
    double t_end_s = std::numeric_limits<double>::infinity();

    bool active(double t_s) const { return t_s >= t_start_s && t_s < t_end_s; }
};

// Structural validation of one spec: class/target compatibility, required
// fields per class, window sanity. Throws std::invalid_argument.
void validate_attack(const AttackSpec& a, int n_lt, int n_ft, int n_st);

// Validates a whole schedule: each spec individually plus the rule that two
// attacks on the same target must not have overlapping active windows.
void validate_attacks(const std::vector<AttackSpec>& attacks, int n_lt, int n_ft, int n_st);

// Measurement spoof optionally coupled with an actuator/parameter injection
// acting over the same window; validates the pair targets distinct signals.
// Without the second component this degenerates to the sensor spoof alone.
std::vector<AttackSpec> mim_composite(const AttackSpec& sensor_spoof,
                                      const std::optional<AttackSpec>& actuator = std::nullopt);

// ---------- signal bus ----------
//
// Latest true samples plus full per-signal history (needed for stale-hold
// replay), split into a plant-actual view and an operator-visible view.
// With no active attacks the two views are identical by construction.

struct SignalBus {
    struct Series {
        std::vector<double> t;
        std::vector<double> v;
        void record(double t_s, double value);
        // latest value recorded at time <= t_s; falls back to the earliest
        // sample when the horizon predates recording
        double value_at(double t_s) const;
        bool empty() const { return t.empty(); }
    };

    int n_lt = 3, n_ft = 2, n_st = 2;

    std::vector<Series> sensor_truth;    // plant-actual readings, one per channel
    std::vector<double> delivered;       // post-attack readings, refreshed each step
    Series valve_cmd_truth;              // controller outputs (operator view)
    double valve_cmd_plant = 0.0;        // post-attack command the plant receives

    SignalBus(int lt = 3, int ft = 2, int st = 2);

    int index(SensorKind kind, int id) const; // 1-based id within kind
    void record_sensor(SensorKind kind, int id, double t_s, double value);
    double truth(SensorKind kind, int id) const;
    double reading(SensorKind kind, int id) const { return delivered[index(kind, id)]; }
};

// ---------- attack engine ----------

class AttackEngine {
  public:
    // noise substreams are derived per attack index so draw order never
    // depends on scheduling
    AttackEngine(std::vector<AttackSpec> attacks, std::uint64_t run_seed,
                 int n_lt, int n_ft, int n_st);

    // Transform this step's sensor readings: copies truth into the delivered
    // view, then applies active MiM spoofs and DoS stale-holds. Plant-actual
    // series are never modified.
    void apply_sensors(SignalBus& bus, double t_s);

    // Valve-command path: records the controller output as operator-visible
    // truth, then returns what the plant actually receives after active
    // command-injection / stale-hold attacks.
    double apply_valve(SignalBus& bus, double t_s, double controller_cmd);

    // Live controller-parameter overwrites active at time t.
    ControllerOverrides overrides(double t_s) const;

    const std::vector<AttackSpec>& attacks() const { return attacks_; }
    bool any_active(double t_s) const;
    double earliest_insertion() const; // +inf when no attacks

  private:
    std::vector<AttackSpec> attacks_;
    std::vector<SeededRng> noise_;
};

} // namespace sgsim
