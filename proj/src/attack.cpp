#include "sgsim/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgsim {

std::string to_string(AttackClass c) {
    switch (c) {
        case AttackClass::CommandInject: return "ci";
        case AttackClass::DenialOfService: return "dos";
        case AttackClass::ManInTheMiddle: return "mim";
    }
    return "?";
}

bool AttackTarget::operator==(const AttackTarget& o) const {
    if (type != o.type) return false;
    switch (type) {
        case TargetType::Sensor: return kind == o.kind && channel_id == o.channel_id;
        case TargetType::ValveCommand: return true;
        case TargetType::ControllerParam: return param == o.param;
    }
    return false;
}

std::string AttackTarget::describe() const {
    switch (type) {
        case TargetType::Sensor: return to_string(kind) + std::to_string(channel_id);
        case TargetType::ValveCommand: return "valve_command";
        case TargetType::ControllerParam: {
            switch (param) {
                case ControllerParamId::LevelKp: return "level_kp";
                case ControllerParamId::LevelTau: return "level_tau_i";
                case ControllerParamId::FlowKp: return "flow_kp";
                case ControllerParamId::FlowTau: return "flow_tau_i";
                case ControllerParamId::Setpoint: return "level_setpoint";
            }
            return "param";
        }
    }
    return "?";
}

void validate_attack(const AttackSpec& a, int n_lt, int n_ft, int n_st) {
    const std::string where = "validate_attack(" + a.target.describe() + "): ";
    if (a.t_start_s < 0.0)
        throw std::invalid_argument(where + "insertion time must be >= 0");
    if (!(a.t_end_s > a.t_start_s))
        throw std::invalid_argument(where + "t_end must exceed t_start");

    switch (a.cls) {
        case AttackClass::ManInTheMiddle:
            if (a.target.type != TargetType::Sensor)
                throw std::invalid_argument(where + "measurement spoofing requires a sensor target");
            if (!std::isfinite(a.spoof_value))
                throw std::invalid_argument(where + "spoof value required");
            if (a.noise_sigma < 0.0)
                throw std::invalid_argument(where + "artificial noise sigma must be >= 0");
            break;
        case AttackClass::CommandInject:
            if (a.target.type == TargetType::Sensor)
                throw std::invalid_argument(where + "command injection targets the valve or a controller parameter");
            if (!std::isfinite(a.spoof_value))
                throw std::invalid_argument(where + "spoof value required");
            if (a.target.type == TargetType::ValveCommand &&
                (a.spoof_value < 0.0 || a.spoof_value > 1.0))
                throw std::invalid_argument(where + "valve command spoof must lie in [0,1]");
            break;
        case AttackClass::DenialOfService:
            if (a.target.type == TargetType::ControllerParam)
                throw std::invalid_argument(where + "stale-hold cannot target a controller parameter");
            if (!(a.delay_s > 0.0))
                throw std::invalid_argument(where + "stale-hold delay must be positive");
            break;
    }

    if (a.target.type == TargetType::Sensor) {
        const int n = a.target.kind == SensorKind::LT   ? n_lt
                      : a.target.kind == SensorKind::FT ? n_ft
                                                        : n_st;
        if (a.target.channel_id < 1 || a.target.channel_id > n)
            throw std::invalid_argument(where + "channel id out of range");
    }
}

void validate_attacks(const std::vector<AttackSpec>& attacks, int n_lt, int n_ft, int n_st) {
    for (const auto& a : attacks) validate_attack(a, n_lt, n_ft, n_st);
    for (size_t i = 0; i < attacks.size(); ++i) {
        for (size_t j = i + 1; j < attacks.size(); ++j) {
            if (!(attacks[i].target == attacks[j].target)) continue;
            const bool disjoint = attacks[i].t_end_s <= attacks[j].t_start_s ||
                                  attacks[j].t_end_s <= attacks[i].t_start_s;
            if (!disjoint)
                throw std::invalid_argument("validate_attacks: overlapping windows on target " +
                                            attacks[i].target.describe());
        }
    }
}

std::vector<AttackSpec> mim_composite(const AttackSpec& sensor_spoof,
                                      const std::optional<AttackSpec>& actuator) {
    if (sensor_spoof.cls != AttackClass::ManInTheMiddle ||
        sensor_spoof.target.type != TargetType::Sensor)
        throw std::invalid_argument("mim_composite: first component must spoof a sensor");
    if (!actuator) return {sensor_spoof};
    if (actuator->target == sensor_spoof.target)
        throw std::invalid_argument("mim_composite: components must target distinct signals");
    return {sensor_spoof, *actuator};
}

// ---------- signal bus ----------

void SignalBus::Series::record(double t_s, double value) {
    if (!t.empty() && t_s < t.back())
        throw std::invalid_argument("SignalBus: samples must be recorded in time order");
    t.push_back(t_s);
    v.push_back(value);
}

double SignalBus::Series::value_at(double t_s) const {
    if (t.empty())
        throw std::runtime_error("SignalBus: no samples recorded");
    // last index with t[i] <= t_s
    auto it = std::upper_bound(t.begin(), t.end(), t_s);
    if (it == t.begin()) return v.front();
    return v[static_cast<size_t>(it - t.begin()) - 1];
}

SignalBus::SignalBus(int lt, int ft, int st) : n_lt(lt), n_ft(ft), n_st(st) {
    sensor_truth.resize(static_cast<size_t>(n_lt + n_ft + n_st));
    delivered.assign(sensor_truth.size(), 0.0);
}

int SignalBus::index(SensorKind kind, int id) const {
    const int n = kind == SensorKind::LT ? n_lt : kind == SensorKind::FT ? n_ft : n_st;
    if (id < 1 || id > n)
        throw std::invalid_argument("SignalBus: channel " + to_string(kind) +
                                    std::to_string(id) + " does not exist");
    int base = 0;
    if (kind == SensorKind::FT) base = n_lt;
    if (kind == SensorKind::ST) base = n_lt + n_ft;
    return base + id - 1;
}

void SignalBus::record_sensor(SensorKind kind, int id, double t_s, double value) {
    const int i = index(kind, id);
    sensor_truth[static_cast<size_t>(i)].record(t_s, value);
    delivered[static_cast<size_t>(i)] = value;
}

double SignalBus::truth(SensorKind kind, int id) const {
    return sensor_truth[static_cast<size_t>(index(kind, id))].v.back();
}

// ---------- attack engine ----------

AttackEngine::AttackEngine(std::vector<AttackSpec> attacks, std::uint64_t run_seed,
                           int n_lt, int n_ft, int n_st)
    : attacks_(std::move(attacks)) {
    validate_attacks(attacks_, n_lt, n_ft, n_st);
    noise_.reserve(attacks_.size());
    for (size_t i = 0; i < attacks_.size(); ++i)
        noise_.emplace_back(derive_seed(run_seed, 0x4000 + i));
}

void AttackEngine::apply_sensors(SignalBus& bus, double t_s) {
    // start from truth; attacks mutate only the delivered view
    for (size_t i = 0; i < bus.sensor_truth.size(); ++i)
        bus.delivered[i] = bus.sensor_truth[i].v.back();

    for (size_t k = 0; k < attacks_.size(); ++k) {
        const AttackSpec& a = attacks_[k];
        if (a.target.type != TargetType::Sensor || !a.active(t_s)) continue;
        const size_t i = static_cast<size_t>(bus.index(a.target.kind, a.target.channel_id));
        switch (a.cls) {
            case AttackClass::ManInTheMiddle:
                bus.delivered[i] = a.noise_sigma > 0.0
                                       ? noise_[k].gaussian(a.spoof_value, a.noise_sigma)
                                       : a.spoof_value;
                break;
            case AttackClass::DenialOfService:
                bus.delivered[i] = bus.sensor_truth[i].value_at(t_s - a.delay_s);
                break;
            case AttackClass::CommandInject:
                break; // rejected at validation
        }
    }
}

double AttackEngine::apply_valve(SignalBus& bus, double t_s, double controller_cmd) {
    bus.valve_cmd_truth.record(t_s, controller_cmd);
    double cmd = controller_cmd;
    for (const AttackSpec& a : attacks_) {
        if (a.target.type != TargetType::ValveCommand || !a.active(t_s)) continue;
        if (a.cls == AttackClass::CommandInject)
            cmd = a.spoof_value;
        else if (a.cls == AttackClass::DenialOfService)
            cmd = bus.valve_cmd_truth.value_at(t_s - a.delay_s);
    }
    bus.valve_cmd_plant = cmd;
    return cmd;
}

ControllerOverrides AttackEngine::overrides(double t_s) const {
    ControllerOverrides o;
    for (const AttackSpec& a : attacks_) {
        if (a.target.type != TargetType::ControllerParam || !a.active(t_s)) continue;
        switch (a.target.param) {
            case ControllerParamId::LevelKp: o.has_level_kp = true; o.level_kp = a.spoof_value; break;
            case ControllerParamId::LevelTau: o.has_level_tau = true; o.level_tau = a.spoof_value; break;
            case ControllerParamId::FlowKp: o.has_flow_kp = true; o.flow_kp = a.spoof_value; break;
            case ControllerParamId::FlowTau: o.has_flow_tau = true; o.flow_tau = a.spoof_value; break;
            case ControllerParamId::Setpoint: o.has_setpoint = true; o.setpoint = a.spoof_value; break;
        }
    }
    return o;
}

bool AttackEngine::any_active(double t_s) const {
    return std::any_of(attacks_.begin(), attacks_.end(),
                       [t_s](const AttackSpec& a) { return a.active(t_s); });
}

double AttackEngine::earliest_insertion() const {
    double t = std::numeric_limits<double>::infinity();
    for (const AttackSpec& a : attacks_) t = std::min(t, a.t_start_s);
    return t;
}

} // namespace sgsim
