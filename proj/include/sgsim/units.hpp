#pragma once

namespace sgsim {

// Mass-flow unit conversion. Internal flow unit is kg/s; lb/s is accepted at
// config boundaries only.
inline constexpr double kLbToKg = 0.45359237; // exact by definition

inline constexpr double lb_s_to_kg_s(double lb_s) { return lb_s * kLbToKg; }
inline constexpr double kg_s_to_lb_s(double kg_s) { return kg_s / kLbToKg; }

} // namespace sgsim
