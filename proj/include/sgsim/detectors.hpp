#pragma once

#include <deque>
#include <string>
#include <vector>

#include "sgsim/sg_model.hpp"

namespace sgsim {

// Verdict of one detector at one step. residual carries the detector's
// continuous statistic so telemetry can plot margin-to-alarm.
struct DetectorVerdict {
    bool alarmed = false;
    double residual = 0.0;
    std::string note; // e.g. skipped kinds, branch that fired
};

// ---------- physics-based diagnosis (KF flow estimate vs trusted core power) ----------
//
// The reactor's thermal output is taken as the trusted reference: the feed
// flow a healthy SG must draw is implied_flowrate(P_core). A filtered flow
// estimate deviating from it by more than `tolerance` (relative) flags the
// loop. Requires P_core > 0.
DetectorVerdict pbd_detect(double p_core_w, double ws_estimate_kg_s,
                           const SgParams& p, double tolerance = 1e-2);

// ---------- online sensor validation (redundant-channel consistency) ----------

struct OsvTolerances {
    double tau_lt_pct = 5.0;    // 10% of nominal level
    double tau_ft_kg_s = 48.0;  // 10% of nominal feed flow
    double tau_st_kg_s = 48.0;
};

// Pairwise deviation check within each redundant kind. Alarms when any pair
// differs by more than the kind's tolerance; residual is the largest
// pairwise deviation normalized by its tolerance. Kinds with fewer than two
// channels are skipped and noted in the verdict.
DetectorVerdict osv_detect(const std::vector<double>& lt_readings,
                           const std::vector<double>& ft_readings,
                           const std::vector<double>& st_readings,
                           const OsvTolerances& tol);

// ---------- noise profiling ----------

struct NpThresholds {
    int window = 5;          // moving-average depth m
    double eta_lower = 1e-3; // too-clean branch
    double eta_upper = 1.0;  // step-change branch
};

// Single-channel, single-step check on normalized readings: deviation of the
// current reading from the m-point moving average of the preceding window.
// upper branch: d > eta_upper (abrupt change); lower branch: d < eta_lower
// (noise poorer than any healthy sensor's). Requires exactly m readings in
// window. The verdict's note names the branch.
DetectorVerdict np_detect(const std::deque<double>& window, double current,
                          const NpThresholds& th);

// Streaming wrapper owning the window plus a persistence counter for the
// lower branch: a run of `lower_hold` consecutive too-clean steps is required
// before alarming, so gaussian channels (which dip below eta_lower on a
// third of steps) never false-alarm while a constant spoof still trips in
// well under a second of held samples.
class NpChannelState {
  public:
    NpChannelState(const NpThresholds& th, int lower_hold) : th_(th), hold_(lower_hold) {}

    // feed one normalized reading; returns the step verdict (never alarms
    // until the window is full)
    DetectorVerdict push(double normalized_reading);

  private:
    NpThresholds th_;
    int hold_;
    int low_run_ = 0;
    std::deque<double> win_;
};

} // namespace sgsim
