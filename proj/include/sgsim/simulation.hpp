#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sgsim/detectors.hpp"
#include "sgsim/kalman.hpp"
#include "sgsim/lhs.hpp"
#include "sgsim/scenario.hpp"
#include "sgsim/svm.hpp"

namespace sgsim {

// ---------- detector bank ----------

// Canonical detector order; results CSV columns follow it.
enum class DetectorId { Pbd = 0, Osv, Np, Svm, Qsvm };
inline constexpr int kNumDetectors = 5;

std::string to_string(DetectorId d);

struct DetectionRecord {
    bool enabled = false;
    bool alarmed = false;
    double t_first_alarm = std::numeric_limits<double>::quiet_NaN();
};

// Per-step snapshot delivered to the detectors: post-attack sensor readings
// plus the trusted core power reference and logged plant power.
struct StepInput {
    double t_s = 0.0;
    std::vector<double> lt_pct, ft_kg_s, st_kg_s;
    double p_sg_w = 0.0;
    double p_core_w = 0.0;
};

struct StepVerdicts {
    struct One {
        bool evaluated = false; // enabled and past warmup
        bool alarmed = false;   // this step
        double residual = 0.0;
    };
    std::array<One, kNumDetectors> v;
    double kf_ws_kg_s = std::numeric_limits<double>::quiet_NaN();
};

// Owns all per-run detector state: the shared flow/level Kalman filter, the
// one-per-channel noise-profiling windows, and the optional trained kernel
// models. Detectors warm up independently (KF burn-in gates the physics
// check and both classifiers; noise profiling waits for a full window) and
// each records its first alarm time.
class DetectorBank {
  public:
    explicit DetectorBank(const Scenario& s);

    StepVerdicts step(const StepInput& in);

    const std::array<DetectionRecord, kNumDetectors>& records() const { return rec_; }
    double kf_flow_estimate() const { return kf_.x(0); }

  private:
    const Scenario& sc_;
    double ft_nominal_kg_s_;
    double st_nominal_kg_s_;
    KalmanFilter kf_;
    int steps_done_ = 0;
    std::vector<NpChannelState> np_; // lt channels, then ft, then st
    std::unique_ptr<KernelModel> svm_, qsvm_;
    std::array<DetectionRecord, kNumDetectors> rec_;

    void note_alarm(DetectorId d, bool alarmed, double t_s);
};

// ---------- single run ----------

enum class RunOutcomeKind { Baseline, Tripped, OverTime, Error };

std::string to_string(RunOutcomeKind k);

struct RunResult {
    std::string id;
    RunOutcomeKind outcome = RunOutcomeKind::Error;
    double t_trip_s = std::numeric_limits<double>::quiet_NaN(); // Tripped only
    double t_final_s = 0.0; // loop-top time at termination
    double earliest_insertion_s = std::numeric_limits<double>::infinity();
    std::array<DetectionRecord, kNumDetectors> detections{};
    std::string error; // Error outcome diagnostic

    // spoof annotations for the results table (first MiM per sensor kind)
    double lt_spoof_pct = std::numeric_limits<double>::quiet_NaN();
    double ft_spoof_lb_s = std::numeric_limits<double>::quiet_NaN();
    double t_insertion_lt_s = std::numeric_limits<double>::quiet_NaN();
    double t_insertion_ft_s = std::numeric_limits<double>::quiet_NaN();

    const DetectionRecord& detection(DetectorId d) const {
        return detections[static_cast<size_t>(d)];
    }
    // an alarm strictly before the first scheduled insertion (or any alarm
    // on an attack-free run) counts as a false positive
    bool false_positive(DetectorId d) const;
};

// Called after each detector evaluation with the same inputs the detectors
// saw; lets callers harvest per-step data without duplicating loop logic.
using StepObserver = std::function<void(const StepInput&, const StepVerdicts&)>;

// Execute one scenario. Per step: sample sensors, apply sensor attacks, run
// the controller under any live parameter overrides, apply actuator attacks,
// evaluate detectors on delivered signals, log telemetry, then advance the
// plant; the trip check runs at each loop top. telemetry_override, when
// nonempty, replaces the scenario's configured telemetry path. Configuration
// errors throw before the loop; numerical failures inside the loop yield an
// Error result instead of throwing.
RunResult run_scenario(const Scenario& s, const std::string& telemetry_override = "",
                       const StepObserver& observer = {});

// ---------- batch over a design matrix ----------

// Design matrix: column names are config paths ("attacks/0/value"), one row
// per case.
struct DesignTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

DesignTable read_design_csv(const std::string& path);
void write_design_csv(const LhsDesign& d, const std::string& path);

struct BatchOptions {
    int jobs = 1;
    std::string results_csv;   // empty = not written
    std::string telemetry_dir; // empty = per-case telemetry off
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
};

// Run one case per design row: row i gets the template with that row's
// overrides applied, id "case_<i+1>", and seed derive_seed(master, i), so
// results are identical at any worker count. Individual failures become
// Error rows; the batch continues.
std::vector<RunResult> run_batch(const std::string& scenario_text, const std::string& base_dir,
                                 const DesignTable& design, const BatchOptions& opt);

// Results table per the interface contract: case_id, spoofs (level %, feed
// flow lb/s), insertions, t_trip (number | "OT" | "ERR"), then one absolute
// detection time per detector (number | "-" | "FP").
std::string results_csv_text(const std::vector<RunResult>& results);
void write_results_csv(const std::vector<RunResult>& results, const std::string& path);

} // namespace sgsim
