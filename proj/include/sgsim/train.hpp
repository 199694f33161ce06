#pragma once

#include <cstdint>
#include <string>

namespace sgsim {

// ---------- labeled-dataset training pipeline ----------
//
// Builds a labeled feature dataset by replaying seeded runs (attack-free
// runs give normal samples, spoofed runs give anomalous samples harvested
// after the insertion settles), then trains the classical and quantum
// kernel classifiers on it and writes the model files plus a manifest that
// pins every seed and the frozen feature bounds.

struct TrainSpec {
    std::uint64_t seed = 0;

    std::string normal_scenario; // attack-free template (resolved path)
    int normal_runs = 4;

    std::string attacked_scenario; // spoof template (resolved path)
    std::string attacked_design;   // one run per design row (resolved path)

    // sampling controls
    int sample_stride_steps = 5;     // keep every k-th eligible step
    double warmup_skip_s = 10.0;     // discard the estimator settling window
    double attack_margin_s = 2.0;    // label anomalous only past insertion + margin
    double holdout_fraction = 0.25;  // per-class held-out share
    int max_samples_per_class = 400; // deterministic subsample cap

    // solver settings
    double svm_c = 10.0;
    double svm_gamma = 1.0;
    double svm_tol = 1e-3;
    double qsvm_c = 10.0;
    double qsvm_tol = 1e-3;

    std::string output_dir; // resolved path
};

// Strict-schema JSON spec: {seed, normal{scenario, runs}, attacked{scenario,
// design}, sample_stride_steps?, warmup_skip_s?, attack_margin_s?,
// holdout_fraction?, max_samples_per_class?, svm{c?, gamma?, tol?}?,
// qsvm{c?, tol?}?, output{dir}}. Relative paths resolve against base_dir.
// Unknown keys are rejected.
TrainSpec parse_train_spec_text(const std::string& json_text, const std::string& base_dir);
TrainSpec load_train_spec_file(const std::string& path);

struct TrainOutcome {
    std::string svm_model_path;
    std::string qsvm_model_path;
    std::string manifest_path;
    std::string dataset_csv_path;

    int n_normal = 0;   // samples used, post-cap
    int n_attacked = 0; // samples used, post-cap
    int n_train = 0;
    int n_holdout = 0;
    double svm_holdout_accuracy = 0.0;
    double qsvm_holdout_accuracy = 0.0;
};

// Run the whole pipeline. Deterministic for a fixed spec: run seeds derive
// from spec.seed (attacked rows use the same derivation as the batch runner,
// so training runs reproduce batch cases), and the subsample/holdout
// shuffles are seeded too. Throws std::invalid_argument on a degenerate
// dataset (a missing class, or imbalance beyond 95/5) and std::runtime_error
// when a generating run fails.
TrainOutcome train_models(const TrainSpec& spec);

} // namespace sgsim
