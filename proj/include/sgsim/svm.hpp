#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "sgsim/features.hpp"
#include "sgsim/kernels.hpp"

namespace sgsim {

enum class KernelType { Rbf, Quantum };

struct KernelDesc {
    KernelType type = KernelType::Rbf;
    double gamma = 1.0;      // RBF width
    QuantumFeatureMap map;   // fidelity kernel circuit
};

// ---------- SMO dual solver ----------
//
// Maximizes W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij subject to
// 0 <= a <= C, y'a = 0, using maximal-violating-pair selection with a
// second-order gain rule for the partner index. Ties break to the lowest
// index so the solve is deterministic for a fixed input.
struct SmoSolution {
    std::vector<double> alpha;
    double bias = 0.0;       // decision(x) = sum a_i y_i K(x_i, x) + bias
    double objective = 0.0;  // W(a) at the returned point
    double kkt_gap = 0.0;    // final maximal KKT violation
    int iterations = 0;
};

SmoSolution smo_solve(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                      double c, double tol, int max_iter = 2'000'000);

// Maximal KKT violation (m - M gap) of a candidate multiplier vector;
// a point is optimal to tolerance `tol` iff this is <= tol.
double smo_kkt_gap(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                   const std::vector<double>& alpha, double c);

// ---------- trained kernel classifier ----------
//
// Label convention: +1 = anomalous, -1 = normal. Decision ties (exactly 0)
// classify as anomalous.
struct KernelModel {
    FeatureSchema schema = FeatureSchema::Classical4;
    KernelDesc kernel;
    double c = 10.0;
    double train_tol = 1e-3;
    MinMaxScaler scaler;  // quantum3 feature bounds; empty for classical
    std::vector<std::vector<double>> support_vectors; // kernel-space inputs
    std::vector<double> dual_coefs;                   // alpha_i * y_i
    double bias = 0.0;
    double objective = 0.0;

    // runtime cache, rebuilt on load; never serialized
    std::vector<std::vector<std::complex<double>>> sv_states;
};

// Train on raw feature rows. Quantum schema fits the [0, pi] scaler on the
// training set and freezes it into the model. Throws std::invalid_argument
// on single-class input and std::runtime_error when the kernel matrix is not
// PSD (min eigenvalue < -1e-6) or the solver fails to converge.
KernelModel smo_train(const std::vector<std::vector<double>>& x_raw,
                      const std::vector<int>& y, FeatureSchema schema,
                      const KernelDesc& desc, double c = 10.0, double tol = 1e-3);

struct SvmPrediction {
    bool anomalous = false;
    double decision = 0.0;
};

SvmPrediction svm_predict(const KernelModel& m, const std::vector<double>& x_raw);

// Versioned flat-file serialization (JSON, doubles at full round-trip
// precision). load_model rebuilds the statevector cache.
void save_model(const KernelModel& m, const std::string& path);
KernelModel load_model(const std::string& path);

} // namespace sgsim
