#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace sgsim {

// Gaussian radial basis kernel exp(-gamma * |a-b|^2). Requires gamma > 0 and
// equal dimensions.
double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b, double gamma);

// Second-order Pauli-Z feature map: depth repetitions of (Hadamard wall,
// diagonal phase layer). Phases use phi_j = x_j on singles and
// phi_{jk} = (pi - x_j)(pi - x_k) on the entangling pairs.
struct QuantumFeatureMap {
    int n_qubits = 3;
    int depth = 2;
    std::vector<std::pair<int, int>> entanglement = {{0, 1}, {1, 2}};
};

void validate_feature_map(const QuantumFeatureMap& m);

// Statevector of the encoded feature vector. Features must already be scaled
// into [0, pi] (throws std::invalid_argument otherwise). Qubit j maps to bit
// j of the basis index (LSB first); the diagonal phase on basis state b is
// sum_j phi_j s_j(b) + sum_{jk} phi_jk s_j(b) s_k(b) with s_j(b) = 1 - 2 b_j.
std::vector<std::complex<double>> quantum_state(const std::vector<double>& x,
                                                const QuantumFeatureMap& m);

// Fidelity kernel |<phi(b)|phi(a)>|^2 between two encoded vectors.
double quantum_kernel(const std::vector<double>& a, const std::vector<double>& b,
                      const QuantumFeatureMap& m);

// Fidelity from precomputed statevectors (training/prediction hot path).
double state_fidelity(const std::vector<std::complex<double>>& sa,
                      const std::vector<std::complex<double>>& sb);

} // namespace sgsim
