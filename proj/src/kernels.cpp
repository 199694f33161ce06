#include "sgsim/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgsim {

double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
    if (gamma <= 0.0)
        throw std::invalid_argument("rbf_kernel: gamma must be positive");
    if (a.size() != b.size())
        throw std::invalid_argument("rbf_kernel: dimension mismatch");
    double d2 = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

void validate_feature_map(const QuantumFeatureMap& m) {
    if (m.n_qubits < 1 || m.n_qubits > 20)
        throw std::invalid_argument("validate_feature_map: qubit count out of range");
    if (m.depth < 1)
        throw std::invalid_argument("validate_feature_map: depth must be >= 1");
    for (const auto& [j, k] : m.entanglement) {
        if (j < 0 || k < 0 || j >= m.n_qubits || k >= m.n_qubits || j == k)
            throw std::invalid_argument("validate_feature_map: bad entanglement pair");
    }
}

namespace {

// in-place Hadamard wall: one butterfly pass per qubit
void hadamard_all(std::vector<std::complex<double>>& amp, int n_qubits) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int q = 0; q < n_qubits; ++q) {
        const size_t stride = size_t{1} << q;
        for (size_t base = 0; base < amp.size(); base += 2 * stride) {
            for (size_t i = base; i < base + stride; ++i) {
                const auto a0 = amp[i];
                const auto a1 = amp[i + stride];
                amp[i] = (a0 + a1) * inv_sqrt2;
                amp[i + stride] = (a0 - a1) * inv_sqrt2;
            }
        }
    }
}

} // namespace

std::vector<std::complex<double>> quantum_state(const std::vector<double>& x,
                                                const QuantumFeatureMap& m) {
    validate_feature_map(m);
    if (static_cast<int>(x.size()) != m.n_qubits)
        throw std::invalid_argument("quantum_state: feature dimension must equal qubit count");
    for (double xi : x) {
        if (!(xi >= 0.0 && xi <= std::numbers::pi))
            throw std::invalid_argument(
                "quantum_state: features must be scaled into [0, pi]");
    }

    const size_t dim = size_t{1} << m.n_qubits;

    // diagonal phase per basis state; s_j = +1 for bit 0, -1 for bit 1
    std::vector<double> phase(dim, 0.0);
    for (size_t b = 0; b < dim; ++b) {
        double th = 0.0;
        for (int j = 0; j < m.n_qubits; ++j) {
            const double sj = (b >> j) & 1 ? -1.0 : 1.0;
            th += x[static_cast<size_t>(j)] * sj;
        }
        for (const auto& [j, k] : m.entanglement) {
            const double sj = (b >> j) & 1 ? -1.0 : 1.0;
            const double sk = (b >> k) & 1 ? -1.0 : 1.0;
            th += (std::numbers::pi - x[static_cast<size_t>(j)]) *
                  (std::numbers::pi - x[static_cast<size_t>(k)]) * sj * sk;
        }
        phase[b] = th;
    }

    std::vector<std::complex<double>> amp(dim, {0.0, 0.0});
    amp[0] = {1.0, 0.0};
    for (int d = 0; d < m.depth; ++d) {
        hadamard_all(amp, m.n_qubits);
        for (size_t b = 0; b < dim; ++b)
            amp[b] *= std::complex<double>(std::cos(phase[b]), std::sin(phase[b]));
    }
    return amp;
}

double state_fidelity(const std::vector<std::complex<double>>& sa,
                      const std::vector<std::complex<double>>& sb) {
    if (sa.size() != sb.size())
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    std::complex<double> ip{0.0, 0.0};
    for (size_t i = 0; i < sa.size(); ++i) ip += std::conj(sb[i]) * sa[i];
    return std::norm(ip);
}

double quantum_kernel(const std::vector<double>& a, const std::vector<double>& b,
                      const QuantumFeatureMap& m) {
    return state_fidelity(quantum_state(a, m), quantum_state(b, m));
}

} // namespace sgsim
