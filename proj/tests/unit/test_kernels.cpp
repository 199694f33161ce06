#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sgsim/kernels.hpp"
#include "support/oracles.hpp"

using namespace sgsim;

namespace {

std::vector<double> random_point(std::mt19937_64& eng, int dim) {
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    std::vector<double> x(static_cast<size_t>(dim));
    for (double& v : x) v = u(eng);
    return x;
}

} // namespace

TEST_CASE("radial basis kernel basics") {
    CHECK(rbf_kernel({1.0, 2.0}, {1.0, 2.0}, 1.0) == 1.0);
    // distance^2 scaled to ln 2 gives exactly one half
    const double d = std::sqrt(std::log(2.0));
    CHECK(rbf_kernel({0.0}, {d}, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    // vanishing gamma flattens every pair toward 1
    CHECK(rbf_kernel({0.0, 0.0}, {3.0, 4.0}, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(rbf_kernel({1.0}, {1.0, 2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(rbf_kernel({1.0}, {1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("statevector of the all-zeros point matches the dense oracle") {
    const QuantumFeatureMap map;
    const std::vector<double> x{0.0, 0.0, 0.0};
    const auto fast = quantum_state(x, map);
    const oracle::CVec dense = oracle::dense_feature_state(x, 3, 2, map.entanglement);
    REQUIRE(fast.size() == 8);
    for (int b = 0; b < 8; ++b) {
        CHECK(std::abs(fast[static_cast<size_t>(b)] - dense(b)) < 1e-12);
    }
    // At x = 0 only the pairwise angles pi^2 act, so the phase on basis b
    // collapses to pi^2*s1*(s0+s2) in {0, +-2pi^2} and closed forms follow:
    // |a0| = (1+cos(2pi^2))/2, |a3| = |a6| = |sin(2pi^2)|/2,
    // |a5| = (1-cos(2pi^2))/2, the rest vanish. The profile is decidedly
    // NOT uniform 1/sqrt(8).
    const double c2 = std::cos(2.0 * std::numbers::pi * std::numbers::pi);
    const double s2 = std::sin(2.0 * std::numbers::pi * std::numbers::pi);
    CHECK(std::abs(fast[0]) == doctest::Approx(0.8148408626).epsilon(1e-9));
    CHECK(std::abs(fast[0]) == doctest::Approx(0.5 * (1.0 + c2)).epsilon(1e-12));
    CHECK(std::abs(fast[1]) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(std::abs(fast[3]) == doctest::Approx(0.3884266098).epsilon(1e-9));
    CHECK(std::abs(fast[3]) == doctest::Approx(0.5 * std::abs(s2)).epsilon(1e-12));
    CHECK(std::abs(fast[5]) == doctest::Approx(0.1851591374).epsilon(1e-9));
    CHECK(std::abs(fast[5]) == doctest::Approx(0.5 * (1.0 - c2)).epsilon(1e-12));
    CHECK(std::abs(fast[6]) == doctest::Approx(std::abs(fast[3])).epsilon(1e-12));
}

TEST_CASE("statevector matches the dense operator oracle on random points") {
    const QuantumFeatureMap map;
    std::mt19937_64 eng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const std::vector<double> x = random_point(eng, 3);
        const auto fast = quantum_state(x, map);
        const oracle::CVec dense = oracle::dense_feature_state(x, 3, 2, map.entanglement);
        for (int b = 0; b < 8; ++b)
            CHECK(std::abs(fast[static_cast<size_t>(b)] - dense(b)) < 1e-12);
    }
}

TEST_CASE("single-qubit reduction composes by hand") {
    QuantumFeatureMap map;
    map.n_qubits = 1;
    map.depth = 2;
    map.entanglement.clear();
    const double x = 1.1;
    // per repetition: H then diag(e^{ix}, e^{-ix}) on (1,0)
    std::complex<double> a(1.0, 0.0), b(0.0, 0.0);
    const double s = 1.0 / std::sqrt(2.0);
    for (int rep = 0; rep < 2; ++rep) {
        const std::complex<double> ha = s * (a + b), hb = s * (a - b);
        a = ha * std::exp(std::complex<double>(0.0, x));
        b = hb * std::exp(std::complex<double>(0.0, -x));
    }
    const auto fast = quantum_state({x}, map);
    REQUIRE(fast.size() == 2);
    CHECK(std::abs(fast[0] - a) < 1e-14);
    CHECK(std::abs(fast[1] - b) < 1e-14);
}

TEST_CASE("statevector stays normalized") {
    const QuantumFeatureMap map;
    std::mt19937_64 eng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto amp = quantum_state(random_point(eng, 3), map);
        double norm2 = 0.0;
        for (const auto& c : amp) norm2 += std::norm(c);
        CHECK(std::abs(norm2 - 1.0) < 1e-12);
    }
}

TEST_CASE("fidelity kernel identities") {
    const QuantumFeatureMap map;
    std::mt19937_64 eng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = random_point(eng, 3);
        const auto y = random_point(eng, 3);
        const double kxy = quantum_kernel(x, y, map);
        const double kyx = quantum_kernel(y, x, map);
        CHECK(std::abs(kxy - kyx) < 1e-12);
        CHECK(kxy >= 0.0);
        CHECK(kxy <= 1.0 + 1e-12);
    }
    const auto x = random_point(eng, 3);
    CHECK(quantum_kernel(x, x, map) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel values match the dense oracle") {
    const QuantumFeatureMap map;
    std::mt19937_64 eng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_point(eng, 3);
        const auto y = random_point(eng, 3);
        const double fast = quantum_kernel(x, y, map);
        const double dense =
            oracle::dense_fidelity(oracle::dense_feature_state(x, 3, 2, map.entanglement),
                                   oracle::dense_feature_state(y, 3, 2, map.entanglement));
        CHECK(std::abs(fast - dense) < 1e-10);
    }
}

TEST_CASE("gram matrices are symmetric positive semidefinite") {
    const QuantumFeatureMap map;
    std::mt19937_64 eng(55);
    const int n = 50;
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(random_point(eng, 3));

    for (int which = 0; which < 2; ++which) {
        Eigen::MatrixXd gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                const double k = which == 0 ? quantum_kernel(pts[static_cast<size_t>(i)],
                                                             pts[static_cast<size_t>(j)], map)
                                            : rbf_kernel(pts[static_cast<size_t>(i)],
                                                         pts[static_cast<size_t>(j)], 1.0);
                gram(i, j) = k;
                gram(j, i) = k;
            }
        for (int i = 0; i < n; ++i) CHECK(std::abs(gram(i, i) - 1.0) <= 1e-12);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("feature map validation") {
    QuantumFeatureMap map;
    map.depth = 0;
    CHECK_THROWS_AS(validate_feature_map(map), std::invalid_argument);
    map = QuantumFeatureMap{};
    map.entanglement = {{0, 3}};
    CHECK_THROWS_AS(validate_feature_map(map), std::invalid_argument);
    map = QuantumFeatureMap{};
    CHECK_NOTHROW(validate_feature_map(map));
}

TEST_CASE("encoding rejects out-of-range features") {
    const QuantumFeatureMap map;
    CHECK_THROWS_AS(quantum_state({-0.1, 0.0, 0.0}, map), std::invalid_argument);
    CHECK_THROWS_AS(quantum_state({0.0, 4.0, 0.0}, map), std::invalid_argument);
    CHECK_THROWS_AS(quantum_state({0.0, 0.0}, map), std::invalid_argument);
}
