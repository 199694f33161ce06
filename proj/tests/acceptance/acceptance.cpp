// Release gate. Each check below guards one required behavior of the shipped
// library, prints exactly one [PASS]/[FAIL] line, and enforces its own wall
// budget; the binary exits nonzero if any line fails. Run it through ctest
// or directly from the build tree.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgsim/bench.hpp"
#include "sgsim/kalman.hpp"
#include "sgsim/kernels.hpp"
#include "sgsim/lhs.hpp"
#include "sgsim/rng.hpp"
#include "sgsim/scenario.hpp"
#include "sgsim/sg_model.hpp"
#include "sgsim/simulation.hpp"
#include "sgsim/svm.hpp"
#include "sgsim/textio.hpp"
#include "support/oracles.hpp"

using namespace sgsim;

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// ---------- C1: closed-form channel temperature vs numeric integration ----------

void c1_temperature_oracle() {
    SeededRng rng(0xC1);
    int valid = 0;
    for (int draw = 0; draw < 1000 && valid < 100; ++draw) {
        SgParams p;
        p.wetted_perimeter_m = 60.0 + 80.0 * rng.uniform();
        p.heat_transfer_w_m2k = 2500.0 + 3000.0 * rng.uniform();
        p.cs_j_kgk = 4500.0 + 700.0 * rng.uniform();
        p.tp_k = 560.0 + 60.0 * rng.uniform();
        p.tsat_k = p.tp_k - (20.0 + 40.0 * rng.uniform());
        p.ts_in_k = p.tp_k - (80.0 + 40.0 * rng.uniform());
        const double ws = 240.0 + 480.0 * rng.uniform();

        double z0 = 0.0;
        try {
            z0 = water_level(ws, p);
        } catch (const std::domain_error&) {
            continue; // saturation outside the channel; resample
        }
        ++valid;

        // saturation exactly at the boiling boundary
        const double t_at_z0 = fluid_temperature(z0, ws, p);
        require(std::abs(t_at_z0 - p.tsat_k) <= 1e-9 * p.tsat_k,
                "T(z0) off saturation by " + num(t_at_z0 - p.tsat_k) + " K");

        // closed form against a fine RK4 pass over the same heat balance
        const double z = z0 * (0.05 + 0.95 * rng.uniform());
        const double closed = fluid_temperature(z, ws, p);
        const double stepped = oracle::rk4_temperature(z, ws, p, 4000);
        require(std::abs(closed - stepped) <= 1e-8 * std::abs(stepped),
                "temperature mismatch " + num(closed - stepped) + " K at z=" + num(z));
    }
    require(valid == 100, "only " + std::to_string(valid) + "/100 parameter draws were usable");
}

// ---------- C2: Kalman filter vs information-filter oracle ----------

void c2_kalman_oracle() {
    KalmanFilter f = make_flow_level_filter(480.0, 5.0, 0.05, 1e-5, 5.76, 2.5e-5);
    oracle::InfoFilter g{f.x, f.P};

    SeededRng rng(0xC2);
    double ws_true = 480.0, z_true = 5.0;
    for (int k = 0; k < 1000; ++k) {
        ws_true += rng.gaussian(0.0, 0.3);
        z_true += rng.gaussian(0.0, 0.004);
        Eigen::VectorXd y(2);
        y << ws_true + rng.gaussian(0.0, 2.4), z_true + rng.gaussian(0.0, 0.005);

        f = kf_step(f, y).first;
        g = oracle::info_step(g, f.Phi, f.Q, f.M, f.R, y);

        for (int i = 0; i < 2; ++i)
            require(std::abs(f.x(i) - g.x(i)) <= 1e-8 * std::max(1.0, std::abs(g.x(i))),
                    "state " + std::to_string(i) + " drifted " + num(f.x(i) - g.x(i)) +
                        " from the oracle at step " + std::to_string(k));

        const double min_eig =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f.P).eigenvalues().minCoeff();
        require(min_eig >= -1e-10,
                "covariance lost PSD (min eig " + num(min_eig) + ") at step " + std::to_string(k));
    }
}

// ---------- C3: statevector kernel path vs dense-matrix oracle ----------

void c3_quantum_oracle() {
    const QuantumFeatureMap map;
    SeededRng rng(0xC3);
    auto draw = [&rng] {
        return std::vector<double>{std::numbers::pi * rng.uniform(),
                                   std::numbers::pi * rng.uniform(),
                                   std::numbers::pi * rng.uniform()};
    };

    for (int k = 0; k < 20; ++k) {
        const std::vector<double> a = draw(), b = draw();
        const auto sa = quantum_state(a, map);
        const oracle::CVec da = oracle::dense_feature_state(a, map.n_qubits, map.depth,
                                                            map.entanglement);
        for (int i = 0; i < 8; ++i)
            require(std::abs(sa[static_cast<size_t>(i)] - da(i)) <= 1e-10,
                    "amplitude " + std::to_string(i) + " off the dense oracle on pair " +
                        std::to_string(k));
        const oracle::CVec db = oracle::dense_feature_state(b, map.n_qubits, map.depth,
                                                            map.entanglement);
        const double fast = quantum_kernel(a, b, map);
        const double dense = oracle::dense_fidelity(da, db);
        require(std::abs(fast - dense) <= 1e-10,
                "kernel value off the dense oracle by " + num(fast - dense));
    }

    std::vector<std::vector<double>> pts(50);
    for (auto& p : pts) p = draw();
    Eigen::MatrixXd gram(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
            gram(i, j) = quantum_kernel(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)],
                                        map);
    for (int i = 0; i < 50; ++i) {
        require(std::abs(gram(i, i) - 1.0) <= 1e-12, "Gram diagonal " + num(gram(i, i)));
        for (int j = 0; j < i; ++j)
            require(std::abs(gram(i, j) - gram(j, i)) <= 1e-12, "Gram asymmetry");
    }
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().minCoeff();
    require(min_eig >= -1e-8, "Gram min eig " + num(min_eig));
}

// ---------- C4: SMO duals vs projected-gradient QP oracle ----------

void c4_smo_oracle() {
    SeededRng rng(0xC4);

    auto check_instance = [](const Eigen::MatrixXd& gram, const std::vector<int>& y, double c,
                             const std::string& tag) {
        const SmoSolution sol = smo_solve(gram, y, c, 1e-7);
        const oracle::QpResult ref = oracle::pg_dual_qp(gram, y, c);
        require(std::abs(sol.objective - ref.objective) <= 1e-6,
                tag + ": dual objective off the oracle by " +
                    num(sol.objective - ref.objective));
    };

    // hand-checkable two-point problem: alpha = 1/(1 - e^-4) on both points
    {
        Eigen::MatrixXd gram(2, 2);
        const double k12 = std::exp(-4.0);
        gram << 1.0, k12, k12, 1.0;
        const std::vector<int> y{1, -1};
        check_instance(gram, y, 10.0, "two-point");
        const SmoSolution sol = smo_solve(gram, y, 10.0, 1e-10);
        require(std::abs(sol.objective - 1.0 / (1.0 - k12)) <= 1e-9,
                "two-point analytic objective mismatch");
    }

    // gaussian blobs under the RBF kernel, loose and tight box
    auto blob_instance = [&rng, &check_instance](int n, double c, double gamma,
                                                 const std::string& tag) {
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            const int label = i % 2 == 0 ? 1 : -1;
            const double ctr = label * 1.1;
            x.push_back({ctr + rng.gaussian(0.0, 0.6), -ctr + rng.gaussian(0.0, 0.6),
                         rng.gaussian(0.0, 0.4)});
            y.push_back(label);
        }
        Eigen::MatrixXd gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram(i, j) = rbf_kernel(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)],
                                        gamma);
        check_instance(gram, y, c, tag);
    };
    blob_instance(20, 10.0, 0.7, "rbf-20");
    blob_instance(40, 0.5, 1.3, "rbf-40");

    // clustered angles under the fidelity kernel
    auto quantum_instance = [&rng, &check_instance](int n, double c, const std::string& tag) {
        const QuantumFeatureMap map;
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            const int label = i % 2 == 0 ? 1 : -1;
            const double ctr = label == 1 ? 0.7 : 2.3;
            std::vector<double> v(3);
            for (double& vi : v)
                vi = std::clamp(ctr + rng.gaussian(0.0, 0.35), 0.0, std::numbers::pi);
            x.push_back(v);
            y.push_back(label);
        }
        Eigen::MatrixXd gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram(i, j) = quantum_kernel(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)],
                                            map);
        check_instance(gram, y, c, tag);
    };
    quantum_instance(16, 10.0, "quantum-16");
    quantum_instance(36, 2.0, "quantum-36");

    // 4-point XOR separates under the RBF kernel
    const std::vector<std::vector<double>> xor_x{
        {0, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}};
    const std::vector<int> xor_y{-1, -1, 1, 1};
    KernelDesc rbf;
    rbf.gamma = 1.0;
    const KernelModel m = smo_train(xor_x, xor_y, FeatureSchema::Classical4, rbf, 10.0, 1e-6);
    for (size_t i = 0; i < 4; ++i) {
        const SvmPrediction pred = svm_predict(m, xor_x[i]);
        require((pred.anomalous ? 1 : -1) == xor_y[i],
                "XOR point " + std::to_string(i) + " misclassified");
    }
}

// ---------- C5: attack-free runs stay alarm-free ----------

void c5_baseline_false_positives() {
    Scenario base = parse_scenario_text(R"({"seed": 0, "max_runtime_s": 70})", ".");
    for (int i = 0; i < 100; ++i) {
        Scenario sc = base;
        sc.id = "baseline_" + std::to_string(i + 1);
        sc.seed = derive_seed(0xBA5E, static_cast<std::uint64_t>(i));
        const RunResult r = run_scenario(sc);
        require(r.outcome == RunOutcomeKind::Baseline,
                sc.id + " ended " + to_string(r.outcome) + " instead of staying in band");
        for (DetectorId d : {DetectorId::Pbd, DetectorId::Osv, DetectorId::Np}) {
            const DetectionRecord& rec = r.detection(d);
            require(rec.enabled, sc.id + ": " + to_string(d) + " was not running");
            require(!rec.alarmed, sc.id + ": false " + to_string(d) + " alarm at t=" +
                                      num(rec.t_first_alarm));
        }
    }
}

// ---------- C6: nine-case spoof benchmark behaviors ----------

void c6_benchmark_behaviors() {
    const std::string dir = SGSIM_DATA_DIR;
    const std::string text = read_text_file(dir + "/mim_benchmark.json");
    const DesignTable design = read_design_csv(dir + "/mim_benchmark_design.csv");
    BatchOptions opt;
    opt.jobs = 4;
    const std::vector<RunResult> rows = run_batch(text, dir, design, opt);
    require(rows.size() == 9, "expected 9 benchmark cases, got " + std::to_string(rows.size()));

    const double dt = 0.1;
    for (size_t i = 0; i < rows.size(); ++i) {
        const RunResult& r = rows[i];
        const std::string tag = r.id;
        require(r.outcome != RunOutcomeKind::Error, tag + " errored: " + r.error);
        const double ins = r.earliest_insertion_s;
        require(std::isfinite(ins), tag + " has no insertion time");

        // (a) the filtered physics residual catches every case within 20 s
        const DetectionRecord& kf = r.detection(DetectorId::Pbd);
        require(kf.alarmed, tag + ": physics residual never alarmed");
        require(kf.t_first_alarm >= ins - 1e-9, tag + ": physics alarm preceded the spoof");
        require(kf.t_first_alarm - ins <= 20.0, tag + ": physics latency " +
                                                    num(kf.t_first_alarm - ins) + " s");

        // (b) consensus validation confirms strictly later in every case
        const DetectionRecord& osv = r.detection(DetectorId::Osv);
        require(osv.alarmed, tag + ": consensus check never alarmed");
        require(kf.t_first_alarm < osv.t_first_alarm,
                tag + ": consensus (" + num(osv.t_first_alarm) + ") did not trail physics (" +
                    num(kf.t_first_alarm) + ")");

        // (c) constant spoofs flatten the noise floor; the matched-noise case
        // (last row) hides from the profiler for the whole run
        const DetectionRecord& np = r.detection(DetectorId::Np);
        if (i + 1 < rows.size()) {
            require(np.alarmed, tag + ": noise profiler missed a zero-noise spoof");
            require(np.t_first_alarm >= ins + 49.0 * dt,
                    tag + ": noise alarm at " + num(np.t_first_alarm) +
                        " s is too early for the too-clean hold");
        } else {
            require(!np.alarmed, tag + ": noise profiler alarmed on a noise-matched spoof at " +
                                     num(np.t_first_alarm));
        }
    }
}

// ---------- C7: identical spoof on every redundant level channel ----------

void c7_consensus_blindness() {
    const std::string text = R"({
        "seed": 7001, "max_runtime_s": 40,
        "attacks": [
            {"class": "mim", "target": {"type": "sensor", "kind": "lt", "id": 1},
             "value": 60.0, "unit": "pct", "noise_sigma": 0.0, "t_start_s": 3.0},
            {"class": "mim", "target": {"type": "sensor", "kind": "lt", "id": 2},
             "value": 60.0, "unit": "pct", "noise_sigma": 0.0, "t_start_s": 3.0},
            {"class": "mim", "target": {"type": "sensor", "kind": "lt", "id": 3},
             "value": 60.0, "unit": "pct", "noise_sigma": 0.0, "t_start_s": 3.0}
        ]
    })";
    const RunResult r = run_scenario(parse_scenario_text(text, "."));
    require(r.outcome != RunOutcomeKind::Error, "run errored: " + r.error);

    const DetectionRecord& osv = r.detection(DetectorId::Osv);
    require(osv.enabled && !osv.alarmed,
            "consensus check alarmed at t=" + num(osv.t_first_alarm) +
                " despite all channels agreeing");
    const DetectionRecord& kf = r.detection(DetectorId::Pbd);
    require(kf.alarmed, "physics residual stayed silent");
    require(kf.t_first_alarm >= 3.0, "physics alarm preceded the spoof");
}

// ---------- C8: bundled reference aggregates and rendering ----------

std::vector<std::string> md_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (size_t i = 1; i < line.size(); ++i) {
        if (line[i] == '|') {
            while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
            while (!cur.empty() && cur.back() == ' ') cur.pop_back();
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(line[i]);
        }
    }
    return cells;
}

void c8_reference_arithmetic() {
    const std::vector<BenchRow>& ref = reference_table();
    const LatencySummary kf = detector_summary(ref, DetectorId::Pbd);
    require(kf.n_detected == 9, "reference KF detections " + std::to_string(kf.n_detected));
    // mean of (alarm - insertion) across the nine bundled rows: 50.8/9 s.
    require(std::abs(kf.mean_latency_s - 50.8 / 9.0) <= 1e-9,
            "mean KF latency " + num(kf.mean_latency_s));

    const std::string report = bench_report(ref, false);
    std::istringstream in(report);
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        if (line.rfind("| 1 |", 0) == 0) {
            const std::vector<std::string> c = md_cells(line);
            require(c.at(4) == "91.2" && c.at(5) == "5.5", "case-1 row misrendered: " + line);
            ++checked;
        } else if (line.rfind("| 5 |", 0) == 0) {
            const std::vector<std::string> c = md_cells(line);
            require(c.at(4) == "OT", "case-5 trip cell: " + c.at(4));
            require(c.at(9) == "FP", "case-5 quantum cell: " + c.at(9));
            ++checked;
        } else if (line.rfind("| 9 |", 0) == 0) {
            const std::vector<std::string> c = md_cells(line);
            require(c.at(4) == "OT", "case-9 trip cell: " + c.at(4));
            require(c.at(7) == "-", "case-9 noise cell: " + c.at(7));
            ++checked;
        }
    }
    require(checked == 3, "reference rows missing from the report");
}

// ---------- C9: Latin designs keep one sample per stratum ----------

void c9_latin_property() {
    for (int n : {1, 4, 100}) {
        std::vector<LhsBounds> bounds;
        for (int p = 0; p < 8; ++p)
            bounds.push_back({"p" + std::to_string(p), -2.0 + p, 3.0 + 2.0 * p});
        SeededRng rng(derive_seed(0xC9, static_cast<std::uint64_t>(n)));
        const LhsDesign d = lhs_sample(bounds, n, rng);
        require(oracle::latin_ok(d.unit, n),
                "stratum recount failed for n=" + std::to_string(n));
        require(has_latin_property(d), "library check failed for n=" + std::to_string(n));
    }
}

// ---------- C10: worker count cannot change batch output ----------

void c10_batch_determinism() {
    const std::string dir = SGSIM_DATA_DIR;
    const std::string text = read_text_file(dir + "/mim_benchmark.json");
    const DesignTable design = read_design_csv(dir + "/mim_benchmark_design.csv");

    BatchOptions serial;
    serial.jobs = 1;
    BatchOptions wide;
    wide.jobs = 8;
    const std::string a = results_csv_text(run_batch(text, dir, design, serial));
    const std::string b = results_csv_text(run_batch(text, dir, design, wide));
    require(!a.empty() && a == b, "results differ between 1 and 8 workers");
}

// ---------- harness ----------

struct Criterion {
    const char* label;
    double budget_s;
    std::function<void()> body;
};

} // namespace

int main() {
    const std::vector<Criterion> gate{
        {"C1 closed-form channel temperature matches RK4 integration", 5.0,
         c1_temperature_oracle},
        {"C2 Kalman trace matches the information-filter oracle, covariance stays PSD", 5.0,
         c2_kalman_oracle},
        {"C3 statevector kernel matches the dense oracle, Gram is PSD", 10.0, c3_quantum_oracle},
        {"C4 SMO duals match the projected-gradient oracle, XOR trains 4/4", 30.0,
         c4_smo_oracle},
        {"C5 100 attack-free 70 s runs raise no physics/consensus/noise alarms", 120.0,
         c5_baseline_false_positives},
        {"C6 nine-case spoof benchmark: physics within 20 s, before consensus, "
         "noise-matched spoof evades profiling",
         180.0, c6_benchmark_behaviors},
        {"C7 identical spoof on all level channels blinds consensus but not physics", 30.0,
         c7_consensus_blindness},
        {"C8 bundled reference aggregates: mean KF latency and OT/-/FP rendering", 1.0,
         c8_reference_arithmetic},
        {"C9 Latin designs keep one sample per stratum per dimension", 1.0, c9_latin_property},
        {"C10 batch results byte-identical at 1 and 8 workers", 120.0, c10_batch_determinism},
    };

    int failed = 0;
    for (const Criterion& c : gate) {
        const auto start = std::chrono::steady_clock::now();
        std::string why;
        try {
            c.body();
        } catch (const std::exception& e) {
            why = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (why.empty() && elapsed > c.budget_s)
            why = "over budget: " + num(elapsed) + " s > " + num(c.budget_s) + " s";
        if (why.empty()) {
            std::printf("[PASS] %s (%.1fs)\n", c.label, elapsed);
        } else {
            std::printf("[FAIL] %s (%.1fs): %s\n", c.label, elapsed, why.c_str());
            ++failed;
        }
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(gate.size()) - failed, gate.size());
    return failed == 0 ? 0 : 1;
}
