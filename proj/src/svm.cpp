#include "sgsim/svm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace sgsim {

namespace {

constexpr double kTau = 1e-12; // curvature floor for degenerate pairs

struct WorkingSet {
    int i = -1, j = -1;
    double m = 0.0, big_m = 0.0;
};

// v_t = -y_t * grad_t; m = max over I_up, M = min over I_low.
WorkingSet select_pair(const Eigen::MatrixXd& k, const std::vector<int>& y,
                       const std::vector<double>& alpha, const std::vector<double>& grad,
                       double c) {
    const int n = static_cast<int>(y.size());
    WorkingSet ws;
    ws.m = -std::numeric_limits<double>::infinity();
    ws.big_m = std::numeric_limits<double>::infinity();

    for (int t = 0; t < n; ++t) {
        const bool in_up = (y[t] == +1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
        if (!in_up) continue;
        const double v = -y[t] * grad[t];
        if (v > ws.m) { // strict: lowest index wins ties
            ws.m = v;
            ws.i = t;
        }
    }
    if (ws.i < 0) return ws;

    double best_score = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
        const bool in_low = (y[t] == +1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c);
        if (!in_low) continue;
        const double v = -y[t] * grad[t];
        ws.big_m = std::min(ws.big_m, v);
        if (v >= ws.m) continue; // no descent with this partner
        const double b = ws.m - v;
        double a = k(ws.i, ws.i) + k(t, t) - 2.0 * k(ws.i, t);
        if (a <= 0.0) a = kTau;
        const double score = -(b * b) / a; // second-order gain
        if (score < best_score) {
            best_score = score;
            ws.j = t;
        }
    }
    return ws;
}

} // namespace

double smo_kkt_gap(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                   const std::vector<double>& alpha, double c) {
    const int n = static_cast<int>(y.size());
    double m = -std::numeric_limits<double>::infinity();
    double big_m = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
        double grad = -1.0;
        for (int s = 0; s < n; ++s) grad += y[t] * y[s] * gram(t, s) * alpha[s];
        const double v = -y[t] * grad;
        const bool in_up = (y[t] == +1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
        const bool in_low = (y[t] == +1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c);
        if (in_up) m = std::max(m, v);
        if (in_low) big_m = std::min(big_m, v);
    }
    return m - big_m;
}

SmoSolution smo_solve(const Eigen::MatrixXd& k, const std::vector<int>& y,
                      double c, double tol, int max_iter) {
    const int n = static_cast<int>(y.size());
    if (k.rows() != n || k.cols() != n)
        throw std::invalid_argument("smo_solve: gram matrix size must match labels");
    if (n < 2)
        throw std::invalid_argument("smo_solve: need at least two samples");
    if (c <= 0.0 || tol <= 0.0)
        throw std::invalid_argument("smo_solve: C and tol must be positive");
    bool has_pos = false, has_neg = false;
    for (int t : y) {
        if (t == +1) has_pos = true;
        else if (t == -1) has_neg = true;
        else throw std::invalid_argument("smo_solve: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("smo_solve: both classes required");

    std::vector<double> alpha(static_cast<size_t>(n), 0.0);
    std::vector<double> grad(static_cast<size_t>(n), -1.0); // grad f = Q*alpha - e at alpha = 0

    SmoSolution sol;
    int iter = 0;
    WorkingSet ws;
    for (; iter < max_iter; ++iter) {
        ws = select_pair(k, y, alpha, grad, c);
        if (ws.i < 0 || ws.j < 0 || ws.m - ws.big_m <= tol) break;

        const int i = ws.i, j = ws.j;
        const double old_ai = alpha[static_cast<size_t>(i)];
        const double old_aj = alpha[static_cast<size_t>(j)];
        double& ai = alpha[static_cast<size_t>(i)];
        double& aj = alpha[static_cast<size_t>(j)];

        double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
        if (quad <= 0.0) quad = kTau;

        if (y[static_cast<size_t>(i)] != y[static_cast<size_t>(j)]) {
            const double delta = (-grad[static_cast<size_t>(i)] - grad[static_cast<size_t>(j)]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = -diff; }
            }
            if (diff > 0.0) {
                if (ai > c) { ai = c; aj = c - diff; }
            } else {
                if (aj > c) { aj = c; ai = c + diff; }
            }
        } else {
            const double delta = (grad[static_cast<size_t>(i)] - grad[static_cast<size_t>(j)]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c) {
                if (ai > c) { ai = c; aj = sum - c; }
            } else {
                if (aj < 0.0) { aj = 0.0; ai = sum; }
            }
            if (sum > c) {
                if (aj > c) { aj = c; ai = sum - c; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = sum; }
            }
        }

        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        for (int t = 0; t < n; ++t) {
            grad[static_cast<size_t>(t)] +=
                y[static_cast<size_t>(t)] *
                (y[static_cast<size_t>(i)] * k(t, i) * dai + y[static_cast<size_t>(j)] * k(t, j) * daj);
        }
    }
    if (iter >= max_iter)
        throw std::runtime_error("smo_solve: iteration cap reached before KKT tolerance");

    sol.alpha = alpha;
    sol.iterations = iter;
    sol.kkt_gap = ws.i < 0 ? 0.0 : ws.m - ws.big_m;

    // bias from the KKT conditions: average y*grad over free vectors, else
    // midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    int n_free = 0;
    for (int t = 0; t < n; ++t) {
        const double yg = y[static_cast<size_t>(t)] * grad[static_cast<size_t>(t)];
        const bool upper = alpha[static_cast<size_t>(t)] >= c;
        const bool lower = alpha[static_cast<size_t>(t)] <= 0.0;
        if (upper) {
            if (y[static_cast<size_t>(t)] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (lower) {
            if (y[static_cast<size_t>(t)] == +1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);
    sol.bias = -rho;

    // W(a) = -(1/2 a'Qa - e'a) = -1/2 sum a_t (grad_t - 1)
    double obj = 0.0;
    for (int t = 0; t < n; ++t)
        obj += alpha[static_cast<size_t>(t)] * (grad[static_cast<size_t>(t)] - 1.0);
    sol.objective = -0.5 * obj;
    return sol;
}

namespace {

Eigen::MatrixXd build_gram(const std::vector<std::vector<double>>& x, const KernelDesc& d,
                           std::vector<std::vector<std::complex<double>>>* states_out) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd k(n, n);
    if (d.type == KernelType::Rbf) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                k(i, j) = k(j, i) = rbf_kernel(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)], d.gamma);
    } else {
        std::vector<std::vector<std::complex<double>>> states;
        states.reserve(static_cast<size_t>(n));
        for (const auto& row : x) states.push_back(quantum_state(row, d.map));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                k(i, j) = k(j, i) =
                    state_fidelity(states[static_cast<size_t>(i)], states[static_cast<size_t>(j)]);
        if (states_out) *states_out = std::move(states);
    }
    return k;
}

} // namespace

KernelModel smo_train(const std::vector<std::vector<double>>& x_raw,
                      const std::vector<int>& y, FeatureSchema schema,
                      const KernelDesc& desc, double c, double tol) {
    if (x_raw.size() != y.size())
        throw std::invalid_argument("smo_train: feature/label count mismatch");
    if (x_raw.size() < 2)
        throw std::invalid_argument("smo_train: need at least two samples");
    const size_t dim = static_cast<size_t>(feature_dim(schema));
    for (const auto& r : x_raw)
        if (r.size() != dim)
            throw std::invalid_argument("smo_train: row dimension does not match schema");
    if (desc.type == KernelType::Quantum && desc.map.n_qubits != static_cast<int>(dim))
        throw std::invalid_argument("smo_train: feature map width must match schema dimension");

    KernelModel m;
    m.schema = schema;
    m.kernel = desc;
    m.c = c;
    m.train_tol = tol;

    std::vector<std::vector<double>> x = x_raw;
    if (desc.type == KernelType::Quantum) {
        m.scaler = fit_scaler(x_raw);
        for (auto& row : x) row = m.scaler.apply(row);
    }

    Eigen::MatrixXd k = build_gram(x, desc, nullptr);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -1e-6)
        throw std::runtime_error("smo_train: kernel matrix is not positive semidefinite (min eig " +
                                 std::to_string(min_eig) + ")");

    const SmoSolution sol = smo_solve(k, y, c, tol);
    m.bias = sol.bias;
    m.objective = sol.objective;
    for (size_t t = 0; t < x.size(); ++t) {
        if (sol.alpha[t] > 0.0) {
            m.support_vectors.push_back(x[t]);
            m.dual_coefs.push_back(sol.alpha[t] * y[t]);
        }
    }
    if (desc.type == KernelType::Quantum) {
        m.sv_states.reserve(m.support_vectors.size());
        for (const auto& sv : m.support_vectors) m.sv_states.push_back(quantum_state(sv, desc.map));
    }
    return m;
}

SvmPrediction svm_predict(const KernelModel& m, const std::vector<double>& x_raw) {
    if (x_raw.size() != static_cast<size_t>(feature_dim(m.schema)))
        throw std::invalid_argument("svm_predict: feature dimension does not match schema");
    double dec = m.bias;
    if (m.kernel.type == KernelType::Rbf) {
        for (size_t i = 0; i < m.support_vectors.size(); ++i)
            dec += m.dual_coefs[i] * rbf_kernel(m.support_vectors[i], x_raw, m.kernel.gamma);
    } else {
        const std::vector<double> xs = m.scaler.apply(x_raw);
        const auto state = quantum_state(xs, m.kernel.map);
        if (m.sv_states.size() != m.support_vectors.size())
            throw std::runtime_error("svm_predict: statevector cache missing");
        for (size_t i = 0; i < m.support_vectors.size(); ++i)
            dec += m.dual_coefs[i] * state_fidelity(m.sv_states[i], state);
    }
    return {dec >= 0.0, dec}; // tie -> anomalous
}

// ---------- serialization ----------

namespace {

constexpr int kModelFormatVersion = 1;

// 17 significant digits: decimal text that round-trips IEEE doubles exactly
std::string dec17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json num_array(const std::vector<double>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (double v : xs) a.push_back(dec17(v));
    return a;
}

std::vector<double> parse_num_array(const nlohmann::json& a, const char* what) {
    if (!a.is_array())
        throw std::invalid_argument(std::string("load_model: ") + what + " must be an array");
    std::vector<double> out;
    out.reserve(a.size());
    for (const auto& v : a) {
        if (v.is_string()) out.push_back(std::stod(v.get<std::string>()));
        else if (v.is_number()) out.push_back(v.get<double>());
        else throw std::invalid_argument(std::string("load_model: bad number in ") + what);
    }
    return out;
}

} // namespace

void save_model(const KernelModel& m, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["schema"] = to_string(m.schema);
    if (m.kernel.type == KernelType::Rbf) {
        j["kernel"] = {{"type", "rbf"}, {"gamma", dec17(m.kernel.gamma)}};
    } else {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [a, b] : m.kernel.map.entanglement) pairs.push_back({a, b});
        j["kernel"] = {{"type", "quantum_zz"},
                       {"qubits", m.kernel.map.n_qubits},
                       {"depth", m.kernel.map.depth},
                       {"entanglement", pairs}};
    }
    j["c"] = dec17(m.c);
    j["train_tol"] = dec17(m.train_tol);
    j["bias"] = dec17(m.bias);
    j["objective"] = dec17(m.objective);
    if (!m.scaler.empty())
        j["scaling"] = {{"lo", num_array(m.scaler.lo)}, {"hi", num_array(m.scaler.hi)}};
    nlohmann::json svs = nlohmann::json::array();
    for (const auto& sv : m.support_vectors) svs.push_back(num_array(sv));
    j["support_vectors"] = svs;
    j["dual_coefs"] = num_array(m.dual_coefs);

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_model: cannot write " + path);
    out << j.dump(2) << "\n";
}

KernelModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_model: cannot read " + path);
    nlohmann::json j;
    in >> j;

    if (!j.contains("format_version") || j["format_version"].get<int>() != kModelFormatVersion)
        throw std::invalid_argument("load_model: unsupported format version in " + path);

    KernelModel m;
    m.schema = feature_schema_from_string(j.at("schema").get<std::string>());
    const auto& jk = j.at("kernel");
    const std::string ktype = jk.at("type").get<std::string>();
    if (ktype == "rbf") {
        m.kernel.type = KernelType::Rbf;
        m.kernel.gamma = std::stod(jk.at("gamma").get<std::string>());
    } else if (ktype == "quantum_zz") {
        m.kernel.type = KernelType::Quantum;
        m.kernel.map.n_qubits = jk.at("qubits").get<int>();
        m.kernel.map.depth = jk.at("depth").get<int>();
        m.kernel.map.entanglement.clear();
        for (const auto& p : jk.at("entanglement"))
            m.kernel.map.entanglement.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        validate_feature_map(m.kernel.map);
    } else {
        throw std::invalid_argument("load_model: unknown kernel type '" + ktype + "'");
    }
    m.c = std::stod(j.at("c").get<std::string>());
    m.train_tol = std::stod(j.at("train_tol").get<std::string>());
    m.bias = std::stod(j.at("bias").get<std::string>());
    m.objective = std::stod(j.at("objective").get<std::string>());
    if (j.contains("scaling")) {
        m.scaler.lo = parse_num_array(j["scaling"].at("lo"), "scaling.lo");
        m.scaler.hi = parse_num_array(j["scaling"].at("hi"), "scaling.hi");
    }
    for (const auto& sv : j.at("support_vectors"))
        m.support_vectors.push_back(parse_num_array(sv, "support_vectors"));
    m.dual_coefs = parse_num_array(j.at("dual_coefs"), "dual_coefs");
    if (m.support_vectors.size() != m.dual_coefs.size())
        throw std::invalid_argument("load_model: support vector / coefficient count mismatch");

    const size_t dim = static_cast<size_t>(feature_dim(m.schema));
    for (const auto& sv : m.support_vectors)
        if (sv.size() != dim)
            throw std::invalid_argument("load_model: support vector dimension mismatch");

    if (m.kernel.type == KernelType::Quantum) {
        if (m.scaler.empty())
            throw std::invalid_argument("load_model: quantum model lacks scaling bounds");
        m.sv_states.reserve(m.support_vectors.size());
        for (const auto& sv : m.support_vectors)
            m.sv_states.push_back(quantum_state(sv, m.kernel.map));
    }
    return m;
}

} // namespace sgsim
