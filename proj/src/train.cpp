#include "sgsim/train.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "sgsim/features.hpp"
#include "sgsim/rng.hpp"
#include "sgsim/simulation.hpp"
#include "sgsim/svm.hpp"
#include "sgsim/textio.hpp"
#include "sgsim/units.hpp"

namespace sgsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
    throw std::invalid_argument("train spec: " + ctx + ": " + msg);
}

void expect_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) fail(ctx, "expected an object");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known) fail(ctx, "unknown field '" + item.key() + "'");
    }
}

const json& member(const json& obj, const std::string& key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ctx, "missing required field '" + key + "'");
    return *it;
}

double num_or(const json& obj, const std::string& key, double dflt, const std::string& ctx) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(ctx, "field '" + key + "' must be a number");
    return v.get<double>();
}

int integer_or(const json& obj, const std::string& key, int dflt, const std::string& ctx) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(ctx, "field '" + key + "' must be an integer");
    return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& ctx) {
    const json& v = member(obj, key, ctx);
    if (!v.is_string() || v.get<std::string>().empty())
        fail(ctx, "field '" + key + "' must be a nonempty string");
    return v.get<std::string>();
}

std::string resolve(const std::string& base_dir, const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute() || base_dir.empty()) return rel;
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

// ---------- dataset assembly ----------

struct Sample {
    std::vector<double> c4; // classical schema, raw
    std::vector<double> q3; // quantum schema, raw (pre-scaling)
    int label = 0;          // +1 anomalous, -1 normal
};

// Replays one scenario and harvests strided feature samples through the
// run-loop observer, so training sees exactly what the online classifiers
// would see. t_label_min gates anomalous harvesting to past the insertion.
void collect_run(Scenario sc, int label, double t_label_min, const TrainSpec& spec,
                 std::vector<Sample>& out) {
    sc.output.telemetry_csv.clear();
    const double p_nom = sc.core_power_w;
    const double ws_nom = sc.controller.nominal_ws_kg_s;
    const double wst_nom = implied_flowrate(sc.core_power_w, sc.plant);
    const int burn_in = sc.detectors.kf.burn_in_steps;

    int eligible = 0;
    int steps = 0;
    auto observer = [&](const StepInput& in, const StepVerdicts& sv) {
        ++steps;
        if (steps <= burn_in) return; // flow estimate not settled yet
        if (in.t_s < spec.warmup_skip_s) return;
        if (in.t_s < t_label_min) return;
        if (eligible++ % spec.sample_stride_steps != 0) return;

        FeatureFrame f;
        f.lt_pct = in.lt_pct;
        f.ft_kg_s = in.ft_kg_s;
        f.st_kg_s = in.st_kg_s;
        f.p_sg_w = in.p_sg_w;
        f.kf_ws_kg_s = sv.kf_ws_kg_s;
        f.p_nom_w = p_nom;
        f.ws_nom_kg_s = ws_nom;
        f.wst_nom_kg_s = wst_nom;
        out.push_back({extract_classical4(f), extract_quantum3_raw(f), label});
    };

    const RunResult r = run_scenario(sc, "", observer);
    if (r.outcome == RunOutcomeKind::Error)
        throw std::runtime_error("train: generating run '" + sc.id + "' failed: " + r.error);
}

void shuffle_indices(std::vector<size_t>& idx, std::uint64_t seed) {
    SeededRng rng(seed);
    for (size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.uniform_below(i)]);
}

// Deterministic subsample to the per-class cap.
void cap_class(std::vector<Sample>& samples, int cap, std::uint64_t seed) {
    if (static_cast<int>(samples.size()) <= cap) return;
    std::vector<size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    shuffle_indices(idx, seed);
    idx.resize(static_cast<size_t>(cap));
    std::sort(idx.begin(), idx.end()); // keep chronological order
    std::vector<Sample> kept;
    kept.reserve(idx.size());
    for (size_t i : idx) kept.push_back(std::move(samples[i]));
    samples = std::move(kept);
}

// Split one class into train/holdout shares; every class keeps at least one
// training sample, and classes of two or more keep at least one held out.
void split_class(const std::vector<Sample>& samples, double fraction, std::uint64_t seed,
                 std::vector<Sample>& train, std::vector<Sample>& holdout) {
    const size_t n = samples.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    shuffle_indices(idx, seed);
    size_t n_hold = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
    if (n >= 2) n_hold = std::clamp<size_t>(n_hold, 1, n - 1);
    else n_hold = 0;
    for (size_t i = 0; i < n; ++i)
        (i < n_hold ? holdout : train).push_back(samples[idx[i]]);
}

double holdout_accuracy(const KernelModel& m, const std::vector<Sample>& holdout,
                        bool quantum) {
    if (holdout.empty()) return std::numeric_limits<double>::quiet_NaN();
    int correct = 0;
    for (const Sample& s : holdout) {
        const SvmPrediction p = svm_predict(m, quantum ? s.q3 : s.c4);
        if (p.anomalous == (s.label > 0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(holdout.size());
}

std::string dataset_csv_text(const std::vector<Sample>& train,
                             const std::vector<Sample>& holdout) {
    std::string out = "split,label,p_ratio,ws_ratio,wst_ratio,level_frac,"
                      "lt_spread_pct,ft_kf_dev_kg_s,st_ft_dev_kg_s\n";
    auto emit = [&out](const char* split, const Sample& s) {
        std::vector<std::string> cells;
        cells.emplace_back(split);
        cells.push_back(std::to_string(s.label));
        for (double v : s.c4) cells.push_back(fmt_num17(v));
        for (double v : s.q3) cells.push_back(fmt_num17(v));
        out += join(cells);
        out.push_back('\n');
    };
    for (const Sample& s : train) emit("train", s);
    for (const Sample& s : holdout) emit("holdout", s);
    return out;
}

} // namespace

// ---------- spec parsing ----------

TrainSpec parse_train_spec_text(const std::string& json_text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("train spec: invalid JSON: ") + e.what());
    }
    expect_object(doc, "top level");
    reject_unknown(doc,
                   {"seed", "normal", "attacked", "sample_stride_steps", "warmup_skip_s",
                    "attack_margin_s", "holdout_fraction", "max_samples_per_class", "svm",
                    "qsvm", "output"},
                   "top level");

    TrainSpec spec;
    const json& seed = member(doc, "seed", "top level");
    if (!seed.is_number_unsigned()) fail("top level", "field 'seed' must be a nonnegative integer");
    spec.seed = seed.get<std::uint64_t>();

    {
        const json& j = member(doc, "normal", "top level");
        expect_object(j, "normal");
        reject_unknown(j, {"scenario", "runs"}, "normal");
        spec.normal_scenario = resolve(base_dir, text(j, "scenario", "normal"));
        spec.normal_runs = integer_or(j, "runs", spec.normal_runs, "normal");
    }
    {
        const json& j = member(doc, "attacked", "top level");
        expect_object(j, "attacked");
        reject_unknown(j, {"scenario", "design"}, "attacked");
        spec.attacked_scenario = resolve(base_dir, text(j, "scenario", "attacked"));
        spec.attacked_design = resolve(base_dir, text(j, "design", "attacked"));
    }
    spec.sample_stride_steps =
        integer_or(doc, "sample_stride_steps", spec.sample_stride_steps, "top level");
    spec.warmup_skip_s = num_or(doc, "warmup_skip_s", spec.warmup_skip_s, "top level");
    spec.attack_margin_s = num_or(doc, "attack_margin_s", spec.attack_margin_s, "top level");
    spec.holdout_fraction = num_or(doc, "holdout_fraction", spec.holdout_fraction, "top level");
    spec.max_samples_per_class =
        integer_or(doc, "max_samples_per_class", spec.max_samples_per_class, "top level");
    if (doc.contains("svm")) {
        const json& j = doc.at("svm");
        expect_object(j, "svm");
        reject_unknown(j, {"c", "gamma", "tol"}, "svm");
        spec.svm_c = num_or(j, "c", spec.svm_c, "svm");
        spec.svm_gamma = num_or(j, "gamma", spec.svm_gamma, "svm");
        spec.svm_tol = num_or(j, "tol", spec.svm_tol, "svm");
    }
    if (doc.contains("qsvm")) {
        const json& j = doc.at("qsvm");
        expect_object(j, "qsvm");
        reject_unknown(j, {"c", "tol"}, "qsvm");
        spec.qsvm_c = num_or(j, "c", spec.qsvm_c, "qsvm");
        spec.qsvm_tol = num_or(j, "tol", spec.qsvm_tol, "qsvm");
    }
    {
        const json& j = member(doc, "output", "top level");
        expect_object(j, "output");
        reject_unknown(j, {"dir"}, "output");
        spec.output_dir = resolve(base_dir, text(j, "dir", "output"));
    }

    if (spec.normal_runs < 1) fail("normal", "'runs' must be at least 1");
    if (spec.sample_stride_steps < 1) fail("top level", "'sample_stride_steps' must be at least 1");
    if (spec.warmup_skip_s < 0.0) fail("top level", "'warmup_skip_s' must be nonnegative");
    if (spec.attack_margin_s < 0.0) fail("top level", "'attack_margin_s' must be nonnegative");
    if (!(spec.holdout_fraction > 0.0) || !(spec.holdout_fraction < 1.0))
        fail("top level", "'holdout_fraction' must lie in (0, 1)");
    if (spec.max_samples_per_class < 4)
        fail("top level", "'max_samples_per_class' must be at least 4");
    if (!(spec.svm_c > 0.0) || !(spec.svm_gamma > 0.0) || !(spec.svm_tol > 0.0))
        fail("svm", "'c', 'gamma', and 'tol' must be positive");
    if (!(spec.qsvm_c > 0.0) || !(spec.qsvm_tol > 0.0))
        fail("qsvm", "'c' and 'tol' must be positive");
    return spec;
}

TrainSpec load_train_spec_file(const std::string& path) {
    const std::string text = read_text_file(path);
    return parse_train_spec_text(text, std::filesystem::path(path).parent_path().string());
}

// ---------- pipeline ----------

TrainOutcome train_models(const TrainSpec& spec) {
    const std::string normal_text = read_text_file(spec.normal_scenario);
    const std::string normal_dir =
        std::filesystem::path(spec.normal_scenario).parent_path().string();
    const std::string attacked_text = read_text_file(spec.attacked_scenario);
    const std::string attacked_dir =
        std::filesystem::path(spec.attacked_scenario).parent_path().string();
    const DesignTable design = read_design_csv(spec.attacked_design);
    if (design.rows.empty())
        throw std::invalid_argument("train: attacked design has no rows");

    std::vector<std::uint64_t> normal_seeds, attacked_seeds;
    std::vector<Sample> normal, attacked;

    for (int r = 0; r < spec.normal_runs; ++r) {
        Scenario sc = parse_scenario_text(normal_text, normal_dir);
        if (!sc.attacks.empty())
            throw std::invalid_argument("train: the normal scenario must not define attacks");
        sc.seed = derive_seed(spec.seed, 0x8000 + static_cast<std::uint64_t>(r));
        sc.id = "normal_" + std::to_string(r + 1);
        normal_seeds.push_back(sc.seed);
        collect_run(std::move(sc), -1, -std::numeric_limits<double>::infinity(), spec, normal);
    }

    for (size_t i = 0; i < design.rows.size(); ++i) {
        std::vector<std::pair<std::string, double>> overrides;
        for (size_t j = 0; j < design.columns.size(); ++j)
            overrides.emplace_back(design.columns[j], design.rows[i][j]);
        Scenario sc = parse_scenario_with_overrides(attacked_text, attacked_dir, overrides);
        if (sc.attacks.empty())
            throw std::invalid_argument("train: the attacked scenario defines no attacks");
        // same derivation as the batch runner, so these runs mirror batch rows
        sc.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
        sc.id = "attacked_" + std::to_string(i + 1);
        attacked_seeds.push_back(sc.seed);
        double insertion = std::numeric_limits<double>::infinity();
        for (const AttackSpec& a : sc.attacks) insertion = std::min(insertion, a.t_start_s);
        collect_run(std::move(sc), +1, insertion + spec.attack_margin_s, spec, attacked);
    }

    const int n_normal_collected = static_cast<int>(normal.size());
    const int n_attacked_collected = static_cast<int>(attacked.size());
    cap_class(normal, spec.max_samples_per_class, derive_seed(spec.seed, 0xC000));
    cap_class(attacked, spec.max_samples_per_class, derive_seed(spec.seed, 0xC001));

    if (normal.empty() || attacked.empty())
        throw std::invalid_argument("train: dataset is single-class (normal " +
                                    std::to_string(normal.size()) + ", attacked " +
                                    std::to_string(attacked.size()) + ")");
    const double total = static_cast<double>(normal.size() + attacked.size());
    const double minority = static_cast<double>(std::min(normal.size(), attacked.size()));
    if (minority / total < 0.05)
        throw std::invalid_argument("train: class imbalance beyond 95/5 (normal " +
                                    std::to_string(normal.size()) + ", attacked " +
                                    std::to_string(attacked.size()) + ")");

    std::vector<Sample> train, holdout;
    split_class(normal, spec.holdout_fraction, derive_seed(spec.seed, 0xD000), train, holdout);
    split_class(attacked, spec.holdout_fraction, derive_seed(spec.seed, 0xD001), train, holdout);

    std::vector<std::vector<double>> x_c4, x_q3;
    std::vector<int> y;
    x_c4.reserve(train.size());
    x_q3.reserve(train.size());
    y.reserve(train.size());
    for (const Sample& s : train) {
        x_c4.push_back(s.c4);
        x_q3.push_back(s.q3);
        y.push_back(s.label);
    }

    KernelDesc rbf;
    rbf.type = KernelType::Rbf;
    rbf.gamma = spec.svm_gamma;
    const KernelModel svm =
        smo_train(x_c4, y, FeatureSchema::Classical4, rbf, spec.svm_c, spec.svm_tol);

    KernelDesc quantum;
    quantum.type = KernelType::Quantum; // default 3-qubit map matches the schema
    const KernelModel qsvm =
        smo_train(x_q3, y, FeatureSchema::Quantum3, quantum, spec.qsvm_c, spec.qsvm_tol);

    TrainOutcome out;
    out.n_normal = static_cast<int>(normal.size());
    out.n_attacked = static_cast<int>(attacked.size());
    out.n_train = static_cast<int>(train.size());
    out.n_holdout = static_cast<int>(holdout.size());
    out.svm_holdout_accuracy = holdout_accuracy(svm, holdout, false);
    out.qsvm_holdout_accuracy = holdout_accuracy(qsvm, holdout, true);

    std::filesystem::create_directories(spec.output_dir);
    const std::filesystem::path dir(spec.output_dir);
    out.svm_model_path = (dir / "svm_model.json").string();
    out.qsvm_model_path = (dir / "qsvm_model.json").string();
    out.manifest_path = (dir / "manifest.json").string();
    out.dataset_csv_path = (dir / "train_dataset.csv").string();
    save_model(svm, out.svm_model_path);
    save_model(qsvm, out.qsvm_model_path);
    write_text_file(out.dataset_csv_path, dataset_csv_text(train, holdout));

    json manifest;
    manifest["format_version"] = 1;
    manifest["master_seed"] = spec.seed;
    manifest["normal"] = {{"scenario", spec.normal_scenario},
                          {"runs", spec.normal_runs},
                          {"seeds", normal_seeds}};
    manifest["attacked"] = {{"scenario", spec.attacked_scenario},
                            {"design", spec.attacked_design},
                            {"seeds", attacked_seeds}};
    manifest["sampling"] = {{"sample_stride_steps", spec.sample_stride_steps},
                            {"warmup_skip_s", spec.warmup_skip_s},
                            {"attack_margin_s", spec.attack_margin_s},
                            {"holdout_fraction", spec.holdout_fraction},
                            {"max_samples_per_class", spec.max_samples_per_class}};
    manifest["counts"] = {{"normal_collected", n_normal_collected},
                          {"attacked_collected", n_attacked_collected},
                          {"normal_used", out.n_normal},
                          {"attacked_used", out.n_attacked},
                          {"train", out.n_train},
                          {"holdout", out.n_holdout}};
    manifest["svm"] = {{"kernel", "rbf"},
                       {"c", spec.svm_c},
                       {"gamma", spec.svm_gamma},
                       {"tol", spec.svm_tol},
                       {"holdout_accuracy", out.svm_holdout_accuracy},
                       {"n_support", svm.support_vectors.size()}};
    manifest["qsvm"] = {{"kernel", "quantum_zz"},
                        {"c", spec.qsvm_c},
                        {"tol", spec.qsvm_tol},
                        {"holdout_accuracy", out.qsvm_holdout_accuracy},
                        {"n_support", qsvm.support_vectors.size()},
                        {"feature_lo", qsvm.scaler.lo},
                        {"feature_hi", qsvm.scaler.hi}};
    write_text_file(out.manifest_path, manifest.dump(2) + "\n");

    return out;
}

} // namespace sgsim
