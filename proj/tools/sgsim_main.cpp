// Command-line front end: simulate | sample | batch | train | bench.
// Exit codes: 0 success, 2 configuration or I/O error, 3 run failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgsim/bench.hpp"
#include "sgsim/lhs.hpp"
#include "sgsim/scenario.hpp"
#include "sgsim/simulation.hpp"
#include "sgsim/textio.hpp"
#include "sgsim/train.hpp"

namespace {

using namespace sgsim;

std::vector<LhsBounds> read_bounds_file(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("bounds: invalid JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw std::invalid_argument("bounds: expected a nonempty array of {name, lo, hi}");
    std::vector<LhsBounds> bounds;
    for (size_t i = 0; i < doc.size(); ++i) {
        const nlohmann::json& j = doc[i];
        const std::string ctx = "bounds[" + std::to_string(i) + "]";
        if (!j.is_object()) throw std::invalid_argument(ctx + ": expected an object");
        for (const auto& item : j.items())
            if (item.key() != "name" && item.key() != "lo" && item.key() != "hi")
                throw std::invalid_argument(ctx + ": unknown field '" + item.key() + "'");
        if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
            throw std::invalid_argument(ctx + ": 'name' must be a nonempty string");
        if (!j.contains("lo") || !j["lo"].is_number() || !j.contains("hi") ||
            !j["hi"].is_number())
            throw std::invalid_argument(ctx + ": 'lo' and 'hi' must be numbers");
        bounds.push_back({j["name"].get<std::string>(), j["lo"].get<double>(),
                          j["hi"].get<double>()});
    }
    return bounds;
}

void print_run(const RunResult& r) {
    std::cout << "case " << r.id << ": ";
    switch (r.outcome) {
        case RunOutcomeKind::Baseline:
            std::cout << "no trip (attack-free run, t = " << fmt_num(r.t_final_s) << " s)\n";
            break;
        case RunOutcomeKind::Tripped:
            std::cout << "level trip at t = " << fmt_num(r.t_trip_s) << " s\n";
            break;
        case RunOutcomeKind::OverTime:
            std::cout << "no trip before the time limit (t = " << fmt_num(r.t_final_s) << " s)\n";
            break;
        case RunOutcomeKind::Error:
            std::cout << "failed: " << r.error << "\n";
            break;
    }
    for (int d = 0; d < kNumDetectors; ++d) {
        const DetectorId id = static_cast<DetectorId>(d);
        const DetectionRecord& rec = r.detection(id);
        std::cout << "  " << to_string(id) << ": ";
        if (!rec.enabled)
            std::cout << "disabled";
        else if (!rec.alarmed)
            std::cout << "no alarm";
        else
            std::cout << "alarm at t = " << fmt_num(rec.t_first_alarm) << " s"
                      << (r.false_positive(id) ? " (before the first insertion)" : "");
        std::cout << "\n";
    }
}

int run_simulate(const std::string& path, bool has_seed, std::uint64_t seed,
                 const std::string& telemetry) {
    Scenario sc = load_scenario_file(path);
    if (has_seed) sc.seed = seed;
    const RunResult r = run_scenario(sc, telemetry);
    print_run(r);
    return r.outcome == RunOutcomeKind::Error ? 3 : 0;
}

int run_sample(int n, const std::string& bounds_path, const std::string& out_path,
               std::uint64_t seed) {
    const std::vector<LhsBounds> bounds = read_bounds_file(bounds_path);
    SeededRng rng(seed);
    const LhsDesign design = lhs_sample(bounds, n, rng);
    write_design_csv(design, out_path);
    std::cout << "wrote " << n << " x " << bounds.size() << " design to " << out_path << "\n";
    return 0;
}

int run_batch(const std::string& scenario_path, const std::string& design_path, int jobs,
              bool has_seed, std::uint64_t seed, const std::string& out_path,
              const std::string& telemetry_dir) {
    const std::string text = read_text_file(scenario_path);
    const std::string base_dir = std::filesystem::path(scenario_path).parent_path().string();
    const DesignTable design = read_design_csv(design_path);

    BatchOptions opt;
    opt.jobs = jobs;
    opt.results_csv = out_path;
    opt.telemetry_dir = telemetry_dir;
    opt.has_seed_override = has_seed;
    opt.seed_override = seed;

    const std::vector<RunResult> results = run_batch(text, base_dir, design, opt);
    if (out_path.empty())
        std::cout << results_csv_text(results);
    else
        std::cout << "wrote " << results.size() << " case(s) to " << out_path << "\n";

    int n_err = 0;
    for (const RunResult& r : results)
        if (r.outcome == RunOutcomeKind::Error) {
            ++n_err;
            std::cerr << "case " << r.id << " failed: " << r.error << "\n";
        }
    return n_err > 0 ? 3 : 0;
}

int run_train(const std::string& spec_path) {
    const TrainSpec spec = load_train_spec_file(spec_path);
    const TrainOutcome out = train_models(spec);
    std::cout << "dataset: " << out.n_normal << " normal + " << out.n_attacked
              << " attacked samples (" << out.n_train << " train / " << out.n_holdout
              << " holdout)\n";
    std::cout << "svm holdout accuracy:  " << fmt_num(out.svm_holdout_accuracy) << "\n";
    std::cout << "qsvm holdout accuracy: " << fmt_num(out.qsvm_holdout_accuracy) << "\n";
    std::cout << "wrote " << out.svm_model_path << "\n";
    std::cout << "wrote " << out.qsvm_model_path << "\n";
    std::cout << "wrote " << out.manifest_path << "\n";
    std::cout << "wrote " << out.dataset_csv_path << "\n";
    return 0;
}

int run_bench(const std::string& results_path, bool reference, const std::string& out_path) {
    const std::vector<BenchRow> rows = parse_results_csv(read_text_file(results_path));
    const std::string report = bench_report(rows, reference);
    if (out_path.empty()) {
        std::cout << report;
    } else {
        write_text_file(out_path, report);
        std::cout << "wrote report to " << out_path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steam-generator level-control loop: attack and detection testbed"};
    app.require_subcommand(1);

    std::string scenario_path, design_path, bounds_path, out_path, telemetry, telemetry_dir;
    std::string spec_path, results_path;
    std::uint64_t seed = 0;
    int n = 0, jobs = 1;
    bool reference = false;

    CLI::App* sim = app.add_subcommand("simulate", "run one scenario and report detections");
    sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
    CLI::Option* sim_seed = sim->add_option("--seed", seed, "override the scenario seed");
    sim->add_option("--telemetry", telemetry, "write per-step telemetry CSV here");

    CLI::App* smp = app.add_subcommand("sample", "draw a Latin hypercube design");
    smp->add_option("--n", n, "number of samples")->required();
    smp->add_option("--bounds", bounds_path, "JSON array of {name, lo, hi}")->required();
    smp->add_option("--out", out_path, "design CSV to write")->required();
    smp->add_option("--seed", seed, "design seed (default 0)");

    CLI::App* bat = app.add_subcommand("batch", "run one case per design row");
    bat->add_option("scenario", scenario_path, "scenario template JSON")->required();
    bat->add_option("--design", design_path, "design CSV (columns are config paths)")->required();
    bat->add_option("--jobs", jobs, "parallel workers (default 1)");
    CLI::Option* bat_seed = bat->add_option("--seed", seed, "override the template master seed");
    bat->add_option("--out", out_path, "results CSV (default: print to stdout)");
    bat->add_option("--telemetry-dir", telemetry_dir, "write per-case telemetry CSVs here");

    CLI::App* trn = app.add_subcommand("train", "build a labeled dataset and train both models");
    trn->add_option("dataset", spec_path, "dataset spec JSON")->required();

    CLI::App* ben = app.add_subcommand("bench", "summarize a results CSV");
    ben->add_option("results", results_path, "results CSV from a batch run")->required();
    ben->add_flag("--reference", reference, "include the bundled reference comparison");
    ben->add_option("--out", out_path, "report markdown path (default: print to stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return run_simulate(scenario_path, !sim_seed->empty(), seed, telemetry);
        if (smp->parsed()) return run_sample(n, bounds_path, out_path, seed);
        if (bat->parsed())
            return run_batch(scenario_path, design_path, jobs, !bat_seed->empty(), seed,
                             out_path, telemetry_dir);
        if (trn->parsed()) return run_train(spec_path);
        if (ben->parsed()) return run_bench(results_path, reference, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
