#include "sgsim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sgsim/attack.hpp"
#include "sgsim/features.hpp"
#include "sgsim/textio.hpp"
#include "sgsim/units.hpp"

namespace sgsim {

namespace {
constexpr int kOsvWarmupSteps = 10;
} // namespace

std::string to_string(DetectorId d) {
    switch (d) {
        case DetectorId::Pbd: return "kf";
        case DetectorId::Osv: return "osv";
        case DetectorId::Np: return "np";
        case DetectorId::Svm: return "svm";
        case DetectorId::Qsvm: return "qsvm";
    }
    return "?";
}

std::string to_string(RunOutcomeKind k) {
    switch (k) {
        case RunOutcomeKind::Baseline: return "baseline";
        case RunOutcomeKind::Tripped: return "tripped";
        case RunOutcomeKind::OverTime: return "over_time";
        case RunOutcomeKind::Error: return "error";
    }
    return "?";
}

// ---------- detector bank ----------

DetectorBank::DetectorBank(const Scenario& s)
    : sc_(s),
      ft_nominal_kg_s_(s.controller.nominal_ws_kg_s),
      st_nominal_kg_s_(implied_flowrate(s.core_power_w, s.plant)) {
    const PlantState init = initial_plant_state(s);
    const KfConfig& k = s.detectors.kf;
    kf_ = make_flow_level_filter(init.ws_kg_s, init.z0_m, k.q_ws, k.q_z, k.r_ws, k.r_z);

    const int n_channels = s.sensors.n_lt + s.sensors.n_ft + s.sensors.n_st;
    np_.reserve(static_cast<size_t>(n_channels));
    for (int i = 0; i < n_channels; ++i)
        np_.emplace_back(s.detectors.np, s.detectors.np_lower_hold_steps);

    if (s.detectors.svm_enabled) {
        svm_ = std::make_unique<KernelModel>(load_model(s.detectors.svm_model_path));
        if (svm_->schema != FeatureSchema::Classical4)
            throw std::invalid_argument("DetectorBank: svm model must use the classical4 schema");
    }
    if (s.detectors.qsvm_enabled) {
        qsvm_ = std::make_unique<KernelModel>(load_model(s.detectors.qsvm_model_path));
        if (qsvm_->schema != FeatureSchema::Quantum3)
            throw std::invalid_argument("DetectorBank: qsvm model must use the quantum3 schema");
    }

    rec_[static_cast<size_t>(DetectorId::Pbd)].enabled = s.detectors.pbd_enabled;
    rec_[static_cast<size_t>(DetectorId::Osv)].enabled = s.detectors.osv_enabled;
    rec_[static_cast<size_t>(DetectorId::Np)].enabled = s.detectors.np_enabled;
    rec_[static_cast<size_t>(DetectorId::Svm)].enabled = s.detectors.svm_enabled;
    rec_[static_cast<size_t>(DetectorId::Qsvm)].enabled = s.detectors.qsvm_enabled;
}

void DetectorBank::note_alarm(DetectorId d, bool alarmed, double t_s) {
    DetectionRecord& r = rec_[static_cast<size_t>(d)];
    if (alarmed && !r.alarmed) {
        r.alarmed = true;
        r.t_first_alarm = t_s;
    }
}

StepVerdicts DetectorBank::step(const StepInput& in) {
    if (in.lt_pct.size() != static_cast<size_t>(sc_.sensors.n_lt) ||
        in.ft_kg_s.size() != static_cast<size_t>(sc_.sensors.n_ft) ||
        in.st_kg_s.size() != static_cast<size_t>(sc_.sensors.n_st))
        throw std::invalid_argument("DetectorBank::step: channel counts changed mid-run");
    ++steps_done_;
    StepVerdicts out;

    // shared flow/level estimate from the first channel of each tap
    Eigen::VectorXd y(2);
    y << in.ft_kg_s[0], z0_from_level(in.lt_pct[0], sc_.closure);
    kf_ = kf_step(kf_, y).first;
    out.kf_ws_kg_s = kf_.x(0);
    const bool kf_ready = steps_done_ > sc_.detectors.kf.burn_in_steps;

    const DetectorConfig& d = sc_.detectors;

    if (d.pbd_enabled && kf_ready) {
        const DetectorVerdict v = pbd_detect(in.p_core_w, kf_.x(0), sc_.plant, d.pbd_tol_rel);
        auto& slot = out.v[static_cast<size_t>(DetectorId::Pbd)];
        slot = {true, v.alarmed, v.residual};
        note_alarm(DetectorId::Pbd, v.alarmed, in.t_s);
    }

    if (d.osv_enabled && steps_done_ > kOsvWarmupSteps) {
        const DetectorVerdict v = osv_detect(in.lt_pct, in.ft_kg_s, in.st_kg_s, d.osv);
        auto& slot = out.v[static_cast<size_t>(DetectorId::Osv)];
        slot = {true, v.alarmed, v.residual};
        note_alarm(DetectorId::Osv, v.alarmed, in.t_s);
    }

    if (d.np_enabled) {
        bool any = false;
        double worst = 0.0;
        size_t ch = 0;
        auto feed = [&](double value, double nominal) {
            const DetectorVerdict v = np_[ch++].push(value / nominal);
            any |= v.alarmed;
            worst = std::max(worst, v.residual);
        };
        for (int i = 0; i < sc_.sensors.n_lt; ++i) feed(in.lt_pct[static_cast<size_t>(i)], 100.0);
        for (int i = 0; i < sc_.sensors.n_ft; ++i)
            feed(in.ft_kg_s[static_cast<size_t>(i)], ft_nominal_kg_s_);
        for (int i = 0; i < sc_.sensors.n_st; ++i)
            feed(in.st_kg_s[static_cast<size_t>(i)], st_nominal_kg_s_);
        if (steps_done_ > d.np.window) {
            auto& slot = out.v[static_cast<size_t>(DetectorId::Np)];
            slot = {true, any, worst};
            note_alarm(DetectorId::Np, any, in.t_s);
        }
    }

    if ((svm_ || qsvm_) && kf_ready) {
        FeatureFrame f;
        f.lt_pct = in.lt_pct;
        f.ft_kg_s = in.ft_kg_s;
        f.st_kg_s = in.st_kg_s;
        f.p_sg_w = in.p_sg_w;
        f.kf_ws_kg_s = kf_.x(0);
        f.p_nom_w = sc_.core_power_w;
        f.ws_nom_kg_s = ft_nominal_kg_s_;
        f.wst_nom_kg_s = st_nominal_kg_s_;
        if (svm_) {
            const SvmPrediction pr = svm_predict(*svm_, extract_classical4(f));
            auto& slot = out.v[static_cast<size_t>(DetectorId::Svm)];
            slot = {true, pr.anomalous, pr.decision};
            note_alarm(DetectorId::Svm, pr.anomalous, in.t_s);
        }
        if (qsvm_) {
            const SvmPrediction pr = svm_predict(*qsvm_, extract_quantum3_raw(f));
            auto& slot = out.v[static_cast<size_t>(DetectorId::Qsvm)];
            slot = {true, pr.anomalous, pr.decision};
            note_alarm(DetectorId::Qsvm, pr.anomalous, in.t_s);
        }
    }
    return out;
}

// ---------- single run ----------

bool RunResult::false_positive(DetectorId d) const {
    const DetectionRecord& r = detection(d);
    return r.alarmed && r.t_first_alarm < earliest_insertion_s;
}

namespace {

void annotate_spoofs(const Scenario& s, RunResult& r) {
    for (const AttackSpec& a : s.attacks) {
        if (a.cls != AttackClass::ManInTheMiddle || a.target.type != TargetType::Sensor) continue;
        if (a.target.kind == SensorKind::LT && std::isnan(r.lt_spoof_pct)) {
            r.lt_spoof_pct = a.spoof_value;
            r.t_insertion_lt_s = a.t_start_s;
        } else if (a.target.kind == SensorKind::FT && std::isnan(r.ft_spoof_lb_s)) {
            r.ft_spoof_lb_s = kg_s_to_lb_s(a.spoof_value);
            r.t_insertion_ft_s = a.t_start_s;
        }
    }
}

std::string telemetry_header(const Scenario& s) {
    std::vector<std::string> cols = {"t_s", "level_true_pct"};
    for (int i = 1; i <= s.sensors.n_lt; ++i) cols.push_back("lt" + std::to_string(i) + "_pct");
    for (int i = 1; i <= s.sensors.n_ft; ++i) cols.push_back("ft" + std::to_string(i) + "_kg_s");
    for (int i = 1; i <= s.sensors.n_st; ++i) cols.push_back("st" + std::to_string(i) + "_kg_s");
    cols.insert(cols.end(), {"valve_cmd", "valve_pos", "ws_kg_s", "wst_kg_s", "p_sg_w",
                             "kf_ws_kg_s"});
    for (DetectorId d : {DetectorId::Pbd, DetectorId::Osv, DetectorId::Np, DetectorId::Svm,
                         DetectorId::Qsvm}) {
        const std::string base = d == DetectorId::Pbd ? "pbd" : to_string(d);
        const char* stat = (d == DetectorId::Svm || d == DetectorId::Qsvm) ? "_decision"
                                                                           : "_residual";
        cols.push_back(base + stat);
        cols.push_back(base + "_alarm");
    }
    return join(cols);
}

void telemetry_row(std::string& out, const Scenario& s, const PlantState& ps,
                   const SignalBus& bus, double valve_cmd_operator,
                   const StepVerdicts& sv) {
    std::vector<std::string> cols;
    cols.reserve(32);
    cols.push_back(fmt_num(ps.t_s));
    cols.push_back(fmt_num(ps.level_nr_pct));
    for (int i = 1; i <= s.sensors.n_lt; ++i) cols.push_back(fmt_num(bus.reading(SensorKind::LT, i)));
    for (int i = 1; i <= s.sensors.n_ft; ++i) cols.push_back(fmt_num(bus.reading(SensorKind::FT, i)));
    for (int i = 1; i <= s.sensors.n_st; ++i) cols.push_back(fmt_num(bus.reading(SensorKind::ST, i)));
    cols.push_back(fmt_num(valve_cmd_operator));
    cols.push_back(fmt_num(ps.valve_pos));
    cols.push_back(fmt_num(ps.ws_kg_s));
    cols.push_back(fmt_num(ps.wst_kg_s));
    cols.push_back(fmt_num(ps.p_sg_w));
    cols.push_back(std::isnan(sv.kf_ws_kg_s) ? "-" : fmt_num(sv.kf_ws_kg_s));
    for (const auto& one : sv.v) {
        cols.push_back(one.evaluated ? fmt_num(one.residual) : "-");
        cols.push_back(one.alarmed ? "1" : "0");
    }
    out += join(cols);
    out.push_back('\n');
}

} // namespace

RunResult run_scenario(const Scenario& s, const std::string& telemetry_override,
                       const StepObserver& observer) {
    validate_scenario(s); // cheap guard for programmatically built configs

    RunResult r;
    r.id = s.id;
    annotate_spoofs(s, r);

    const std::string telemetry_path =
        telemetry_override.empty() ? s.output.telemetry_csv : telemetry_override;

    // Construction failures (bad model files, inconsistent config) throw to
    // the caller; only the live loop downgrades exceptions to an Error row.
    SignalBus bus(s.sensors.n_lt, s.sensors.n_ft, s.sensors.n_st);
    AttackEngine engine(s.attacks, s.seed, s.sensors.n_lt, s.sensors.n_ft, s.sensors.n_st);
    DetectorBank bank(s);
    SglcsController ctrl = s.controller;
    r.earliest_insertion_s = engine.earliest_insertion();

    std::vector<SensorChannel> channels;
    std::vector<SeededRng> streams;
    int label = 0;
    auto add_channels = [&](SensorKind kind, int n, double sigma) {
        for (int i = 1; i <= n; ++i) {
            channels.push_back({kind, i, sigma, 0.0, -1.0});
            streams.emplace_back(derive_seed(s.seed, 0x1000 + static_cast<std::uint64_t>(label++)));
        }
    };
    add_channels(SensorKind::LT, s.sensors.n_lt, s.sensors.sigma_lt_pct);
    add_channels(SensorKind::FT, s.sensors.n_ft, s.sensors.sigma_ft_kg_s);
    add_channels(SensorKind::ST, s.sensors.n_st, s.sensors.sigma_st_kg_s);

    std::string telemetry;
    if (!telemetry_path.empty()) telemetry = telemetry_header(s) + "\n";

    PlantState ps = initial_plant_state(s);
    // the scenario-level limit wins even when the config was built by hand
    // and the trip-section copy was never synced
    TripConfig trip = s.trip;
    trip.max_runtime_s = s.max_runtime_s;
    try {
        for (;;) {
            const TripStatus status = check_trip(ps, trip);
            if (status == TripStatus::TrippedLevel) {
                r.outcome = RunOutcomeKind::Tripped;
                r.t_trip_s = ps.t_s;
                break;
            }
            if (status == TripStatus::OverTime) {
                r.outcome = s.attacks.empty() ? RunOutcomeKind::Baseline : RunOutcomeKind::OverTime;
                break;
            }

            const double t = ps.t_s;
            for (size_t i = 0; i < channels.size(); ++i) {
                SensorChannel& ch = channels[i];
                const double truth = ch.kind == SensorKind::LT   ? ps.level_nr_pct
                                     : ch.kind == SensorKind::FT ? ps.ws_kg_s
                                                                 : ps.wst_kg_s;
                bus.record_sensor(ch.kind, ch.id, t, sample_sensor(ch, truth, t, streams[i]));
            }
            engine.apply_sensors(bus, t);

            const ControllerOverrides ovr = engine.overrides(t);
            const double cmd = sglcs_step(ctrl, bus.reading(SensorKind::LT, 3),
                                          bus.reading(SensorKind::FT, 1),
                                          bus.reading(SensorKind::ST, 1), s.dt_s, &ovr);
            const double plant_cmd = engine.apply_valve(bus, t, cmd);

            StepInput in;
            in.t_s = t;
            for (int i = 1; i <= s.sensors.n_lt; ++i) in.lt_pct.push_back(bus.reading(SensorKind::LT, i));
            for (int i = 1; i <= s.sensors.n_ft; ++i) in.ft_kg_s.push_back(bus.reading(SensorKind::FT, i));
            for (int i = 1; i <= s.sensors.n_st; ++i) in.st_kg_s.push_back(bus.reading(SensorKind::ST, i));
            in.p_sg_w = ps.p_sg_w;
            in.p_core_w = s.core_power_w;
            const StepVerdicts sv = bank.step(in);
            if (observer) observer(in, sv);

            if (!telemetry_path.empty()) telemetry_row(telemetry, s, ps, bus, cmd, sv);

            ps = step_plant(ps, plant_cmd, s.core_power_w, s.dt_s, s.plant, s.closure);
        }
        r.t_final_s = ps.t_s;
        r.detections = bank.records();
    } catch (const std::exception& e) {
        r.outcome = RunOutcomeKind::Error;
        r.error = e.what();
        r.t_final_s = ps.t_s;
        r.detections = bank.records();
    }

    if (!telemetry_path.empty()) write_text_file(telemetry_path, telemetry);
    return r;
}

// ---------- batch ----------

DesignTable read_design_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    DesignTable t;
    if (!std::getline(in, line))
        throw std::invalid_argument("design: empty file " + path);
    t.columns = split_csv_line(line);
    for (auto& c : t.columns)
        if (c.empty()) throw std::invalid_argument("design: empty column name in " + path);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != t.columns.size())
            throw std::invalid_argument("design: row " + std::to_string(lineno) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(t.columns.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                size_t used = 0;
                row.push_back(std::stod(c, &used));
                if (used != c.size()) throw std::invalid_argument("trailing text");
            } catch (const std::exception&) {
                throw std::invalid_argument("design: bad number '" + c + "' at row " +
                                            std::to_string(lineno));
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_design_csv(const LhsDesign& d, const std::string& path) {
    std::vector<std::string> names;
    for (const auto& b : d.bounds) names.push_back(b.name);
    std::string out = join(names) + "\n";
    for (const auto& row : d.scaled) {
        std::vector<std::string> cells;
        for (double v : row) cells.push_back(fmt_num17(v));
        out += join(cells) + "\n";
    }
    write_text_file(path, out);
}

std::vector<RunResult> run_batch(const std::string& scenario_text, const std::string& base_dir,
                                 const DesignTable& design, const BatchOptions& opt) {
    if (opt.jobs < 1 || opt.jobs > 64)
        throw std::invalid_argument("run_batch: jobs must be in [1, 64]");

    const Scenario tmpl = parse_scenario_text(scenario_text, base_dir);
    const std::uint64_t master = opt.has_seed_override ? opt.seed_override : tmpl.seed;

    const size_t n = design.rows.size();
    std::vector<RunResult> results(n);
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n) return;
            const std::string case_id = std::to_string(i + 1);
            RunResult r;
            try {
                std::vector<std::pair<std::string, double>> overrides;
                for (size_t c = 0; c < design.columns.size(); ++c)
                    overrides.emplace_back(design.columns[c], design.rows[i][c]);
                Scenario sc = parse_scenario_with_overrides(scenario_text, base_dir, overrides);
                sc.seed = derive_seed(master, i);
                sc.id = case_id;
                std::string telemetry;
                if (!opt.telemetry_dir.empty())
                    telemetry = opt.telemetry_dir + "/case_" + case_id + ".csv";
                r = run_scenario(sc, telemetry);
            } catch (const std::exception& e) {
                r.id = case_id;
                r.outcome = RunOutcomeKind::Error;
                r.error = e.what();
            }
            results[i] = std::move(r);
        }
    };

    const size_t n_workers = std::min<size_t>(static_cast<size_t>(opt.jobs), std::max<size_t>(n, 1));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (!opt.results_csv.empty()) write_results_csv(results, opt.results_csv);
    return results;
}

namespace {

std::string detection_cell(const RunResult& r, DetectorId d) {
    const DetectionRecord& rec = r.detection(d);
    if (!rec.enabled || !rec.alarmed) return "-";
    if (r.false_positive(d)) return "FP";
    return fmt_num(rec.t_first_alarm);
}

std::string opt_num_cell(double v) { return std::isnan(v) ? "-" : fmt_num(v); }

} // namespace

std::string results_csv_text(const std::vector<RunResult>& results) {
    std::string out =
        "case_id,lt_spoof,ft_spoof,t_insertion_lt,t_insertion_ft,t_trip,"
        "t_det_kf,t_det_osv,t_det_np,t_det_svm,t_det_qsvm\n";
    for (const RunResult& r : results) {
        std::vector<std::string> cells;
        cells.push_back(r.id);
        cells.push_back(opt_num_cell(r.lt_spoof_pct));
        cells.push_back(opt_num_cell(r.ft_spoof_lb_s));
        cells.push_back(opt_num_cell(r.t_insertion_lt_s));
        cells.push_back(opt_num_cell(r.t_insertion_ft_s));
        switch (r.outcome) {
            case RunOutcomeKind::Tripped: cells.push_back(fmt_num(r.t_trip_s)); break;
            case RunOutcomeKind::OverTime: cells.push_back("OT"); break;
            case RunOutcomeKind::Baseline: cells.push_back("-"); break;
            case RunOutcomeKind::Error: cells.push_back("ERR"); break;
        }
        for (DetectorId d : {DetectorId::Pbd, DetectorId::Osv, DetectorId::Np, DetectorId::Svm,
                             DetectorId::Qsvm})
            cells.push_back(detection_cell(r, d));
        out += join(cells) + "\n";
    }
    return out;
}

void write_results_csv(const std::vector<RunResult>& results, const std::string& path) {
    write_text_file(path, results_csv_text(results));
}

} // namespace sgsim
