#include "sgsim/detectors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgsim {

DetectorVerdict pbd_detect(double p_core_w, double ws_estimate_kg_s,
                           const SgParams& p, double tolerance) {
    if (tolerance <= 0.0)
        throw std::invalid_argument("pbd_detect: tolerance must be positive");
    const double implied = implied_flowrate(p_core_w, p); // throws on P <= 0
    DetectorVerdict v;
    v.residual = std::abs(ws_estimate_kg_s - implied) / implied;
    v.alarmed = v.residual > tolerance;
    return v;
}

namespace {

// largest |x_i - x_j| over all pairs; 0 for fewer than two values
double max_pairwise_dev(const std::vector<double>& xs) {
    double worst = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j)
            worst = std::max(worst, std::abs(xs[i] - xs[j]));
    return worst;
}

} // namespace

DetectorVerdict osv_detect(const std::vector<double>& lt_readings,
                           const std::vector<double>& ft_readings,
                           const std::vector<double>& st_readings,
                           const OsvTolerances& tol) {
    if (tol.tau_lt_pct <= 0.0 || tol.tau_ft_kg_s <= 0.0 || tol.tau_st_kg_s <= 0.0)
        throw std::invalid_argument("osv_detect: tolerances must be positive");

    DetectorVerdict v;
    const struct {
        const std::vector<double>* xs;
        double tau;
        const char* name;
    } kinds[] = {{&lt_readings, tol.tau_lt_pct, "LT"},
                 {&ft_readings, tol.tau_ft_kg_s, "FT"},
                 {&st_readings, tol.tau_st_kg_s, "ST"}};

    for (const auto& k : kinds) {
        if (k.xs->size() < 2) {
            if (!v.note.empty()) v.note += ",";
            v.note += std::string(k.name) + " skipped (<2 channels)";
            continue;
        }
        const double dev = max_pairwise_dev(*k.xs) / k.tau;
        v.residual = std::max(v.residual, dev);
        if (dev > 1.0) v.alarmed = true;
    }
    return v;
}

DetectorVerdict np_detect(const std::deque<double>& window, double current,
                          const NpThresholds& th) {
    if (th.window < 1)
        throw std::invalid_argument("np_detect: window must hold at least one reading");
    if (!(th.eta_lower < th.eta_upper))
        throw std::invalid_argument("np_detect: eta_lower must be below eta_upper");
    if (static_cast<int>(window.size()) != th.window)
        throw std::invalid_argument("np_detect: window must hold exactly m readings");

    const double mean =
        std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(th.window);
    DetectorVerdict v;
    v.residual = std::abs(mean - current);
    if (v.residual > th.eta_upper) {
        v.alarmed = true;
        v.note = "upper";
    } else if (v.residual < th.eta_lower) {
        v.alarmed = true;
        v.note = "lower";
    }
    return v;
}

DetectorVerdict NpChannelState::push(double normalized_reading) {
    if (static_cast<int>(win_.size()) < th_.window) {
        win_.push_back(normalized_reading);
        return {}; // warmup: window not yet full, no verdict
    }
    DetectorVerdict step = np_detect(win_, normalized_reading, th_);

    DetectorVerdict out;
    out.residual = step.residual;
    if (step.alarmed && step.note == "upper") {
        out.alarmed = true;
        out.note = "upper";
        low_run_ = 0;
    } else if (step.alarmed && step.note == "lower") {
        // too-clean must persist before we call it an attack
        if (++low_run_ >= hold_) {
            out.alarmed = true;
            out.note = "lower";
        }
    } else {
        low_run_ = 0;
    }

    win_.pop_front();
    win_.push_back(normalized_reading);
    return out;
}

} // namespace sgsim
