#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sgsim/simulation.hpp"

namespace sgsim {

// ---------- results analysis and reporting ----------

// One results-table row, as parsed back from the CSV produced by the batch
// runner (or assembled by hand for the bundled reference data).
struct BenchRow {
    std::string case_id;
    std::optional<double> lt_spoof_pct;
    std::optional<double> ft_spoof_lb_s;
    std::optional<double> t_insertion_lt_s;
    std::optional<double> t_insertion_ft_s;

    enum class TripKind { Tripped, OverTime, NoAttack, Error };
    TripKind trip = TripKind::OverTime;
    double t_trip_s = std::numeric_limits<double>::quiet_NaN(); // Tripped only

    struct Det {
        enum class Kind { Time, None, FalsePositive };
        Kind kind = Kind::None;
        double t_s = std::numeric_limits<double>::quiet_NaN(); // Time only
    };
    std::array<Det, kNumDetectors> det{};

    const Det& detection(DetectorId d) const { return det[static_cast<size_t>(d)]; }

    // earliest scheduled insertion across both spoofed channels
    std::optional<double> earliest_insertion_s() const;
    // detection time minus earliest insertion; empty unless the detector
    // alarmed after a known insertion
    std::optional<double> latency_s(DetectorId d) const;
};

// Strict parse of the results CSV (exact header, 11 cells per row, at least
// one data row). Throws std::invalid_argument with a line diagnostic.
std::vector<BenchRow> parse_results_csv(const std::string& text);

// Bundled reference measurements for the nine-case spoof cohort, recorded
// against a proprietary full-scope PWR training simulator. Kept verbatim,
// including the source's apparent transposition of the two spoof-magnitude
// columns in cases 6-9 (flow values printed in the level column and vice
// versa); the report flags this. Reference numbers are for qualitative
// comparison only, never an oracle for simulated results.
const std::vector<BenchRow>& reference_table();

struct LatencySummary {
    int n_cases = 0;
    int n_detected = 0;       // alarmed at/after a known insertion
    int n_false_positive = 0; // alarmed before the first insertion
    int n_missed = 0;         // never alarmed
    double mean_latency_s = std::numeric_limits<double>::quiet_NaN();
};

LatencySummary detector_summary(const std::vector<BenchRow>& rows, DetectorId d);

// Markdown report: per-case detection latencies with a fastest-first
// detector ranking, per-detector aggregates, and (optionally) a side-by-side
// against the bundled reference table. rows must be nonempty.
std::string bench_report(const std::vector<BenchRow>& rows, bool include_reference);

} // namespace sgsim
