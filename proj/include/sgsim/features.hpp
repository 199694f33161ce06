#pragma once

#include <string>
#include <vector>

namespace sgsim {

// Feature schemas consumed by the kernel classifiers.
//   Classical4: (power, feed-flow reading, steam-flow reading, level reading),
//               each normalized by its nominal (level by span).
//   Quantum3:   consistency gaps (max pairwise LT difference, |FT1 - KF flow
//               estimate|, |ST1 - FT1|), min-max scaled to [0, pi] with bounds
//               frozen at training time.
enum class FeatureSchema { Classical4, Quantum3 };

std::string to_string(FeatureSchema s);
FeatureSchema feature_schema_from_string(const std::string& s);
int feature_dim(FeatureSchema s);

struct FeatureVector {
    FeatureSchema schema = FeatureSchema::Classical4;
    std::vector<double> values;
};

// Per-step signal snapshot the extractors read (delivered readings, i.e. what
// consumers on the bus actually see).
struct FeatureFrame {
    std::vector<double> lt_pct;   // >= 3 channels for Classical4, >= 2 for Quantum3
    std::vector<double> ft_kg_s;  // >= 1
    std::vector<double> st_kg_s;  // >= 1
    double p_sg_w = 0.0;          // plant thermal power
    double kf_ws_kg_s = 0.0;      // filtered feed-flow estimate
    double p_nom_w = 1.0;
    double ws_nom_kg_s = 1.0;
    double wst_nom_kg_s = 1.0;
};

// Min-max scaling into [0, pi]; out-of-range inputs clip to the bounds so a
// trained model keeps working on excursions beyond its training envelope.
struct MinMaxScaler {
    std::vector<double> lo, hi;

    bool empty() const { return lo.empty(); }
    std::vector<double> apply(const std::vector<double>& x) const;
};

MinMaxScaler fit_scaler(const std::vector<std::vector<double>>& rows);

// Raw (pre-scaling) feature extraction. Throws std::invalid_argument when the
// frame lacks a required channel.
std::vector<double> extract_classical4(const FeatureFrame& f);
std::vector<double> extract_quantum3_raw(const FeatureFrame& f);

// Schema dispatch; Quantum3 requires a scaler (training-set bounds).
FeatureVector extract_features(const FeatureFrame& f, FeatureSchema schema,
                               const MinMaxScaler* scaler = nullptr);

} // namespace sgsim
