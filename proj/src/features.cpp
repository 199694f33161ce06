#include "sgsim/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sgsim {

std::string to_string(FeatureSchema s) {
    return s == FeatureSchema::Classical4 ? "classical4" : "quantum3";
}

FeatureSchema feature_schema_from_string(const std::string& s) {
    if (s == "classical4") return FeatureSchema::Classical4;
    if (s == "quantum3") return FeatureSchema::Quantum3;
    throw std::invalid_argument("feature_schema_from_string: unknown schema '" + s + "'");
}

int feature_dim(FeatureSchema s) { return s == FeatureSchema::Classical4 ? 4 : 3; }

std::vector<double> MinMaxScaler::apply(const std::vector<double>& x) const {
    if (x.size() != lo.size())
        throw std::invalid_argument("MinMaxScaler: dimension mismatch");
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double width = hi[i] - lo[i];
        double u = width > 0.0 ? (x[i] - lo[i]) / width : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        out[i] = u * std::numbers::pi;
    }
    return out;
}

MinMaxScaler fit_scaler(const std::vector<std::vector<double>>& rows) {
    if (rows.empty())
        throw std::invalid_argument("fit_scaler: need at least one row");
    const size_t d = rows.front().size();
    MinMaxScaler s;
    s.lo.assign(d, std::numeric_limits<double>::infinity());
    s.hi.assign(d, -std::numeric_limits<double>::infinity());
    for (const auto& r : rows) {
        if (r.size() != d)
            throw std::invalid_argument("fit_scaler: ragged rows");
        for (size_t i = 0; i < d; ++i) {
            s.lo[i] = std::min(s.lo[i], r[i]);
            s.hi[i] = std::max(s.hi[i], r[i]);
        }
    }
    return s;
}

std::vector<double> extract_classical4(const FeatureFrame& f) {
    if (f.lt_pct.size() < 3)
        throw std::invalid_argument("extract_classical4: needs the channel-3 level transmitter");
    if (f.ft_kg_s.empty() || f.st_kg_s.empty())
        throw std::invalid_argument("extract_classical4: needs FT and ST readings");
    if (f.p_nom_w <= 0.0 || f.ws_nom_kg_s <= 0.0 || f.wst_nom_kg_s <= 0.0)
        throw std::invalid_argument("extract_classical4: nominals must be positive");
    return {f.p_sg_w / f.p_nom_w, f.ft_kg_s[0] / f.ws_nom_kg_s,
            f.st_kg_s[0] / f.wst_nom_kg_s, f.lt_pct[2] / 100.0};
}

std::vector<double> extract_quantum3_raw(const FeatureFrame& f) {
    if (f.lt_pct.size() < 2)
        throw std::invalid_argument("extract_quantum3_raw: needs redundant level channels");
    if (f.ft_kg_s.empty() || f.st_kg_s.empty())
        throw std::invalid_argument("extract_quantum3_raw: needs FT and ST readings");
    double lt_gap = 0.0;
    for (size_t i = 0; i < f.lt_pct.size(); ++i)
        for (size_t j = i + 1; j < f.lt_pct.size(); ++j)
            lt_gap = std::max(lt_gap, std::abs(f.lt_pct[i] - f.lt_pct[j]));
    const double ft_err = std::abs(f.ft_kg_s[0] - f.kf_ws_kg_s);
    const double mismatch = std::abs(f.st_kg_s[0] - f.ft_kg_s[0]);
    return {lt_gap, ft_err, mismatch};
}

FeatureVector extract_features(const FeatureFrame& f, FeatureSchema schema,
                               const MinMaxScaler* scaler) {
    FeatureVector v;
    v.schema = schema;
    if (schema == FeatureSchema::Classical4) {
        v.values = extract_classical4(f);
        return v;
    }
    if (!scaler || scaler->empty())
        throw std::invalid_argument("extract_features: quantum3 needs training-set scaling bounds");
    v.values = scaler->apply(extract_quantum3_raw(f));
    return v;
}

} // namespace sgsim
