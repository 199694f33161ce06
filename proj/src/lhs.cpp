#include "sgsim/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgsim {

LhsDesign lhs_sample(const std::vector<LhsBounds>& bounds, int n, SeededRng& rng) {
    if (bounds.empty())
        throw std::invalid_argument("lhs_sample: need at least one parameter");
    if (n < 1)
        throw std::invalid_argument("lhs_sample: sample count must be >= 1");
    for (const auto& b : bounds)
        if (!(b.lo < b.hi))
            throw std::invalid_argument("lhs_sample: degenerate bounds for '" + b.name + "'");

    const size_t p = bounds.size();
    LhsDesign d;
    d.bounds = bounds;
    d.n_samples = n;
    d.unit.assign(static_cast<size_t>(n), std::vector<double>(p, 0.0));
    d.scaled = d.unit;

    std::vector<int> perm(static_cast<size_t>(n));
    for (size_t j = 0; j < p; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        // Fisher-Yates on the stratum order, then one uniform draw per stratum
        for (int i = n - 1; i > 0; --i) {
            const auto k = rng.uniform_below(static_cast<std::uint64_t>(i) + 1);
            std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(k)]);
        }
        for (int i = 0; i < n; ++i) {
            const double u = (perm[static_cast<size_t>(i)] + rng.uniform()) / n;
            d.unit[static_cast<size_t>(i)][j] = u;
            d.scaled[static_cast<size_t>(i)][j] =
                bounds[j].lo + u * (bounds[j].hi - bounds[j].lo);
        }
    }
    return d;
}

bool has_latin_property(const LhsDesign& d) {
    const int n = d.n_samples;
    if (n < 1 || d.unit.size() != static_cast<size_t>(n)) return false;
    for (size_t j = 0; j < d.bounds.size(); ++j) {
        std::vector<int> count(static_cast<size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            const double u = d.unit[static_cast<size_t>(i)][j];
            if (!(u >= 0.0 && u < 1.0)) return false;
            auto s = static_cast<int>(std::floor(u * n));
            if (s >= n) s = n - 1; // guard the u -> 1 rounding edge
            ++count[static_cast<size_t>(s)];
        }
        for (int c : count)
            if (c != 1) return false;
    }
    return true;
}

} // namespace sgsim
