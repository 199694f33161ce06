#pragma once

#include <string>
#include <vector>

#include "sgsim/rng.hpp"

namespace sgsim {

// One sampled parameter: a name (used as the design-matrix column header and,
// for batch runs, as a config path like "attacks/0/value") plus its range.
struct LhsBounds {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
};

// Stratified design: per dimension, each of the n equal-width strata of [0,1)
// holds exactly one sample, placed uniformly within its stratum.
struct LhsDesign {
    std::vector<LhsBounds> bounds;
    int n_samples = 0;
    std::vector<std::vector<double>> unit;   // n x p, in [0,1)
    std::vector<std::vector<double>> scaled; // n x p, in [lo, hi)
};

// Draw a design. Requires n >= 1 and lo < hi for every parameter; a seeded
// rng makes the design a pure function of (bounds, n, seed).
LhsDesign lhs_sample(const std::vector<LhsBounds>& bounds, int n, SeededRng& rng);

// Latin property check: true iff every dimension has exactly one sample per
// stratum. Exposed so calling code can assert on designs read back from disk.
bool has_latin_property(const LhsDesign& d);

} // namespace sgsim
