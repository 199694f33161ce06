#pragma once

#include <cstdint>
#include <random>

namespace sgsim {

// splitmix64: cheap, well-mixed 64-bit finalizer used to derive substream
// seeds. One master seed plus a stream label fully determines every draw.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derive an independent child seed from (parent seed, stream label).
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) {
    return splitmix64(parent ^ splitmix64(label + 0x9E3779B97F4A7C15ULL));
}

// Deterministic random stream. Distribution objects are constructed fresh on
// every call so no hidden distribution state survives between draws; the
// sequence is a pure function of the seed.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed = 0) : eng_(seed) {}

    double gaussian(double mean, double sigma) {
        if (sigma == 0.0) return mean;
        std::normal_distribution<double> d(mean, sigma);
        return d(eng_);
    }

    // uniform in [0, 1)
    double uniform() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(eng_);
    }

    // uniform integer in [0, n)
    std::uint64_t uniform_below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(eng_);
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

} // namespace sgsim
