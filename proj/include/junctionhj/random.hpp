#pragma once

#include <cstdint>
#include <random>

namespace junctionhj {

// Thin wrapper around mt19937_64 that converts bits to doubles by hand.
// std::uniform_real_distribution is implementation-defined, so using it
// would break the "same seed, same bytes" reproducibility promise across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace junctionhj
