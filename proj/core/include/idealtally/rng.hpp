#pragma once

#include <cmath>
#include <cstdint>

namespace idealtally {

// Counter-based generator: a SplitMix64-style finalizer applied to a keyed
// counter. value(seed, i) is a pure function of (seed, i), so sampling order
// does not affect the stream and reports stay byte-identical across runs.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x9E3779B97F4A7C15ull)) {}

    std::uint64_t at(std::uint64_t index) const {
        return mix(key_ + index * 0x9E3779B97F4A7C15ull);
    }

    std::uint64_t next() { return at(counter_++); }

    /// Uniform double in [0, 1).
    double uniform() { return to_unit(next()); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, 1) addressed by absolute stream index.
    double uniform_at(std::uint64_t index) const { return to_unit(at(index)); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    std::uint64_t counter() const { return counter_; }
    void seek(std::uint64_t counter) { counter_ = counter; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static double to_unit(std::uint64_t v) {
        return static_cast<double>(v >> 11) * 0x1.0p-53;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace idealtally
