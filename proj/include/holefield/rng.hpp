#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace holefield {

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the stream (seed, stream_id) is fully determined
/// by its key, so replicate i always sees the same numbers no matter which
/// thread runs it or in which order. Output is SplitMix64 over a keyed counter.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream_id)
        : key_(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ (stream_id * 0xD1B54A32D192ED03ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_low() { return 1.0 - uniform(); }

    /// Unit-mean exponential.
    double exponential() { return -std::log(uniform_open_low()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace holefield
