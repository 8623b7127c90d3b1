#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace cocopf {

/// Deterministic pseudo-random generator (xoshiro256++). Every source of
/// randomness in the library owns one of these; there is no global RNG and
/// no OS entropy anywhere, so identical seeds give identical runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform01();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal deviate (Marsaglia polar method, spare cached).
    double normal();

    /// Unbiased uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n);

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer, used for seed mixing.
std::uint64_t mix64(std::uint64_t z);

/// Derives an independent stream seed from a purpose tag plus integer
/// components (function id, dimension, instance, member index, ...).
/// Streams with different tags or components are statistically unrelated,
/// which keeps instances and trials reproducible regardless of the order
/// anything else consumed randomness in.
std::uint64_t stream_seed(std::string_view tag, std::initializer_list<std::uint64_t> parts);

} // namespace cocopf
