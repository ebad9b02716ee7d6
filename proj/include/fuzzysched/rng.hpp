#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fuzzysched {

// Seeded random stream. Draw helpers are implemented here rather than with
// <random> distributions so sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Counter-based substream: mixes a master seed with purpose/iteration/index
    // tags so that each consumer owns an independent, order-insensitive stream.
    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi]; returns lo when the interval is empty.
    double uniform(double lo, double hi);

    // Uniform integer in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace fuzzysched
