#include "fuzzysched/rng.hpp"

namespace fuzzysched {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t tag : tags) {
        h = splitmix64(h ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
    }
    return Rng(h);
}

double Rng::uniform(double lo, double hi) {
    if (!(hi > lo)) {
        return lo;
    }
    double x = lo + (hi - lo) * uniform01();
    return x > hi ? hi : x;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

}  // namespace fuzzysched
