#ifndef SKEWALG_RNG_HPP
#define SKEWALG_RNG_HPP

#include <cstdint>

namespace skewalg {

/// SplitMix64. Seeded explicitly everywhere so randomized checks replay
/// bit-identically across runs and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// uniform in [0,1)
    double uniform() { return (next() >> 11) * 0x1.0p-53; }

    /// uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [0,n)
    uint64_t below(uint64_t n) { return next() % n; }

private:
    uint64_t state_;
};

} // namespace skewalg

#endif
