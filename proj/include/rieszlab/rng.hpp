#pragma once

#include <cstdint>
#include <random>

namespace rieszlab::detail {

// Deterministic random stream.  The mt19937_64 engine is fully specified by
// the standard, so the raw 64-bit stream is identical on every platform; the
// helpers below map it to doubles explicitly because the standard
// distributions are implementation-defined and would break reproducibility
// across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

// Cheap seed mixer (splitmix64 finalizer) so that nearby user seeds produce
// decorrelated engine states.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace rieszlab::detail
