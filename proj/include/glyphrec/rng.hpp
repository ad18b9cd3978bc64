#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace glyphrec {

/// Seeded random source. Draws are defined here rather than through
/// std::uniform_*_distribution so that identical seeds give identical
/// streams regardless of the standard library build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    /// Uniform integer in [lo, hi] inclusive.
    int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Stable seed derivation for subcomponents (fold index, family index, ...),
/// so that independent consumers never share a stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t x = base ^ (a * 0x9E3779B97F4A7C15ull) ^ (b * 0xBF58476D1CE4E5B9ull);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

}  // namespace glyphrec
