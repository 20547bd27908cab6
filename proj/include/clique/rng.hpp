#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace clique {

namespace detail {

// Finalizer of splitmix64 (Steele, Lea & Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Seeded 64-bit generator (splitmix64). All randomness in the library flows
/// through this type so that results are reproducible from a single seed and
/// the generator identity can be recorded in output metadata.
class Rng {
public:
    static constexpr const char* kAlgorithm = "splitmix64";

    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(state_);
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        assert(n > 0);
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Draws `count` distinct values from {0, ..., n-1} via partial
    /// Fisher-Yates. Order of the result follows the draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count) {
        assert(count <= n);
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::size_t> out(count);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(pool[i], pool[j]);
            out[i] = pool[i];
        }
        return out;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent substream seed from (seed, key). Used to key
/// per-tree, per-fold and per-(feature, repetition) streams so results do not
/// depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    return detail::mix64(seed ^ detail::mix64(key + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key1, std::uint64_t key2) {
    return derive_seed(derive_seed(seed, key1), key2);
}

} // namespace clique
