#pragma once

#include <cmath>
#include <cstdint>

namespace lsxgc {

/// One SplitMix64 step (Steele, Lea & Flood 2014). This is the pinned
/// generator family for everything random in this library: 64-bit state,
/// 64-bit output, passes the usual statistical batteries at the sizes we
/// draw. Streams are deterministic within one build; bit-equality of
/// streams across other implementations is not a goal.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic seed derivation: feeds `value` into the stream seeded by
/// `seed` and mixes once more. Used to give parallel work items (subjects,
/// CV splits) independent seeds whose values cannot depend on scheduling.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL + (value << 6) + (value >> 2));
    return splitmix64_next(s);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return hash_combine(hash_combine(seed, a), b);
}

/// Small deterministic random stream (SplitMix64 core, Box-Muller Gaussians).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0. Modulo reduction; the bias
    /// is irrelevant at the ranges used here (n <= a few hundred).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so log() is finite.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace lsxgc
