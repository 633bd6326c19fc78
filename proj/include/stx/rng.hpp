#pragma once

#include <cmath>
#include <cstdint>

namespace stx {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ stream. Self-contained so that draws are reproducible
/// bit-for-bit for a given seed, independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        have_normal_ = false;
    }

    /// Derives an independent stream for a (seed, index) pair. Used for
    /// per-draw and per-replicate streams so parallel schedules cannot
    /// change the numbers.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t sm = seed;
        std::uint64_t a = splitmix64(sm);
        sm = a ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        sm = splitmix64(sm);
        return Rng(sm ^ index);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on (0, 1]; never returns 0 so logs are safe.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform_pos()); }

    /// Standard normal via Box-Muller; both values of a pair are used.
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 6.283185307179586476925286766559 * uniform();
        cached_normal_ = r * std::sin(a);
        have_normal_ = true;
        return r * std::cos(a);
    }

    /// Rademacher variable in {-1, +1}.
    double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool have_normal_;
};

}  // namespace stx
