#ifndef LDGM_RNG_HPP
#define LDGM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ldgm {

/// Deterministic 64-bit PRNG (splitmix64-seeded xoshiro256**) with the
/// variate transforms done in-house, so a given seed produces the same
/// stream on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto &word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform01_open_low() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n), rejection sampled (no modulo bias).
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    /// Standard normal via Box-Muller; caches the second variate.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    static std::uint64_t splitmix64(std::uint64_t &x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int s) { return (v << s) | (v >> (64 - s)); }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Per-trial seed derivation: hashes (master, point, trial) so trials can be
/// distributed across workers without shared RNG state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
    std::uint64_t x = master ^ (0x9E3779B97F4A7C15ULL * (point + 1));
    std::uint64_t h = Rng::splitmix64(x);
    x = h ^ (0xBF58476D1CE4E5B9ULL * (trial + 1));
    return Rng::splitmix64(x);
}

} // namespace ldgm

#endif
