#pragma once

// Seeded randomness helpers. std::mt19937_64 is fully specified by the
// standard, but the std::*_distribution algorithms are not; everything
// derived from raw engine output is implemented here so that a given seed
// produces the same stream on every toolchain.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace vmdeeg::detail {

using Rng = std::mt19937_64;

// Uniform double in [0, 1), 53 mantissa bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = rng();
    while (r >= limit) r = rng();
    return r % n;
}

// Standard normal via Box-Muller; draws two uniforms per pair.
class NormalSampler {
  public:
    double operator()(Rng& rng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(rng);
        while (u1 <= 0.0) u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

template <typename T>
void fisher_yates_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// splitmix64 finalizer; used to derive independent sub-seeds from one base.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_seed(a ^ mix_seed(b));
}

} // namespace vmdeeg::detail
