#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace tecusum {

/// SplitMix64 finalizer. Bijective mix of a 64-bit word; the backbone of
/// the seed-derivation scheme used everywhere in this project.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives a sub-seed from a master seed and a path of integers
/// (tag, index, replica, ...). Folding each component through splitmix64
/// keeps distinct paths statistically independent, so parallel replicas and
/// partial re-runs reproduce exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t component : path) {
        s = splitmix64(s ^ splitmix64(component + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

/// Stream tags for derive_seed, so the different Monte Carlo consumers of a
/// master seed never overlap.
namespace seed_tag {
inline constexpr std::uint64_t calibration = 1;
inline constexpr std::uint64_t scenario = 2;
inline constexpr std::uint64_t fa_curve = 3;
inline constexpr std::uint64_t sensor = 4;
} // namespace seed_tag

/// Deterministic N(0,1) sampler: mt19937_64 + Marsaglia polar transform.
/// The standard library's normal_distribution is implementation-defined,
/// which would make frozen regression values fragile; this sampler is fully
/// specified by the engine and plain arithmetic.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    /// One standard normal draw.
    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double stddev) { return mean + stddev * (*this)(); }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tecusum
