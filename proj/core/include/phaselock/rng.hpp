#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace phaselock {

/// SplitMix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic random stream. All variate transforms are implemented here
/// (not std:: distributions) so that output is bit-identical for a fixed seed
/// regardless of standard library version.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    /// Stream for worker chunk `index` of a run seeded with `master_seed`.
    static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t s = master_seed ^ (0xa076'1d64'78bd'642full * (index + 1));
        return RngStream(splitmix64_next(s));
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (pairs cached).
    double normal();

    /// Poisson variate; Knuth product method below lambda = 50, normal
    /// approximation above (background rates here are O(10)).
    long poisson(double lambda);

    /// Unit vector uniform on the sphere.
    std::array<double, 3> isotropic_direction();

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace phaselock
