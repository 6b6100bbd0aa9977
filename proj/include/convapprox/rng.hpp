#ifndef CONVAPPROX_RNG_HPP
#define CONVAPPROX_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace convapprox {

/// Counter-based generator (splitmix64 over a keyed counter). Streams are
/// addressed by (seed, label, lane), so every consumer draws from its own
/// stream and results do not depend on evaluation order or thread count.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view label, std::uint64_t lane = 0) {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the label
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        state_ = mix(seed ^ mix(h) ^ mix(lane * 0x9e3779b97f4a7c15ull + 0x1ull));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform on (0, 1); never returns exactly 0 so logs and inversions are safe.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

/// Uniform point in the Euclidean unit ball: Gaussian direction scaled by
/// U^{1/d}.
inline std::vector<double> sample_ball_point(CounterRng& rng, int d) {
    std::vector<double> x(static_cast<size_t>(d));
    double norm_sq = 0.0;
    for (double& v : x) {
        v = rng.gaussian();
        norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    const double r = std::pow(rng.uniform(), 1.0 / d);
    if (norm > 0.0)
        for (double& v : x) v *= r / norm;
    return x;
}

}  // namespace convapprox

#endif
