#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace dualcorr {

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence the standard fixes.
/// The standard distributions are implementation-defined, so the derived
/// draws are written out here:
///  - uniform():  top 53 bits of one engine output, scaled into [0,1).
///  - normal():   Box-Muller on two uniforms, returning the cosine branch and
///                caching the sine branch for the next call.
///  - index(n):   rejection sampling on one engine output per attempt.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// splitmix64 finalizer; derives independent per-trial seeds from a root seed.
constexpr std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace dualcorr
