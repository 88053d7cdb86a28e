#pragma once

#include <complex>
#include <cmath>
#include <cstdint>

namespace llg {

// Counter-based pseudo-random stream built on splitmix64.  Gates of
// spatial-temporal random circuits are keyed by (seed, layer, site), so the
// same gate is reproduced no matter in which order the circuit is assembled,
// and results are identical across platforms (std::normal_distribution is
// implementation-defined, so we roll Box-Muller by hand).
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in (0,1]; never returns 0 so log() is safe
    double next_unit() {
        return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    std::complex<double> next_complex_normal() {
        return {next_normal(), next_normal()};
    }

  private:
    bool have_cached_ = false;
    double cached_ = 0.0;
};

inline std::uint64_t mix_u64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Sub-seed for the gate at (layer, site).  Signed coordinates are folded in
// with distinct multipliers so that e.g. (layer=1,site=2) and (layer=2,site=1)
// decouple.
inline std::uint64_t position_seed(std::uint64_t master, std::int64_t layer,
                                   std::int64_t site) {
    std::uint64_t h = master;
    h = mix_u64(h ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(layer)));
    h = mix_u64(h ^ (0xc2b2ae3d27d4eb4full * static_cast<std::uint64_t>(site)));
    return h;
}

} // namespace llg
