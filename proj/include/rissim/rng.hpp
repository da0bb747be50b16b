#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rissim {

/// splitmix64 step; used to derive independent child seeds from a master
/// seed so that trials are reproducible and order-independent.
inline uint64_t mix_seed(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    return mix_seed(mix_seed(master ^ mix_seed(a)) ^ mix_seed(b + 0x9e37ULL));
}

using Rng = std::mt19937_64;

/// Circularly symmetric complex Gaussian with E|x|^2 = variance.
inline std::complex<double> complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    return {n(rng), n(rng)};
}

/// Unit-modulus sample with phase uniform on [0, 2*pi).
inline std::complex<double> random_phase(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(1.0, u(rng));
}

}  // namespace rissim
