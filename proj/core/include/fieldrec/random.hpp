#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace fieldrec {

/// A single pseudo-random stream. Streams are owned by one worker at a time;
/// parallel trials each derive their own from a master seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw on [0, 1); 53 random mantissa bits, never returns 1.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal(double stddev) {
        return std::normal_distribution<double>(0.0, stddev)(engine_);
    }

    /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal(1.0);
        const double im = normal(1.0);
        return {s * re, s * im};
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic child seed for work unit `index`. `salt` separates
/// independent families of streams drawn from the same master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0);

inline RandomStream derive_stream(std::uint64_t master, std::uint64_t index,
                                  std::uint64_t salt = 0) {
    return RandomStream(derive_seed(master, index, salt));
}

}  // namespace fieldrec
