#pragma once

#include <cstdint>
#include <random>

#include "hitchin/common.hpp"

namespace hitchin {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for task `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed)
      : eng_(splitmix64(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream)
      : eng_(stream_seed(seed, stream)) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    double normal();
    cplx complex_normal(); // E|z|^2 = 1
    // Point with modulus in [rmin, rmax] and argument in [-amax, amax].
    cplx annulus(double rmin, double rmax, double amax = 3.141592653589793);
    CMat gaussian_matrix(int rows, int cols);

    std::mt19937_64 &engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

// Haar-distributed element of SU(n): QR of a complex Ginibre matrix with
// phase-corrected R diagonal, then determinant normalization.
CMat haar_su(int n, Rng &rng);

} // namespace hitchin
