#pragma once

#include <cstdint>
#include <vector>

namespace stochwave {

/// Brownian increments on the time mesh. increments[n] = B(t^{n+1}) - B(t^n)
/// for n = 0..N; the last one reaches one step past T because the scheme's
/// final update (n = N) consumes it.
struct BrownianPath {
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::vector<double> increments;

    int N() const { return static_cast<int>(increments.size()) - 1; }
};

/// i.i.d. Normal(0, dt) increments from a 64-bit Mersenne twister keyed by
/// `seed`. Same arguments give the same array bit for bit.
BrownianPath sample_brownian(int N, double dt, std::uint64_t seed);

/// Seed of path k in an ensemble. Injective in k for a fixed master seed.
std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t k);

}  // namespace stochwave
