#include "stochwave/brownian.hpp"

#include <cmath>
#include <random>
#include <string>

#include "stochwave/errors.hpp"

namespace stochwave {

BrownianPath sample_brownian(int N, double dt, std::uint64_t seed)
{
    if (N < 1)
        throw InvalidArgument("sample_brownian: N must be >= 1, got " + std::to_string(N));
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidArgument("sample_brownian: dt must be positive");

    BrownianPath path{seed, dt, std::vector<double>(static_cast<std::size_t>(N) + 1)};
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    for (double& inc : path.increments)
        inc = normal(gen);
    return path;
}

std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t k)
{
    // splitmix64 output function; a bijection on 64-bit words
    std::uint64_t z = master_seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace stochwave
