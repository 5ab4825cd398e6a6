#pragma once

#include <cstdint>
#include <optional>

#include "stochwave/grid_function.hpp"

namespace stochwave {

// Data generators used by the CLI, the tests and the acceptance runs.

/// amplitude * sin(mode pi x) on a space mesh.
GridFunction sine_slice(const Grid& grid, SpaceMesh mesh, int mode, double amplitude);

/// amplitude * sin(mode pi x), constant in time, on M x N.
GridFunction sine_field(const Grid& grid, int mode, double amplitude);

/// Smooth random series sum_k c_k sin(k pi x), k = 1..8, with c_k uniform in
/// [-amplitude, amplitude] / k. The coefficients depend on the seed only, so
/// the same seed gives the same continuous function on every grid.
GridFunction random_series_slice(const Grid& grid, SpaceMesh mesh, std::uint64_t seed,
                                 double amplitude);

/// Space-time version on M x N: (p(x) + (t/T) q(x)) with p, q random series.
GridFunction random_series_field(const Grid& grid, std::uint64_t seed, double amplitude);

/// Independent uniform values in [-amplitude, amplitude] at every point.
GridFunction random_nodal(const Grid& grid, IndexRange space, std::optional<IndexRange> time,
                          std::uint64_t seed, double amplitude);

}  // namespace stochwave
