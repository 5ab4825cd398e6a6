#pragma once

#include "stochwave/grid_function.hpp"

namespace stochwave {

/// Discrete integral over a region.
///
/// Interior space sums carry dx, interior time sums carry dt, boundary sums
/// carry no mesh factor: dM x N carries dt only and M x dN carries dx only.
/// Space-only regions take slices; time-only regions take a function whose
/// space axis is a single point. Values outside the region are ignored; a
/// region point the function does not cover is a MeshMismatch.
double integrate(const GridFunction& u, Region region);

/// Trace of a dual-mesh function at x = 0 (value at dx/2) or x = 1 (value at
/// 1 - dx/2): the neighbour selected by the outward normal. Returns a slice
/// or a single-point time series, depending on whether `u` has a time axis.
GridFunction trace(const GridFunction& u, Side side);

enum class NormKind { L2, Linf, H1, Dt, XT };

/// L2 / Linf over an explicit region.
double norm(const GridFunction& u, NormKind kind, Region region);

/// Norm with the region implied by the function's tags:
///  - L2, Linf: space-only functions on M, M* or Mbar; time series on N, N*;
///    space-time functions on the four interior products.
///  - H1: slice on Mbar, sqrt(int_{M*} |Dx u|^2 + int_M |u|^2).
///  - Dt: sqrt(int_N t+(|Dt u|^2)); needs the time closure through t^{N+1}.
///    Time series integrate over N, space-time functions over M x N.
///  - XT: trajectory on Mbar x closure; H1 of u(., T) plus the L2(M) norm of
///    the forward velocity (u^{N+1} - u^N) / dt.
double norm(const GridFunction& u, NormKind kind);

/// X_T norm from the terminal pair (u(., T) on Mbar, t+(Dt u)(., T) on M).
double xt_norm(const GridFunction& terminal_y, const GridFunction& terminal_v);

double h1_norm_squared(const GridFunction& u);

}  // namespace stochwave
