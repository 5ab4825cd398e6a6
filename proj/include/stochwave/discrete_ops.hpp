#pragma once

#include <optional>
#include <string_view>

#include "stochwave/grid_function.hpp"

namespace stochwave {

/// Translation, average and difference operators on the staggered grid.
///
///   s+/s-  : u(x +- dx/2)            t+/t-  : u(t +- dt/2)
///   Ax, Dx : (s+u + s-u)/2, (s+u - s-u)/dx
///   At, Dt : same in time            DtIncr : t+u - t-u  (= dt Dt u)
///   Dx2    : Dx Dx u = (u(x+dx) - 2u(x) + u(x-dx)) / dx^2
enum class Op { SPlus, SMinus, TPlus, TMinus, Ax, Dx, At, Dt, DtIncr, Dx2 };

std::string_view to_string(Op op);
std::optional<Op> parse_op(std::string_view name);

/// Applies `op` on the largest set of points where its stencil is supported,
/// clipped to the grid closure. Throws StencilOutOfRange when that set is
/// empty, MeshMismatch when a time operator meets a slice.
GridFunction apply(Op op, const GridFunction& u);

/// Applies `op` at exactly the requested points. Throws StencilOutOfRange
/// naming the first target index whose stencil leaves the support of `u`.
GridFunction apply(Op op, const GridFunction& u, IndexRange space,
                   std::optional<IndexRange> time);

}  // namespace stochwave
