#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochwave/grid_function.hpp"

namespace stochwave {

/// Normalized residual of one discrete calculus identity. A skipped identity
/// (inputs do not live on the meshes it needs) has no residual.
struct IdentityResidual {
    std::string id;
    std::string formula;
    std::optional<double> residual;
    std::string skip_reason;
};

struct ResidualTable {
    std::vector<IdentityResidual> rows;

    const IdentityResidual& at(const std::string& id) const;
    /// Largest residual among the non-skipped identities.
    double max_residual() const;
    std::size_t skipped() const;
};

/// Identity ids in evaluation order.
const std::vector<std::string>& identity_ids();

/// Evaluates both sides of every product rule, summation-by-parts formula and
/// time-difference identity on (u, v), boundary terms included, and records
/// max|LHS - RHS| / max(1, |LHS|_inf, |RHS|_inf).
///
/// Space identities need u, v on the space closure; time identities need the
/// time closure. Dual-located arguments are formed internally as Ax v (space)
/// or At u, At v (time). Throws InvalidArgument when M < 2 or N < 2.
ResidualTable identity_residuals(const GridFunction& u, const GridFunction& v,
                                 const Grid& grid);

/// Dual-time integral written with a slashed integral sign (and its boundary
/// counterpart). Both use unit weights on every point, which makes the
/// associated summation-by-parts identity exact.
double slashed_integral(const GridFunction& u, Region region);

}  // namespace stochwave
