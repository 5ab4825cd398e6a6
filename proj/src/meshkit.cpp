#include "stochwave/meshkit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stochwave/discrete_ops.hpp"
#include "stochwave/errors.hpp"

namespace stochwave {

namespace {

enum class Part { Primal, Dual, Closure, PrimalClosure, Boundary, None };

struct RegionShape {
    Part space;
    Part time;
};

RegionShape shape_of(Region region)
{
    switch (region) {
    case Region::M: return {Part::Primal, Part::None};
    case Region::MStar: return {Part::Dual, Part::None};
    case Region::MBar: return {Part::Closure, Part::None};
    case Region::BoundaryM: return {Part::Boundary, Part::None};
    case Region::N: return {Part::None, Part::Primal};
    case Region::NStar: return {Part::None, Part::Dual};
    case Region::NBar: return {Part::None, Part::PrimalClosure};
    case Region::BoundaryN: return {Part::None, Part::Boundary};
    case Region::MxN: return {Part::Primal, Part::Primal};
    case Region::MStarxN: return {Part::Dual, Part::Primal};
    case Region::MxNStar: return {Part::Primal, Part::Dual};
    case Region::MStarxNStar: return {Part::Dual, Part::Dual};
    case Region::BoundaryMxN: return {Part::Boundary, Part::Primal};
    case Region::MxBoundaryN: return {Part::Primal, Part::Boundary};
    }
    return {Part::None, Part::None};
}

std::vector<int> space_indices(const Grid& g, Part p)
{
    IndexRange r;
    switch (p) {
    case Part::Primal: r = g.space(SpaceMesh::Primal); break;
    case Part::Dual: r = g.space(SpaceMesh::Dual); break;
    case Part::Closure: r = g.space(SpaceMesh::Closure); break;
    case Part::Boundary: return {node(0), node(g.M() + 1)};
    default: return {};
    }
    std::vector<int> out(r.count);
    for (int k = 0; k < r.count; ++k)
        out[k] = r.at(k);
    return out;
}

std::vector<int> time_indices(const Grid& g, Part p)
{
    IndexRange r;
    switch (p) {
    case Part::Primal: r = g.time(TimeMesh::Primal); break;
    case Part::Dual: r = g.time(TimeMesh::Dual); break;
    case Part::PrimalClosure: r = g.time(TimeMesh::PrimalClosure); break;
    case Part::Boundary: return {node(0), node(g.N())};
    default: return {};
    }
    std::vector<int> out(r.count);
    for (int k = 0; k < r.count; ++k)
        out[k] = r.at(k);
    return out;
}

// Visits every region point of u with the region's measure factor.
template <class Visit>
double visit_region(const GridFunction& u, Region region, Visit&& visit)
{
    const Grid& g = u.grid();
    const RegionShape shape = shape_of(region);
    const std::string where = std::string("region ") + to_string(region);

    if (shape.time == Part::None && u.has_time())
        throw MeshMismatch(where + " is space-only; got a space-time function");
    if (shape.time != Part::None && !u.has_time())
        throw MeshMismatch(where + " has a time part; got a slice");
    if (shape.space == Part::None && u.space_count() != 1)
        throw MeshMismatch(where + " is time-only; expected a single space point");

    double factor = 1.0;
    if (shape.space != Part::None && shape.space != Part::Boundary)
        factor *= g.dx();
    if (shape.time != Part::None && shape.time != Part::Boundary)
        factor *= g.dt();

    std::vector<int> xs = shape.space == Part::None
                              ? std::vector<int>{u.space_range().first}
                              : space_indices(g, shape.space);
    std::vector<int> ts = shape.time == Part::None ? std::vector<int>{0}
                                                   : time_indices(g, shape.time);
    for (int hx : xs) {
        if (!u.space_range().contains(hx))
            throw MeshMismatch(where + ": function on " + describe(u.space_range())
                               + " does not cover space index " + std::to_string(hx));
    }
    if (u.has_time()) {
        for (int ht : ts)
            if (!u.time_range()->contains(ht))
                throw MeshMismatch(where + ": function on "
                                   + describe(*u.time_range())
                                   + " does not cover time index "
                                   + std::to_string(ht));
    }
    for (int hx : xs) {
        const int ix = u.space_range().offset(hx);
        for (int ht : ts) {
            const int it = u.has_time() ? u.time_range()->offset(ht) : 0;
            visit(u.raw(ix, it));
        }
    }
    return factor;
}

Region default_region(const GridFunction& u)
{
    const MeshTag s = u.space_tag();
    if (!u.has_time()) {
        switch (s) {
        case MeshTag::Primal: return Region::M;
        case MeshTag::Dual: return Region::MStar;
        case MeshTag::Closure: return Region::MBar;
        default: break;
        }
    } else if (u.space_count() == 1) {
        switch (u.time_tag()) {
        case MeshTag::Primal: return Region::N;
        case MeshTag::Dual: return Region::NStar;
        case MeshTag::PrimalClosure: return Region::NBar;
        default: break;
        }
    } else {
        const MeshTag t = u.time_tag();
        if (s == MeshTag::Primal && t == MeshTag::Primal) return Region::MxN;
        if (s == MeshTag::Dual && t == MeshTag::Primal) return Region::MStarxN;
        if (s == MeshTag::Primal && t == MeshTag::Dual) return Region::MxNStar;
        if (s == MeshTag::Dual && t == MeshTag::Dual) return Region::MStarxNStar;
    }
    throw MeshMismatch(std::string("norm: cannot infer a region for tags (")
                       + to_string(u.space_tag()) + ", " + to_string(u.time_tag())
                       + "); pass one explicitly");
}

void require_closure_slice(const GridFunction& u, const char* what)
{
    if (u.has_time())
        throw MeshMismatch(std::string(what) + " expects a slice");
    if (!u.space_range().contains(u.grid().space(SpaceMesh::Closure)))
        throw MeshMismatch(std::string(what) + " needs values on Mbar; got "
                           + describe(u.space_range()));
}

}  // namespace

double integrate(const GridFunction& u, Region region)
{
    double sum = 0.0;
    const double factor = visit_region(u, region, [&](double v) { sum += v; });
    return sum * factor;
}

GridFunction trace(const GridFunction& u, Side side)
{
    if (!u.space_range().is_dual())
        throw MeshMismatch("trace: expects a dual-mesh function; got "
                           + std::string(to_string(u.space_tag())));
    const int h = side == Side::Left ? mid(0) : mid(u.grid().M());
    if (!u.space_range().contains(h))
        throw MeshMismatch("trace: function on " + describe(u.space_range())
                           + " has no value next to the boundary");
    return u.restrict_space(IndexRange{h, 1});
}

double h1_norm_squared(const GridFunction& u)
{
    require_closure_slice(u, "H1 norm");
    const Grid& g = u.grid();
    const GridFunction du = apply(Op::Dx, u, g.space(SpaceMesh::Dual), std::nullopt);
    return integrate(du.squared(), Region::MStar) + integrate(u.squared(), Region::M);
}

double xt_norm(const GridFunction& terminal_y, const GridFunction& terminal_v)
{
    if (terminal_v.has_time())
        throw MeshMismatch("X_T norm: terminal velocity must be a slice");
    return std::sqrt(h1_norm_squared(terminal_y))
           + std::sqrt(integrate(terminal_v.squared(), Region::M));
}

double norm(const GridFunction& u, NormKind kind, Region region)
{
    switch (kind) {
    case NormKind::L2: {
        double sum = 0.0;
        const double factor = visit_region(u, region, [&](double v) { sum += v * v; });
        return std::sqrt(sum * factor);
    }
    case NormKind::Linf: {
        double m = 0.0;
        visit_region(u, region, [&](double v) { m = std::max(m, std::abs(v)); });
        return m;
    }
    default:
        throw InvalidArgument("norm: only L2 and Linf take an explicit region");
    }
}

double norm(const GridFunction& u, NormKind kind)
{
    const Grid& g = u.grid();
    switch (kind) {
    case NormKind::L2:
    case NormKind::Linf: return norm(u, kind, default_region(u));
    case NormKind::H1: return std::sqrt(h1_norm_squared(u));
    case NormKind::Dt: {
        if (!u.has_time())
            throw MeshMismatch("Dt norm needs a time axis");
        const IndexRange need = IndexRange::between(node(1), node(g.N() + 1));
        if (!u.time_range()->contains(need))
            throw IncompleteTrajectory("Dt norm needs slices n = 1..N+1; got "
                                       + describe(*u.time_range()));
        const IndexRange fwd = IndexRange::between(mid(1), mid(g.N()));
        const GridFunction dtu = apply(Op::Dt, u, u.space_range(), fwd);
        const GridFunction on_n =
            apply(Op::TPlus, dtu.squared(), u.space_range(), g.time(TimeMesh::Primal));
        if (u.space_count() == 1)
            return std::sqrt(integrate(on_n, Region::N));
        return std::sqrt(integrate(on_n, Region::MxN));
    }
    case NormKind::XT: {
        if (!u.has_time())
            throw MeshMismatch("X_T norm needs a trajectory");
        const int hN = node(g.N());
        const int hN1 = node(g.N() + 1);
        if (!u.time_range()->contains(hN) || !u.time_range()->contains(hN1))
            throw IncompleteTrajectory("X_T norm needs slices N and N+1");
        const GridFunction yT = u.slice(hN);
        const double dt = g.dt();
        const GridFunction vT =
            (u.slice(hN1) - yT).map([dt](double v) { return v / dt; });
        return xt_norm(yT, vT);
    }
    }
    return 0.0;
}

}  // namespace stochwave
