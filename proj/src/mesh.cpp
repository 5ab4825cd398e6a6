#include "stochwave/mesh.hpp"

#include <cmath>

#include "stochwave/errors.hpp"

namespace stochwave {

std::string describe(const IndexRange& r)
{
    if (r.empty())
        return "[]";
    auto fmt = [](int h) {
        return (h & 1) ? std::to_string((h - 1) / 2) + "+1/2" : std::to_string(h / 2);
    };
    return "[" + fmt(r.first) + ".." + fmt(r.last()) + "]";
}

const char* to_string(MeshTag tag)
{
    switch (tag) {
    case MeshTag::Primal: return "primal";
    case MeshTag::Dual: return "dual";
    case MeshTag::Closure: return "closure";
    case MeshTag::PrimalClosure: return "primal-closure";
    case MeshTag::Partial: return "partial";
    case MeshTag::Slice: return "slice";
    }
    return "?";
}

const char* to_string(Region region)
{
    switch (region) {
    case Region::M: return "M";
    case Region::MStar: return "M*";
    case Region::MBar: return "Mbar";
    case Region::BoundaryM: return "dM";
    case Region::N: return "N";
    case Region::NStar: return "N*";
    case Region::NBar: return "Nbar";
    case Region::BoundaryN: return "dN";
    case Region::MxN: return "MxN";
    case Region::MStarxN: return "M*xN";
    case Region::MxNStar: return "MxN*";
    case Region::MStarxNStar: return "M*xN*";
    case Region::BoundaryMxN: return "dMxN";
    case Region::MxBoundaryN: return "MxdN";
    }
    return "?";
}

Grid::Grid(int M, int N, double T)
    : M_(M), N_(N), T_(T), dx_(1.0 / (M + 1)), dt_(T / N)
{
    if (M < 1)
        throw InvalidArgument("grid: M must be a positive integer, got "
                              + std::to_string(M));
    if (N < 1)
        throw InvalidArgument("grid: N must be a positive integer, got "
                              + std::to_string(N));
    if (!(T > 0.0) || !std::isfinite(T))
        throw InvalidArgument("grid: T must be a positive real");
}

Grid build_grid(int M, int N, double T)
{
    return Grid(M, N, T);
}

IndexRange Grid::space(SpaceMesh mesh) const
{
    switch (mesh) {
    case SpaceMesh::Primal: return IndexRange::between(node(1), node(M_));
    case SpaceMesh::Dual: return IndexRange::between(mid(0), mid(M_));
    case SpaceMesh::Closure: return IndexRange::between(node(0), node(M_ + 1));
    }
    return {};
}

IndexRange Grid::time(TimeMesh mesh) const
{
    switch (mesh) {
    case TimeMesh::Primal: return IndexRange::between(node(1), node(N_));
    case TimeMesh::Dual: return IndexRange::between(mid(0), mid(N_ - 1));
    case TimeMesh::Closure: return IndexRange::between(node(0), node(N_ + 1));
    case TimeMesh::PrimalClosure: return IndexRange::between(node(0), node(N_));
    }
    return {};
}

std::vector<double> Grid::space_points(SpaceMesh mesh) const
{
    const IndexRange r = space(mesh);
    std::vector<double> out(r.count);
    for (int k = 0; k < r.count; ++k)
        out[k] = x(r.at(k));
    return out;
}

std::vector<double> Grid::time_points(TimeMesh mesh) const
{
    const IndexRange r = time(mesh);
    std::vector<double> out(r.count);
    for (int k = 0; k < r.count; ++k)
        out[k] = t(r.at(k));
    return out;
}

MeshTag Grid::space_tag(const IndexRange& r) const
{
    if (r == space(SpaceMesh::Primal))
        return MeshTag::Primal;
    if (r == space(SpaceMesh::Dual))
        return MeshTag::Dual;
    if (r == space(SpaceMesh::Closure))
        return MeshTag::Closure;
    return MeshTag::Partial;
}

MeshTag Grid::time_tag(const IndexRange& r) const
{
    if (r == time(TimeMesh::Primal))
        return MeshTag::Primal;
    if (r == time(TimeMesh::Dual))
        return MeshTag::Dual;
    if (r == time(TimeMesh::Closure))
        return MeshTag::Closure;
    if (r == time(TimeMesh::PrimalClosure))
        return MeshTag::PrimalClosure;
    return MeshTag::Partial;
}

}  // namespace stochwave
