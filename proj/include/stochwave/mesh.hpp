#pragma once

#include <string>
#include <vector>

namespace stochwave {

// Points of a staggered 1-D mesh are addressed by doubled indices: the
// primal node j has index 2j and the dual node j+1/2 has index 2j+1.
constexpr int node(int j) { return 2 * j; }
constexpr int mid(int j) { return 2 * j + 1; }

/// Contiguous run of same-parity points: first, first+2, ..., first+2(count-1).
struct IndexRange {
    int first = 0;
    int count = 0;

    static IndexRange between(int first, int last)
    {
        return {first, last < first ? 0 : (last - first) / 2 + 1};
    }

    bool empty() const { return count <= 0; }
    int last() const { return first + 2 * (count - 1); }
    bool is_dual() const { return (first & 1) != 0; }
    bool contains(int h) const
    {
        return !empty() && h >= first && h <= last() && ((h - first) & 1) == 0;
    }
    bool contains(const IndexRange& other) const
    {
        return other.empty()
               || (contains(other.first) && contains(other.last()));
    }
    int offset(int h) const { return (h - first) / 2; }
    int at(int k) const { return first + 2 * k; }

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

std::string describe(const IndexRange& r);

enum class SpaceMesh { Primal, Dual, Closure };
enum class TimeMesh { Primal, Dual, Closure, PrimalClosure };

/// Location tag of one axis of a grid function. `Partial` marks a run of
/// points that is not one of the named meshes (e.g. after a translation).
enum class MeshTag { Primal, Dual, Closure, PrimalClosure, Partial, Slice };

const char* to_string(MeshTag tag);

/// Integration domains. Boundary regions carry no mesh factor.
enum class Region {
    M, MStar, MBar, BoundaryM,
    N, NStar, NBar, BoundaryN,
    MxN, MStarxN, MxNStar, MStarxNStar,
    BoundaryMxN, MxBoundaryN,
};

const char* to_string(Region region);

enum class Side { Left, Right };

/// Uniform space-time discretization of (0,1) x (0,T).
///
/// Space: x_j = j dx, j = 0..M+1, dx = 1/(M+1). Time: t^n = n dt,
/// n = 0..N+1, dt = T/N; the closure runs one step past T because the
/// scheme produces y^{N+1} and the terminal velocity consumes it.
/// Coordinates are always index * spacing, never accumulated.
class Grid {
public:
    Grid(int M, int N, double T);

    int M() const { return M_; }
    int N() const { return N_; }
    double T() const { return T_; }
    double dx() const { return dx_; }
    double dt() const { return dt_; }

    /// Coordinate of a doubled space / time index.
    double x(int h) const { return h * (0.5 * dx_); }
    double t(int h) const { return h * (0.5 * dt_); }

    IndexRange space(SpaceMesh mesh) const;
    IndexRange time(TimeMesh mesh) const;

    /// Points are clipped to [0, 1] x [0, T + dt].
    IndexRange space_bounds() const { return space(SpaceMesh::Closure); }
    IndexRange time_bounds() const { return time(TimeMesh::Closure); }

    std::vector<double> space_points(SpaceMesh mesh) const;
    std::vector<double> time_points(TimeMesh mesh) const;

    std::vector<double> space_primal() const { return space_points(SpaceMesh::Primal); }
    std::vector<double> space_dual() const { return space_points(SpaceMesh::Dual); }
    std::vector<double> space_closure() const { return space_points(SpaceMesh::Closure); }
    std::vector<double> time_primal() const { return time_points(TimeMesh::Primal); }
    std::vector<double> time_dual() const { return time_points(TimeMesh::Dual); }
    std::vector<double> time_closure() const { return time_points(TimeMesh::Closure); }

    MeshTag space_tag(const IndexRange& r) const;
    MeshTag time_tag(const IndexRange& r) const;

    /// Outward normal of the space boundary: -1 at x = 0, +1 at x = 1.
    static int normal_x(Side side) { return side == Side::Left ? -1 : 1; }
    /// Outward normal of the time boundary: -1 at t = 0, +1 at t = T.
    static int normal_t(Side side) { return side == Side::Left ? -1 : 1; }

    friend bool operator==(const Grid& a, const Grid& b)
    {
        return a.M_ == b.M_ && a.N_ == b.N_ && a.T_ == b.T_;
    }

private:
    int M_;
    int N_;
    double T_;
    double dx_;
    double dt_;
};

/// Validating factory; M, N >= 1 and T > 0.
Grid build_grid(int M, int N, double T);

}  // namespace stochwave
