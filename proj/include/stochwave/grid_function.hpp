#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stochwave/mesh.hpp"

namespace stochwave {

/// Real values on a run of space points times (optionally) a run of time
/// points. Storage is space-major, time-minor. A function without a time
/// axis is a single time slice (initial data, terminal observations).
class GridFunction {
public:
    GridFunction(Grid grid, IndexRange space, std::optional<IndexRange> time,
                 std::vector<double> values);

    static GridFunction constant(const Grid& grid, IndexRange space,
                                 std::optional<IndexRange> time, double value);
    static GridFunction zeros(const Grid& grid, IndexRange space,
                              std::optional<IndexRange> time = std::nullopt)
    {
        return constant(grid, space, time, 0.0);
    }

    /// Samples f(x, t) at every point; t is 0 for a slice.
    static GridFunction sample(const Grid& grid, IndexRange space,
                               std::optional<IndexRange> time,
                               const std::function<double(double, double)>& f);
    static GridFunction sample(const Grid& grid, SpaceMesh space,
                               const std::function<double(double)>& f);
    static GridFunction sample(const Grid& grid, SpaceMesh space, TimeMesh time,
                               const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    const IndexRange& space_range() const { return space_; }
    const std::optional<IndexRange>& time_range() const { return time_; }
    bool has_time() const { return time_.has_value(); }
    int space_count() const { return space_.count; }
    int time_count() const { return time_ ? time_->count : 1; }

    MeshTag space_tag() const { return grid_.space_tag(space_); }
    MeshTag time_tag() const
    {
        return time_ ? grid_.time_tag(*time_) : MeshTag::Slice;
    }

    std::span<const double> values() const { return values_; }

    /// Value at doubled indices; `ht` is ignored for slices.
    double operator()(int hx, int ht = 0) const;
    bool defined_at(int hx, int ht = 0) const;

    /// Unchecked access by storage offsets.
    double raw(int ix, int it = 0) const { return values_[ix * time_count() + it]; }

    /// Space-only function at time index ht.
    GridFunction slice(int ht) const;
    /// Time series at space index hx (space axis reduced to that one point).
    GridFunction column(int hx) const;
    /// Sub-block; throws MeshMismatch unless fully covered.
    GridFunction restrict_to(IndexRange space, std::optional<IndexRange> time) const;
    GridFunction restrict_space(IndexRange space) const
    {
        return restrict_to(space, time_);
    }
    GridFunction restrict_time(IndexRange time) const
    {
        return restrict_to(space_, time);
    }

    GridFunction map(const std::function<double(double)>& f) const;
    GridFunction squared() const;

    double max_abs() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(const GridFunction& other);
    GridFunction& operator*=(double a);

private:
    void require_same_layout(const GridFunction& other, const char* op) const;

    Grid grid_;
    IndexRange space_;
    std::optional<IndexRange> time_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(GridFunction a, const GridFunction& b);
GridFunction operator*(GridFunction a, double s);
GridFunction operator*(double s, GridFunction a);

/// Space-only function broadcast over a time range.
GridFunction replicate_in_time(const GridFunction& u, IndexRange time);

}  // namespace stochwave
