#include "stochwave/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "stochwave/errors.hpp"

namespace stochwave {

GridFunction::GridFunction(Grid grid, IndexRange space,
                           std::optional<IndexRange> time,
                           std::vector<double> values)
    : grid_(grid), space_(space), time_(time), values_(std::move(values))
{
    if (space_.empty())
        throw MeshMismatch("grid function: empty space range");
    if (time_ && time_->empty())
        throw MeshMismatch("grid function: empty time range");
    const auto expected = static_cast<std::size_t>(space_count()) * time_count();
    if (values_.size() != expected)
        throw MeshMismatch("grid function: " + std::to_string(values_.size())
                           + " values for " + std::to_string(expected)
                           + " points");
}

GridFunction GridFunction::constant(const Grid& grid, IndexRange space,
                                    std::optional<IndexRange> time, double value)
{
    const std::size_t n =
        static_cast<std::size_t>(space.count) * (time ? time->count : 1);
    return GridFunction(grid, space, time, std::vector<double>(n, value));
}

GridFunction GridFunction::sample(const Grid& grid, IndexRange space,
                                  std::optional<IndexRange> time,
                                  const std::function<double(double, double)>& f)
{
    const int nt = time ? time->count : 1;
    std::vector<double> v(static_cast<std::size_t>(space.count) * nt);
    for (int i = 0; i < space.count; ++i) {
        const double x = grid.x(space.at(i));
        for (int k = 0; k < nt; ++k)
            v[i * nt + k] = f(x, time ? grid.t(time->at(k)) : 0.0);
    }
    return GridFunction(grid, space, time, std::move(v));
}

GridFunction GridFunction::sample(const Grid& grid, SpaceMesh space,
                                  const std::function<double(double)>& f)
{
    return sample(grid, grid.space(space), std::nullopt,
                  [&](double x, double) { return f(x); });
}

GridFunction GridFunction::sample(const Grid& grid, SpaceMesh space, TimeMesh time,
                                  const std::function<double(double, double)>& f)
{
    return sample(grid, grid.space(space), grid.time(time), f);
}

bool GridFunction::defined_at(int hx, int ht) const
{
    return space_.contains(hx) && (!time_ || time_->contains(ht));
}

double GridFunction::operator()(int hx, int ht) const
{
    if (!space_.contains(hx))
        throw MeshMismatch("grid function: space index " + std::to_string(hx)
                           + " outside " + describe(space_));
    if (!time_)
        return values_[space_.offset(hx)];
    if (!time_->contains(ht))
        throw MeshMismatch("grid function: time index " + std::to_string(ht)
                           + " outside " + describe(*time_));
    return values_[space_.offset(hx) * time_->count + time_->offset(ht)];
}

GridFunction GridFunction::slice(int ht) const
{
    if (!time_)
        return *this;
    if (!time_->contains(ht))
        throw MeshMismatch("slice: time index " + std::to_string(ht)
                           + " outside " + describe(*time_));
    const int k = time_->offset(ht);
    std::vector<double> v(space_.count);
    for (int i = 0; i < space_.count; ++i)
        v[i] = values_[i * time_->count + k];
    return GridFunction(grid_, space_, std::nullopt, std::move(v));
}

GridFunction GridFunction::column(int hx) const
{
    return restrict_to(IndexRange{hx, 1}, time_);
}

GridFunction GridFunction::restrict_to(IndexRange space,
                                       std::optional<IndexRange> time) const
{
    if (!space_.contains(space))
        throw MeshMismatch("restrict: space range " + describe(space)
                           + " not covered by " + describe(space_));
    if (time.has_value() != time_.has_value())
        throw MeshMismatch("restrict: cannot add or drop the time axis");
    if (time && !time_->contains(*time))
        throw MeshMismatch("restrict: time range " + describe(*time)
                           + " not covered by " + describe(*time_));
    if (space == space_ && time == time_)
        return *this;
    const int nt_out = time ? time->count : 1;
    const int nt_in = time_count();
    const int t0 = time ? time_->offset(time->first) : 0;
    std::vector<double> v(static_cast<std::size_t>(space.count) * nt_out);
    for (int i = 0; i < space.count; ++i) {
        const int si = space_.offset(space.at(i));
        std::copy_n(values_.begin() + si * nt_in + t0, nt_out,
                    v.begin() + i * nt_out);
    }
    return GridFunction(grid_, space, time, std::move(v));
}

GridFunction GridFunction::map(const std::function<double(double)>& f) const
{
    GridFunction out = *this;
    for (double& v : out.values_)
        v = f(v);
    return out;
}

GridFunction GridFunction::squared() const
{
    GridFunction out = *this;
    for (double& v : out.values_)
        v *= v;
    return out;
}

double GridFunction::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

void GridFunction::require_same_layout(const GridFunction& other, const char* op) const
{
    if (!(grid_ == other.grid_) || space_ != other.space_ || time_ != other.time_)
        throw MeshMismatch(std::string("grid function ") + op
                           + ": operands live on different meshes ("
                           + describe(space_) + " vs " + describe(other.space_)
                           + ")");
}

GridFunction& GridFunction::operator+=(const GridFunction& other)
{
    require_same_layout(other, "+");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other)
{
    require_same_layout(other, "-");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& other)
{
    require_same_layout(other, "*");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] *= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double a)
{
    for (double& v : values_)
        v *= a;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
GridFunction operator*(GridFunction a, double s) { return a *= s; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

GridFunction replicate_in_time(const GridFunction& u, IndexRange time)
{
    if (u.has_time())
        throw MeshMismatch("replicate_in_time: function already has a time axis");
    std::vector<double> v(static_cast<std::size_t>(u.space_count()) * time.count);
    for (int i = 0; i < u.space_count(); ++i)
        std::fill_n(v.begin() + i * time.count, time.count, u.raw(i));
    return GridFunction(u.grid(), u.space_range(), time, std::move(v));
}

}  // namespace stochwave
