#include "stochwave/fields.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace stochwave {

namespace {

constexpr int kModes = 8;

std::array<double, kModes> series_coefficients(std::mt19937_64& gen, double amplitude)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, kModes> c{};
    for (int k = 0; k < kModes; ++k)
        c[k] = amplitude * u(gen) / (k + 1);
    return c;
}

double series(const std::array<double, kModes>& c, double x)
{
    double s = 0.0;
    for (int k = 0; k < kModes; ++k)
        s += c[k] * std::sin((k + 1) * std::numbers::pi * x);
    return s;
}

// sin(k pi x) is not exactly zero at x = 1 in floating point; Dirichlet
// data must be.
GridFunction pin_ends(const GridFunction& u, SpaceMesh mesh)
{
    if (mesh != SpaceMesh::Closure)
        return u;
    std::vector<double> v(u.values().begin(), u.values().end());
    v.front() = 0.0;
    v.back() = 0.0;
    return GridFunction(u.grid(), u.space_range(), std::nullopt, std::move(v));
}

}  // namespace

GridFunction sine_slice(const Grid& grid, SpaceMesh mesh, int mode, double amplitude)
{
    return pin_ends(GridFunction::sample(grid, mesh, [=](double x) {
                        return amplitude * std::sin(mode * std::numbers::pi * x);
                    }),
                    mesh);
}

GridFunction sine_field(const Grid& grid, int mode, double amplitude)
{
    return GridFunction::sample(grid, SpaceMesh::Primal, TimeMesh::Primal,
                                [=](double x, double) {
                                    return amplitude * std::sin(mode * std::numbers::pi * x);
                                });
}

GridFunction random_series_slice(const Grid& grid, SpaceMesh mesh, std::uint64_t seed,
                                 double amplitude)
{
    std::mt19937_64 gen(seed);
    const auto c = series_coefficients(gen, amplitude);
    return pin_ends(GridFunction::sample(grid, mesh, [&](double x) { return series(c, x); }),
                    mesh);
}

GridFunction random_series_field(const Grid& grid, std::uint64_t seed, double amplitude)
{
    std::mt19937_64 gen(seed);
    const auto p = series_coefficients(gen, amplitude);
    const auto q = series_coefficients(gen, amplitude);
    const double T = grid.T();
    return GridFunction::sample(grid, SpaceMesh::Primal, TimeMesh::Primal,
                                [&](double x, double t) {
                                    return series(p, x) + (t / T) * series(q, x);
                                });
}

GridFunction random_nodal(const Grid& grid, IndexRange space, std::optional<IndexRange> time,
                          std::uint64_t seed, double amplitude)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    std::vector<double> values(static_cast<std::size_t>(space.count)
                               * (time ? time->count : 1));
    for (double& v : values)
        v = u(gen);
    return GridFunction(grid, space, time, std::move(values));
}

}  // namespace stochwave
