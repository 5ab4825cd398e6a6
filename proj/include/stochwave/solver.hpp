#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "stochwave/brownian.hpp"
#include "stochwave/grid_function.hpp"

namespace stochwave {

/// How the random-source intensity g is stored: a field on M x N, or a
/// space-only slice on M used at every time step.
enum class SourceMode { SpaceTime, SpaceOnly };

const char* to_string(SourceMode mode);

struct ProblemData {
    GridFunction y0;  ///< initial displacement, slice on Mbar
    GridFunction y1;  ///< initial velocity, slice on Mbar
    GridFunction g;   ///< M x N field, or slice on M in space-only mode
    std::optional<GridFunction> f;  ///< deterministic forcing on M x N

    SourceMode g_mode() const { return g.has_time() ? SourceMode::SpaceTime : SourceMode::SpaceOnly; }

    /// g at primal node (j, n), 1 <= j <= M, 1 <= n <= N.
    double g_at(int j, int n) const;
    double f_at(int j, int n) const;

    /// Layout checks plus the compatibility condition y0(0) = y0(1) = 0.
    void validate(const Grid& grid) const;

    static ProblemData zero(const Grid& grid, SourceMode mode = SourceMode::SpaceTime);
};

/// Component-wise a - b. Both must share grid and g mode; a missing f counts
/// as zero.
ProblemData difference(const ProblemData& a, const ProblemData& b);
ProblemData scaled(const ProblemData& a, double alpha);

/// Lower-order and noise coefficients on Mbar x {t^0..t^N}.
struct SchemeCoefficients {
    GridFunction a;
    GridFunction b;
    GridFunction c;
    GridFunction d;

    static SchemeCoefficients zero(const Grid& grid);
    static SchemeCoefficients constant(const Grid& grid, double a, double b,
                                       double c, double d);

    void validate(const Grid& grid) const;
};

bool operator==(const SchemeCoefficients& x, const SchemeCoefficients& y);

struct Trajectory {
    GridFunction y;  ///< Mbar x time closure (slices 0..N+1)
    BrownianPath path;
    bool cfl_warning = false;  ///< dt > dx
};

/// Explicit leapfrog update, for n = 1..N and 1 <= j <= M:
///
///   (1 - c dt) y^{n+1} = 2y^n - y^{n-1} + dt^2 (Dx2 y + a y + b AxDx y + f)
///                        - c dt y^n + dt (d y + g) dB^n
///
/// with y^0 = y0, y^1 = y0 + dt y1 and zero Dirichlet values at every slice
/// after the first. Throws SingularUpdate when 1 - c dt vanishes and BlowUp
/// at the first non-finite value.
Trajectory solve(const ProblemData& data, const SchemeCoefficients& coeffs,
                 const BrownianPath& path, const Grid& grid);

struct Ensemble {
    Grid grid;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<Trajectory> trajectories;
    std::shared_ptr<const SchemeCoefficients> coeffs;

    std::size_t size() const { return trajectories.size(); }
};

/// Solves `paths` independent trajectories, path k driven by
/// sample_brownian(N, dt, derive_path_seed(master_seed, k)). The result does
/// not depend on `threads` (0 picks the hardware concurrency). A BlowUp is
/// re-thrown with the lowest failing path index.
Ensemble run_ensemble(const ProblemData& data, const SchemeCoefficients& coeffs,
                      const Grid& grid, int paths, std::uint64_t master_seed,
                      unsigned threads = 1);

struct Observation {
    GridFunction flux;        ///< (y^n_1 - y^n_0)/dx at x = dx/2, n = 1..N
    GridFunction terminal_y;  ///< y(., T) on Mbar
    GridFunction terminal_v;  ///< (y^{N+1} - y^N)/dt on Mbar
};

/// Throws IncompleteTrajectory unless slices 0..N+1 are present.
Observation observe(const GridFunction& y);
Observation observe(const Trajectory& traj, const Grid& grid);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_flux_csv(std::ostream& out, const Observation& obs);
void write_terminal_csv(std::ostream& out, const Observation& obs);

}  // namespace stochwave
