#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "stochwave/solver.hpp"
#include "stochwave/weights.hpp"

namespace stochwave {

/// Monte Carlo mean with standard error sd / sqrt(paths), sd using n - 1.
/// A single path has zero standard error.
struct MCStatistic {
    double mean = 0.0;
    double std_error = 0.0;
    int paths = 0;
};

/// Welford accumulation in the order given.
MCStatistic summarize(std::span<const double> samples);

/// Weighted energy terms of the discrete Carleman estimate, averaged over
/// paths. lhs[0..6] = L1..L7, rhs[0..3] = R1..R4 (see README for integrands).
struct CarlemanReport {
    WeightParams weight;
    double kappa = 0.0;
    SourceMode g_mode = SourceMode::SpaceTime;
    AdmissibilityReport admissibility;
    bool inadmissible = false;  ///< computed anyway, flagged

    std::array<MCStatistic, 7> lhs;
    std::array<MCStatistic, 4> rhs;

    double lhs_sum = 0.0;
    double rhs_sum = 0.0;
    std::optional<double> ratio;             ///< lhs_sum / rhs_sum
    std::optional<double> ratio_without_r4;  ///< lhs_sum / (R1 + R2 + R3)
};

CarlemanReport carleman_terms(const Ensemble& ens, const WeightParams& w,
                              const ProblemData& data, const Grid& grid,
                              double kappa = 0.0);

/// Terms of the Lipschitz stability estimate for a coupled pair.
/// lhs = {G, Y0, Y1}, rhs = {FLUX, XT, DTDX}, all unsquared norms; the data
/// norms are deterministic and carry zero standard error.
struct StabilityReport {
    SourceMode g_mode = SourceMode::SpaceTime;
    std::array<MCStatistic, 3> lhs;
    std::array<MCStatistic, 3> rhs;
    MCStatistic xt_squared;  ///< XT^2, the power printed in the estimate

    double lhs_sum = 0.0;
    double rhs_sum = 0.0;
    /// lhs_sum / rhs_sum; empty when the denominator vanishes.
    std::optional<double> ratio;
    /// Same with XT replaced by XT^2.
    std::optional<double> ratio_printed;
};

/// Throws CouplingError unless both ensembles share grid, coefficients,
/// path count, seeds and increments.
StabilityReport stability_terms(const Ensemble& ens_a, const Ensemble& ens_b,
                                const ProblemData& data_a, const ProblemData& data_b,
                                const Grid& grid);

void require_coupled(const Ensemble& ens_a, const Ensemble& ens_b);

/// Per-path sum over M x N of y^n_j (B^{n+1} - B^n) dx dt. Needs >= 100 paths.
MCStatistic martingale_check(const Ensemble& ens, const Grid& grid);

/// Node-wise mean and standard error of the trajectories.
struct NodeMoments {
    GridFunction mean;
    GridFunction std_error;
};

NodeMoments ensemble_moments(const Ensemble& ens);

/// Largest residual of the scheme at the interior nodes (j = 1..M,
/// n = 1..N), written with z = Dt y as
///
///   (z^{n+1/2} - z^{n-1/2}) - dt (Dx2 y + a y + b AxDx y + c t+z + f)
///                           - (d y + g) dB^n
///
/// relative to the largest magnitude among those operands and t+z.
double scheme_residual(const GridFunction& y, const ProblemData& data,
                       const SchemeCoefficients& coeffs, const BrownianPath& path);

/// scheme_residual of y_a - y_b against the differenced data, for a pair
/// driven by the same Brownian path.
double difference_system_residual(const Trajectory& a, const Trajectory& b,
                                  const ProblemData& data_a, const ProblemData& data_b,
                                  const SchemeCoefficients& coeffs);

/// JSON object with lhs.L1..L7 / rhs.R1..R4 (or lhs.G/Y0/Y1 and
/// rhs.FLUX/XT/DTDX), a matching "stderr" object and the ratios.
std::string to_json(const CarlemanReport& report);
std::string to_json(const StabilityReport& report);
std::string to_json(const MCStatistic& stat);

/// Long format "term,value,stderr".
void write_terms_csv(std::ostream& out, const CarlemanReport& report);
void write_terms_csv(std::ostream& out, const StabilityReport& report);

}  // namespace stochwave
