#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stochwave/mesh.hpp"

namespace stochwave {

/// Parameters of the Carleman weight family
///
///   phi(x,t)    = |x - xstar|^2 - beta |t - (T+1)|^2 + mconst
///   varphi(x,t) = exp(lambda phi),   l = s varphi,   r = e^l,   rho = 1/r
///
/// plus the mesh-regime constant epsilon (s dx <= epsilon and
/// dt <= dt_multiplier * epsilon * dx^2).
struct WeightParams {
    double s = 1.0;
    double lambda = 1.0;
    double beta = 0.5;
    double xstar = 1.5;
    double mconst = 2.0;
    double T = 1.0;
    double epsilon = 0.5;
    double dt_multiplier = 1.0;

    /// s >= 0, lambda >= 0, beta in (0,1), xstar > 1, T > 0, epsilon in (0,1].
    void validate() const;
};

struct WeightValues {
    double phi;
    double varphi;
    double l;
    double r;
    double rho;
    double dphi_dx;
    double dphi_dt;
};

/// Largest exponent whose exponential is a finite double.
double max_exponent();

/// exp(a), throwing WeightOverflow instead of returning inf.
double checked_exp(double a);

/// Closed-form weights at (x, t). Throws WeightOverflow when varphi or r
/// does not fit in a double.
WeightValues eval_weights(const WeightParams& p, double x, double t);

/// Quadratic phi alone (never overflows).
double weight_phi(const WeightParams& p, double x, double t);

struct AdmissibilityReport {
    bool t_condition = false;
    double t_margin = 0.0;  ///< T - sup_{x in [0,1]} |x - xstar| / beta
    bool sdx_condition = false;
    double sdx_value = 0.0;  ///< s dx, compared with epsilon
    bool dt_condition = false;
    double dt_value = 0.0;  ///< dt / (epsilon dx^2), compared with dt_multiplier
    bool phi_positive = false;
    double phi_min = 0.0;  ///< smallest phi over the space-time closure
    bool overall = false;
};

AdmissibilityReport check_admissible(const WeightParams& p, const Grid& grid);

/// Consistency expressions whose discretization error is measured against
/// closed-form derivatives of the weight.
enum class AsymptoticExpr {
    RAxDxRho,         ///< r AxDx rho - r d_x rho
    AxDxRAxDxRho,     ///< AxDx(r AxDx rho) - d_x(r d_x rho)
    AtDtRAxDxRho,     ///< AtDt(r AxDx rho) - d_t(r d_x rho)
    AxDxRDtRho,       ///< AxDx(r Dt rho) - d_x(r d_t rho)
};

/// Stable identifiers used on the command line and in CSV output.
std::string_view to_string(AsymptoticExpr e);
std::optional<AsymptoticExpr> parse_asymptotic_expr(std::string_view id);
const std::vector<AsymptoticExpr>& all_asymptotic_exprs();

/// Max-abs residual of `e` over the primal nodes of `sample_grid`, with the
/// difference operators taken at the spacing of `level`.
double asymptotic_residual(AsymptoticExpr e, const WeightParams& p,
                           const Grid& level, const Grid& sample_grid);

struct OrderEstimate {
    AsymptoticExpr expr;
    double order = 0.0;         ///< least-squares slope of log residual vs log dx
    double fit_residual = 0.0;  ///< RMS misfit of that line
    std::vector<double> dx;
    std::vector<double> residuals;
};

/// Needs >= 3 levels that successively halve dx over the same T, with
/// max(s dx, s dt) <= 1 on the coarsest and, for the mixed expressions, a
/// fixed dt/dx ratio. Residuals are sampled on the coarsest level's nodes.
OrderEstimate estimate_order(AsymptoticExpr e, const WeightParams& p,
                             const std::vector<Grid>& levels);

}  // namespace stochwave
