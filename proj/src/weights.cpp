#include "stochwave/weights.hpp"

#include <array>
#include <cfloat>
#include <cmath>
#include <limits>

#include "stochwave/errors.hpp"

namespace stochwave {

void WeightParams::validate() const
{
    auto fail = [](const std::string& what) { throw InvalidArgument("weight: " + what); };
    if (!(s >= 0.0) || !std::isfinite(s))
        fail("s must be a nonnegative real");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        fail("lambda must be a nonnegative real");
    if (!(beta > 0.0 && beta < 1.0))
        fail("beta must lie in (0,1)");
    if (!(xstar > 1.0) || !std::isfinite(xstar))
        fail("xstar must exceed 1");
    if (!(T > 0.0) || !std::isfinite(T))
        fail("T must be positive");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        fail("epsilon must lie in (0,1]");
    if (!(dt_multiplier > 0.0) || !std::isfinite(dt_multiplier))
        fail("dt_multiplier must be positive");
    if (!std::isfinite(mconst))
        fail("mconst must be finite");
}

double max_exponent()
{
    static const double m = std::log(std::numeric_limits<double>::max());
    return m;
}

double checked_exp(double a)
{
    if (!(a <= max_exponent()))
        throw WeightOverflow(a);
    return std::exp(a);
}

double weight_phi(const WeightParams& p, double x, double t)
{
    const double dxs = x - p.xstar;
    const double dts = t - (p.T + 1.0);
    return dxs * dxs - p.beta * dts * dts + p.mconst;
}

WeightValues eval_weights(const WeightParams& p, double x, double t)
{
    WeightValues w{};
    w.phi = weight_phi(p, x, t);
    w.varphi = checked_exp(p.lambda * w.phi);
    w.l = p.s * w.varphi;
    w.r = checked_exp(w.l);
    w.rho = std::exp(-w.l);
    w.dphi_dx = 2.0 * (x - p.xstar);
    w.dphi_dt = 2.0 * p.beta * (p.T + 1.0 - t);
    return w;
}

AdmissibilityReport check_admissible(const WeightParams& p, const Grid& grid)
{
    AdmissibilityReport rep;
    const double sup_dist = std::max(std::abs(p.xstar), std::abs(1.0 - p.xstar));
    rep.t_margin = p.T - sup_dist / p.beta;
    rep.t_condition = rep.t_margin > 0.0;

    rep.sdx_value = p.s * grid.dx();
    rep.sdx_condition = rep.sdx_value <= p.epsilon;

    rep.dt_value = grid.dt() / (p.epsilon * grid.dx() * grid.dx());
    rep.dt_condition = rep.dt_value <= p.dt_multiplier;

    double phi_min = std::numeric_limits<double>::infinity();
    const IndexRange xs = grid.space(SpaceMesh::Closure);
    const IndexRange ts = grid.time(TimeMesh::Closure);
    for (int i = 0; i < xs.count; ++i)
        for (int k = 0; k < ts.count; ++k)
            phi_min = std::min(phi_min, weight_phi(p, grid.x(xs.at(i)), grid.t(ts.at(k))));
    rep.phi_min = phi_min;
    rep.phi_positive = phi_min > 0.0;

    const bool same_horizon = std::abs(p.T - grid.T()) <= 1e-12 * grid.T();
    rep.overall = rep.t_condition && rep.sdx_condition && rep.dt_condition
                  && rep.phi_positive && same_horizon;
    return rep;
}

std::string_view to_string(AsymptoticExpr e)
{
    switch (e) {
    case AsymptoticExpr::RAxDxRho: return "r_AxDx_rho";
    case AsymptoticExpr::AxDxRAxDxRho: return "AxDx_r_AxDx_rho";
    case AsymptoticExpr::AtDtRAxDxRho: return "AtDt_r_AxDx_rho";
    case AsymptoticExpr::AxDxRDtRho: return "AxDx_r_Dt_rho";
    }
    return "?";
}

const std::vector<AsymptoticExpr>& all_asymptotic_exprs()
{
    static const std::vector<AsymptoticExpr> all{
        AsymptoticExpr::RAxDxRho, AsymptoticExpr::AxDxRAxDxRho,
        AsymptoticExpr::AtDtRAxDxRho, AsymptoticExpr::AxDxRDtRho};
    return all;
}

std::optional<AsymptoticExpr> parse_asymptotic_expr(std::string_view id)
{
    for (AsymptoticExpr e : all_asymptotic_exprs())
        if (to_string(e) == id)
            return e;
    return std::nullopt;
}

namespace {

double weight_l(const WeightParams& p, double x, double t)
{
    return p.s * checked_exp(p.lambda * weight_phi(p, x, t));
}

// r(x,t) * rho(x2,t2) without forming either factor on its own.
double r_rho(const WeightParams& p, double x, double t, double x2, double t2)
{
    return checked_exp(weight_l(p, x, t) - weight_l(p, x2, t2));
}

// r AxDx rho with spacing h: r (rho(x+h) - rho(x-h)) / (2h).
double r_axdx_rho(const WeightParams& p, double x, double t, double h)
{
    return (r_rho(p, x, t, x + h, t) - r_rho(p, x, t, x - h, t)) / (2.0 * h);
}

// r Dt rho with spacing k: r (rho(t+k/2) - rho(t-k/2)) / k.
double r_dt_rho(const WeightParams& p, double x, double t, double k)
{
    return (r_rho(p, x, t, x, t + 0.5 * k) - r_rho(p, x, t, x, t - 0.5 * k)) / k;
}

struct Exact {
    double varphi, px, pt;
};

Exact exact_parts(const WeightParams& p, double x, double t)
{
    return {checked_exp(p.lambda * weight_phi(p, x, t)), 2.0 * (x - p.xstar),
            2.0 * p.beta * (p.T + 1.0 - t)};
}

double residual_at(AsymptoticExpr e, const WeightParams& p, double x, double t,
                   double h, double k)
{
    const double sl = p.s * p.lambda;
    const Exact ex = exact_parts(p, x, t);
    switch (e) {
    case AsymptoticExpr::RAxDxRho: {
        const double exact = -sl * ex.varphi * ex.px;
        return r_axdx_rho(p, x, t, h) - exact;
    }
    case AsymptoticExpr::AxDxRAxDxRho: {
        const double disc = (r_axdx_rho(p, x + h, t, h) - r_axdx_rho(p, x - h, t, h)) / (2.0 * h);
        const double exact = -sl * ex.varphi * (p.lambda * ex.px * ex.px + 2.0);
        return disc - exact;
    }
    case AsymptoticExpr::AtDtRAxDxRho: {
        const double disc = (r_axdx_rho(p, x, t + k, h) - r_axdx_rho(p, x, t - k, h)) / (2.0 * k);
        const double exact = -sl * p.lambda * ex.varphi * ex.px * ex.pt;
        return disc - exact;
    }
    case AsymptoticExpr::AxDxRDtRho: {
        const double disc = (r_dt_rho(p, x + h, t, k) - r_dt_rho(p, x - h, t, k)) / (2.0 * h);
        const double exact = -sl * p.lambda * ex.varphi * ex.px * ex.pt;
        return disc - exact;
    }
    }
    return 0.0;
}

bool is_mixed(AsymptoticExpr e)
{
    return e == AsymptoticExpr::AtDtRAxDxRho || e == AsymptoticExpr::AxDxRDtRho;
}

}  // namespace

double asymptotic_residual(AsymptoticExpr e, const WeightParams& p,
                           const Grid& level, const Grid& sample_grid)
{
    const IndexRange xs = sample_grid.space(SpaceMesh::Primal);
    const IndexRange ts = sample_grid.time(TimeMesh::Primal);
    double m = 0.0;
    for (int i = 0; i < xs.count; ++i)
        for (int k = 0; k < ts.count; ++k) {
            const double res = residual_at(e, p, sample_grid.x(xs.at(i)),
                                           sample_grid.t(ts.at(k)), level.dx(), level.dt());
            m = std::max(m, std::abs(res));
        }
    return m;
}

OrderEstimate estimate_order(AsymptoticExpr e, const WeightParams& p,
                             const std::vector<Grid>& levels)
{
    if (levels.size() < 3)
        throw InvalidArgument("estimate_order: need at least 3 refinement levels, got "
                              + std::to_string(levels.size()));
    const Grid& coarse = levels.front();
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const Grid& a = levels[i - 1];
        const Grid& b = levels[i];
        if (std::abs(b.dx() * 2.0 - a.dx()) > 1e-12 * a.dx())
            throw InvalidArgument("estimate_order: level " + std::to_string(i)
                                  + " does not halve dx");
        if (std::abs(b.T() - coarse.T()) > 1e-12 * coarse.T())
            throw InvalidArgument("estimate_order: levels must share T");
        if (is_mixed(e)
            && std::abs(b.dt() / b.dx() - coarse.dt() / coarse.dx())
                   > 1e-9 * (coarse.dt() / coarse.dx()))
            throw InvalidArgument("estimate_order: mixed expressions need a fixed dt/dx ratio");
    }
    if (std::max(p.s * coarse.dx(), p.s * coarse.dt()) > 1.0)
        throw InvalidArgument("estimate_order: max(s dx, s dt) must be <= 1 on the coarsest level");

    OrderEstimate est{e, 0.0, 0.0, {}, {}};
    for (const Grid& g : levels) {
        est.dx.push_back(g.dx());
        est.residuals.push_back(asymptotic_residual(e, p, g, coarse));
    }
    if (est.residuals.front() < 1e3 * DBL_EPSILON)
        throw DegenerateOrder(std::string("estimate_order: ") + std::string(to_string(e))
                              + " is exact to rounding on the coarsest level");

    const std::size_t n = levels.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(est.dx[i]);
        const double ly = std::log(est.residuals[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::log(est.residuals[i]) - (icept + slope * std::log(est.dx[i]));
        ss += d * d;
    }
    est.order = slope;
    est.fit_residual = std::sqrt(ss / n);
    return est;
}

}  // namespace stochwave
