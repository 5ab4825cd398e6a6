#include "stochwave/estimator.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "stochwave/csv.hpp"
#include "stochwave/discrete_ops.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/meshkit.hpp"

namespace stochwave {

MCStatistic summarize(std::span<const double> samples)
{
    MCStatistic st;
    double mean = 0.0, m2 = 0.0;
    int k = 0;
    for (double x : samples) {
        ++k;
        const double delta = x - mean;
        mean += delta / k;
        m2 += delta * (x - mean);
    }
    st.mean = mean;
    st.paths = k;
    if (k > 1)
        st.std_error = std::sqrt(m2 / (k - 1)) / std::sqrt(static_cast<double>(k));
    return st;
}

namespace {

IndexRange closure_x(const Grid& g) { return g.space(SpaceMesh::Closure); }
IndexRange primal_x(const Grid& g) { return g.space(SpaceMesh::Primal); }
IndexRange dual_x(const Grid& g) { return g.space(SpaceMesh::Dual); }
IndexRange primal_t(const Grid& g) { return g.time(TimeMesh::Primal); }
// t^{n+1/2}, n = 0..N-1
IndexRange dual_t(const Grid& g) { return g.time(TimeMesh::Dual); }
// t^{n+1/2}, n = 0..N: every forward difference of the trajectory
IndexRange forward_t(const Grid& g) { return IndexRange::between(mid(0), mid(g.N())); }

// sl = s lambda phi, s3 = (s lambda phi)^3, each times r^2
struct WeightFields {
    GridFunction sl_r2;       // M x N
    GridFunction s3_r2;       // M x N
    GridFunction sl_r2_dual;  // M* x N
    GridFunction r2;          // M x N
    GridFunction sl_r2_0;     // M at t = 0
    GridFunction s3_r2_0;     // M at t = 0
    GridFunction sl_r2_dual_0;  // M* at t = 0
    GridFunction sl_left;     // weight at x = 0, stored where the flux lives (dx/2)
    GridFunction sl2_dd;      // s lambda^2 varphi on M* x N*
};

double r_squared(const WeightValues& w) { return checked_exp(2.0 * w.l); }

WeightFields weight_fields(const WeightParams& p, const Grid& g)
{
    const double s = p.s, lam = p.lambda;
    auto sl_r2 = [&](double x, double t) {
        const WeightValues w = eval_weights(p, x, t);
        return s * lam * w.varphi * r_squared(w);
    };
    auto s3_r2 = [&](double x, double t) {
        const WeightValues w = eval_weights(p, x, t);
        const double a = s * lam * w.varphi;
        return a * a * a * r_squared(w);
    };
    auto r2 = [&](double x, double t) { return r_squared(eval_weights(p, x, t)); };
    auto sl = [&](double x, double t) { return s * lam * eval_weights(p, x, t).varphi; };
    auto sl2 = [&](double x, double t) {
        return s * lam * lam * eval_weights(p, x, t).varphi;
    };
    auto at0 = [](auto f) { return [f](double x) { return f(x, 0.0); }; };

    return {GridFunction::sample(g, primal_x(g), primal_t(g), sl_r2),
            GridFunction::sample(g, primal_x(g), primal_t(g), s3_r2),
            GridFunction::sample(g, dual_x(g), primal_t(g), sl_r2),
            GridFunction::sample(g, primal_x(g), primal_t(g), r2),
            GridFunction::sample(g, SpaceMesh::Primal, at0(sl_r2)),
            GridFunction::sample(g, SpaceMesh::Primal, at0(s3_r2)),
            GridFunction::sample(g, SpaceMesh::Dual, at0(sl_r2)),
            GridFunction::sample(g, IndexRange{mid(0), 1}, primal_t(g),
                                 [&](double, double t) { return sl(0.0, t); }),
            GridFunction::sample(g, dual_x(g), dual_t(g), sl2)};
}

GridFunction g_on_mxn(const ProblemData& data, const Grid& grid)
{
    if (data.g.has_time())
        return data.g.restrict_to(primal_x(grid), primal_t(grid));
    return replicate_in_time(data.g.restrict_space(primal_x(grid)), primal_t(grid));
}

// Dx then Dt of a full trajectory, on M* x N*.
GridFunction dtdx(const GridFunction& y)
{
    const Grid& g = y.grid();
    const GridFunction dx = apply(Op::Dx, y, dual_x(g), y.time_range());
    return apply(Op::Dt, dx, dual_x(g), dual_t(g));
}

void require_trajectory(const Trajectory& tr, const Grid& grid)
{
    if (!(tr.y.grid() == grid))
        throw MeshMismatch("trajectory lives on a different grid");
    if (!tr.y.time_range()->contains(grid.time(TimeMesh::Closure)))
        throw IncompleteTrajectory("trajectory must hold slices 0..N+1");
}

std::optional<double> safe_ratio(double num, double den)
{
    if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num))
        return std::nullopt;
    return num / den;
}

MCStatistic deterministic(double v, int paths) { return {v, 0.0, paths}; }

// sqrt of a mean, first-order error propagation
MCStatistic root(const MCStatistic& m)
{
    MCStatistic out{std::sqrt(m.mean), 0.0, m.paths};
    if (m.mean > 0.0)
        out.std_error = m.std_error / (2.0 * out.mean);
    return out;
}

double covariance_of_means(const std::vector<double>& a, const std::vector<double>& b,
                           double ma, double mb)
{
    const std::size_t n = a.size();
    if (n < 2)
        return 0.0;
    double c = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        c += (a[k] - ma) * (b[k] - mb);
    return c / static_cast<double>(n - 1) / static_cast<double>(n);
}

// (sqrt(mean a) + sqrt(mean b)) with its delta-method standard error.
MCStatistic sum_of_roots(const std::vector<double>& a, const std::vector<double>& b)
{
    const MCStatistic sa = summarize(a), sb = summarize(b);
    const double ra = std::sqrt(sa.mean), rb = std::sqrt(sb.mean);
    const double ga = ra > 0.0 ? 0.5 / ra : 0.0;
    const double gb = rb > 0.0 ? 0.5 / rb : 0.0;
    const double var = ga * ga * sa.std_error * sa.std_error
                       + gb * gb * sb.std_error * sb.std_error
                       + 2.0 * ga * gb * covariance_of_means(a, b, sa.mean, sb.mean);
    return {ra + rb, std::sqrt(std::max(0.0, var)), sa.paths};
}

}  // namespace

CarlemanReport carleman_terms(const Ensemble& ens, const WeightParams& w,
                              const ProblemData& data, const Grid& grid, double kappa)
{
    w.validate();
    data.validate(grid);
    if (!(ens.grid == grid))
        throw MeshMismatch("carleman_terms: ensemble was solved on a different grid");
    if (ens.size() == 0)
        throw InvalidArgument("carleman_terms: empty ensemble");

    CarlemanReport rep;
    rep.weight = w;
    rep.kappa = kappa;
    rep.g_mode = data.g_mode();
    rep.admissibility = check_admissible(w, grid);
    rep.inadmissible = !rep.admissibility.overall;

    const WeightFields wf = weight_fields(w, grid);
    const int P = static_cast<int>(ens.size());

    // path-independent terms
    const GridFunction g2 = g_on_mxn(data, grid).squared();
    const double L4 = integrate(wf.sl_r2 * g2, Region::MxN);
    const GridFunction y0 = data.y0;
    const double L5 = integrate(wf.s3_r2_0 * y0.restrict_space(primal_x(grid)).squared(),
                                Region::M);
    const double L6 =
        integrate(wf.sl_r2_dual_0 * apply(Op::Dx, y0, dual_x(grid), std::nullopt).squared(),
                  Region::MStar);
    const double L7 =
        integrate(wf.sl_r2_0 * data.y1.restrict_space(primal_x(grid)).squared(), Region::M);
    double R1 = 0.0;
    if (data.f)
        R1 = integrate(wf.r2 * data.f->restrict_to(primal_x(grid), primal_t(grid)).squared(),
                       Region::MxN);

    std::vector<double> l1(P), l2(P), l3(P), r2(P), r3(P), h1(P), v2(P);
    const double dx2 = grid.dx() * grid.dx();
    for (int k = 0; k < P; ++k) {
        const Trajectory& tr = ens.trajectories[k];
        require_trajectory(tr, grid);
        const GridFunction& y = tr.y;
        l1[k] = integrate(wf.s3_r2 * y.restrict_to(primal_x(grid), primal_t(grid)).squared(),
                          Region::MxN);
        const GridFunction dty = apply(Op::Dt, y, primal_x(grid), forward_t(grid));
        l2[k] = integrate(
            wf.sl_r2 * apply(Op::TPlus, dty.squared(), primal_x(grid), primal_t(grid)),
            Region::MxN);
        const GridFunction dxy = apply(Op::Dx, y, dual_x(grid), primal_t(grid));
        l3[k] = integrate(wf.sl_r2_dual * dxy.squared(), Region::MStarxN);

        const Observation obs = observe(y);
        r2[k] = integrate(wf.sl_left * obs.flux.squared(), Region::N);
        r3[k] = dx2 * integrate(wf.sl2_dd * dtdx(y).squared(), Region::MStarxNStar);
        h1[k] = h1_norm_squared(obs.terminal_y);
        v2[k] = integrate(obs.terminal_v.squared(), Region::M);
    }

    rep.lhs = {summarize(l1), summarize(l2), summarize(l3), deterministic(L4, P),
               deterministic(L5, P), deterministic(L6, P), deterministic(L7, P)};
    const double s3 = w.s * w.s * w.s * checked_exp(kappa * w.s);
    MCStatistic xt = sum_of_roots(h1, v2);
    MCStatistic r4{s3 * xt.mean * xt.mean, s3 * 2.0 * xt.mean * xt.std_error, P};
    rep.rhs = {deterministic(R1, P), summarize(r2), summarize(r3), r4};

    for (const auto& t : rep.lhs)
        rep.lhs_sum += t.mean;
    for (const auto& t : rep.rhs)
        rep.rhs_sum += t.mean;
    rep.ratio = safe_ratio(rep.lhs_sum, rep.rhs_sum);
    rep.ratio_without_r4 = safe_ratio(rep.lhs_sum, rep.rhs_sum - rep.rhs[3].mean);
    return rep;
}

void require_coupled(const Ensemble& a, const Ensemble& b)
{
    if (!(a.grid == b.grid))
        throw CouplingError("ensembles were solved on different grids");
    if (a.size() != b.size())
        throw CouplingError("ensembles have different path counts ("
                            + std::to_string(a.size()) + " vs " + std::to_string(b.size())
                            + ")");
    if (a.seeds != b.seeds)
        throw CouplingError("ensembles use different per-path seeds");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.trajectories[k].path.increments != b.trajectories[k].path.increments)
            throw CouplingError("path " + std::to_string(k)
                                + " is driven by different Brownian increments");
    if (!a.coeffs || !b.coeffs || !(*a.coeffs == *b.coeffs))
        throw CouplingError("ensembles use different scheme coefficients");
}

StabilityReport stability_terms(const Ensemble& ens_a, const Ensemble& ens_b,
                                const ProblemData& data_a, const ProblemData& data_b,
                                const Grid& grid)
{
    require_coupled(ens_a, ens_b);
    if (!(ens_a.grid == grid))
        throw MeshMismatch("stability_terms: ensembles were solved on a different grid");
    data_a.validate(grid);
    data_b.validate(grid);
    const ProblemData diff = difference(data_a, data_b);
    const int P = static_cast<int>(ens_a.size());

    StabilityReport rep;
    rep.g_mode = diff.g_mode();
    const double G = diff.g.has_time()
                         ? norm(diff.g.restrict_to(primal_x(grid), primal_t(grid)),
                                NormKind::L2, Region::MxN)
                         : norm(diff.g.restrict_space(primal_x(grid)), NormKind::L2, Region::M);
    const double Y0 = std::sqrt(h1_norm_squared(diff.y0));
    const double Y1 = norm(diff.y1, NormKind::L2, Region::M);

    std::vector<double> flux(P), h1(P), v2(P), dd(P);
    const double dx2 = grid.dx() * grid.dx();
    for (int k = 0; k < P; ++k) {
        require_trajectory(ens_a.trajectories[k], grid);
        require_trajectory(ens_b.trajectories[k], grid);
        const GridFunction y = ens_a.trajectories[k].y - ens_b.trajectories[k].y;
        const Observation obs = observe(y);
        flux[k] = integrate(obs.flux.squared(), Region::N);
        h1[k] = h1_norm_squared(obs.terminal_y);
        v2[k] = integrate(obs.terminal_v.squared(), Region::M);
        dd[k] = dx2 * integrate(dtdx(y).squared(), Region::MStarxNStar);
    }

    rep.lhs = {deterministic(G, P), deterministic(Y0, P), deterministic(Y1, P)};
    const MCStatistic xt = sum_of_roots(h1, v2);
    rep.rhs = {root(summarize(flux)), xt, root(summarize(dd))};
    rep.xt_squared = {xt.mean * xt.mean, 2.0 * xt.mean * xt.std_error, P};

    rep.lhs_sum = G + Y0 + Y1;
    rep.rhs_sum = rep.rhs[0].mean + rep.rhs[1].mean + rep.rhs[2].mean;
    rep.ratio = safe_ratio(rep.lhs_sum, rep.rhs_sum);
    rep.ratio_printed =
        safe_ratio(rep.lhs_sum, rep.rhs[0].mean + rep.xt_squared.mean + rep.rhs[2].mean);
    return rep;
}

MCStatistic martingale_check(const Ensemble& ens, const Grid& grid)
{
    if (ens.size() < 100)
        throw InvalidArgument("martingale_check: needs at least 100 paths, got "
                              + std::to_string(ens.size()));
    if (!(ens.grid == grid))
        throw MeshMismatch("martingale_check: ensemble was solved on a different grid");
    const double w = grid.dx() * grid.dt();
    std::vector<double> samples(ens.size());
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const Trajectory& tr = ens.trajectories[k];
        require_trajectory(tr, grid);
        double sum = 0.0;
        for (int j = 1; j <= grid.M(); ++j)
            for (int n = 1; n <= grid.N(); ++n)
                sum += tr.y(node(j), node(n)) * tr.path.increments[n];
        samples[k] = sum * w;
    }
    return summarize(samples);
}

NodeMoments ensemble_moments(const Ensemble& ens)
{
    if (ens.size() == 0)
        throw InvalidArgument("ensemble_moments: empty ensemble");
    const GridFunction& first = ens.trajectories.front().y;
    const std::size_t nv = first.values().size();
    std::vector<double> mean(nv, 0.0), m2(nv, 0.0);
    int k = 0;
    for (const Trajectory& tr : ens.trajectories) {
        ++k;
        const auto v = tr.y.values();
        for (std::size_t i = 0; i < nv; ++i) {
            const double delta = v[i] - mean[i];
            mean[i] += delta / k;
            m2[i] += delta * (v[i] - mean[i]);
        }
    }
    std::vector<double> se(nv, 0.0);
    if (k > 1)
        for (std::size_t i = 0; i < nv; ++i)
            se[i] = std::sqrt(m2[i] / (k - 1)) / std::sqrt(static_cast<double>(k));
    return {GridFunction(first.grid(), first.space_range(), first.time_range(), std::move(mean)),
            GridFunction(first.grid(), first.space_range(), first.time_range(), std::move(se))};
}

double scheme_residual(const GridFunction& y, const ProblemData& data,
                       const SchemeCoefficients& coeffs, const BrownianPath& path)
{
    const Grid& g = y.grid();
    if (!y.has_time() || !y.time_range()->contains(g.time(TimeMesh::Closure))
        || !y.space_range().contains(closure_x(g)))
        throw IncompleteTrajectory("scheme_residual: needs y on Mbar x all slices");
    if (path.N() < g.N())
        throw InvalidArgument("scheme_residual: Brownian path too short");
    const IndexRange xs = primal_x(g), ts = primal_t(g);
    const double dt = g.dt();

    const GridFunction z = apply(Op::Dt, y, closure_x(g), forward_t(g));
    const GridFunction jump = apply(Op::DtIncr, z, xs, ts);
    const GridFunction tpz = apply(Op::TPlus, z, xs, ts);
    const GridFunction yi = y.restrict_to(xs, ts);
    const GridFunction lap = apply(Op::Dx2, y, xs, ts);
    const GridFunction grad =
        apply(Op::Ax, apply(Op::Dx, y, dual_x(g), ts), xs, ts);
    const GridFunction a = coeffs.a.restrict_to(xs, ts);
    const GridFunction b = coeffs.b.restrict_to(xs, ts);
    const GridFunction c = coeffs.c.restrict_to(xs, ts);
    const GridFunction d = coeffs.d.restrict_to(xs, ts);
    const GridFunction gg = g_on_mxn(data, g);
    const GridFunction f = data.f ? data.f->restrict_to(xs, ts) : GridFunction::zeros(g, xs, ts);
    const GridFunction dB = GridFunction::sample(g, xs, ts, [&](double, double t) {
        return path.increments[static_cast<std::size_t>(std::lround(t / dt))];
    });

    const GridFunction parts[] = {jump,         lap * dt,  a * yi * dt, b * grad * dt,
                                  c * tpz * dt, f * dt,    (d * yi + gg) * dB};
    const GridFunction res = parts[0] - parts[1] - parts[2] - parts[3] - parts[4] - parts[5]
                             - parts[6];
    double scale = tpz.max_abs();
    for (const GridFunction& p : parts)
        scale = std::max(scale, p.max_abs());
    return scale > 0.0 ? res.max_abs() / scale : 0.0;
}

double difference_system_residual(const Trajectory& a, const Trajectory& b,
                                  const ProblemData& data_a, const ProblemData& data_b,
                                  const SchemeCoefficients& coeffs)
{
    if (a.path.increments != b.path.increments)
        throw CouplingError("difference_system_residual: trajectories use different paths");
    return scheme_residual(a.y - b.y, difference(data_a, data_b), coeffs, a.path);
}

namespace {

using ojson = nlohmann::ordered_json;

ojson ratio_json(const std::optional<double>& r)
{
    return r ? ojson(*r) : ojson(nullptr);
}

}  // namespace

std::string to_json(const CarlemanReport& rep)
{
    ojson j;
    j["kind"] = "carleman";
    j["weight"] = {{"s", rep.weight.s},           {"lambda", rep.weight.lambda},
                   {"beta", rep.weight.beta},     {"xstar", rep.weight.xstar},
                   {"mconst", rep.weight.mconst}, {"T", rep.weight.T},
                   {"epsilon", rep.weight.epsilon}, {"dt_multiplier", rep.weight.dt_multiplier}};
    j["kappa"] = rep.kappa;
    j["g_mode"] = to_string(rep.g_mode);
    j["paths"] = rep.lhs[0].paths;
    const auto& ad = rep.admissibility;
    j["admissibility"] = {{"t_condition", ad.t_condition}, {"t_margin", ad.t_margin},
                          {"sdx_condition", ad.sdx_condition}, {"sdx_value", ad.sdx_value},
                          {"dt_condition", ad.dt_condition}, {"dt_value", ad.dt_value},
                          {"phi_positive", ad.phi_positive}, {"phi_min", ad.phi_min},
                          {"overall", ad.overall}};
    j["inadmissible"] = rep.inadmissible;
    ojson lhs, rhs, se_l, se_r;
    for (int i = 0; i < 7; ++i) {
        lhs["L" + std::to_string(i + 1)] = rep.lhs[i].mean;
        se_l["L" + std::to_string(i + 1)] = rep.lhs[i].std_error;
    }
    for (int i = 0; i < 4; ++i) {
        rhs["R" + std::to_string(i + 1)] = rep.rhs[i].mean;
        se_r["R" + std::to_string(i + 1)] = rep.rhs[i].std_error;
    }
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["stderr"] = {{"lhs", se_l}, {"rhs", se_r}};
    j["lhs_sum"] = rep.lhs_sum;
    j["rhs_sum"] = rep.rhs_sum;
    j["ratio"] = ratio_json(rep.ratio);
    j["ratio_without_r4"] = ratio_json(rep.ratio_without_r4);
    return j.dump(2) + "\n";
}

std::string to_json(const StabilityReport& rep)
{
    static const char* lnames[] = {"G", "Y0", "Y1"};
    static const char* rnames[] = {"FLUX", "XT", "DTDX"};
    ojson j;
    j["kind"] = "stability";
    j["g_mode"] = to_string(rep.g_mode);
    j["paths"] = rep.lhs[0].paths;
    ojson lhs, rhs, se_l, se_r;
    for (int i = 0; i < 3; ++i) {
        lhs[lnames[i]] = rep.lhs[i].mean;
        se_l[lnames[i]] = rep.lhs[i].std_error;
        rhs[rnames[i]] = rep.rhs[i].mean;
        se_r[rnames[i]] = rep.rhs[i].std_error;
    }
    rhs["XT_squared"] = rep.xt_squared.mean;
    se_r["XT_squared"] = rep.xt_squared.std_error;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["stderr"] = {{"lhs", se_l}, {"rhs", se_r}};
    j["lhs_sum"] = rep.lhs_sum;
    j["rhs_sum"] = rep.rhs_sum;
    j["convention"] = "unsquared";
    j["ratio"] = ratio_json(rep.ratio);
    j["ratio_defined"] = rep.ratio.has_value();
    j["ratio_printed"] = ratio_json(rep.ratio_printed);
    return j.dump(2) + "\n";
}

std::string to_json(const MCStatistic& st)
{
    ojson j;
    j["mean"] = st.mean;
    j["stderr"] = st.std_error;
    j["paths"] = st.paths;
    return j.dump(2) + "\n";
}

void write_terms_csv(std::ostream& out, const CarlemanReport& rep)
{
    out << "term,value,stderr\n";
    for (int i = 0; i < 7; ++i)
        out << 'L' << i + 1 << ',' << format_real(rep.lhs[i].mean) << ','
            << format_real(rep.lhs[i].std_error) << '\n';
    for (int i = 0; i < 4; ++i)
        out << 'R' << i + 1 << ',' << format_real(rep.rhs[i].mean) << ','
            << format_real(rep.rhs[i].std_error) << '\n';
}

void write_terms_csv(std::ostream& out, const StabilityReport& rep)
{
    static const char* lnames[] = {"G", "Y0", "Y1"};
    static const char* rnames[] = {"FLUX", "XT", "DTDX"};
    out << "term,value,stderr\n";
    for (int i = 0; i < 3; ++i)
        out << lnames[i] << ',' << format_real(rep.lhs[i].mean) << ','
            << format_real(rep.lhs[i].std_error) << '\n';
    for (int i = 0; i < 3; ++i)
        out << rnames[i] << ',' << format_real(rep.rhs[i].mean) << ','
            << format_real(rep.rhs[i].std_error) << '\n';
    out << "XT_squared," << format_real(rep.xt_squared.mean) << ','
        << format_real(rep.xt_squared.std_error) << '\n';
}

}  // namespace stochwave
