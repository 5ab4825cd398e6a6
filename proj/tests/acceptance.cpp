// Acceptance runs. One line per criterion:
//
//   [PASS|FAIL] <n> <name>: <measured> (limit ...) <seconds>s / <budget>s
//
// Tolerances, seeds and time budgets are fixed below. Exit status is 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "stochwave/estimator.hpp"
#include "stochwave/fields.hpp"
#include "stochwave/identities.hpp"
#include "stochwave/weights.hpp"

using namespace stochwave;

namespace {

constexpr unsigned kThreads = 0;  // hardware concurrency

struct Outcome {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------- 1
Outcome identities()
{
    constexpr double tol = 1e-12;
    double worst = 0.0;
    std::size_t evaluated = 0;
    std::uint64_t seed = 1;
    for (int M : {4, 8, 16, 32})
        for (int N : {4, 8, 16, 32}) {
            const Grid g(M, N, 1.0);
            const IndexRange xs = g.space(SpaceMesh::Closure);
            const IndexRange ts = g.time(TimeMesh::Closure);
            for (int k = 0; k < 100; ++k, seed += 2) {
                const auto u = random_nodal(g, xs, ts, seed, 1.0);
                const auto v = random_nodal(g, xs, ts, seed + 1, 1.0);
                const ResidualTable t = identity_residuals(u, v, g);
                worst = std::max(worst, t.max_residual());
                evaluated += t.rows.size() - t.skipped();
            }
        }
    return {worst <= tol, fmt("max residual %.3e over %zu evaluations (limit %.0e)", worst,
                              evaluated, tol)};
}

// ---------------------------------------------------------------- 2
Outcome weight_orders()
{
    WeightParams p;
    p.s = 1.0;
    p.lambda = 1.0;
    p.mconst = 0.0;
    p.T = 1.0;
    std::vector<Grid> levels;
    for (int M : {15, 31, 63, 127})
        levels.emplace_back(M, M + 1, 1.0);  // dt = dx
    bool ok = true;
    std::string d;
    for (AsymptoticExpr e : all_asymptotic_exprs()) {
        const bool mixed = e == AsymptoticExpr::AtDtRAxDxRho || e == AsymptoticExpr::AxDxRDtRho;
        const double need = mixed ? 0.8 : 1.8;
        const OrderEstimate est = estimate_order(e, p, levels);
        ok = ok && est.order >= need;
        d += fmt("%s%s %.3f (>= %.1f)", d.empty() ? "" : ", ",
                 std::string(to_string(e)).c_str(), est.order, need);
    }
    return {ok, d};
}

// ---------------------------------------------------------------- 3
Outcome wave_convergence()
{
    constexpr double need = 1.8;
    const double pi = std::numbers::pi;
    std::vector<double> dx, at_one, worst;
    for (int M : {31, 63, 127}) {
        const Grid g(M, M + 1, 1.0);
        ProblemData d = ProblemData::zero(g);
        d.y0 = sine_slice(g, SpaceMesh::Closure, 1, 1.0);
        const Trajectory tr = solve(d, SchemeCoefficients::zero(g),
                                    sample_brownian(g.N(), g.dt(), 0), g);
        double e1 = 0.0, ew = 0.0;
        for (int n = 0; n <= g.N(); ++n)
            for (int j = 0; j <= g.M() + 1; ++j) {
                const double e = std::abs(tr.y(node(j), node(n))
                                          - std::cos(pi * g.t(node(n))) * std::sin(pi * g.x(node(j))));
                ew = std::max(ew, e);
                if (n == g.N())
                    e1 = std::max(e1, e);
            }
        dx.push_back(g.dx());
        at_one.push_back(e1);
        worst.push_back(ew);
    }
    // At t = 1 with dt = dx the errors sit at rounding level, so no order can
    // be observed there. Report it as a failure, with the rate over all of
    // [0, 1] alongside.
    const bool measurable = at_one.front() > 1e3 * 2.2e-16;
    double order = 0.0;
    if (measurable)
        order = std::log2(at_one[0] / at_one[2]) / std::log2(dx[0] / dx[2]);
    const double sup_order = std::log2(worst[0] / worst[2]) / std::log2(dx[0] / dx[2]);
    const bool ok = measurable && order >= need;
    std::string d = fmt("error at t=1: %.2e %.2e %.2e; ", at_one[0], at_one[1], at_one[2]);
    d += measurable ? fmt("order %.3f (>= %.1f)", order, need)
                    : std::string("rounding level, order not observable");
    d += fmt("; order of max error over t in [0,1]: %.3f", sup_order);
    return {ok, d};
}

// ---------------------------------------------------------------- 4
Outcome martingale()
{
    const Grid g(15, 225, 225.0 / 256.0);
    ProblemData d = ProblemData::zero(g);
    d.y0 = sine_slice(g, SpaceMesh::Closure, 1, 1.0);
    d.g = sine_field(g, 1, 1.0);
    const auto coeffs = SchemeCoefficients::constant(g, 0.0, 0.0, 0.0, 0.5);
    const Ensemble ens = run_ensemble(d, coeffs, g, 10000, 4242, kThreads);
    const MCStatistic m = martingale_check(ens, g);
    const bool ok = std::abs(m.mean) <= 4.0 * m.std_error;
    return {ok, fmt("mean %.3e, stderr %.3e, |mean|/stderr %.2f (limit 4)", m.mean, m.std_error,
                    std::abs(m.mean) / m.std_error)};
}

// ---------------------------------------------------------------- 5
Outcome mean_consistency()
{
    const Grid g(15, 225, 225.0 / 256.0);
    ProblemData d = ProblemData::zero(g);
    d.y0 = sine_slice(g, SpaceMesh::Closure, 1, 1.0);
    d.y1 = sine_slice(g, SpaceMesh::Closure, 2, 0.5);
    d.g = sine_field(g, 1, 1.0);
    const auto coeffs = SchemeCoefficients::constant(g, 0.3, 0.2, 0.1, 0.0);
    const Ensemble ens = run_ensemble(d, coeffs, g, 10000, 777, kThreads);
    const NodeMoments mom = ensemble_moments(ens);

    BrownianPath quiet = sample_brownian(g.N(), g.dt(), 0);
    std::fill(quiet.increments.begin(), quiet.increments.end(), 0.0);
    const Trajectory det = solve(d, coeffs, quiet, g);

    double worst = 0.0;
    std::size_t nodes = 0;
    bool ok = true;
    for (int j = 0; j <= g.M() + 1; ++j)
        for (int n = 0; n <= g.N() + 1; ++n) {
            const double diff = std::abs(mom.mean(node(j), node(n)) - det.y(node(j), node(n)));
            const double se = mom.std_error(node(j), node(n));
            ++nodes;
            if (se == 0.0) {
                // noise has not reached this node yet
                ok = ok && diff <= 1e-12;
                continue;
            }
            worst = std::max(worst, diff / se);
        }
    ok = ok && worst <= 4.0;
    return {ok, fmt("max |mean - deterministic|/stderr %.2f over %zu nodes (limit 4)", worst, nodes)};
}

// ---------------------------------------------------------------- 6
oracle::Field field_of(const GridFunction& y, int M, int N)
{
    oracle::Field out(M + 2, std::vector<double>(N + 2, 0.0));
    for (int j = 0; j <= M + 1; ++j)
        for (int n = 0; n <= N + 1; ++n)
            out[j][n] = y(node(j), node(n));
    return out;
}

oracle::Field nodal(const Grid& g, const std::function<double(int, int)>& at)
{
    oracle::Field out(g.M() + 2, std::vector<double>(g.N() + 2, 0.0));
    for (int j = 1; j <= g.M(); ++j)
        for (int n = 1; n <= g.N(); ++n)
            out[j][n] = at(j, n);
    return out;
}

std::vector<double> slice_of(const GridFunction& u, int M)
{
    std::vector<double> out(M + 2);
    for (int j = 0; j <= M + 1; ++j)
        out[j] = u(node(j));
    return out;
}

double rel_err(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

ProblemData manufactured(const Grid& g, std::uint64_t seed)
{
    ProblemData d = ProblemData::zero(g);
    d.y0 = random_series_slice(g, SpaceMesh::Closure, seed, 1.0);
    d.y1 = random_series_slice(g, SpaceMesh::Closure, seed + 1, 1.0);
    d.g = random_series_field(g, seed + 2, 1.0);
    d.f = random_series_field(g, seed + 3, 1.0);
    return d;
}

Outcome brute_force()
{
    constexpr double tol = 1e-12;
    const int M = 4, N = 4;
    const Grid g(M, N, 1.0);
    const auto coeffs = SchemeCoefficients::constant(g, 0.2, 0.1, 0.3, 0.5);
    const ProblemData a = manufactured(g, 11);
    const ProblemData b = manufactured(g, 31);
    const Ensemble ea = run_ensemble(a, coeffs, g, 1, 3);
    const Ensemble eb = run_ensemble(b, coeffs, g, 1, 3);

    WeightParams w;
    w.s = 1.5;
    w.lambda = 0.8;
    w.T = 1.0;
    const double kappa = 0.3;
    const CarlemanReport car = carleman_terms(ea, w, a, g, kappa);
    const auto cref = oracle::carleman(
        {M, N, 1.0}, {w.s, w.lambda, w.beta, w.xstar, w.mconst, w.T}, kappa,
        field_of(ea.trajectories[0].y, M, N), slice_of(a.y0, M), slice_of(a.y1, M),
        nodal(g, [&](int j, int n) { return a.g_at(j, n); }),
        nodal(g, [&](int j, int n) { return a.f_at(j, n); }));

    const StabilityReport st = stability_terms(ea, eb, a, b, g);
    const ProblemData diff = difference(a, b);
    const auto sref = oracle::stability(
        {M, N, 1.0}, field_of(ea.trajectories[0].y - eb.trajectories[0].y, M, N),
        slice_of(diff.y0, M), slice_of(diff.y1, M),
        nodal(g, [&](int j, int n) { return diff.g_at(j, n); }), false);

    double worst = 0.0;
    for (int i = 0; i < 7; ++i)
        worst = std::max(worst, rel_err(car.lhs[i].mean, cref[i]));
    for (int i = 0; i < 4; ++i)
        worst = std::max(worst, rel_err(car.rhs[i].mean, cref[7 + i]));
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, rel_err(st.lhs[i].mean, sref[i]));
        worst = std::max(worst, rel_err(st.rhs[i].mean, sref[3 + i]));
    }
    return {worst <= tol, fmt("max relative difference %.3e over 17 terms (limit %.0e)", worst, tol)};
}

// ---------------------------------------------------------------- 7
Outcome carleman_ratio()
{
    const Grid g(15, 1792, 3.5);  // dx = 1/16, dt = dx^2/2
    ProblemData d = ProblemData::zero(g);
    d.y0 = sine_slice(g, SpaceMesh::Closure, 1, 1.0);
    d.y1 = sine_slice(g, SpaceMesh::Closure, 2, 1.0);
    d.g = sine_field(g, 1, 1.0);
    d.f = sine_field(g, 1, 1.0);
    const Ensemble ens = run_ensemble(d, SchemeCoefficients::zero(g), g, 200, 2024, kThreads);

    WeightParams w;
    w.xstar = 1.5;
    w.beta = 0.5;
    w.T = 3.5;
    w.mconst = 10.0;
    w.lambda = 0.05;
    w.epsilon = 0.5;
    std::vector<double> ratios;
    bool ok = true;
    for (double s : {2.0, 4.0, 8.0}) {
        w.s = s;
        const CarlemanReport rep = carleman_terms(ens, w, d, g, 0.0);
        ok = ok && !rep.inadmissible && rep.ratio && std::isfinite(*rep.ratio);
        ratios.push_back(rep.ratio ? *rep.ratio : NAN);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    const double spread = *hi / *lo;
    ok = ok && spread < 10.0;
    return {ok, fmt("ratios %.4g %.4g %.4g at s = 2 4 8, spread %.2f (limit 10)", ratios[0],
                    ratios[1], ratios[2], spread)};
}

// ---------------------------------------------------------------- 8
double max_stability_ratio(int M, int pairs, int paths)
{
    const Grid g(M, 7 * (M + 1) * (M + 1), 3.5);  // dt = dx^2/2 at T = 3.5
    const auto coeffs = SchemeCoefficients::constant(g, 0.1, 0.05, 0.1, 0.2);
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        auto data = [&](std::uint64_t seed) {
            ProblemData d = ProblemData::zero(g, SourceMode::SpaceOnly);
            d.y0 = random_series_slice(g, SpaceMesh::Closure, seed, 1.0);
            d.y1 = random_series_slice(g, SpaceMesh::Closure, seed + 1, 1.0);
            d.g = random_series_slice(g, SpaceMesh::Primal, seed + 2, 1.0);
            return d;
        };
        const ProblemData a = data(1000 + 10 * p);
        const ProblemData b = data(5000 + 10 * p);
        const std::uint64_t master = 900 + p;
        const Ensemble ea = run_ensemble(a, coeffs, g, paths, master, kThreads);
        const Ensemble eb = run_ensemble(b, coeffs, g, paths, master, kThreads);
        const StabilityReport rep = stability_terms(ea, eb, a, b, g);
        if (!rep.ratio || !std::isfinite(*rep.ratio))
            return NAN;
        worst = std::max(worst, *rep.ratio);
    }
    return worst;
}

Outcome stability_ratio()
{
    const double coarse = max_stability_ratio(15, 50, 20);
    const double fine = max_stability_ratio(31, 50, 20);
    const double change = std::max(coarse / fine, fine / coarse);
    const bool ok = std::isfinite(coarse) && std::isfinite(fine) && change < 3.0;
    return {ok, fmt("max ratio %.4g (M=15), %.4g (M=31), change %.3f (limit 3)", coarse, fine,
                    change)};
}

// ---------------------------------------------------------------- 9
Outcome difference_system()
{
    constexpr double tol = 1e-12;
    const Grid g(15, 225, 225.0 / 256.0);
    const auto coeffs = SchemeCoefficients::constant(g, 0.3, -0.2, 0.1, 0.5);
    const ProblemData a = manufactured(g, 50);
    const ProblemData b = manufactured(g, 70);
    const Ensemble ea = run_ensemble(a, coeffs, g, 20, 8, kThreads);
    const Ensemble eb = run_ensemble(b, coeffs, g, 20, 8, kThreads);
    require_coupled(ea, eb);
    double worst = 0.0;
    for (std::size_t k = 0; k < ea.size(); ++k)
        worst = std::max(worst, difference_system_residual(ea.trajectories[k], eb.trajectories[k],
                                                           a, b, coeffs));
    return {worst <= tol, fmt("max relative residual %.3e over %zu paths (limit %.0e)", worst,
                              ea.size(), tol)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
};

}  // namespace

int main()
{
    const std::vector<Criterion> all{
        {1, "identity suite", 10.0, identities},
        {2, "weight asymptotics", 5.0, weight_orders},
        {3, "deterministic wave convergence", 10.0, wave_convergence},
        {4, "martingale orthogonality", 60.0, martingale},
        {5, "mean consistency", 60.0, mean_consistency},
        {6, "brute-force equivalence", 1.0, brute_force},
        {7, "Carleman ratio over s", 300.0, carleman_ratio},
        {8, "Lipschitz stability ratio", 600.0, stability_ratio},
        {9, "difference-system residual", 5.0, difference_system},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = out.ok && secs < c.budget_s;
        failed += !ok;
        std::printf("[%s] %d %s: %s; %.2fs / %.0fs\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
