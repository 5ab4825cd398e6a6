#include "stochwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "stochwave/csv.hpp"
#include "stochwave/discrete_ops.hpp"
#include "stochwave/errors.hpp"

namespace stochwave {

const char* to_string(SourceMode mode)
{
    return mode == SourceMode::SpaceTime ? "space_time" : "space_only";
}

double ProblemData::g_at(int j, int n) const
{
    return g.has_time() ? g(node(j), node(n)) : g(node(j));
}

double ProblemData::f_at(int j, int n) const
{
    return f ? (*f)(node(j), node(n)) : 0.0;
}

namespace {

void require_grid(const GridFunction& u, const Grid& grid, const char* what)
{
    if (!(u.grid() == grid))
        throw MeshMismatch(std::string(what) + " lives on a different grid");
}

void require_closure_slice(const GridFunction& u, const Grid& grid, const char* what)
{
    require_grid(u, grid, what);
    if (u.has_time() || !u.space_range().contains(grid.space(SpaceMesh::Closure)))
        throw MeshMismatch(std::string(what) + " must be a slice on Mbar");
}

void require_finite(const GridFunction& u, const char* what)
{
    for (double v : u.values())
        if (!std::isfinite(v))
            throw InvalidArgument(std::string(what) + " has a non-finite value");
}

}  // namespace

void ProblemData::validate(const Grid& grid) const
{
    require_closure_slice(y0, grid, "y0");
    require_closure_slice(y1, grid, "y1");
    require_finite(y0, "y0");
    require_finite(y1, "y1");
    if (y0(node(0)) != 0.0 || y0(node(grid.M() + 1)) != 0.0)
        throw InvalidArgument("y0 must vanish at x = 0 and x = 1");

    require_grid(g, grid, "g");
    require_finite(g, "g");
    if (!g.space_range().contains(grid.space(SpaceMesh::Primal)))
        throw MeshMismatch("g must cover the primal space mesh");
    if (g.has_time() && !g.time_range()->contains(grid.time(TimeMesh::Primal)))
        throw MeshMismatch("g must cover the primal time mesh");
    if (f) {
        require_grid(*f, grid, "f");
        require_finite(*f, "f");
        if (!f->has_time() || !f->space_range().contains(grid.space(SpaceMesh::Primal))
            || !f->time_range()->contains(grid.time(TimeMesh::Primal)))
            throw MeshMismatch("f must be a field on M x N");
    }
}

ProblemData ProblemData::zero(const Grid& grid, SourceMode mode)
{
    const IndexRange closure = grid.space(SpaceMesh::Closure);
    const IndexRange primal = grid.space(SpaceMesh::Primal);
    std::optional<IndexRange> gt;
    if (mode == SourceMode::SpaceTime)
        gt = grid.time(TimeMesh::Primal);
    return {GridFunction::zeros(grid, closure), GridFunction::zeros(grid, closure),
            GridFunction::zeros(grid, primal, gt), std::nullopt};
}

ProblemData difference(const ProblemData& a, const ProblemData& b)
{
    if (a.g_mode() != b.g_mode())
        throw InvalidArgument("difference: g modes differ");
    ProblemData out{a.y0 - b.y0, a.y1 - b.y1, a.g - b.g, std::nullopt};
    if (a.f && b.f)
        out.f = *a.f - *b.f;
    else if (a.f)
        out.f = *a.f;
    else if (b.f)
        out.f = *b.f * -1.0;
    return out;
}

ProblemData scaled(const ProblemData& a, double alpha)
{
    ProblemData out{a.y0 * alpha, a.y1 * alpha, a.g * alpha, std::nullopt};
    if (a.f)
        out.f = *a.f * alpha;
    return out;
}

SchemeCoefficients SchemeCoefficients::zero(const Grid& grid)
{
    return constant(grid, 0.0, 0.0, 0.0, 0.0);
}

SchemeCoefficients SchemeCoefficients::constant(const Grid& grid, double a, double b,
                                                double c, double d)
{
    const IndexRange xs = grid.space(SpaceMesh::Closure);
    const IndexRange ts = grid.time(TimeMesh::PrimalClosure);
    return {GridFunction::constant(grid, xs, ts, a), GridFunction::constant(grid, xs, ts, b),
            GridFunction::constant(grid, xs, ts, c), GridFunction::constant(grid, xs, ts, d)};
}

void SchemeCoefficients::validate(const Grid& grid) const
{
    const IndexRange xs = grid.space(SpaceMesh::Closure);
    const IndexRange ts = grid.time(TimeMesh::PrimalClosure);
    const std::pair<const GridFunction*, const char*> all[] = {
        {&a, "a"}, {&b, "b"}, {&c, "c"}, {&d, "d"}};
    for (auto [u, name] : all) {
        require_grid(*u, grid, name);
        if (!u->has_time() || !u->space_range().contains(xs)
            || !u->time_range()->contains(ts))
            throw MeshMismatch(std::string("coefficient ") + name
                               + " must cover Mbar x {t^0..t^N}");
        require_finite(*u, name);
    }
}

bool operator==(const SchemeCoefficients& x, const SchemeCoefficients& y)
{
    auto same = [](const GridFunction& p, const GridFunction& q) {
        return p.grid() == q.grid() && p.space_range() == q.space_range()
               && p.time_range() == q.time_range()
               && std::equal(p.values().begin(), p.values().end(), q.values().begin(),
                             q.values().end());
    };
    return same(x.a, y.a) && same(x.b, y.b) && same(x.c, y.c) && same(x.d, y.d);
}

namespace {

// Dense copy of a coefficient on j = 0..M+1, n = 0..N, time-major.
std::vector<double> dense(const GridFunction& u, const Grid& g)
{
    const int M = g.M(), N = g.N();
    std::vector<double> out(static_cast<std::size_t>(N + 1) * (M + 2));
    const int ix0 = u.space_range().offset(node(0));
    const int it0 = u.time_range()->offset(node(0));
    for (int n = 0; n <= N; ++n)
        for (int j = 0; j <= M + 1; ++j)
            out[static_cast<std::size_t>(n) * (M + 2) + j] = u.raw(ix0 + j, it0 + n);
    return out;
}

}  // namespace

Trajectory solve(const ProblemData& data, const SchemeCoefficients& coeffs,
                 const BrownianPath& path, const Grid& grid)
{
    data.validate(grid);
    coeffs.validate(grid);
    const int M = grid.M(), N = grid.N();
    const double dx = grid.dx(), dt = grid.dt();
    if (path.N() < N)
        throw InvalidArgument("solve: Brownian path has " + std::to_string(path.N() + 1)
                              + " increments, need " + std::to_string(N + 1));
    if (path.dt != dt)
        throw InvalidArgument("solve: Brownian path dt differs from the grid");

    const std::vector<double> a = dense(coeffs.a, grid);
    const std::vector<double> b = dense(coeffs.b, grid);
    const std::vector<double> c = dense(coeffs.c, grid);
    const std::vector<double> d = dense(coeffs.d, grid);
    const std::size_t W = M + 2;

    for (int n = 1; n <= N; ++n)
        for (int j = 1; j <= M; ++j)
            if (std::abs(1.0 - c[n * W + j] * dt) <= 1e-12)
                throw SingularUpdate(j, n);

    // time-major work buffer, slices 0..N+1
    std::vector<double> y(static_cast<std::size_t>(N + 2) * W, 0.0);
    for (int j = 0; j <= M + 1; ++j) {
        y[j] = data.y0(node(j));
        if (j >= 1 && j <= M)
            y[W + j] = data.y0(node(j)) + dt * data.y1(node(j));
    }

    const double dt2 = dt * dt;
    const double inv_dx2 = 1.0 / (dx * dx);
    const double inv_2dx = 1.0 / (2.0 * dx);
    for (int n = 1; n <= N; ++n) {
        const double* prev = &y[(n - 1) * W];
        const double* cur = &y[n * W];
        double* next = &y[(n + 1) * W];
        const double dB = path.increments[n];
        for (int j = 1; j <= M; ++j) {
            const std::size_t k = n * W + j;
            const double yc = cur[j];
            const double lap = (cur[j + 1] - 2.0 * yc + cur[j - 1]) * inv_dx2;
            const double grad = (cur[j + 1] - cur[j - 1]) * inv_2dx;
            const double rhs = 2.0 * yc - prev[j]
                               + dt2 * (lap + a[k] * yc + b[k] * grad + data.f_at(j, n))
                               - c[k] * dt * yc
                               + dt * (d[k] * yc + data.g_at(j, n)) * dB;
            const double v = rhs / (1.0 - c[k] * dt);
            if (!std::isfinite(v))
                throw BlowUp(j, n + 1);
            next[j] = v;
        }
    }

    std::vector<double> values(y.size());
    for (int j = 0; j <= M + 1; ++j)
        for (int n = 0; n <= N + 1; ++n)
            values[static_cast<std::size_t>(j) * (N + 2) + n] = y[n * W + j];
    Trajectory traj{GridFunction(grid, grid.space(SpaceMesh::Closure),
                                 grid.time(TimeMesh::Closure), std::move(values)),
                    path, dt > dx};
    return traj;
}

Ensemble run_ensemble(const ProblemData& data, const SchemeCoefficients& coeffs,
                      const Grid& grid, int paths, std::uint64_t master_seed,
                      unsigned threads)
{
    if (paths < 1)
        throw InvalidArgument("run_ensemble: paths must be >= 1, got " + std::to_string(paths));
    data.validate(grid);
    coeffs.validate(grid);

    Ensemble ens{grid, master_seed, {}, {}, std::make_shared<const SchemeCoefficients>(coeffs)};
    ens.seeds.resize(paths);
    for (int k = 0; k < paths; ++k)
        ens.seeds[k] = derive_path_seed(master_seed, static_cast<std::uint64_t>(k));

    std::vector<std::optional<Trajectory>> slots(paths);
    std::vector<std::exception_ptr> errors(paths);
    auto work = [&](int k) {
        try {
            slots[k] = solve(data, coeffs, sample_brownian(grid.N(), grid.dt(), ens.seeds[k]),
                             grid);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(paths));
    if (threads <= 1) {
        for (int k = 0; k < paths && !errors[k]; ++k)
            work(k);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int k = static_cast<int>(w); k < paths; k += static_cast<int>(threads))
                    work(k);
            });
        for (auto& t : pool)
            t.join();
    }

    for (int k = 0; k < paths; ++k) {
        if (!errors[k])
            continue;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const BlowUp& e) {
            throw BlowUp(e.j(), e.n(), k);
        }
    }

    ens.trajectories.reserve(paths);
    for (auto& s : slots)
        ens.trajectories.push_back(std::move(*s));
    return ens;
}

Observation observe(const GridFunction& y)
{
    const Grid& g = y.grid();
    if (!y.has_time() || !y.time_range()->contains(IndexRange::between(node(0), node(g.N() + 1))))
        throw IncompleteTrajectory("observe: trajectory must hold slices 0..N+1");
    if (!y.space_range().contains(g.space(SpaceMesh::Closure)))
        throw MeshMismatch("observe: trajectory must cover Mbar");
    const GridFunction flux =
        apply(Op::Dx, y, IndexRange{mid(0), 1}, g.time(TimeMesh::Primal));
    GridFunction terminal_y = y.slice(node(g.N()));
    const double dt = g.dt();
    GridFunction terminal_v =
        (y.slice(node(g.N() + 1)) - terminal_y).map([dt](double v) { return v / dt; });
    return {flux, std::move(terminal_y), std::move(terminal_v)};
}

Observation observe(const Trajectory& traj, const Grid& grid)
{
    if (!(traj.y.grid() == grid))
        throw MeshMismatch("observe: trajectory lives on a different grid");
    return observe(traj.y);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    const GridFunction& y = traj.y;
    const Grid& g = y.grid();
    out << "j,x,n,t,y\n";
    const IndexRange xs = y.space_range();
    const IndexRange ts = *y.time_range();
    for (int it = 0; it < ts.count; ++it)
        for (int ix = 0; ix < xs.count; ++ix)
            out << xs.at(ix) / 2 << ',' << format_real(g.x(xs.at(ix))) << ','
                << ts.at(it) / 2 << ',' << format_real(g.t(ts.at(it))) << ','
                << format_real(y.raw(ix, it)) << '\n';
}

void write_flux_csv(std::ostream& out, const Observation& obs)
{
    const Grid& g = obs.flux.grid();
    const IndexRange ts = *obs.flux.time_range();
    out << "n,t,flux\n";
    for (int it = 0; it < ts.count; ++it)
        out << ts.at(it) / 2 << ',' << format_real(g.t(ts.at(it))) << ','
            << format_real(obs.flux.raw(0, it)) << '\n';
}

void write_terminal_csv(std::ostream& out, const Observation& obs)
{
    const Grid& g = obs.terminal_y.grid();
    const IndexRange xs = obs.terminal_y.space_range();
    out << "j,x,terminal_y,terminal_v\n";
    for (int ix = 0; ix < xs.count; ++ix) {
        const int h = xs.at(ix);
        out << h / 2 << ',' << format_real(g.x(h)) << ',' << format_real(obs.terminal_y.raw(ix))
            << ',' << format_real(obs.terminal_v(h)) << '\n';
    }
}

}  // namespace stochwave
