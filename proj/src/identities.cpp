#include "stochwave/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "stochwave/discrete_ops.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/meshkit.hpp"

namespace stochwave {

namespace {

struct Formula {
    const char* id;
    const char* text;
};

constexpr Formula kFormulas[] = {
    {"2.3", "Ax(uv) = Ax u Ax v + dx^2/4 Dx u Dx v"},
    {"2.4", "Dx(uv) = Dx u Ax v + Ax u Dx v"},
    {"2.6", "u = Ax^2 u - dx^2/4 Dx^2 u"},
    {"2.7", "int_M u Ax v = int_M* Ax u v - dx/2 int_dM u tr(v)"},
    {"2.8", "int_M u Dx v = -int_M* Dx u v + int_dM u tr(v) n_x"},
    {"2.9a", "Dt(fg) = Dt f t-(g) + t+(f) Dt g"},
    {"2.9b", "Dt(fg) = Dt f t+(g) + t-(f) Dt g"},
    {"2.10a", "2 t+(f) Dt f = Dt(f^2) + dt (Dt f)^2"},
    {"2.10b", "2 t-(f) Dt f = Dt(f^2) - dt (Dt f)^2"},
    {"2.11a", "int_N f t-(g) = int_N* t+(f) g"},
    {"2.11b", "int_N f t+(g) = int_N* t-(f) g + dt int_dN f t+(g) n_t"},
    {"2.12", "int_N f Dt g = -int_N* g Dt f + int_dN f t+(g) n_t"},
    {"2.13", "int_N t-(f) Dt g = -int_N Dt f t+(g) + int_dN t+(fg) n_t"},
    {"2.14", "sint_N* t+(f) Dt g = -sint_N* t-(g) Dt f + sint_dN f g n_t"},
};

// Running max|L - R| and the scale max(1, |L|, |R|).
struct Residual {
    double diff = 0.0;
    double scale = 1.0;

    void add(double lhs, double rhs)
    {
        diff = std::max(diff, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
    void add(const GridFunction& lhs, const GridFunction& rhs)
    {
        auto l = lhs.values();
        auto r = rhs.values();
        for (std::size_t i = 0; i < l.size(); ++i)
            add(l[i], r[i]);
    }
    double value() const { return diff / scale; }
};

// Time series on Nbar that is zero except at t = 0 and t = T, used to feed
// boundary integrals over dN through `integrate`.
GridFunction boundary_series(const Grid& g, int hx, double at_zero, double at_T)
{
    const IndexRange nbar = g.time(TimeMesh::PrimalClosure);
    std::vector<double> v(nbar.count, 0.0);
    v.front() = at_zero;
    v.back() = at_T;
    return GridFunction(g, IndexRange{hx, 1}, nbar, std::move(v));
}

// Same for dM on a slice over Mbar.
GridFunction boundary_slice(const Grid& g, double at_zero, double at_one)
{
    const IndexRange mbar = g.space(SpaceMesh::Closure);
    std::vector<double> v(mbar.count, 0.0);
    v.front() = at_zero;
    v.back() = at_one;
    return GridFunction(g, mbar, std::nullopt, std::move(v));
}

class Evaluator {
public:
    Evaluator(const GridFunction& u, const GridFunction& v, const Grid& g)
        : g_(g)
    {
        const IndexRange sc = g.space(SpaceMesh::Closure);
        const IndexRange tc = g.time(TimeMesh::Closure);
        space_ok_ = u.space_range().contains(sc) && v.space_range().contains(sc)
                    && u.has_time() == v.has_time();
        time_ok_ = space_ok_ && u.has_time() && u.time_range()->contains(tc)
                   && v.time_range()->contains(tc);
        if (space_ok_) {
            std::optional<IndexRange> t;
            if (u.has_time()) {
                // Common time run of both inputs.
                const int lo = std::max(u.time_range()->first, v.time_range()->first);
                const int hi = std::min(u.time_range()->last(), v.time_range()->last());
                if ((lo & 1) != (u.time_range()->first & 1)
                    || (lo & 1) != (v.time_range()->first & 1) || hi < lo) {
                    space_ok_ = time_ok_ = false;
                } else {
                    t = IndexRange::between(lo, hi);
                }
            }
            if (space_ok_) {
                uc_.emplace(u.restrict_to(sc, t));
                vc_.emplace(v.restrict_to(sc, t));
            }
        }
        if (time_ok_) {
            *uc_ = uc_->restrict_time(tc);
            *vc_ = vc_->restrict_time(tc);
        }
    }

    std::optional<double> eval(const std::string& id, std::string& why) const
    {
        const bool space_id = id == "2.3" || id == "2.4" || id == "2.6" || id == "2.7"
                              || id == "2.8";
        if (space_id && !space_ok_) {
            why = "u, v must cover the space closure";
            return std::nullopt;
        }
        if (!space_id && !time_ok_) {
            why = "u, v must cover the time closure t^0..t^{N+1}";
            return std::nullopt;
        }
        if (id == "2.3") return product_average();
        if (id == "2.4") return product_difference();
        if (id == "2.6") return reconstruction();
        if (id == "2.7") return sbp_average();
        if (id == "2.8") return sbp_difference();
        if (id == "2.9a") return time_product(false);
        if (id == "2.9b") return time_product(true);
        if (id == "2.10a") return time_square(true);
        if (id == "2.10b") return time_square(false);
        if (id == "2.11a") return time_shift_backward();
        if (id == "2.11b") return time_shift_forward();
        if (id == "2.12") return time_sbp();
        if (id == "2.13") return time_sbp_dual();
        if (id == "2.14") return time_sbp_slashed();
        why = "unknown identity";
        return std::nullopt;
    }

private:
    std::optional<IndexRange> trange() const { return uc_->time_range(); }
    IndexRange mstar() const { return g_.space(SpaceMesh::Dual); }
    IndexRange mprimal() const { return g_.space(SpaceMesh::Primal); }
    // Dual times t^{n+1/2}, n = 0..N, reachable from the time closure.
    IndexRange tdual() const { return IndexRange::between(mid(0), mid(g_.N())); }

    GridFunction sop(Op op, const GridFunction& w, IndexRange s) const
    {
        return apply(op, w, s, w.time_range());
    }
    GridFunction top(Op op, const GridFunction& w, IndexRange t) const
    {
        return apply(op, w, w.space_range(), t);
    }

    double product_average() const
    {
        const double q = 0.25 * g_.dx() * g_.dx();
        const GridFunction lhs = sop(Op::Ax, *uc_ * *vc_, mstar());
        const GridFunction rhs = sop(Op::Ax, *uc_, mstar()) * sop(Op::Ax, *vc_, mstar())
                                 + q * (sop(Op::Dx, *uc_, mstar()) * sop(Op::Dx, *vc_, mstar()));
        Residual r;
        r.add(lhs, rhs);
        return r.value();
    }

    double product_difference() const
    {
        const GridFunction lhs = sop(Op::Dx, *uc_ * *vc_, mstar());
        const GridFunction rhs = sop(Op::Dx, *uc_, mstar()) * sop(Op::Ax, *vc_, mstar())
                                 + sop(Op::Ax, *uc_, mstar()) * sop(Op::Dx, *vc_, mstar());
        Residual r;
        r.add(lhs, rhs);
        return r.value();
    }

    double reconstruction() const
    {
        const double q = 0.25 * g_.dx() * g_.dx();
        Residual r;
        for (const GridFunction* w : {&*uc_, &*vc_}) {
            const GridFunction lhs = w->restrict_space(mprimal());
            const GridFunction rhs = sop(Op::Ax, sop(Op::Ax, *w, mstar()), mprimal())
                                     - q * sop(Op::Dx2, *w, mprimal());
            r.add(lhs, rhs);
        }
        return r.value();
    }

    template <class Fn>
    void for_each_slice(Fn&& fn) const
    {
        if (!uc_->has_time()) {
            fn(*uc_, *vc_);
            return;
        }
        for (int k = 0; k < trange()->count; ++k) {
            const int ht = trange()->at(k);
            fn(uc_->slice(ht), vc_->slice(ht));
        }
    }

    double sbp_average() const
    {
        Residual r;
        for_each_slice([&](const GridFunction& u, const GridFunction& vfull) {
            const GridFunction v = apply(Op::Ax, vfull, mstar(), std::nullopt);
            const double lhs =
                integrate(u.restrict_space(mprimal()) * apply(Op::Ax, v, mprimal(), std::nullopt),
                          Region::M);
            const double left = u(node(0)) * trace(v, Side::Left)(mid(0));
            const double right = u(node(g_.M() + 1)) * trace(v, Side::Right)(mid(g_.M()));
            const double rhs =
                integrate(apply(Op::Ax, u, mstar(), std::nullopt) * v, Region::MStar)
                - 0.5 * g_.dx() * integrate(boundary_slice(g_, left, right), Region::BoundaryM);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    double sbp_difference() const
    {
        Residual r;
        for_each_slice([&](const GridFunction& u, const GridFunction& vfull) {
            const GridFunction v = apply(Op::Ax, vfull, mstar(), std::nullopt);
            const double lhs =
                integrate(u.restrict_space(mprimal()) * apply(Op::Dx, v, mprimal(), std::nullopt),
                          Region::M);
            const double left = u(node(0)) * trace(v, Side::Left)(mid(0))
                                * Grid::normal_x(Side::Left);
            const double right = u(node(g_.M() + 1)) * trace(v, Side::Right)(mid(g_.M()))
                                 * Grid::normal_x(Side::Right);
            const double rhs =
                -integrate(apply(Op::Dx, u, mstar(), std::nullopt) * v, Region::MStar)
                + integrate(boundary_slice(g_, left, right), Region::BoundaryM);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    double time_product(bool second_form) const
    {
        const IndexRange t = tdual();
        const GridFunction lhs = top(Op::Dt, *uc_ * *vc_, t);
        const Op fshift = second_form ? Op::TMinus : Op::TPlus;
        const Op gshift = second_form ? Op::TPlus : Op::TMinus;
        const GridFunction rhs = top(Op::Dt, *uc_, t) * top(gshift, *vc_, t)
                                 + top(fshift, *uc_, t) * top(Op::Dt, *vc_, t);
        Residual r;
        r.add(lhs, rhs);
        return r.value();
    }

    double time_square(bool forward) const
    {
        const IndexRange t = tdual();
        Residual r;
        for (const GridFunction* f : {&*uc_, &*vc_}) {
            const GridFunction dtf = top(Op::Dt, *f, t);
            const GridFunction lhs =
                2.0 * (top(forward ? Op::TPlus : Op::TMinus, *f, t) * dtf);
            const GridFunction sq = g_.dt() * dtf.squared();
            const GridFunction rhs =
                forward ? top(Op::Dt, f->squared(), t) + sq : top(Op::Dt, f->squared(), t) - sq;
            r.add(lhs, rhs);
        }
        return r.value();
    }

    template <class Fn>
    void for_each_column(Fn&& fn) const
    {
        const IndexRange sc = g_.space(SpaceMesh::Closure);
        for (int i = 0; i < sc.count; ++i) {
            const int hx = sc.at(i);
            fn(hx, uc_->column(hx), vc_->column(hx));
        }
    }

    IndexRange tn() const { return g_.time(TimeMesh::Primal); }
    IndexRange tnstar() const { return g_.time(TimeMesh::Dual); }
    IndexRange tnbar() const { return g_.time(TimeMesh::PrimalClosure); }

    double time_shift_backward() const
    {
        Residual r;
        for_each_column([&](int, const GridFunction& u, const GridFunction& v) {
            const GridFunction f = u.restrict_time(tnbar());
            const GridFunction gd = top(Op::At, v, tdual());
            const double lhs = integrate(f.restrict_time(tn()) * top(Op::TMinus, gd, tn()),
                                         Region::N);
            const double rhs = integrate(top(Op::TPlus, f, tnstar()) * gd.restrict_time(tnstar()),
                                         Region::NStar);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    double time_shift_forward() const
    {
        Residual r;
        const int N = g_.N();
        for_each_column([&](int hx, const GridFunction& u, const GridFunction& v) {
            const GridFunction f = u.restrict_time(tnbar());
            const GridFunction gd = top(Op::At, v, tdual());
            const double lhs = integrate(f.restrict_time(tn()) * top(Op::TPlus, gd, tn()),
                                         Region::N);
            const double at0 = f(hx, node(0)) * gd(hx, mid(0)) * Grid::normal_t(Side::Left);
            const double atT = f(hx, node(N)) * gd(hx, mid(N)) * Grid::normal_t(Side::Right);
            const double rhs =
                integrate(top(Op::TMinus, f, tnstar()) * gd.restrict_time(tnstar()),
                          Region::NStar)
                + g_.dt() * integrate(boundary_series(g_, hx, at0, atT), Region::BoundaryN);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    double time_sbp() const
    {
        Residual r;
        const int N = g_.N();
        for_each_column([&](int hx, const GridFunction& u, const GridFunction& v) {
            const GridFunction f = u.restrict_time(tnbar());
            const GridFunction gd = top(Op::At, v, tdual());
            const double lhs =
                integrate(f.restrict_time(tn()) * top(Op::Dt, gd, tn()), Region::N);
            const double at0 = f(hx, node(0)) * gd(hx, mid(0)) * Grid::normal_t(Side::Left);
            const double atT = f(hx, node(N)) * gd(hx, mid(N)) * Grid::normal_t(Side::Right);
            const double rhs =
                -integrate(gd.restrict_time(tnstar()) * top(Op::Dt, f, tnstar()), Region::NStar)
                + integrate(boundary_series(g_, hx, at0, atT), Region::BoundaryN);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    double time_sbp_dual() const
    {
        Residual r;
        const int N = g_.N();
        for_each_column([&](int hx, const GridFunction& u, const GridFunction& v) {
            const GridFunction fd = top(Op::At, u, tdual());
            const GridFunction gd = top(Op::At, v, tdual());
            const double lhs =
                integrate(top(Op::TMinus, fd, tn()) * top(Op::Dt, gd, tn()), Region::N);
            const GridFunction fg = fd * gd;
            const double at0 = fg(hx, mid(0)) * Grid::normal_t(Side::Left);
            const double atT = fg(hx, mid(N)) * Grid::normal_t(Side::Right);
            const double rhs =
                -integrate(top(Op::Dt, fd, tn()) * top(Op::TPlus, gd, tn()), Region::N)
                + integrate(boundary_series(g_, hx, at0, atT), Region::BoundaryN);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    double time_sbp_slashed() const
    {
        Residual r;
        const int N = g_.N();
        for_each_column([&](int hx, const GridFunction& u, const GridFunction& v) {
            const GridFunction f = u.restrict_time(tnbar());
            const GridFunction gf = v.restrict_time(tnbar());
            const double lhs = slashed_integral(
                top(Op::TPlus, f, tnstar()) * top(Op::Dt, gf, tnstar()), Region::NStar);
            const double at0 = f(hx, node(0)) * gf(hx, node(0)) * Grid::normal_t(Side::Left);
            const double atT = f(hx, node(N)) * gf(hx, node(N)) * Grid::normal_t(Side::Right);
            const double rhs =
                -slashed_integral(top(Op::TMinus, gf, tnstar()) * top(Op::Dt, f, tnstar()),
                                  Region::NStar)
                + slashed_integral(boundary_series(g_, hx, at0, atT), Region::BoundaryN);
            r.add(lhs, rhs);
        });
        return r.value();
    }

    const Grid& g_;
    bool space_ok_ = false;
    bool time_ok_ = false;
    std::optional<GridFunction> uc_;
    std::optional<GridFunction> vc_;
};

}  // namespace

const std::vector<std::string>& identity_ids()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& f : kFormulas)
            out.emplace_back(f.id);
        return out;
    }();
    return ids;
}

const IdentityResidual& ResidualTable::at(const std::string& id) const
{
    for (const auto& row : rows)
        if (row.id == id)
            return row;
    throw InvalidArgument("residual table: no identity '" + id + "'");
}

double ResidualTable::max_residual() const
{
    double m = 0.0;
    for (const auto& row : rows)
        if (row.residual)
            m = std::max(m, *row.residual);
    return m;
}

std::size_t ResidualTable::skipped() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.residual; }));
}

double slashed_integral(const GridFunction& u, Region region)
{
    if (region != Region::NStar && region != Region::BoundaryN)
        throw InvalidArgument("slashed integral is defined on N* and dN only");
    return integrate(u, region);
}

ResidualTable identity_residuals(const GridFunction& u, const GridFunction& v,
                                 const Grid& grid)
{
    if (grid.M() < 2 || grid.N() < 2)
        throw InvalidArgument("identity residuals need M >= 2 and N >= 2");
    if (!(u.grid() == grid) || !(v.grid() == grid))
        throw MeshMismatch("identity residuals: inputs live on another grid");

    const Evaluator ev(u, v, grid);
    ResidualTable table;
    for (const auto& f : kFormulas) {
        IdentityResidual row{f.id, f.text, std::nullopt, {}};
        row.residual = ev.eval(f.id, row.skip_reason);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace stochwave
