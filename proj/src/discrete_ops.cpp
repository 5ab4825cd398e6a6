#include "stochwave/discrete_ops.hpp"

#include <array>

#include "stochwave/errors.hpp"

namespace stochwave {

namespace {

struct Stencil {
    bool in_time;
    int reach_minus;  // largest negative offset (doubled units), as a positive number
    int reach_plus;
};

Stencil stencil_of(Op op)
{
    switch (op) {
    case Op::SPlus: return {false, -1, 1};
    case Op::SMinus: return {false, 1, -1};
    case Op::Ax:
    case Op::Dx: return {false, 1, 1};
    case Op::Dx2: return {false, 2, 2};
    case Op::TPlus: return {true, -1, 1};
    case Op::TMinus: return {true, 1, -1};
    case Op::At:
    case Op::Dt:
    case Op::DtIncr: return {true, 1, 1};
    }
    return {false, 0, 0};
}

// Supported output points of a stencil over `in`, clipped to `bounds`.
IndexRange supported(const IndexRange& in, const Stencil& st, const IndexRange& bounds)
{
    int lo = in.first + st.reach_minus;
    int hi = in.last() - st.reach_plus;
    while (lo < bounds.first)
        lo += 2;
    while (hi > bounds.last())
        hi -= 2;
    return IndexRange::between(lo, hi);
}

double combine(Op op, double minus, double center, double plus, const Grid& g)
{
    switch (op) {
    case Op::SPlus:
    case Op::TPlus: return plus;
    case Op::SMinus:
    case Op::TMinus: return minus;
    case Op::Ax:
    case Op::At: return (plus + minus) / 2.0;
    case Op::Dx: return (plus - minus) / g.dx();
    case Op::Dt: return (plus - minus) / g.dt();
    case Op::DtIncr: return plus - minus;
    case Op::Dx2: return (plus - 2.0 * center + minus) / (g.dx() * g.dx());
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(Op op)
{
    switch (op) {
    case Op::SPlus: return "s+";
    case Op::SMinus: return "s-";
    case Op::TPlus: return "t+";
    case Op::TMinus: return "t-";
    case Op::Ax: return "Ax";
    case Op::Dx: return "Dx";
    case Op::At: return "At";
    case Op::Dt: return "Dt";
    case Op::DtIncr: return "dt_incr";
    case Op::Dx2: return "Dx2";
    }
    return "?";
}

std::optional<Op> parse_op(std::string_view name)
{
    static constexpr std::array ops{Op::SPlus, Op::SMinus, Op::TPlus, Op::TMinus,
                                    Op::Ax,    Op::Dx,     Op::At,    Op::Dt,
                                    Op::DtIncr, Op::Dx2};
    for (Op op : ops)
        if (to_string(op) == name)
            return op;
    return std::nullopt;
}

GridFunction apply(Op op, const GridFunction& u)
{
    const Stencil st = stencil_of(op);
    const Grid& g = u.grid();
    if (st.in_time) {
        if (!u.has_time())
            throw MeshMismatch(std::string(to_string(op))
                               + " needs a time axis; got a slice");
        const IndexRange t = supported(*u.time_range(), st, g.time_bounds());
        if (t.empty())
            throw StencilOutOfRange(std::string(to_string(op))
                                        + ": time support " + describe(*u.time_range())
                                        + " too short",
                                    u.time_range()->first);
        return apply(op, u, u.space_range(), t);
    }
    const IndexRange s = supported(u.space_range(), st, g.space_bounds());
    if (s.empty())
        throw StencilOutOfRange(std::string(to_string(op)) + ": space support "
                                    + describe(u.space_range()) + " too short",
                                u.space_range().first);
    return apply(op, u, s, u.time_range());
}

GridFunction apply(Op op, const GridFunction& u, IndexRange space,
                   std::optional<IndexRange> time)
{
    const Stencil st = stencil_of(op);
    const Grid& g = u.grid();
    if (time.has_value() != u.has_time())
        throw MeshMismatch(std::string(to_string(op))
                           + ": target and operand disagree on the time axis");
    if (st.in_time && !u.has_time())
        throw MeshMismatch(std::string(to_string(op)) + " needs a time axis; got a slice");

    const IndexRange& in_s = u.space_range();
    const int nt_out = time ? time->count : 1;
    const int nt_in = u.time_count();
    auto values = u.values();

    // Check support up front so the error names the first bad target.
    const IndexRange& axis_in = st.in_time ? *u.time_range() : in_s;
    const IndexRange& axis_out = st.in_time ? *time : space;
    for (int k = 0; k < axis_out.count; ++k) {
        const int p = axis_out.at(k);
        const bool ok = axis_in.contains(p + st.reach_plus)
                        && axis_in.contains(p - st.reach_minus)
                        && (op != Op::Dx2 || axis_in.contains(p));
        if (!ok)
            throw StencilOutOfRange(std::string(to_string(op)) + ": no support for "
                                        + (st.in_time ? "time" : "space")
                                        + " index " + std::to_string(p) + " in "
                                        + describe(axis_in),
                                    p);
    }
    const IndexRange& other_in = st.in_time ? in_s : (time ? *u.time_range() : IndexRange{0, 1});
    const IndexRange& other_out = st.in_time ? space : (time ? *time : IndexRange{0, 1});
    if (!other_in.contains(other_out))
        throw MeshMismatch(std::string(to_string(op)) + ": target "
                           + describe(other_out) + " not covered by "
                           + describe(other_in));

    auto at = [&](int hs, int ht) {
        const int ti = time ? u.time_range()->offset(ht) : 0;
        return values[in_s.offset(hs) * nt_in + ti];
    };

    std::vector<double> out(static_cast<std::size_t>(space.count) * nt_out);
    for (int i = 0; i < space.count; ++i) {
        const int hs = space.at(i);
        for (int k = 0; k < nt_out; ++k) {
            const int ht = time ? time->at(k) : 0;
            double minus = 0.0, center = 0.0, plus = 0.0;
            if (st.in_time) {
                if (st.reach_minus > 0 || op == Op::TMinus)
                    minus = at(hs, ht - 1);
                if (st.reach_plus > 0 || op == Op::TPlus)
                    plus = at(hs, ht + 1);
            } else if (op == Op::Dx2) {
                minus = at(hs - 2, ht);
                center = at(hs, ht);
                plus = at(hs + 2, ht);
            } else {
                if (op != Op::SPlus)
                    minus = at(hs - 1, ht);
                if (op != Op::SMinus)
                    plus = at(hs + 1, ht);
            }
            out[i * nt_out + k] = combine(op, minus, center, plus, g);
        }
    }
    return GridFunction(g, space, time, std::move(out));
}

}  // namespace stochwave
