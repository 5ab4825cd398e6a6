// Python bindings. Arrays are (space, time) with the closure layout used by
// the library: y[j, n] for j = 0..M+1, n = 0..N+1.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stochwave/config.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/estimator.hpp"
#include "stochwave/identities.hpp"
#include "stochwave/weights.hpp"

namespace py = pybind11;
using namespace stochwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const GridFunction& u)
{
    py::array_t<double> out({u.space_count(), u.time_count()});
    auto v = u.values();
    std::copy(v.begin(), v.end(), out.mutable_data());
    if (!u.has_time())
        return out.attr("reshape")(u.space_count()).cast<py::array_t<double>>();
    return out;
}

GridFunction from_numpy(const Grid& grid, IndexRange space, std::optional<IndexRange> time,
                        const Array& a, const char* what)
{
    const std::size_t want_t = time ? static_cast<std::size_t>(time->count) : 1;
    const bool ok = time ? (a.ndim() == 2 && a.shape(0) == space.count
                            && static_cast<std::size_t>(a.shape(1)) == want_t)
                         : (a.ndim() == 1 && a.shape(0) == space.count);
    if (!ok)
        throw InvalidArgument(std::string(what) + ": expected shape ("
                              + std::to_string(space.count)
                              + (time ? ", " + std::to_string(want_t) : std::string(",")) + ")");
    return GridFunction(grid, space, time, std::vector<double>(a.data(), a.data() + a.size()));
}

ProblemData make_data(const Grid& grid, const Array& y0, const Array& y1, const Array& g,
                      const std::optional<Array>& f)
{
    ProblemData d = ProblemData::zero(grid);
    const IndexRange closure = grid.space(SpaceMesh::Closure);
    const IndexRange inner = grid.space(SpaceMesh::Primal);
    d.y0 = from_numpy(grid, closure, std::nullopt, y0, "y0");
    d.y1 = from_numpy(grid, closure, std::nullopt, y1, "y1");
    d.g = g.ndim() == 1 ? from_numpy(grid, inner, std::nullopt, g, "g")
                        : from_numpy(grid, inner, grid.time(TimeMesh::Primal), g, "g");
    if (f)
        d.f = from_numpy(grid, inner, grid.time(TimeMesh::Primal), *f, "f");
    d.validate(grid);
    return d;
}

py::dict admissibility_dict(const AdmissibilityReport& r)
{
    py::dict d;
    d["t_condition"] = r.t_condition;
    d["t_margin"] = r.t_margin;
    d["sdx_condition"] = r.sdx_condition;
    d["sdx_value"] = r.sdx_value;
    d["dt_condition"] = r.dt_condition;
    d["dt_value"] = r.dt_value;
    d["phi_positive"] = r.phi_positive;
    d["phi_min"] = r.phi_min;
    d["overall"] = r.overall;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    auto base = py::register_exception<Error>(m, "StochwaveError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<CouplingError>(m, "CouplingError", base.ptr());
    py::register_exception<WeightOverflow>(m, "WeightOverflow", base.ptr());
    py::register_exception<BlowUp>(m, "BlowUp", base.ptr());
    py::register_exception<MeshMismatch>(m, "MeshMismatch", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int, double>(), py::arg("M"), py::arg("N"), py::arg("T"))
        .def_property_readonly("M", &Grid::M)
        .def_property_readonly("N", &Grid::N)
        .def_property_readonly("T", &Grid::T)
        .def_property_readonly("dx", &Grid::dx)
        .def_property_readonly("dt", &Grid::dt)
        .def("x", [](const Grid& g) { return g.space_closure(); }, "x_j, j = 0..M+1")
        .def("t", [](const Grid& g) { return g.time_closure(); }, "t^n, n = 0..N+1")
        .def("__repr__", [](const Grid& g) {
            return "Grid(M=" + std::to_string(g.M()) + ", N=" + std::to_string(g.N())
                   + ", T=" + std::to_string(g.T()) + ")";
        });

    py::class_<WeightParams>(m, "WeightParams")
        .def(py::init<>())
        .def_readwrite("s", &WeightParams::s)
        .def_readwrite("lam", &WeightParams::lambda)
        .def_readwrite("beta", &WeightParams::beta)
        .def_readwrite("xstar", &WeightParams::xstar)
        .def_readwrite("mconst", &WeightParams::mconst)
        .def_readwrite("T", &WeightParams::T)
        .def_readwrite("epsilon", &WeightParams::epsilon)
        .def_readwrite("dt_multiplier", &WeightParams::dt_multiplier)
        .def("validate", &WeightParams::validate);

    m.def("eval_weights", [](const WeightParams& p, double x, double t) {
        const WeightValues w = eval_weights(p, x, t);
        py::dict d;
        d["phi"] = w.phi;
        d["varphi"] = w.varphi;
        d["l"] = w.l;
        d["r"] = w.r;
        d["rho"] = w.rho;
        d["dphi_dx"] = w.dphi_dx;
        d["dphi_dt"] = w.dphi_dt;
        return d;
    });
    m.def("check_admissible", [](const WeightParams& p, const Grid& g) {
        return admissibility_dict(check_admissible(p, g));
    });
    m.def("estimate_order",
          [](const std::string& expr, const WeightParams& p, const std::vector<Grid>& levels) {
              const auto e = parse_asymptotic_expr(expr);
              if (!e)
                  throw InvalidArgument("unknown expression '" + expr + "'");
              const OrderEstimate est = estimate_order(*e, p, levels);
              py::dict d;
              d["order"] = est.order;
              d["fit_residual"] = est.fit_residual;
              d["dx"] = est.dx;
              d["residuals"] = est.residuals;
              return d;
          });
    m.def("asymptotic_exprs", [] {
        std::vector<std::string> out;
        for (AsymptoticExpr e : all_asymptotic_exprs())
            out.emplace_back(to_string(e));
        return out;
    });

    m.def("identity_residuals", [](const Grid& g, const Array& u, const Array& v) {
        const IndexRange xs = g.space(SpaceMesh::Closure);
        const IndexRange ts = g.time(TimeMesh::Closure);
        const ResidualTable t = identity_residuals(from_numpy(g, xs, ts, u, "u"),
                                                   from_numpy(g, xs, ts, v, "v"), g);
        py::dict out;
        for (const IdentityResidual& r : t.rows)
            out[py::str(r.id)] = r.residual ? py::cast(*r.residual) : py::none();
        return out;
    }, "Normalized residual per identity id; None when skipped.");

    py::class_<ProblemData>(m, "ProblemData");
    m.def("problem_data", &make_data, py::arg("grid"), py::arg("y0"), py::arg("y1"),
          py::arg("g"), py::arg("f") = py::none(),
          "y0, y1 of length M+2; g of shape (M, N) or (M,) for a space-only source; "
          "f of shape (M, N).");

    py::class_<SchemeCoefficients>(m, "SchemeCoefficients")
        .def_static("constant", &SchemeCoefficients::constant, py::arg("grid"), py::arg("a") = 0.0,
                    py::arg("b") = 0.0, py::arg("c") = 0.0, py::arg("d") = 0.0);

    m.def("solve", [](const ProblemData& data, const SchemeCoefficients& coeffs, const Grid& g,
                      std::uint64_t seed) {
        const Trajectory tr = solve(data, coeffs, sample_brownian(g.N(), g.dt(), seed), g);
        return py::make_tuple(to_numpy(tr.y), tr.path.increments);
    }, py::arg("data"), py::arg("coeffs"), py::arg("grid"), py::arg("seed"),
       "Returns (y, increments) with y of shape (M+2, N+2).");

    py::class_<Ensemble>(m, "Ensemble")
        .def("__len__", &Ensemble::size)
        .def_readonly("seeds", &Ensemble::seeds)
        .def("trajectory", [](const Ensemble& e, std::size_t k) {
            if (k >= e.size())
                throw py::index_error("path index out of range");
            return to_numpy(e.trajectories[k].y);
        });
    m.def("run_ensemble", &run_ensemble, py::arg("data"), py::arg("coeffs"), py::arg("grid"),
          py::arg("paths"), py::arg("master_seed"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def("carleman_terms", [](const Ensemble& e, const WeightParams& w, const ProblemData& d,
                               const Grid& g, double kappa) {
        return to_json(carleman_terms(e, w, d, g, kappa));
    }, py::arg("ensemble"), py::arg("weight"), py::arg("data"), py::arg("grid"),
       py::arg("kappa") = 0.0);
    m.def("stability_terms", [](const Ensemble& a, const Ensemble& b, const ProblemData& da,
                                const ProblemData& db, const Grid& g) {
        return to_json(stability_terms(a, b, da, db, g));
    });
    m.def("martingale_check", [](const Ensemble& e, const Grid& g) {
        return to_json(martingale_check(e, g));
    });

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("paths", &RunConfig::paths)
        .def_readonly("master_seed", &RunConfig::master_seed)
        .def_readonly("canonical", &RunConfig::canonical)
        .def("grid", [](const RunConfig& c) { return build_grid(c); })
        .def("weight", [](const RunConfig& c) { return weight_params(c); })
        .def("coefficients", [](const RunConfig& c) { return build_coefficients(c, build_grid(c)); })
        .def("data", [](const RunConfig& c) { return build_data(c.data, c.g_mode, build_grid(c)); })
        .def("pair_data", [](const RunConfig& c) -> std::optional<ProblemData> {
            if (!c.pair)
                return std::nullopt;
            return build_data(c.pair->data, c.g_mode, build_grid(c));
        });
    m.def("parse_config", [](const std::string& text) { return parse_config_text(text); });
}
