import math

import numpy as np
import pytest

import stochwave as sw


def sine_data(grid, coupled_mode=1):
    x = np.array(grid.x())
    y0 = np.sin(math.pi * x)
    y0[0] = y0[-1] = 0.0
    g = np.tile(np.sin(coupled_mode * math.pi * x[1:-1])[:, None], (1, grid.N))
    return sw.problem_data(grid, y0, np.zeros_like(x), g)


def test_grid():
    g = sw.Grid(7, 10, 2.0)
    assert g.dx == pytest.approx(1 / 8)
    assert g.dt == pytest.approx(0.2)
    assert len(g.x()) == 9
    assert len(g.t()) == 12


def test_weights_and_admissibility():
    p = sw.WeightParams()
    w = sw.eval_weights(p, 0.25, 0.5)
    assert w["rho"] == pytest.approx(1 / w["r"])
    rep = sw.check_admissible(p, sw.Grid(15, 512, 1.0))
    assert set(rep) >= {"overall", "phi_min", "t_margin"}
    p.lam = 40.0
    with pytest.raises(sw.WeightOverflow):
        sw.eval_weights(p, 0.0, 0.0)


def test_estimate_order():
    p = sw.WeightParams()
    p.mconst = 0.0
    levels = [sw.Grid(m, m + 1, 1.0) for m in (15, 31, 63)]
    est = sw.estimate_order("r_AxDx_rho", p, levels)
    assert est["order"] > 1.8
    assert "AxDx_r_Dt_rho" in sw.asymptotic_exprs()


def test_identities_on_random_pair():
    g = sw.Grid(6, 5, 1.0)
    rng = np.random.default_rng(0)
    res = sw.identity_residuals(g, rng.uniform(-1, 1, (8, 7)), rng.uniform(-1, 1, (8, 7)))
    assert len(res) == 14
    assert max(v for v in res.values() if v is not None) < 1e-12


def test_solve_shape_and_boundaries():
    g = sw.Grid(9, 20, 1.0)
    y, inc = sw.solve(sine_data(g), sw.SchemeCoefficients.constant(g, d=0.3), g, 7)
    assert y.shape == (11, 22)
    assert len(inc) == g.N + 1
    assert np.all(y[0, 2:] == 0.0) and np.all(y[-1, 2:] == 0.0)


def test_shape_errors():
    g = sw.Grid(4, 4, 1.0)
    with pytest.raises(sw.InvalidArgument):
        sw.problem_data(g, np.zeros(5), np.zeros(6), np.zeros((4, 4)))


def test_ensemble_estimators():
    g = sw.Grid(6, 40, 1.0)
    coeffs = sw.SchemeCoefficients.constant(g, d=0.5)
    a = sine_data(g, 1)
    b = sine_data(g, 2)
    ea = sw.run_ensemble(a, coeffs, g, 100, 5)
    eb = sw.run_ensemble(b, coeffs, g, 100, 5)
    assert len(ea) == 100
    assert ea.trajectory(3).shape == (8, 42)

    car = sw.carleman_terms(ea, sw.WeightParams(), a, g)
    assert set(car["lhs"]) == {f"L{i}" for i in range(1, 8)}
    st = sw.stability_terms(ea, eb, a, b, g)
    assert st["ratio"] > 0
    mg = sw.martingale_check(ea, g)
    assert abs(mg["mean"]) <= 4 * mg["stderr"]

    other = sw.run_ensemble(b, coeffs, g, 100, 6)
    with pytest.raises(sw.CouplingError):
        sw.stability_terms(ea, other, a, b, g)


def test_config_roundtrip():
    cfg = sw.parse_config('{"grid": {"M": 4, "N": 8, "T": 1}, "mc": {"paths": 3}}')
    assert cfg.paths == 3
    assert cfg.grid().N == 8
    assert cfg.pair_data() is None
    with pytest.raises(sw.ConfigError):
        sw.parse_config('{"grid": {"M": 4}}')
