import numpy as np
import pytest
from scipy.optimize import minimize

from pinfin import (ConfigError, Grid, OptimConfig, PhysicalParams,
                    bang_density, heat_flux_relaxed, optimize,
                    project_box_budget, surface_supremum, sweep_M,
                    verify_bang_structure)
from pinfin.functionals import flux_gradient_density
from pinfin.profiles import RadiusProfile
from pinfin.solver import solve_temperature

A0, ELL = 1e-3, 0.1


def make_cfg(n=200, M=25e-3, S0=None, h=10.0, max_iters=20000):
    params = PhysicalParams(k=10.0, h=h, h_r=10.0 if not callable(h) else h(ELL),
                            T_d=10.0, T_inf=0.0)
    return OptimConfig(a0=A0, S0=S0 if S0 is not None else 6 * A0 * ELL,
                       M=M, grid=Grid(ELL, n), params=params,
                       max_iters=max_iters, reconstruct=False)


# ------------------------------------------------------------- projection

def test_projection_feasibility_and_idempotence():
    rng = np.random.default_rng(0)
    lo, hi, dx = 1.0, 4.0, 0.01
    for _ in range(50):
        v = rng.uniform(-2, 8, size=40)
        budget = rng.uniform(lo * 40 * dx, hi * 40 * dx)
        b = project_box_budget(v, lo, hi, budget, dx)
        assert np.all(b >= lo - 1e-12) and np.all(b <= hi + 1e-12)
        assert dx * b.sum() <= budget * (1 + 1e-12)
        again = project_box_budget(b, lo, hi, budget, dx)
        assert np.allclose(again, b, atol=1e-10)


def test_projection_rejects_impossible_budgets():
    with pytest.raises(ConfigError):
        project_box_budget(np.ones(10), 1.0, 2.0, 0.5 * 10 * 0.01, 0.01)


def test_projection_matches_quadratic_program_oracle():
    # oracle: direct constrained least-distance solve on small instances
    rng = np.random.default_rng(1)
    lo, hi, dx = 0.5, 2.0, 0.1
    n = 12
    for _ in range(10):
        v = rng.uniform(-1, 3.5, size=n)
        budget = rng.uniform(lo * n * dx, hi * n * dx * 0.9)
        mine = project_box_budget(v, lo, hi, budget, dx)
        res = minimize(lambda b: 0.5 * np.sum((b - v) ** 2), np.full(n, 1.0),
                       jac=lambda b: b - v,
                       bounds=[(lo, hi)] * n,
                       constraints=[{"type": "ineq",
                                     "fun": lambda b: budget - dx * b.sum(),
                                     "jac": lambda b: -dx * np.ones(n)}],
                       method="SLSQP", options={"ftol": 1e-14, "maxiter": 400})
        assert res.success
        assert np.max(np.abs(mine - res.x)) <= 2e-6


# ------------------------------------------------------------- optimizer

def test_optimizer_recovers_bang_bang_structure():
    cfg = make_cfg()
    res = optimize(cfg)
    assert res.converged
    rep = verify_bang_structure(res, cfg)
    assert rep.cells_between_bounds <= 1
    assert rep.switch_error_cells <= 1.0
    assert rep.objective_relative_gap <= 1e-6
    # ascent and feasibility
    assert np.all(np.diff(res.trace) >= -1e-12 * abs(res.objective))
    assert res.b_opt.total(cfg.grid) <= cfg.S0 * (1 + 1e-10)
    assert np.all(res.b_opt.density >= A0 - 1e-15)
    assert np.all(res.b_opt.density <= cfg.M + 1e-15)


def test_optimizer_kkt_structure_constant_h():
    cfg = make_cfg()
    res = optimize(cfg)
    b = res.b_opt
    T = solve_temperature(RadiusProfile.constant(A0, cfg.grid), b, cfg.params,
                          cfg.grid)
    g = flux_gradient_density(b, cfg.params, cfg.grid, T)
    upper = res.active_set == "upper"
    lower = res.active_set == "lower"
    scale = float(np.max(g))
    # multiplier separates the active sets: bound cells sit on the correct side
    mu_hi = float(np.min(g[upper]))
    mu_lo = float(np.max(g[lower]))
    assert mu_hi >= mu_lo - 1e-6 * scale


def test_degenerate_budget_forces_the_floor():
    cfg = make_cfg(S0=A0 * ELL, M=25e-3)
    res = optimize(cfg)
    assert np.allclose(res.b_opt.density, A0, rtol=0, atol=1e-12)
    base = surface_supremum(A0, ELL, A0 * ELL, cfg.params)
    assert res.objective == pytest.approx(base, rel=1e-4)


def test_objective_compares_to_reference_density():
    cfg = make_cfg(n=500, M=50e-3)
    res = optimize(cfg)
    bang = bang_density(cfg.M, cfg.S0, A0, cfg.grid)
    T = solve_temperature(RadiusProfile.constant(A0, cfg.grid), bang,
                          cfg.params, cfg.grid)
    ref = heat_flux_relaxed(RadiusProfile.constant(A0, cfg.grid), bang,
                            cfg.params, cfg.grid, T)
    assert res.objective >= ref * (1 - 1e-9)


def test_optimizer_is_deterministic():
    r1 = optimize(make_cfg(n=150))
    r2 = optimize(make_cfg(n=150))
    assert np.array_equal(r1.b_opt.density, r2.b_opt.density)
    assert r1.objective == r2.objective


def test_reconstruction_attached_to_result():
    cfg = make_cfg(n=400)
    cfg.reconstruct = True
    res = optimize(cfg)
    assert res.a_opt is not None
    assert np.all(res.a_opt.values >= A0 * (1 - 1e-12))
    assert float(np.max(res.a_opt.values)) > A0


def test_infeasible_configurations_rejected():
    with pytest.raises(ConfigError):
        make_cfg(M=A0)                       # cap at the floor
    with pytest.raises(ConfigError):
        make_cfg(M=1.04 * A0, S0=6 * A0 * ELL)   # budget cannot fit below cap
    with pytest.raises(ConfigError):
        make_cfg(S0=0.5 * A0 * ELL)          # budget below the floor surface


def test_sweep_monotone_objectives():
    cfg = make_cfg(n=200, M=6.25e-3)
    results = sweep_M(cfg, [6.25e-3, 12.5e-3, 25e-3, 50e-3])
    objs = [r.objective for r in results]
    assert all(o2 >= o1 * (1 - 1e-12) for o1, o2 in zip(objs, objs[1:]))
    sup = surface_supremum(A0, ELL, cfg.S0, cfg.params)
    assert all(o <= sup * 1.005 for o in objs)
    with pytest.raises(ConfigError):
        sweep_M(cfg, [12.5e-3, 6.25e-3])
    with_free = sweep_M(cfg, [6.25e-3, 12.5e-3], include_uncapped=True)
    assert len(with_free) == 3
    assert with_free[-1].objective >= with_free[-2].objective


def test_concentration_fraction_grows_with_the_cap():
    # decreasing convection: untightening the cap packs a growing share of
    # the excess surface into the head of the fin
    def h(x):
        return 20.0 - 100.0 * np.asarray(x)

    params = PhysicalParams(k=10.0, h=h, h_r=10.0, T_d=10.0, T_inf=0.0)
    grid = Grid(ELL, 500)
    S0 = 3 * A0 * ELL
    fracs = []
    for M in (6.25e-3, 12.5e-3, 25e-3, 50e-3):
        cfg = OptimConfig(a0=A0, S0=S0, M=M, grid=grid, params=params,
                          reconstruct=False)
        res = optimize(cfg)
        exc = (res.b_opt.density - A0) * grid.dx
        fracs.append(float(exc[grid.midpoints <= 0.05 * ELL].sum() / exc.sum()))
    assert all(f2 > f1 for f1, f2 in zip(fracs, fracs[1:]))
    assert fracs[-1] >= 0.9


def test_uncapped_run_exhausts_budget():
    cfg = make_cfg(n=200, M=None)
    res = optimize(cfg)
    assert res.budget_active
    assert res.b_opt.total(cfg.grid) == pytest.approx(cfg.S0, rel=1e-9)
