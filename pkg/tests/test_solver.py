import numpy as np
import pytest

from pinfin import (ConfigError, Grid, PhysicalParams, RadiusProfile,
                    SurfaceMeasure, closed_form_temperature, solve_temperature)
from pinfin.randoms import random_pair

from conftest import A0, LENGTH, constant_fin, rel_linf


def test_matches_closed_form_on_constant_profile(demo_params):
    grid, a, b, T = constant_fin(A0, LENGTH, demo_params, 2048)
    exact = closed_form_temperature(grid.nodes, A0, LENGTH, demo_params)
    assert rel_linf(T.values, exact, demo_params.delta_T) < 1e-7


def test_second_order_convergence(demo_params):
    errs = []
    for n in (256, 512, 1024, 2048):
        grid, a, b, T = constant_fin(A0, LENGTH, demo_params, n)
        exact = closed_form_temperature(grid.nodes, A0, LENGTH, demo_params)
        errs.append(rel_linf(T.values, exact, demo_params.delta_T))
    for e1, e2 in zip(errs, errs[1:]):
        assert 3.2 <= e1 / e2 <= 4.8


def test_zero_gap_boundary_data_gives_ambient_field():
    params = PhysicalParams(k=10.0, h=10.0, h_r=10.0, T_d=5.0, T_inf=5.0)
    grid, a, b, T = constant_fin(A0, LENGTH, params, 64)
    assert np.all(T.values == 5.0)


def test_inlet_atom_leaves_temperature_bit_identical(demo_params):
    grid = Grid(LENGTH, 400)
    a = RadiusProfile.constant(A0, grid)
    b_plain = SurfaceMeasure.constant(A0, grid)
    S = 6 * A0 * LENGTH
    b_atom = b_plain.with_atom(0.0, S - A0 * LENGTH)
    T_plain = solve_temperature(a, b_plain, demo_params, grid)
    T_atom = solve_temperature(a, b_atom, demo_params, grid)
    assert np.array_equal(T_plain.values, T_atom.values)


def test_interior_atom_cools_the_fin(demo_params):
    grid = Grid(LENGTH, 400)
    a = RadiusProfile.constant(A0, grid)
    b = SurfaceMeasure.constant(A0, grid)
    T0 = solve_temperature(a, b, demo_params, grid)
    T1 = solve_temperature(a, b.with_atom(0.05, 1e-4), demo_params, grid)
    assert np.all(T1.values <= T0.values + 1e-15)
    assert T1.values[200] < T0.values[200]


def test_atom_on_volume_face_splits_evenly(demo_params):
    grid = Grid(LENGTH, 400)
    a = RadiusProfile.constant(A0, grid)
    face = grid.midpoints[200]
    b_tie = SurfaceMeasure.constant(A0, grid).with_atom(face, 2e-4)
    b_split = SurfaceMeasure.constant(A0, grid) \
        .with_atom(face - grid.dx / 4, 1e-4).with_atom(face + grid.dx / 4, 1e-4)
    T_tie = solve_temperature(a, b_tie, demo_params, grid)
    T_split = solve_temperature(a, b_split, demo_params, grid)
    # the quarter-offset atoms snap to the two neighboring volumes, which is
    # exactly what the even split of the on-face atom produces
    assert np.allclose(T_tie.values, T_split.values, rtol=0, atol=1e-14)


def test_maximum_principle_on_random_profiles(demo_params):
    rng = np.random.default_rng(42)
    grid = Grid(LENGTH, 300)
    dT = demo_params.delta_T
    for _ in range(30):
        a, b = random_pair(rng, A0, grid)
        T = solve_temperature(a, b, demo_params, grid).values
        assert np.max(T) <= demo_params.T_d + 1e-10 * dT
        assert np.min(T) >= demo_params.T_inf - 1e-10 * dT
        assert np.max(np.diff(T)) <= 1e-10 * dT


def test_closed_form_against_high_resolution_solve():
    # grid-refinement oracle: n = 2**20 cells; agreement is then limited by
    # solver roundoff accumulation, a few 1e-7 relative
    params = PhysicalParams(k=10.0, h=10.0, h_r=10.0, T_d=10.0, T_inf=0.0)
    n = 2 ** 20
    grid, a, b, T = constant_fin(A0, LENGTH, params, n)
    x = LENGTH / 2
    ref = T.values[n // 2]
    val = float(closed_form_temperature(x, A0, LENGTH, params))
    assert abs(val - ref) / params.delta_T < 1e-6


def test_solution_scales_exactly_with_the_temperature_gap():
    # solving for the excess temperature makes the solution exactly
    # proportional to T_d - T_inf: tiny gaps lose no relative accuracy
    grid = Grid(LENGTH, 512)
    a = RadiusProfile.constant(A0, grid)
    b = SurfaceMeasure.constant(A0, grid)
    big = PhysicalParams(k=10.0, h=10.0, h_r=10.0, T_d=10.0, T_inf=0.0)
    tiny = PhysicalParams(k=10.0, h=10.0, h_r=10.0, T_d=1.0 + 1e-9, T_inf=1.0)
    theta_big = solve_temperature(a, b, big, grid).theta(big)
    theta_tiny = solve_temperature(a, b, tiny, grid).theta(tiny)
    assert np.allclose(theta_tiny / tiny.delta_T, theta_big / big.delta_T,
                       rtol=1e-12, atol=0)


def test_closed_form_endpoints(demo_params):
    assert closed_form_temperature(0.0, A0, LENGTH, demo_params) == pytest.approx(
        demo_params.T_d, abs=1e-12)
    # insulated tip: T(L) = T_inf + dT / cosh(sqrt(beta/a0) L)
    params = PhysicalParams(k=10.0, h=10.0, h_r=0.0, T_d=10.0, T_inf=0.0)
    lam = np.sqrt(params.constant_beta() / A0)
    expected = params.T_inf + params.delta_T / np.cosh(lam * LENGTH)
    assert closed_form_temperature(LENGTH, A0, LENGTH, params) == pytest.approx(
        expected, rel=1e-13)


def test_closed_form_requires_constant_h():
    params = PhysicalParams(k=10.0, h=lambda x: 10.0 + 0 * x, h_r=10.0,
                            T_d=10.0, T_inf=0.0)
    with pytest.raises(ConfigError):
        closed_form_temperature(0.05, A0, LENGTH, params)


def test_input_validation(demo_params):
    grid = Grid(LENGTH, 64)
    a = RadiusProfile.constant(A0, grid)
    with pytest.raises(ConfigError):
        SurfaceMeasure.constant(A0, grid).with_atom(2 * LENGTH, 1e-5)
    with pytest.raises(ConfigError):
        SurfaceMeasure.constant(A0, grid).with_atom(0.05, -1e-5)
    with pytest.raises(ConfigError):
        RadiusProfile(np.full(grid.n_cells + 1, A0 / 2), A0, LENGTH)
    with pytest.raises(ConfigError):
        solve_temperature(a, SurfaceMeasure.constant(A0, Grid(LENGTH, 65)),
                          demo_params, grid)


def test_variable_h_profile_solves(demo_params):
    grid = Grid(LENGTH, 512)
    params = PhysicalParams(k=10.0, h=lambda x: 20.0 - 100.0 * x, h_r=10.0,
                            T_d=10.0, T_inf=0.0)
    a = RadiusProfile.constant(A0, grid)
    b = SurfaceMeasure.constant(A0, grid)
    T = solve_temperature(a, b, params, grid).values
    assert T[0] == 10.0
    assert np.all(np.diff(T) <= 1e-12)
    # stronger convection than the constant-10 case everywhere except the tip
    T_ref = solve_temperature(a, b, demo_params, grid).values
    assert T[grid.n_cells // 2] < T_ref[grid.n_cells // 2]
