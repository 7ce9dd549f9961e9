"""Volume, lateral surface and heat-flux functionals.

Two discrete expressions of the inlet heat flux are provided.  The boundary
form evaluates the finite-volume flux at the first face corrected by the
inlet control-volume sink (a naive one-sided difference would break the
balance); the relaxed form integrates ``beta * b * (T - T_inf)`` with the same
trapezoidal cell weights used by the solver and adds the atom and tip terms.
For atom-free data the two agree to roundoff by construction.  The relaxed
form is the one that extends continuously to measures: mass sitting exactly
at the inlet is counted at temperature T_d there while the boundary flux does
not see it, which is precisely the defect of convergence that makes the
surface-constrained problem attain its supremum only through concentrating
sequences.
"""

import numpy as np

from .errors import ConfigError
from .grid import Grid
from .physics import PhysicalParams
from .profiles import (FluxReport, RadiusProfile, SurfaceMeasure,
                       TemperatureField)
from .solver import atom_node_weights, compute_gamma, reaction_weights, solve_temperature


def volume(a: RadiusProfile, grid: Grid) -> float:
    """Integral of a^2 (physical volume divided by pi), midpoint quadrature."""
    am = a.at_midpoints()
    return float(grid.dx * np.sum(am * am))


def surface(a: RadiusProfile, grid: Grid) -> float:
    """Integral of a sqrt(1 + a'^2) (lateral area divided by 2 pi)."""
    b = SurfaceMeasure.from_radius(a, grid)
    return b.total(grid)


def _theta_nodes(T: TemperatureField, params: PhysicalParams,
                 grid: Grid) -> np.ndarray:
    if T.values.size != grid.n_cells + 1:
        raise ConfigError("temperature field does not match the grid")
    return T.theta(params)


def heat_flux_relaxed(a: RadiusProfile, b: SurfaceMeasure,
                      params: PhysicalParams, grid: Grid,
                      T: TemperatureField) -> float:
    """Relaxed flux k pi [<beta b, theta> + beta_r a(L)^2 theta(L)]."""
    theta = _theta_nodes(T, params, grid)
    w = params.beta(grid.midpoints) * b.density * grid.dx / 2.0
    pairing = float(np.sum(w * (theta[:-1] + theta[1:])))
    for pos, mass in b.atoms:
        if mass == 0.0:
            continue
        bval = float(params.beta(pos))
        for node, wgt in atom_node_weights(pos, grid):
            pairing += wgt * bval * mass * theta[node]
    tip = params.beta_r * a.values[-1] ** 2 * theta[-1]
    return params.k * np.pi * (pairing + tip)


def heat_flux_boundary(a: RadiusProfile, T: TemperatureField,
                       params: PhysicalParams, grid: Grid,
                       b: SurfaceMeasure | None = None) -> float:
    """Inlet flux -k pi a(0)^2 T'(0) in its conservative discrete form.

    ``b`` defaults to the classical density of ``a``; pass the measure that
    produced ``T`` when evaluating relaxed states.
    """
    if b is None:
        b = SurfaceMeasure.from_radius(a, grid)
    theta = _theta_nodes(T, params, grid)
    am = a.at_midpoints()
    q_first = am[0] ** 2 * (theta[1] - theta[0]) / grid.dx
    sink0 = reaction_weights(b, params, grid)[0] * theta[0]
    return -params.k * np.pi * (q_first - sink0)


def flux_report(a: RadiusProfile, b: SurfaceMeasure, params: PhysicalParams,
                grid: Grid, T: TemperatureField) -> FluxReport:
    """Both flux expressions plus their relative gap."""
    fb = heat_flux_boundary(a, T, params, grid, b)
    fi = heat_flux_relaxed(a, b, params, grid, T)
    scale = max(abs(fb), abs(fi), 1e-300)
    return FluxReport(fb, fi, abs(fb - fi) / scale)


def surface_supremum(a0: float, length: float, S0: float,
                     params: PhysicalParams) -> float:
    """Least upper bound of the flux over radii with surface integral <= S0.

    Closed form for constant h: the optimal relaxed design is the floor
    density plus all excess surface concentrated at the inlet, giving
    ``k pi beta dT (a0^(3/2) gamma / sqrt(beta) + S0 - a0 L)``.
    """
    if S0 < a0 * length:
        raise ConfigError(
            f"surface budget S0={S0} below the degenerate minimum {a0 * length}"
        )
    beta = params.constant_beta()
    gamma = compute_gamma(a0, length, beta, params.beta_r)
    dT = params.delta_T
    return float(params.k * np.pi * beta * dT
                 * (a0 ** 1.5 * gamma / np.sqrt(beta) + (S0 - a0 * length)))


def generalized_supremum(a0: float, length: float, S0: float,
                         params: PhysicalParams, grid: Grid,
                         tip_includes_pi: bool = True) -> float:
    """Supremum of the flux for variable beta(x) attaining its max at x = 0.

    Assembles ``k pi [a0 int beta theta + (S0 - a0 L) beta(0) dT]`` plus the
    tip term from a constant-radius solve.  With ``tip_includes_pi=False`` the
    tip term drops the factor pi (an alternative normalization kept for
    comparison; the default is consistent with the relaxed functional and
    reduces exactly to ``surface_supremum`` for constant h).
    """
    if S0 < a0 * length:
        raise ConfigError(
            f"surface budget S0={S0} below the degenerate minimum {a0 * length}"
        )
    if params.is_constant_h and tip_includes_pi:
        return surface_supremum(a0, length, S0, params)
    beta_nodes = params.beta(grid.nodes)
    if np.max(beta_nodes) > beta_nodes[0] * (1.0 + 1e-12):
        raise ConfigError(
            "beta(x) must attain its maximum at x = 0 for the supremum formula"
        )
    a = RadiusProfile.constant(a0, grid)
    b = SurfaceMeasure.constant(a0, grid)
    T = solve_temperature(a, b, params, grid)
    base = heat_flux_relaxed(a, b, params, grid, T)
    if not tip_includes_pi:
        tip = params.beta_r * a0 ** 2 * (T.values[-1] - params.T_inf)
        base -= params.k * np.pi * tip
        base += params.k * tip
    inlet = params.k * np.pi * (S0 - a0 * length) * float(params.beta(0.0)) \
        * params.delta_T
    return float(base + inlet)


def flux_gradient_density(b: SurfaceMeasure, params: PhysicalParams,
                          grid: Grid, T: TemperatureField) -> np.ndarray:
    """Derivative of the relaxed flux per unit of added surface mass, by cell.

    The discrete objective equals the state energy divided by dT, so its exact
    gradient with respect to the cell density is
    ``k pi beta_c (theta_i^2 + theta_{i+1}^2) / (2 dT)`` per unit mass; this
    is the discrete counterpart of the swap-derivative density
    ``k pi beta(x) (T(x) - T_inf)^2 / dT`` and converges to it at second
    order.
    """
    theta = _theta_nodes(T, params, grid)
    dT = params.delta_T
    if dT == 0.0:
        return np.zeros(grid.n_cells)
    beta_mid = params.beta(grid.midpoints)
    return params.k * np.pi * beta_mid * 0.5 * (theta[:-1] ** 2 + theta[1:] ** 2) / dT


def directional_derivative(a: RadiusProfile, b: SurfaceMeasure,
                           params: PhysicalParams, grid: Grid, x0: float,
                           c: float) -> float:
    """Limit of (F(b_eps) - F(b)) / eps for the inlet-swap perturbation.

    ``b_eps`` adds density c on [0, eps] and removes it on a symmetric window
    at ``x0``; the limit is
    ``k pi c (beta(0) dT^2 - beta(x0) theta(x0)^2) / dT``.
    """
    if not (0.0 < x0 < grid.length):
        raise ConfigError(f"swap point x0={x0} must be strictly inside (0, L)")
    T = solve_temperature(a, b, params, grid)
    theta_x0 = T.theta_at(x0, grid, params)
    dT = params.delta_T
    if dT == 0.0:
        return 0.0
    beta0 = float(params.beta(0.0))
    beta_x0 = float(params.beta(x0))
    return float(params.k * np.pi * c * (beta0 * dT * dT - beta_x0 * theta_x0 ** 2) / dT)
