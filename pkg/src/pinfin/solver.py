"""Finite-volume solution of the fin temperature equation.

The stationary temperature solves

    (a(x)^2 T'(x))' = beta(x) b(x) (T(x) - T_inf),   x in (0, L),
    T(0) = T_d,
    T'(L) = -beta_r (T(L) - T_inf),

where ``b`` is the lateral surface measure (density plus atoms).  The scheme
is vertex-centered and conservative: fluxes ``a^2 T'`` are evaluated at cell
midpoints where ``a^2`` lives, the reaction is integrated over node-centered
control volumes, and the inlet flux is defined so that the discrete balance

    inlet flux = sum of reaction sinks + tip sink

holds to roundoff.  Internally the linear system is written for the excess
``theta = T - T_inf``, which avoids cancellation when T_d is close to T_inf.

Atoms contribute ``beta(pos) * mass * theta`` to the control volume containing
their position (split evenly when the position falls exactly on a volume
face).  An atom exactly at x = 0 does not enter the state equation at all: the
admissible test functions vanish there, so inlet mass affects only the relaxed
flux functional.
"""

import numpy as np
from scipy.linalg import solveh_banded

from .errors import ConfigError, NumericalError
from .grid import Grid
from .physics import PhysicalParams
from .profiles import LinearizedField, RadiusProfile, SurfaceMeasure, TemperatureField

_FACE_TIE_TOL = 1e-12


def atom_node_weights(position: float, grid: Grid) -> list[tuple[int, float]]:
    """Nodes (with weights) whose control volumes receive an atom's mass.

    Control volumes are centered at nodes with faces at cell midpoints; an
    atom sitting exactly on a face is split evenly between its two neighbors.
    """
    t = position / grid.dx
    frac = t - np.floor(t)
    j = int(np.floor(t))
    if abs(frac - 0.5) <= _FACE_TIE_TOL and 0 <= j < grid.n_cells:
        return [(j, 0.5), (j + 1, 0.5)]
    i = int(np.floor(t + 0.5))
    return [(min(max(i, 0), grid.n_cells), 1.0)]


def reaction_weights(b: SurfaceMeasure, params: PhysicalParams,
                     grid: Grid) -> np.ndarray:
    """Control-volume integrals of beta*b, per node, atoms included.

    The weight of node 0 never enters the solve (Dirichlet row) but closes the
    discrete flux balance; atoms exactly at x = 0 are excluded here because
    they are invisible to the state equation.
    """
    n = grid.n_cells
    if b.density.size != n:
        raise ConfigError("surface measure does not match the grid")
    w = params.beta(grid.midpoints) * b.density * grid.dx / 2.0
    m = np.zeros(n + 1)
    m[:-1] += w
    m[1:] += w
    for pos, mass in b.atoms:
        if pos == 0.0 or mass == 0.0:
            continue
        bval = float(params.beta(pos))
        for node, wgt in atom_node_weights(pos, grid):
            m[node] += wgt * bval * mass
    return m


def _face_conductances(a: RadiusProfile, grid: Grid) -> np.ndarray:
    if a.values.size != grid.n_cells + 1:
        raise ConfigError("radius profile does not match the grid")
    am = a.at_midpoints()
    return am * am / grid.dx


def _solve_reduced(s: np.ndarray, m: np.ndarray, robin: float,
                   rhs: np.ndarray) -> np.ndarray:
    """Solve the SPD tridiagonal system for nodes 1..n."""
    n = s.size
    diag = np.empty(n)
    diag[:-1] = s[:-1] + s[1:] + m[1:-1]
    diag[-1] = s[-1] + m[-1] + robin
    ab = np.zeros((2, n))
    ab[0, 1:] = -s[1:]
    ab[1, :] = diag
    try:
        return solveh_banded(ab, rhs, lower=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - invariant breach
        raise NumericalError(f"singular temperature system: {exc}") from exc


def solve_temperature(a: RadiusProfile, b: SurfaceMeasure,
                      params: PhysicalParams, grid: Grid) -> TemperatureField:
    """Finite-volume solution of the temperature equation.

    Parameters
    ----------
    a : radius profile (enters through the flux coefficient a^2).
    b : lateral surface measure (density at midpoints plus atoms).
    params : physical data; beta(x) may vary along the fin.
    grid : uniform staggered grid.

    Returns
    -------
    TemperatureField with nodal values, T(0) = T_d exactly.
    """
    s = _face_conductances(a, grid)
    m = reaction_weights(b, params, grid)
    robin = params.beta_r * a.values[-1] ** 2
    dT = params.delta_T
    rhs = np.zeros(grid.n_cells)
    rhs[0] = s[0] * dT
    theta = np.concatenate(([dT], _solve_reduced(s, m, robin, rhs)))
    return TemperatureField(params.T_inf + theta, grid.length, excess=theta)


def solve_linearized(a: RadiusProfile, b: SurfaceMeasure, params: PhysicalParams,
                     grid: Grid, T: TemperatureField, x0: float,
                     c: float) -> LinearizedField:
    """Sensitivity of the temperature to a surface swap toward the inlet.

    Solves the same bilinear form as ``solve_temperature`` with homogeneous
    Dirichlet data at x = 0 and a point load of strength
    ``beta(x0) * c * (T(x0) - T_inf)`` on the control volume containing
    ``x0``; this is the first-order response when mass ``c * eps`` is removed
    from a shrinking window at ``x0`` (and deposited at the inlet, which the
    state does not see).
    """
    if not (0.0 < x0 < grid.length):
        raise ConfigError(f"swap point x0={x0} must be strictly inside (0, L)")
    if not (c > 0.0):
        raise ConfigError(f"swap amplitude c must be positive, got {c}")
    s = _face_conductances(a, grid)
    m = reaction_weights(b, params, grid)
    robin = params.beta_r * a.values[-1] ** 2
    theta_x0 = T.theta_at(x0, grid, params)
    strength = float(params.beta(x0)) * c * theta_x0
    rhs = np.zeros(grid.n_cells)
    for node, wgt in atom_node_weights(x0, grid):
        if node >= 1:
            rhs[node - 1] += wgt * strength
    tilde = np.concatenate(([0.0], _solve_reduced(s, m, robin, rhs)))

    i0 = atom_node_weights(x0, grid)[0][0]
    i0 = min(max(i0, 1), grid.n_cells - 1)
    q_left = s[i0 - 1] * (tilde[i0] - tilde[i0 - 1])
    q_right = s[i0] * (tilde[i0 + 1] - tilde[i0])
    return LinearizedField(tilde, x0, strength, float(q_right - q_left))


def compute_gamma(a0: float, length: float, beta: float, beta_r: float) -> float:
    """Tip-impedance factor of the constant-radius closed form.

    Equals ``(tanh(z) + r) / (1 + r tanh(z))`` with ``z = sqrt(beta/a0) * L``
    and ``r = beta_r * sqrt(a0/beta)``; this form stays finite for large z
    where the sinh/cosh ratio would overflow.
    """
    if not (a0 > 0.0 and length > 0.0 and beta > 0.0):
        raise ConfigError("compute_gamma requires a0, length, beta > 0")
    if beta_r < 0.0:
        raise ConfigError(f"beta_r must be >= 0, got {beta_r}")
    lam = np.sqrt(beta / a0)
    t = np.tanh(lam * length)
    r = beta_r / lam
    return float((t + r) / (1.0 + r * t))


def closed_form_temperature(x, a0: float, length: float,
                            params: PhysicalParams):
    """Exact temperature of the constant-radius fin with constant h.

    Evaluates ``T_inf + dT (cosh(lam x) - gamma sinh(lam x))`` through an
    exponential split that cannot overflow for deep fins (large ``lam * L``).
    """
    beta = params.constant_beta()
    beta_r = params.beta_r
    lam = np.sqrt(beta / a0)
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-15) or np.any(x > length * (1.0 + 1e-15)):
        raise ConfigError("evaluation points must lie in [0, L]")
    t = np.tanh(lam * length)
    r = beta_r / lam
    gamma = (t + r) / (1.0 + r * t)
    # cosh(lam x) - gamma sinh(lam x) = (1-gamma)/2 e^{lam x} + (1+gamma)/2 e^{-lam x}
    # with  (1-gamma) e^{lam x} = 2 (1-r) e^{lam (x-2L)} / ((1+rt)(1+e^{-2 lam L}))
    grow = (1.0 - r) / (1.0 + r * t) * np.exp(lam * (x - 2.0 * length)) \
        / (1.0 + np.exp(-2.0 * lam * length))
    decay = 0.5 * (1.0 + gamma) * np.exp(-lam * x)
    theta_hat = grow + decay
    return params.T_inf + params.delta_T * theta_hat
