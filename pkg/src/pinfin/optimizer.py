"""Projected-gradient maximization of the relaxed heat flux.

The design variable is the cellwise surface density b with box bounds
``a0 <= b <= M`` (the cap may be dropped) and the budget
``dx * sum(b) <= S0``.  The state keeps the elliptic coefficient at the floor
radius while b drives the reaction, which is the relaxed functional that
concentrating designs converge to.  Since the objective is a minimum of
functions linear in b (the state energy), it is concave: projected gradient
ascent with a backtracking line search converges to the global maximizer.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .functionals import flux_gradient_density, heat_flux_relaxed
from .grid import Grid
from .physics import PhysicalParams
from .profiles import RadiusProfile, SurfaceMeasure
from .sequences import OscillationSpec, bang_density, reconstruct_radius, switch_point
from .solver import solve_temperature


@dataclass
class OptimConfig:
    a0: float
    S0: float
    M: float | None
    grid: Grid
    params: PhysicalParams
    max_iters: int = 20000
    pg_tol: float = 1e-11          # on the projected-gradient residual, W/m
    move_tol: float = 1e-13        # relative to a0, stops when iterates freeze
    armijo: float = 1e-4
    step_growth: float = 1.3
    reconstruct: bool = True
    track_trace: bool = True

    def __post_init__(self):
        if self.a0 <= 0.0:
            raise ConfigError(f"floor radius a0 must be positive, got {self.a0}")
        if self.S0 < self.a0 * self.grid.length:
            raise ConfigError(
                f"surface budget S0={self.S0} below the degenerate minimum "
                f"{self.a0 * self.grid.length}"
            )
        if self.M is not None:
            if self.M <= self.a0:
                raise ConfigError(f"cap M={self.M} must exceed the floor a0={self.a0}")
            if self.S0 > self.a0 * self.grid.length and \
                    switch_point(self.M, self.S0, self.a0, self.grid.length) > self.grid.length:
                raise ConfigError(
                    f"infeasible cap M={self.M}: the budget S0={self.S0} does not "
                    f"fit below the cap on a fin of length {self.grid.length}"
                )


@dataclass
class OptimResult:
    b_opt: SurfaceMeasure
    a_opt: RadiusProfile | None
    objective: float
    switch_estimate: float
    active_set: np.ndarray         # per-cell labels: "lower" | "free" | "upper"
    trace: np.ndarray
    converged: bool
    n_iterations: int
    pg_residual: float
    budget_active: bool
    temperature: np.ndarray = field(repr=False, default=None)


def project_box_budget(v: np.ndarray, lo: float, hi: float, budget: float,
                       dx: float, bisect_iters: int = 200) -> np.ndarray:
    """Euclidean projection onto {lo <= b <= hi, dx * sum(b) <= budget}.

    Clips to the box first; if the budget is violated, bisects on the shift mu
    so that clip(v - mu) meets the budget.  The returned point satisfies the
    budget with a one-sided error below the bisection resolution.
    """
    if budget < lo * v.size * dx * (1.0 - 1e-12):
        raise ConfigError(
            f"budget {budget} below the box minimum {lo * v.size * dx}"
        )
    b = np.clip(v, lo, hi)
    if dx * b.sum() <= budget:
        return b
    mu_lo, mu_hi = 0.0, float(np.max(v - lo))
    for _ in range(bisect_iters):
        mu = 0.5 * (mu_lo + mu_hi)
        if dx * np.clip(v - mu, lo, hi).sum() > budget:
            mu_lo = mu
        else:
            mu_hi = mu
        if mu_hi - mu_lo <= 1e-18 * max(mu_hi, 1.0):
            break
    return np.clip(v - mu_hi, lo, hi)


def _objective_and_gradient(b_dens, cfg: OptimConfig, a: RadiusProfile):
    b = SurfaceMeasure(b_dens.copy(), cfg.a0, cfg.grid.length)
    T = solve_temperature(a, b, cfg.params, cfg.grid)
    F = heat_flux_relaxed(a, b, cfg.params, cfg.grid, T)
    g = flux_gradient_density(b, cfg.params, cfg.grid, T) * cfg.grid.dx
    return F, g, T


def optimize(cfg: OptimConfig) -> OptimResult:
    """Maximize the relaxed flux over the box-and-budget density set."""
    grid, a0 = cfg.grid, cfg.a0
    dx = grid.dx
    hi = np.inf if cfg.M is None else cfg.M
    a = RadiusProfile.constant(a0, grid)
    b = project_box_budget(np.full(grid.n_cells, cfg.S0 / grid.length),
                           a0, hi, cfg.S0, dx)
    F, g, T = _objective_and_gradient(b, cfg, a)
    trace = [F]
    step = a0 / (float(np.max(g)) + 1e-300)
    converged = False
    stall = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        accepted = False
        for _ in range(60):
            b_new = project_box_budget(b + step * g, a0, hi, cfg.S0, dx)
            d = b_new - b
            if not np.any(d):
                break
            F_new, g_new, T_new = _objective_and_gradient(b_new, cfg, a)
            if F_new >= F + cfg.armijo * float(np.dot(g, d)):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        move = float(np.max(np.abs(b_new - b)))
        gain = (F_new - F) / max(abs(F), 1e-300)
        b, F, g, T = b_new, F_new, g_new, T_new
        if cfg.track_trace:
            trace.append(F)
        step *= cfg.step_growth
        if move <= cfg.move_tol * a0:
            converged = True
            break
        stall = stall + 1 if gain < 1e-15 else 0
        if stall > 50:
            converged = True
            break

    pg_res = float(np.linalg.norm(project_box_budget(b + g, a0, hi, cfg.S0, dx) - b))
    if pg_res <= cfg.pg_tol:
        converged = True

    tol_b = 1e-6 * (hi - a0 if np.isfinite(hi) else max(float(np.max(b)) - a0, a0))
    labels = np.full(grid.n_cells, "free", dtype="<U5")
    labels[b <= a0 + tol_b] = "lower"
    if np.isfinite(hi):
        labels[b >= hi - tol_b] = "upper"
    upper_cells = np.nonzero(labels == "upper")[0]
    switch = float((upper_cells[-1] + 1) * dx) if upper_cells.size else 0.0

    measure = SurfaceMeasure(b, a0, grid.length)
    a_opt = None
    if cfg.reconstruct:
        a_opt = radius_from_density(measure, grid)
    return OptimResult(
        b_opt=measure,
        a_opt=a_opt,
        objective=F,
        switch_estimate=switch,
        active_set=labels,
        trace=np.asarray(trace),
        converged=converged,
        n_iterations=it,
        pg_residual=pg_res,
        budget_active=dx * b.sum() >= cfg.S0 * (1.0 - 1e-9),
        temperature=T.values,
    )


def radius_from_density(b: SurfaceMeasure, grid: Grid,
                        cells_per_oscillation: int = 16) -> RadiusProfile:
    """Reconstruct a radius for a density via oscillations on its loaded runs."""
    a0 = b.floor
    excess = b.density > a0 * (1.0 + 1e-9)
    specs = []
    i = 0
    n = grid.n_cells
    while i < n:
        if excess[i]:
            j = i
            while j + 1 < n and excess[j + 1]:
                j += 1
            run_cells = j - i + 1
            n_osc = max(1, run_cells // cells_per_oscillation)
            specs.append(OscillationSpec(i * grid.dx, (j + 1) * grid.dx, n_osc))
            i = j + 1
        else:
            i += 1
    if not specs:
        return RadiusProfile.constant(a0, grid)
    return reconstruct_radius(b, specs, a0, grid)


@dataclass(frozen=True)
class BangStructureReport:
    switch_measured: float
    switch_expected: float
    switch_error_cells: float
    cells_between_bounds: int
    objective: float
    bang_objective: float
    objective_relative_gap: float


def verify_bang_structure(res: OptimResult, cfg: OptimConfig) -> BangStructureReport:
    """Compare an optimizer result to the two-level density with exact switch."""
    if cfg.M is None:
        raise ConfigError("bang structure check requires a finite cap M")
    xM = switch_point(cfg.M, cfg.S0, cfg.a0, cfg.grid.length)
    between = int(np.sum(res.active_set == "free"))
    bang = bang_density(cfg.M, cfg.S0, cfg.a0, cfg.grid)
    a = RadiusProfile.constant(cfg.a0, cfg.grid)
    T = solve_temperature(a, bang, cfg.params, cfg.grid)
    F_bang = heat_flux_relaxed(a, bang, cfg.params, cfg.grid, T)
    return BangStructureReport(
        switch_measured=res.switch_estimate,
        switch_expected=xM,
        switch_error_cells=abs(res.switch_estimate - xM) / cfg.grid.dx,
        cells_between_bounds=between,
        objective=res.objective,
        bang_objective=F_bang,
        objective_relative_gap=abs(res.objective - F_bang) / max(abs(F_bang), 1e-300),
    )


def sweep_M(cfg: OptimConfig, M_list, include_uncapped: bool = False) -> list[OptimResult]:
    """One optimization per cap; caps must be increasing.

    Each run owns independent state, so members could be dispatched
    concurrently; they are executed sequentially here.
    """
    caps = list(M_list)
    if any(b <= a for a, b in zip(caps, caps[1:])):
        raise ConfigError("M_list must be strictly increasing")
    results = []
    for M in caps:
        results.append(optimize(OptimConfig(
            a0=cfg.a0, S0=cfg.S0, M=M, grid=cfg.grid, params=cfg.params,
            max_iters=cfg.max_iters, pg_tol=cfg.pg_tol, move_tol=cfg.move_tol,
            armijo=cfg.armijo, step_growth=cfg.step_growth,
            reconstruct=cfg.reconstruct, track_trace=cfg.track_trace)))
    if include_uncapped:
        results.append(optimize(OptimConfig(
            a0=cfg.a0, S0=cfg.S0, M=None, grid=cfg.grid, params=cfg.params,
            max_iters=cfg.max_iters, pg_tol=cfg.pg_tol, move_tol=cfg.move_tol,
            armijo=cfg.armijo, step_growth=cfg.step_growth,
            reconstruct=cfg.reconstruct, track_trace=cfg.track_trace)))
    return results
