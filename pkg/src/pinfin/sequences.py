"""Explicit near-optimal designs: step densities, oscillating radii, bang-bang.

The surface-constrained flux supremum is not attained by any Lipschitz
radius; it is approached by profiles that oscillate faster and faster near
the inlet so that their surface density concentrates there.  This module
builds those designs explicitly:

* ``step_density`` - two-level density carrying all excess surface on
  ``[0, 1/m]``, total exactly ``S``;
* ``oscillating_profile`` - the matching radius made of m circular-arc
  oscillations of period ``1/m^2`` (the arc identity
  ``a sqrt(1 + a'^2) = const`` holds exactly on each arc);
* ``bang_density`` - the two-level optimizer of the capped problem with the
  switch at ``(S0 - a0 L) / (M - a0)``;
* ``reconstruct_radius`` - recover an admissible radius from a prescribed
  density by integrating the slope identity along rising/falling branches;
* ``volume_constrained_profile`` - oscillating designs that stay inside a
  volume budget while their flux grows without bound.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .functionals import heat_flux_relaxed
from .grid import Grid
from .physics import PhysicalParams
from .profiles import RadiusProfile, SurfaceMeasure
from .solver import compute_gamma, solve_temperature

MIN_CELLS_PER_HALF_PERIOD = 8


@dataclass(frozen=True)
class OscillationSpec:
    """One reconstruction interval and how many oscillations to place on it."""

    x_start: float
    x_end: float
    n_oscillations: int

    def __post_init__(self):
        if not (self.x_end > self.x_start >= 0.0):
            raise ConfigError("oscillation interval must have positive length")
        if self.n_oscillations < 1:
            raise ConfigError("need at least one oscillation per interval")

    @classmethod
    def with_default_count(cls, x_start: float, x_end: float):
        """Interval with the canonical count floor(1/width) + 1.

        Makes the per-oscillation width about width^2, hence a sup-distance
        from the baseline of the same order.
        """
        width = x_end - x_start
        if width <= 0.0:
            raise ConfigError("oscillation interval must have positive length")
        return cls(x_start, x_end, int(np.floor(1.0 / width)) + 1)


def _check_step_args(S: float, m: int, a0: float, length: float) -> None:
    if a0 <= 0.0 or length <= 0.0:
        raise ConfigError("a0 and length must be positive")
    if S < a0 * length:
        raise ConfigError(f"surface total S={S} below the minimum {a0 * length}")
    if m < 1:
        raise ConfigError(f"oscillation count m must be >= 1, got {m}")
    if S > a0 * length and 1.0 / m >= length:
        raise ConfigError(f"m={m} too small: the loaded interval 1/m must fit in (0, {length})")


def _overlap(lo: np.ndarray, hi: np.ndarray, a: float, b: float) -> np.ndarray:
    return np.clip(np.minimum(hi, b) - np.maximum(lo, a), 0.0, None)


def step_density(S: float, m: int, a0: float, grid: Grid) -> SurfaceMeasure:
    """Two-level density: a0 + (S - a0 L) m on [0, 1/m], a0 beyond.

    Cell values are exact averages, so the discrete total is S exactly for
    every grid.  Degenerate budget S = a0 L returns the constant floor.
    """
    L = grid.length
    _check_step_args(S, m, a0, L)
    x = grid.nodes
    height = (S - a0 * L) * m
    dens = a0 + height * _overlap(x[:-1], x[1:], 0.0, 1.0 / m) / grid.dx
    return SurfaceMeasure(dens, a0, L)


def _arc_offset(S: float, m: int, a0: float, length: float) -> tuple[float, float]:
    """Arc level M_m and horizontal offset sqrt(M_m^2 - a0^2)."""
    Mm = a0 + (S - a0 * length) * m
    return Mm, float(np.sqrt(max(Mm * Mm - a0 * a0, 0.0)))


def oscillating_radius(x, S: float, m: int, a0: float, length: float) -> np.ndarray:
    """Pointwise values of the m-fold oscillating profile.

    Each period of length 1/m^2 on [0, 1/m] is a rising circular arc followed
    by its mirror image; the profile is a0 on [1/m, L].  On the arcs the
    lateral density a sqrt(1 + a'^2) equals the constant arc level exactly.
    """
    _check_step_args(S, m, a0, length)
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, a0)
    if S == a0 * length:
        return out
    Mm, off = _arc_offset(S, m, a0, length)
    period = 1.0 / (m * m)
    if off < period / 2.0:
        raise ConfigError(
            f"arc construction degenerate for S={S}, m={m}: oscillations too wide"
        )
    osc = x < 1.0 / m
    t = np.mod(x[osc], period)
    t = np.where(t < period / 2.0, t, period - t)
    # factored form of Mm^2 - (off - t)^2: for large m the arc level Mm
    # dwarfs a0 and the direct difference cancels catastrophically
    delta = a0 * a0 / (Mm + off)          # = Mm - off, computed stably
    out[osc] = np.sqrt((delta + t) * (Mm + off - t))
    return out


def oscillation_peak(S: float, m: int, a0: float, length: float) -> float:
    """Sup-norm distance of the oscillating profile from the floor a0.

    Attained at every half-period midpoint; decays like 1/m as m grows."""
    if S == a0 * length:
        return 0.0
    Mm, off = _arc_offset(S, m, a0, length)
    h = 0.5 / (m * m)
    # peak^2 - a0^2 = h (Mm + off - h) - a0^2 h / (Mm + off), all positive terms
    gap = h * ((Mm + off - h) - a0 * a0 / (Mm + off))
    peak = np.sqrt(a0 * a0 + gap)
    return float(gap / (peak + a0))


def oscillating_profile_volume(S: float, m: int, a0: float,
                               length: float) -> float:
    """Exact integral of a^2 for the oscillating profile (arc antiderivative)."""
    _check_step_args(S, m, a0, length)
    if S == a0 * length:
        return a0 * a0 * length
    Mm, off = _arc_offset(S, m, a0, length)
    h = 0.5 / (m * m)
    # int_0^h a^2 = h (a0^2 + off h - h^2/3), no cancellation for off >> a0
    per_half_arc = h * (a0 * a0 + off * h - h * h / 3.0)
    return float(a0 * a0 * (length - 1.0 / m) + 2 * m * per_half_arc)


def oscillating_profile(S: float, m: int, a0: float, grid: Grid,
                        check_resolution: bool = True) -> RadiusProfile:
    """Oscillating profile sampled analytically at the grid nodes.

    With ``check_resolution`` the grid must carry at least
    ``MIN_CELLS_PER_HALF_PERIOD`` cells per half oscillation, otherwise the
    sampled slopes alias.  Callers that pair the profile with its exact step
    density (which needs no resolution) may disable the check.
    """
    if check_resolution and S > a0 * grid.length:
        half = 0.5 / (m * m)
        if half / grid.dx < MIN_CELLS_PER_HALF_PERIOD:
            raise ConfigError(
                f"grid too coarse for m={m}: {half / grid.dx:.2f} cells per "
                f"half-period, need >= {MIN_CELLS_PER_HALF_PERIOD}"
            )
    vals = oscillating_radius(grid.nodes, S, m, a0, grid.length)
    return RadiusProfile(vals, a0, grid.length)


def switch_point(M: float, S0: float, a0: float, length: float) -> float:
    """Switch abscissa (S0 - a0 L) / (M - a0) of the capped optimal density."""
    if M <= a0:
        raise ConfigError(f"cap M={M} must exceed the floor a0={a0}")
    return (S0 - a0 * length) / (M - a0)


def bang_density(M: float, S0: float, a0: float, grid: Grid) -> SurfaceMeasure:
    """Two-level density at the cap M up to the switch point, a0 beyond."""
    L = grid.length
    if S0 < a0 * L:
        raise ConfigError(f"surface budget S0={S0} below the minimum {a0 * L}")
    if S0 == a0 * L:
        return SurfaceMeasure.constant(a0, grid)
    xM = switch_point(M, S0, a0, L)
    if xM > L:
        raise ConfigError(
            f"cap M={M} cannot hold the surface budget: switch {xM} beyond L={L}"
        )
    x = grid.nodes
    dens = a0 + (M - a0) * _overlap(x[:-1], x[1:], 0.0, xM) / grid.dx
    return SurfaceMeasure(dens, a0, L)


def _rk4_branch(b_of_x, x_grid: np.ndarray, a_start: float,
                rising: bool) -> np.ndarray:
    """Integrate a' = +-sqrt(b^2 - a^2)/a along x_grid (backward if falling).

    The radius is capped by the local density after every step: where the
    density drops across a cell face the branch saturates at the lower level
    instead of leaving the domain of the square root.  The graphs are spliced
    at the branch crossing, which for admissible data occurs before any cap
    becomes active on the kept part.
    """
    sign = 1.0 if rising else -1.0

    def f(xq, aq):
        bq = b_of_x(xq)
        return sign * np.sqrt(max(bq * bq - aq * aq, 0.0)) / aq

    out = np.empty_like(x_grid)
    if rising:
        order = range(x_grid.size - 1)
        out[0] = a_start
    else:
        order = range(x_grid.size - 1, 0, -1)
        out[-1] = a_start
    for i in order:
        if rising:
            xq, aq, h = x_grid[i], out[i], x_grid[i + 1] - x_grid[i]
            k1 = f(xq, aq)
            k2 = f(xq + h / 2, aq + h / 2 * k1)
            k3 = f(xq + h / 2, aq + h / 2 * k2)
            k4 = f(xq + h, aq + h * k3)
            out[i + 1] = min(aq + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4),
                             b_of_x(x_grid[i + 1]))
        else:
            xq, aq, h = x_grid[i], out[i], x_grid[i] - x_grid[i - 1]
            k1 = f(xq, aq)
            k2 = f(xq - h / 2, aq - h / 2 * k1)
            k3 = f(xq - h / 2, aq - h / 2 * k2)
            k4 = f(xq - h, aq - h * k3)
            out[i - 1] = min(aq - h / 6 * (k1 + 2 * k2 + 2 * k3 + k4),
                             b_of_x(x_grid[i - 1]))
    return out


def reconstruct_radius(b: SurfaceMeasure, specs: list[OscillationSpec],
                       a_boundary: float, grid: Grid,
                       steps_per_oscillation: int = 256,
                       crossing_rtol: float = 1e-12) -> RadiusProfile:
    """Admissible radius whose lateral density matches ``b`` on the specs.

    On each oscillation sub-interval the rising branch is integrated forward
    from ``a_boundary`` and the falling branch backward from ``a_boundary``;
    the two graphs cross (intermediate value theorem) and are spliced at the
    crossing, located by bisection to ``crossing_rtol * a_boundary``.  Outside
    the spec intervals the radius is the flat baseline, so the identity
    a sqrt(1+a'^2) = b holds there only where b equals the baseline.

    The sup-distance from the baseline scales like the sub-interval width,
    i.e. O(1/n_oscillations) per interval.
    """
    if b.atoms:
        raise ConfigError("reconstruction requires an atom-free surface measure")
    if a_boundary < b.floor:
        raise ConfigError("baseline radius below the measure floor")
    dens = b.density

    nodes = grid.nodes
    values = np.full(nodes.size, a_boundary)
    for spec in specs:
        if spec.x_end > grid.length * (1.0 + 1e-12):
            raise ConfigError("oscillation interval extends past the fin tip")

        lo = spec.x_start + 1e-9 * grid.dx
        hi = spec.x_end - 1e-9 * grid.dx

        def b_of_x(xq, lo=lo, hi=hi):
            # clamp into the interval so stage evaluations at its exact edges
            # do not read the neighboring cell across a density jump
            xq = min(max(xq, lo), hi)
            return dens[min(max(int(xq / grid.dx), 0), grid.n_cells - 1)]

        cells = slice(max(int(spec.x_start / grid.dx), 0),
                      min(int(np.ceil(spec.x_end / grid.dx)), grid.n_cells))
        if np.min(dens[cells]) < a_boundary * (1.0 - 1e-9):
            raise NumericalError(
                f"density drops below the baseline {a_boundary} on "
                f"[{spec.x_start}, {spec.x_end}]; no admissible radius matches it"
            )
        edges = np.linspace(spec.x_start, spec.x_end, spec.n_oscillations + 1)
        for j in range(spec.n_oscillations):
            xg = np.linspace(edges[j], edges[j + 1], steps_per_oscillation + 1)
            up = _rk4_branch(b_of_x, xg, a_boundary, rising=True)
            dn = _rk4_branch(b_of_x, xg, a_boundary, rising=False)
            d = up - dn
            if d[0] >= 0.0:         # branches coincide (b at the baseline)
                spliced = np.full_like(xg, a_boundary)
            elif np.all(d < 0.0):
                raise NumericalError(
                    "rising and falling branches never cross; density does not "
                    "exceed the baseline on the interval"
                )
            else:
                ix = int(np.argmax(d >= 0.0))
                il = max(ix - 1, 0)
                xlo, xhi = xg[il], xg[ix]
                # bisection on the piecewise-linear branch gap
                for _ in range(200):
                    xmid = 0.5 * (xlo + xhi)
                    w = 0.0 if xhi == xlo else (xmid - xg[il]) / (xg[ix] - xg[il])
                    dmid = (1 - w) * d[il] + w * d[ix]
                    if abs(dmid) <= crossing_rtol * a_boundary:
                        break
                    if dmid < 0.0:
                        xlo = xmid
                    else:
                        xhi = xmid
                xi = 0.5 * (xlo + xhi)
                spliced = np.where(xg < xi, up, dn)
            sel = (nodes >= edges[j] - 1e-15) & (nodes <= edges[j + 1] + 1e-15)
            values[sel] = np.interp(nodes[sel], xg, spliced)
    return RadiusProfile(np.maximum(values, a_boundary), b.floor, grid.length)


def volume_constrained_profile(surface_target: float, V0: float, a0: float,
                               grid: Grid, params: PhysicalParams | None = None,
                               m_max: int = 1 << 20) -> RadiusProfile:
    """Oscillating profile with surface ``n`` fitting the volume budget."""
    return volume_constrained_design(surface_target, V0, a0, grid, params,
                                     m_max)[0]


def volume_constrained_design(surface_target: float, V0: float, a0: float,
                              grid: Grid, params: PhysicalParams | None = None,
                              m_max: int = 1 << 20) -> tuple[RadiusProfile, int]:
    """Oscillating profile (and its oscillation count) inside a volume budget.

    Returns the design with the smallest oscillation count m such that its
    exact volume is at most ``V0 - 1/n`` (n = surface_target) and, when
    ``params`` is given, its flux is within ``k pi beta dT / n`` of the
    concentration limit.  Found by doubling then bisecting; both conditions
    are monotone in m.  The profile's exact lateral density is
    ``step_density(n, m, a0, grid)``.
    """
    L = grid.length
    n = surface_target
    if V0 <= a0 * a0 * L:
        raise ConfigError(f"volume budget V0={V0} below the floor volume {a0 * a0 * L}")
    if n < np.ceil(a0 * L) + 1:
        raise ConfigError(
            f"surface target {n} too small; need at least ceil(a0*L)+1 = {np.ceil(a0 * L) + 1}"
        )
    vol_budget = V0 - 1.0 / n
    if vol_budget <= a0 * a0 * L:
        raise ConfigError(f"volume margin V0 - 1/n = {vol_budget} below the floor volume")

    flux_floor = -np.inf
    if params is not None:
        beta = params.constant_beta()
        gamma = compute_gamma(a0, L, beta, params.beta_r)
        scale = params.k * np.pi * beta * params.delta_T
        flux_floor = scale * (a0 ** 1.5 * gamma / np.sqrt(beta) + (n - a0 * L) - 1.0 / n)

    def flux_of(m):
        prof = RadiusProfile(oscillating_radius(grid.nodes, n, m, a0, L), a0, L)
        T = solve_temperature(prof, step_density(n, m, a0, grid), params, grid)
        return heat_flux_relaxed(prof, step_density(n, m, a0, grid), params, grid, T)

    def feasible(m):
        if oscillating_profile_volume(n, m, a0, L) > vol_budget:
            return False
        return params is None or flux_of(m) >= flux_floor

    m = max(int(np.floor(1.0 / L)) + 1, 2)
    m_lo = m
    while not feasible(m):
        m *= 2
        if m > m_max:
            raise NumericalError(
                f"no oscillation count up to {m_max} meets the volume/flux targets"
            )
    lo, hi = max(m // 2, m_lo - 1), m
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid >= m_lo and feasible(mid):
            hi = mid
        else:
            lo = mid
    return oscillating_profile(n, hi, a0, grid), hi
