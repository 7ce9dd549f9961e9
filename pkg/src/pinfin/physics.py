"""Material and boundary data for the fin model.

All quantities are strict SI: meters, watts, kelvins (temperature differences
only enter the equations, so Celsius values are accepted as-is).  The lateral
convection coefficient ``h`` may be a constant or a function of the axial
coordinate; the reaction coefficient used by the solver is ``2 h(x) / k`` and
the tip coefficient is ``h_r / k``.
"""

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import ConfigError

HCoefficient = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass
class PhysicalParams:
    """Conductivity, convection and boundary temperatures.

    Parameters
    ----------
    k : thermal conductivity, W/(m K).
    h : lateral convective coefficient, W/(m^2 K); scalar or callable of x.
    h_r : tip convective coefficient, W/(m^2 K).
    T_d : inlet temperature, degC.
    T_inf : ambient fluid temperature, degC.
    h_floor : lower bound enforced on h(x); keeps the reaction coercive.
    """

    k: float
    h: HCoefficient
    h_r: float
    T_d: float
    T_inf: float
    h_floor: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0.0):
            raise ConfigError(f"conductivity k must be positive, got {self.k}")
        if self.h_r < 0.0 or not np.isfinite(self.h_r):
            raise ConfigError(f"tip coefficient h_r must be >= 0, got {self.h_r}")
        if not (np.isfinite(self.T_d) and np.isfinite(self.T_inf)):
            raise ConfigError("temperatures must be finite")
        if self.T_d < self.T_inf:
            raise ConfigError(
                f"inlet temperature T_d={self.T_d} must not be below T_inf={self.T_inf}"
            )
        if self.is_constant_h and (not np.isfinite(self.h) or self.h < self.h_floor):
            raise ConfigError(f"h must be >= {self.h_floor}, got {self.h}")

    @property
    def is_constant_h(self) -> bool:
        return not callable(self.h)

    @property
    def delta_T(self) -> float:
        return self.T_d - self.T_inf

    @property
    def beta_r(self) -> float:
        return self.h_r / self.k

    def h_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.is_constant_h:
            vals = np.full(x.shape, float(self.h))
        else:
            vals = np.asarray(self.h(x), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ConfigError("h(x) produced non-finite values")
        if np.any(vals < self.h_floor):
            raise ConfigError(
                f"h(x) drops below the configured floor {self.h_floor}; "
                "the lateral surface may not be insulated"
            )
        return vals

    def beta(self, x) -> np.ndarray:
        """Lateral reaction coefficient 2 h(x) / k, in 1/m."""
        return 2.0 * self.h_at(x) / self.k

    def constant_beta(self) -> float:
        """Scalar beta for constant-h data; raises otherwise."""
        if not self.is_constant_h:
            raise ConfigError("operation requires a constant convective coefficient")
        return 2.0 * float(self.h) / self.k
