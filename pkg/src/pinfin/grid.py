"""Uniform staggered grid for the one-dimensional fin.

Temperatures live at the nodes ``x_i = i * dx`` (``i = 0..n_cells``); all
coefficients (squared radius, surface density, convection) live at the cell
midpoints.  Control volumes for the conservation statements are centered at
nodes, so their faces coincide with the coefficient locations.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Grid:
    length: float
    n_cells: int

    def __post_init__(self):
        if not (np.isfinite(self.length) and self.length > 0.0):
            raise ConfigError(f"grid length must be positive, got {self.length}")
        if self.n_cells < 2:
            raise ConfigError(f"n_cells must be >= 2, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_cells + 1)

    @cached_property
    def midpoints(self) -> np.ndarray:
        x = self.nodes
        return 0.5 * (x[:-1] + x[1:])
