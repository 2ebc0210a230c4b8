"""Discretized 1D hard-wall domains and finite-range potentials.

Everything is dimensionless: hbar = 1, 2m = 1, so the free dispersion is
E = k^2 and a box of length L has levels k_n = n*pi/L exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


class Geometry(enum.Enum):
    RADIAL_SWAVE = "radial_swave"
    LINEAR_BOX = "linear_box"


class PotentialShape(enum.Enum):
    SQUARE_WELL = "square_well"
    GAUSSIAN = "gaussian"


# Beyond this many widths from the center the gaussian is set to exactly zero,
# which keeps its range genuinely finite for phase-shift asymptotics.
GAUSSIAN_CUTOFF_WIDTHS = 6.0


@dataclass(frozen=True)
class Grid:
    """Uniform interior points x_k = k*h on [0, L]; the walls at 0 and L carry u = 0."""

    length_L: float
    n_points: int
    geometry: Geometry

    def __post_init__(self):
        if isinstance(self.n_points, bool) or not isinstance(self.n_points, (int, np.integer)):
            raise ConfigurationError("n_points must be an integer")
        if self.n_points < 3:
            raise ConfigurationError(f"n_points must be >= 3, got {self.n_points}")
        if not (isinstance(self.length_L, (int, float, np.floating)) and math.isfinite(self.length_L)):
            raise ConfigurationError("length_L must be a finite number")
        if self.length_L <= 0:
            raise ConfigurationError(f"length_L must be positive, got {self.length_L}")
        if not isinstance(self.geometry, Geometry):
            raise ConfigurationError(f"unknown geometry {self.geometry!r}")
        object.__setattr__(self, "length_L", float(self.length_L))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def spacing_h(self) -> float:
        return self.length_L / (self.n_points + 1)

    def points(self) -> np.ndarray:
        """Interior points x_k = k*h, k = 1..n_points."""
        return np.arange(1, self.n_points + 1, dtype=float) * self.spacing_h


def make_grid(length_L: float, n_points: int, geometry: Geometry) -> Grid:
    return Grid(length_L, n_points, geometry)


@dataclass(frozen=True)
class PotentialSpec:
    """Finite-range potential; strength_U0 < 0 is attractive.

    SQUARE_WELL: U(x) = U0 for |x - x0| <= r0, else 0.
    GAUSSIAN:    U(x) = U0 * exp(-(x - x0)^2 / (2 r0^2)), zero beyond 6 r0.
    """

    shape: PotentialShape
    strength_U0: float
    range_r0: float
    center_x0: float

    def __post_init__(self):
        if not isinstance(self.shape, PotentialShape):
            raise ConfigurationError(f"unknown potential shape {self.shape!r}")
        for name in ("strength_U0", "range_r0", "center_x0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating)) and math.isfinite(v)):
                raise ConfigurationError(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.range_r0 <= 0:
            raise ConfigurationError(f"range_r0 must be positive, got {self.range_r0}")
        if self.center_x0 < 0:
            raise ConfigurationError(f"center_x0 must be >= 0, got {self.center_x0}")

    def support_radius(self) -> float:
        """Distance from the center beyond which the potential is exactly zero."""
        if self.shape is PotentialShape.SQUARE_WELL:
            return self.range_r0
        return GAUSSIAN_CUTOFF_WIDTHS * self.range_r0

    def is_zero(self) -> bool:
        return self.strength_U0 == 0.0


def validate_against_grid(spec: PotentialSpec, grid: Grid) -> None:
    """Check the grid-dependent invariants: finite range, center inside the domain.

    Values never depend on the geometry flag; RADIAL_SWAVE only pins the
    center to the origin.  Tails reaching past a wall are clipped by the
    hard-wall boundary itself, exactly as the radial channel clips at r = 0.
    """
    L = grid.length_L
    if not spec.range_r0 < L / 4:
        raise ConfigurationError(
            f"range_r0 = {spec.range_r0} must be < L/4 = {L / 4} (finite-range requirement)"
        )
    if grid.geometry is Geometry.RADIAL_SWAVE and spec.center_x0 != 0.0:
        raise ConfigurationError(
            f"RADIAL_SWAVE requires the potential centered at the origin, got center_x0 = {spec.center_x0}"
        )
    if spec.center_x0 > L:
        raise ConfigurationError(f"center_x0 = {spec.center_x0} lies outside [0, {L}]")


def eval_potential(spec: PotentialSpec, grid: Grid) -> np.ndarray:
    """Potential sampled at the grid interior points (pure, deterministic)."""
    validate_against_grid(spec, grid)
    x = grid.points()
    dx = x - spec.center_x0
    if spec.shape is PotentialShape.SQUARE_WELL:
        return np.where(np.abs(dx) <= spec.range_r0, spec.strength_U0, 0.0)
    u = spec.strength_U0 * np.exp(-(dx * dx) / (2.0 * spec.range_r0**2))
    u[np.abs(dx) > spec.support_radius()] = 0.0
    return u
