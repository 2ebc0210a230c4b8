"""Single-particle spectra on hard-wall grids and scattering phase shifts.

The Hamiltonian is -u'' + U(x) u with u(0) = u(L) = 0, discretized by the
standard three-point second difference on the uniform grid.  The discrete
free levels are E_n = (4/h^2) sin^2(n pi h / (2L)), which converge to
(n pi / L)^2 at O(h^2).

Phase shifts are read off box quantization: an interacting level with
momentum k' satisfies k' L + delta(k') = n pi.  Momenta are inverted
through the *discrete* dispersion k = (2/h) asin(h sqrt(E) / 2); this is
what makes the U = 0 case give deltas at the 1e-8 level instead of being
polluted by O(h^2) dispersion error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConfigurationError, NumericalError, UnsupportedGeometryError
from .grids import Geometry, Grid, PotentialSpec, eval_potential, validate_against_grid

# Hard resolution floor: h must not exceed (shortest relevant length)/ADEQUACY_FACTOR,
# where the relevant lengths are the potential range and the wavelength of the
# highest retained orbital.  Under-resolved grids silently corrupt delta_F and
# through it every overlap exponent, so this is an error, not a warning.
ADEQUACY_FACTOR = 20.0

_ORTHONORMALITY_TOL = 1e-10
_SIGN_SAMPLE = 32  # orbitals sampled for the construction-time orthonormality check


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenpairs of one discretized single-particle problem.

    orbitals[:, j] is the j-th eigenvector sampled on the interior points,
    normalized so that h * sum(orbital**2) = 1.
    """

    energies: np.ndarray
    orbitals: np.ndarray
    grid: Grid
    potential: PotentialSpec | None

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        v = np.asarray(self.orbitals, dtype=float)
        if v.shape != (self.grid.n_points, e.shape[0]):
            raise ConfigurationError(
                f"orbitals shape {v.shape} inconsistent with grid ({self.grid.n_points}) "
                f"and energies ({e.shape[0]})"
            )
        if not np.all(np.diff(e) > 0):
            raise NumericalError("eigenvalues are not strictly ascending")
        e.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "orbitals", v)
        defect = self.orthonormality_defect(max_orbitals=_SIGN_SAMPLE)
        if defect > _ORTHONORMALITY_TOL:
            raise NumericalError(
                f"orbital orthonormality defect {defect:.3e} exceeds {_ORTHONORMALITY_TOL:.0e}"
            )

    @property
    def n_eigenpairs(self) -> int:
        return self.energies.shape[0]

    def orthonormality_defect(self, max_orbitals: int | None = None) -> float:
        """max |<phi_i, phi_j>_h - delta_ij| over a (sub)set of orbitals."""
        m = self.n_eigenpairs
        if max_orbitals is not None and max_orbitals < m:
            idx = np.unique(np.linspace(0, m - 1, max_orbitals).astype(int))
        else:
            idx = np.arange(m)
        block = self.orbitals[:, idx]
        gram = self.grid.spacing_h * (block.T @ block)
        return float(np.max(np.abs(gram - np.eye(idx.size))))


def _adequacy_limit(grid: Grid, potential: PotentialSpec | None, n_eigenpairs: int,
                    factor: float = ADEQUACY_FACTOR) -> float:
    lam_top = 2.0 * grid.length_L / n_eigenpairs  # wavelength of the highest retained level
    limit = lam_top / factor
    if potential is not None and not potential.is_zero():
        limit = min(limit, potential.range_r0 / factor)
    return limit


def assert_grid_adequate(grid: Grid, potential: PotentialSpec | None, n_eigenpairs: int) -> None:
    limit = _adequacy_limit(grid, potential, n_eigenpairs)
    h = grid.spacing_h
    if h > limit * (1.0 + 1e-12):
        raise ConfigurationError(
            f"grid spacing h = {h:.6g} violates the adequacy rule h <= {limit:.6g} "
            f"(= min(range_r0, 2L/n_top)/{ADEQUACY_FACTOR:g} for n_top = {n_eigenpairs})"
        )


def _tridiagonal(grid: Grid, potential: PotentialSpec | None):
    h = grid.spacing_h
    diag = np.full(grid.n_points, 2.0 / h**2)
    if potential is not None and not potential.is_zero():
        diag = diag + eval_potential(potential, grid)
    elif potential is not None:
        validate_against_grid(potential, grid)
    off = np.full(grid.n_points - 1, -1.0 / h**2)
    return diag, off


def solve_spectrum(grid: Grid, potential: PotentialSpec | None, n_eigenpairs: int) -> Spectrum:
    """Lowest n_eigenpairs of -u'' + U(x) u with hard walls.

    Orbitals come back h-orthonormal with a canonical sign (largest-magnitude
    component positive), so repeated solves are bit-reproducible.
    """
    if n_eigenpairs < 1:
        raise ConfigurationError(f"n_eigenpairs must be >= 1, got {n_eigenpairs}")
    if n_eigenpairs > grid.n_points:
        raise ConfigurationError(
            f"n_eigenpairs = {n_eigenpairs} exceeds the {grid.n_points} grid points"
        )
    assert_grid_adequate(grid, potential, n_eigenpairs)
    diag, off = _tridiagonal(grid, potential)
    try:
        energies, vecs = sla.eigh_tridiagonal(
            diag, off, select="i", select_range=(0, n_eigenpairs - 1), lapack_driver="stemr"
        )
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalError(
            f"tridiagonal eigensolver failed on n = {grid.n_points}, "
            f"n_eigenpairs = {n_eigenpairs}: {exc}"
        ) from exc
    h = grid.spacing_h
    # Exact h-normalization; LAPACK gives unit 2-norm but renormalizing pins the
    # Gram diagonal to 1 at machine precision, which the overlap identities rely on.
    vecs = vecs / np.sqrt(h * np.sum(vecs * vecs, axis=0))
    peak = np.argmax(np.abs(vecs), axis=0)
    flip = vecs[peak, np.arange(vecs.shape[1])] < 0
    vecs[:, flip] *= -1.0
    return Spectrum(energies=energies, orbitals=vecs, grid=grid, potential=potential)


def discrete_momentum(energies: np.ndarray, h: float) -> np.ndarray:
    """Invert the discrete dispersion E = (4/h^2) sin^2(k h / 2) for E >= 0."""
    arg = h * np.sqrt(np.maximum(energies, 0.0)) / 2.0
    if np.any(arg > 1.0 + 1e-12):
        raise NumericalError("eigenvalue above the discrete band edge; grid far too coarse")
    return (2.0 / h) * np.arcsin(np.minimum(arg, 1.0))


@dataclass(frozen=True)
class PhaseShiftTable:
    """delta_n = n pi - k'_n L for the positive-energy levels, on one continuous branch.

    Box quantization determines delta only mod pi.  The branch here starts from
    the lowest-momentum delta reduced into (-pi/2, pi/2] and continues by
    nearest-branch steps; branch_offset_pi records how many multiples of pi the
    reduction removed (one per bound state, by Levinson counting), so the
    physical branch is deltas + branch_offset_pi * pi.
    """

    momenta: np.ndarray
    deltas: np.ndarray
    level_indices: np.ndarray
    fermi_index: int
    delta_F: float
    n_bound: int
    branch_offset_pi: int

    def __post_init__(self):
        for name in ("momenta", "deltas", "level_indices"):
            a = np.asarray(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def deltas_physical(self) -> np.ndarray:
        return self.deltas + self.branch_offset_pi * math.pi

    @property
    def delta_F_physical(self) -> float:
        return self.delta_F + self.branch_offset_pi * math.pi


def extract_phase_shifts(free: Spectrum, interacting: Spectrum,
                         fermi_index: int | None = None) -> PhaseShiftTable:
    """Phase shifts of the interacting spectrum relative to the free one.

    Both spectra must live on the same RADIAL_SWAVE grid with the potential at
    the origin.  Negative-energy levels are bound states: they carry no delta
    but shift the indices of everything above them, which is exactly how the
    Levinson pi-per-bound-state offset enters the raw values.
    """
    if free.grid != interacting.grid:
        raise ConfigurationError("free and interacting spectra are on different grids")
    if free.grid.geometry is not Geometry.RADIAL_SWAVE:
        raise UnsupportedGeometryError(
            "phase shifts are defined for RADIAL_SWAVE geometry only"
        )
    if free.potential is not None and not free.potential.is_zero():
        raise ConfigurationError("the first argument must be the U = 0 spectrum")
    pot = interacting.potential
    if pot is not None and not pot.is_zero() and pot.center_x0 != 0.0:
        raise ConfigurationError("interacting potential must be centered at the origin")

    n_levels = min(free.n_eigenpairs, interacting.n_eigenpairs)
    if fermi_index is None:
        fermi_index = n_levels
    if not 1 <= fermi_index <= n_levels:
        raise ConfigurationError(
            f"fermi_index = {fermi_index} outside the {n_levels} available levels"
        )

    grid = free.grid
    h = grid.spacing_h
    L = grid.length_L
    e_int = interacting.energies[:n_levels]
    n_bound = int(np.sum(e_int <= 0.0))
    scattering = np.arange(n_bound, n_levels)
    if scattering.size == 0:
        raise ConfigurationError("no positive-energy levels to extract phase shifts from")

    k_free = discrete_momentum(free.energies[scattering], h)
    k_int = discrete_momentum(e_int[scattering], h)
    raw = (k_free - k_int) * L

    # Reduce the first point into (-pi/2, pi/2], then continue nearest-branch.
    shift0 = math.ceil((raw[0] - math.pi / 2) / math.pi)
    deltas = np.empty_like(raw)
    deltas[0] = raw[0] - shift0 * math.pi
    for i in range(1, raw.size):
        deltas[i] = raw[i] - math.pi * round((raw[i] - deltas[i - 1]) / math.pi)
    jumps = np.abs(np.diff(deltas))
    if jumps.size and jumps.max() >= math.pi / 2:
        raise NumericalError(
            f"phase-shift branch not smooth: max level-to-level jump {jumps.max():.3f} rad"
        )

    level_indices = scattering + 1  # 1-based absolute level numbers
    if fermi_index <= n_bound:
        raise ConfigurationError(
            f"fermi_index = {fermi_index} points at a bound level; no phase shift there"
        )
    delta_f = float(deltas[fermi_index - 1 - n_bound])
    return PhaseShiftTable(
        momenta=k_int,
        deltas=deltas,
        level_indices=level_indices,
        fermi_index=int(fermi_index),
        delta_F=delta_f,
        n_bound=n_bound,
        branch_offset_pi=int(shift0),
    )


def bo_energy(grid: Grid, potential_shape, strength: float, range_r0: float,
              center_positions, n_occupied: int) -> np.ndarray:
    """Total energy of the n_occupied lowest orbitals vs impurity position.

    E(R) = sum of the lowest n_occupied eigenvalues with the potential centered
    at R; the LINEAR_BOX analogue of an adiabatic energy surface.
    """
    if grid.geometry is not Geometry.LINEAR_BOX:
        raise UnsupportedGeometryError("bo_energy requires LINEAR_BOX geometry")
    if n_occupied < 1 or n_occupied > grid.n_points:
        raise ConfigurationError(f"n_occupied = {n_occupied} out of range")
    centers = [float(c) for c in center_positions]
    specs = [PotentialSpec(potential_shape, strength, range_r0, c) for c in centers]
    for spec in specs:
        validate_against_grid(spec, grid)
        if not (range_r0 <= spec.center_x0 <= grid.length_L - range_r0):
            raise ConfigurationError(
                f"center {spec.center_x0} closer than r0 = {range_r0} to a wall"
            )
        assert_grid_adequate(grid, spec, n_occupied)
    out = np.empty(len(centers))
    for i, spec in enumerate(specs):
        diag, off = _tridiagonal(grid, spec)
        try:
            w = sla.eigh_tridiagonal(
                diag, off, select="i", select_range=(0, n_occupied - 1),
                eigvals_only=True, lapack_driver="stebz",
            )
        except (sla.LinAlgError, ValueError) as exc:
            raise NumericalError(f"eigenvalue solve failed at center {spec.center_x0}: {exc}") from exc
        out[i] = float(np.sum(w))
    return out
