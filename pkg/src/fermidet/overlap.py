"""Many-body Slater-determinant overlaps and their decay with particle number.

The overlap of two N-fermion ground-state determinants is the determinant of
the N x N orbital Gram matrix M_ij = <phi_i, psi_j>_h.  Determinants are
evaluated through a pivoted LU factorization accumulating log|det| and the
sign separately: |S_N| underflows double precision long before the physics
becomes uninteresting, so the log-domain value is the primary result.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConfigurationError, NumericalError, UnsupportedGeometryError
from .grids import Geometry, Grid, PotentialSpec, make_grid
from .spectral import ADEQUACY_FACTOR, Spectrum, extract_phase_shifts, solve_spectrum

_UNIT_TOL = 1e-9  # slack on |S| <= 1 and captured weights


def orbital_overlap_matrix(bra: Spectrum, ket: Spectrum, n_occupied: int) -> np.ndarray:
    """Gram matrix M_ij = h * sum_k phi_i(x_k) psi_j(x_k) over the lowest n_occupied orbitals."""
    if bra.grid != ket.grid:
        raise ConfigurationError("spectra live on different grids")
    if n_occupied < 1:
        raise ConfigurationError(f"n_occupied must be >= 1, got {n_occupied}")
    if n_occupied > bra.n_eigenpairs or n_occupied > ket.n_eigenpairs:
        raise ConfigurationError(
            f"n_occupied = {n_occupied} exceeds retained eigenpairs "
            f"({bra.n_eigenpairs}, {ket.n_eigenpairs})"
        )
    h = bra.grid.spacing_h
    return h * (bra.orbitals[:, :n_occupied].T @ ket.orbitals[:, :n_occupied])


@dataclass(frozen=True)
class SlaterOverlap:
    """Signed determinant overlap in log form; abs() == 0 flags singularity."""

    log_abs: float
    sign: int
    singular: bool = False

    @property
    def abs(self) -> float:
        if self.singular or self.log_abs == -math.inf:
            return 0.0
        return math.exp(self.log_abs)

    @property
    def value(self) -> float:
        return self.sign * self.abs


def _logdet_lu(matrix: np.ndarray) -> SlaterOverlap:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(matrix, check_finite=True)
    diag = np.diag(lu)
    if np.any(diag == 0.0):
        return SlaterOverlap(log_abs=-math.inf, sign=0, singular=True)
    sign = 1 if (np.count_nonzero(piv != np.arange(piv.size)) % 2 == 0) else -1
    sign *= 1 if (np.count_nonzero(diag < 0) % 2 == 0) else -1
    return SlaterOverlap(log_abs=float(np.sum(np.log(np.abs(diag)))), sign=int(sign))


def slater_overlap(bra: Spectrum, ket: Spectrum, n_occupied: int) -> SlaterOverlap:
    """S_N = det of the occupied-orbital Gram matrix, underflow-safe."""
    return _logdet_lu(orbital_overlap_matrix(bra, ket, n_occupied))


@dataclass(frozen=True)
class PowerLawFit:
    """Least squares of log|S| vs log N; beta > 0 means decay."""

    beta: float
    intercept: float
    r_squared: float
    n_excluded: int = 0
    degenerate: bool = False


def fit_exponent(n_values, abs_overlaps) -> PowerLawFit:
    """Fit |S_N| ~ C * N^(-beta) on log-log axes.

    Zero overlaps are excluded (log undefined) and counted in n_excluded;
    fewer than 4 surviving points is an error.  Constant data has no defined
    r^2 and comes back flagged degenerate with beta = 0.
    """
    n = np.asarray(n_values, dtype=float)
    s = np.asarray(abs_overlaps, dtype=float)
    if n.shape != s.shape or n.ndim != 1:
        raise ConfigurationError("n_values and abs_overlaps must be 1D of equal length")
    if np.any(s < 0):
        raise ConfigurationError("overlap magnitudes cannot be negative")
    keep = s > 0.0
    n_excluded = int(np.count_nonzero(~keep))
    n, s = n[keep], s[keep]
    if n.size < 4:
        raise ConfigurationError(
            f"power-law fit needs >= 4 positive points, have {n.size} "
            f"({n_excluded} excluded as zero)"
        )
    x = np.log(n)
    y = np.log(s)
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    intercept, slope = float(coef[0]), float(coef[1])
    resid = y - design @ coef
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
    if ss_tot == 0.0:
        return PowerLawFit(beta=0.0, intercept=intercept, r_squared=math.nan,
                           n_excluded=n_excluded, degenerate=True)
    return PowerLawFit(beta=-slope, intercept=intercept,
                       r_squared=1.0 - ss_res / ss_tot, n_excluded=n_excluded)


@dataclass(frozen=True)
class OverlapScan:
    """Fixed-density ladder of |S_N| with its power-law fit and per-N Fermi phase."""

    n_values: np.ndarray
    abs_overlaps: np.ndarray
    log_abs_overlaps: np.ndarray
    signs: np.ndarray
    delta_f_per_n: np.ndarray
    box_lengths: np.ndarray
    fit: PowerLawFit
    density: float
    adequacy_factor: float

    def __post_init__(self):
        for name in ("n_values", "abs_overlaps", "log_abs_overlaps", "signs",
                      "delta_f_per_n", "box_lengths"):
            a = np.asarray(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def log_fit(self) -> tuple[float, float, float]:
        return (self.fit.beta, self.fit.intercept, self.fit.r_squared)


def scan_grid(n_fermions: int, density: float, range_r0: float | None,
              adequacy_factor: float = ADEQUACY_FACTOR, n_top: int | None = None,
              geometry: Geometry = Geometry.RADIAL_SWAVE) -> Grid:
    """Grid for one ladder point: L = N/density, h at the adequacy limit.

    Pinning h to the limit keeps h/lambda_F identical across the ladder, so the
    N dependence is isolated from resolution effects.  n_top widens the rule to
    cover retained orbitals above the Fermi level (coefficient windows).
    """
    L = n_fermions / density
    lam_top = 2.0 * L / (n_top if n_top is not None else n_fermions)
    h_max = lam_top / adequacy_factor
    if range_r0 is not None:
        h_max = min(h_max, range_r0 / adequacy_factor)
    n_points = math.ceil(L / h_max) - 1
    return make_grid(L, n_points, geometry)


def overlap_scan(potential: PotentialSpec | None, n_values, density: float,
                 adequacy_factor: float = ADEQUACY_FACTOR) -> OverlapScan:
    """|S_N| along N with L = N/density, grid regenerated per N.

    The scan runs in RADIAL_SWAVE geometry with the scatterer at the origin so
    the Fermi-level phase shift is recorded alongside each point.  potential
    may be None (or zero strength) for the free identity scan.
    """
    ns = [int(v) for v in n_values]
    if len(ns) < 4:
        raise ConfigurationError("overlap_scan needs at least 4 N values for the fit")
    if sorted(set(ns)) != ns:
        raise ConfigurationError("n_values must be strictly increasing")
    if ns[0] < 2:
        raise ConfigurationError("N must be >= 2")
    if not density > 0:
        raise ConfigurationError(f"density must be positive, got {density}")
    if potential is not None and not potential.is_zero() and potential.center_x0 != 0.0:
        raise ConfigurationError("overlap_scan places the potential at the origin")

    free_pot = potential is None or potential.is_zero()
    r0 = None if free_pot else potential.range_r0
    logs = np.empty(len(ns))
    signs = np.empty(len(ns), dtype=int)
    deltas = np.empty(len(ns))
    lengths = np.empty(len(ns))
    for i, n_f in enumerate(ns):
        grid = scan_grid(n_f, density, r0, adequacy_factor)
        lengths[i] = grid.length_L
        free = solve_spectrum(grid, None, n_f)
        inter = free if free_pot else solve_spectrum(grid, potential, n_f)
        s = slater_overlap(free, inter, n_f)
        if not s.singular and s.log_abs > math.log1p(_UNIT_TOL):
            raise NumericalError(f"|S_{n_f}| = {s.abs} exceeds 1; normalization broken")
        logs[i] = s.log_abs
        signs[i] = s.sign
        table = extract_phase_shifts(free, inter, fermi_index=n_f)
        deltas[i] = table.delta_F_physical
    abs_overlaps = np.exp(logs)
    fit = fit_exponent(ns, abs_overlaps)
    return OverlapScan(
        n_values=np.asarray(ns), abs_overlaps=abs_overlaps, log_abs_overlaps=logs,
        signs=signs, delta_f_per_n=deltas, box_lengths=lengths, fit=fit,
        density=float(density), adequacy_factor=float(adequacy_factor),
    )


@dataclass(frozen=True)
class SiteOverlaps:
    """Determinant overlaps for an impurity at two sites, at one particle number."""

    n_occupied: int
    box_length: float
    cross: SlaterOverlap
    a_vs_free: SlaterOverlap
    b_vs_free: SlaterOverlap


def _site_spectra(grid: Grid, shape, strength: float, range_r0: float,
                  center_a: float, center_b: float, n_eigenpairs: int):
    if grid.geometry is not Geometry.LINEAR_BOX:
        raise UnsupportedGeometryError("site overlaps require LINEAR_BOX geometry")
    spec_a = PotentialSpec(shape, strength, range_r0, center_a)
    spec_b = PotentialSpec(shape, strength, range_r0, center_b)
    separation = abs(center_a - center_b)
    if separation != 0.0 and separation < 4.0 * range_r0:
        raise ConfigurationError(
            f"site separation {separation} below 4*r0 = {4.0 * range_r0}; potentials overlap"
        )
    free = solve_spectrum(grid, None, n_eigenpairs)
    at_a = solve_spectrum(grid, spec_a, n_eigenpairs)
    at_b = at_a if separation == 0.0 else solve_spectrum(grid, spec_b, n_eigenpairs)
    return free, at_a, at_b


def impurity_site_overlap(grid: Grid, shape, strength: float, range_r0: float,
                          center_a: float, center_b: float,
                          n_occupied: int) -> SiteOverlaps:
    """|<Y(R_a), Y(R_b)>| and each site against the free ground state.

    Identical centers are allowed as the degenerate identity case; distinct
    centers must be at least 4*r0 apart so the two potentials do not overlap.
    """
    free, at_a, at_b = _site_spectra(grid, shape, strength, range_r0,
                                     center_a, center_b, n_occupied)
    return SiteOverlaps(
        n_occupied=n_occupied,
        box_length=grid.length_L,
        cross=slater_overlap(at_a, at_b, n_occupied),
        a_vs_free=slater_overlap(at_a, free, n_occupied),
        b_vs_free=slater_overlap(at_b, free, n_occupied),
    )


def site_overlap_ladder(shape, strength: float, range_r0: float,
                        center_a: float, center_b: float, n_values,
                        density: float,
                        adequacy_factor: float = ADEQUACY_FACTOR) -> list[SiteOverlaps]:
    """impurity_site_overlap along a fixed-density ladder, L = N / density.

    The sites stay at fixed absolute positions while the box grows with N;
    raising N on a fixed box would instead push the Fermi level up and make a
    fixed-strength scatterer relatively weaker, so the overlaps would not decay.
    """
    ns = [int(v) for v in n_values]
    if ns != sorted(set(ns)) or ns[0] < 1:
        raise ConfigurationError("n_values must be strictly increasing positive integers")
    if not density > 0:
        raise ConfigurationError(f"density must be positive, got {density}")
    out = []
    for n_f in ns:
        grid = scan_grid(n_f, density, range_r0, adequacy_factor,
                         geometry=Geometry.LINEAR_BOX)
        out.append(impurity_site_overlap(grid, shape, strength, range_r0,
                                         center_a, center_b, n_f))
    return out


@dataclass(frozen=True)
class DecompositionReport:
    """Coefficients of the interacting ground state over low-order free determinants.

    Free-basis determinants are the ground configuration plus every
    replacement of up to excitation_order occupied orbitals by orbitals from
    the window above the Fermi level.  max_coefficient is the largest |A| over
    that family, captured_weight the sum of |A|^2.
    """

    n_occupied: int
    excitation_order: int
    window: int
    ground_coefficient: float
    max_coefficient: float
    captured_weight: float


def coefficient_scan(free: Spectrum, interacting: Spectrum, n_occupied: int,
                     excitation_order: int, window: int | None = None) -> DecompositionReport:
    """Enumerate particle-hole coefficients up to order 2.

    Each coefficient is det of the Gram matrix with replaced free-orbital
    rows.  Those determinants are evaluated through the row-update identity
    A_S / A_0 = det(B[P, H]) with B = M_ext M_occ^{-1}, which reduces the
    order-2 family to 2x2 minors of B; the squared-coefficient sums then
    collapse to Frobenius / Cauchy-Binet closed forms.
    """
    if excitation_order not in (0, 1, 2):
        raise ConfigurationError(
            f"excitation_order = {excitation_order} unsupported (combinatorial blowup above 2)"
        )
    if window is None:
        window = 2 * n_occupied
    if window < 1:
        raise ConfigurationError(f"window must be >= 1, got {window}")
    n_top = n_occupied + window
    if free.n_eigenpairs < n_top:
        raise ConfigurationError(
            f"free spectrum retains {free.n_eigenpairs} orbitals, need {n_top} for the window"
        )
    if interacting.n_eigenpairs < n_occupied:
        raise ConfigurationError("interacting spectrum retains fewer orbitals than n_occupied")
    if free.grid != interacting.grid:
        raise ConfigurationError("spectra live on different grids")

    h = free.grid.spacing_h
    m_full = h * (free.orbitals[:, :n_top].T @ interacting.orbitals[:, :n_occupied])
    m_occ = m_full[:n_occupied, :]
    s0 = _logdet_lu(m_occ)
    if s0.singular:
        raise NumericalError("ground Gram matrix singular; coefficients undefined")
    a0 = s0.abs
    max_coeff = a0
    captured = a0 * a0
    if excitation_order >= 1:
        lu_piv = sla.lu_factor(m_occ)
        # B[p, hole] = single-replacement ratio det(A_{hole -> p}) / det(A_0)
        b = sla.lu_solve(lu_piv, m_full[n_occupied:, :].T, trans=1).T
        max_coeff = max(max_coeff, a0 * float(np.max(np.abs(b))))
        captured += a0 * a0 * float(np.sum(b * b))
    if excitation_order == 2:
        gram_b = b.T @ b
        tr = float(np.trace(gram_b))
        tr2 = float(np.sum(gram_b * gram_b))  # tr(S^2) for symmetric S
        captured += a0 * a0 * 0.5 * (tr * tr - tr2)
        best = 0.0
        for h1 in range(n_occupied - 1):
            u = b[:, h1]
            for h2 in range(h1 + 1, n_occupied):
                d = np.outer(u, b[:, h2])
                d = d - d.T  # entry (p1, p2) is the 2x2 minor for holes (h1, h2)
                best = max(best, float(np.max(np.abs(d))))
        max_coeff = max(max_coeff, a0 * best)
    if captured > 1.0 + _UNIT_TOL:
        raise NumericalError(f"captured weight {captured} exceeds 1")
    return DecompositionReport(
        n_occupied=n_occupied, excitation_order=excitation_order, window=window,
        ground_coefficient=a0, max_coefficient=max_coeff, captured_weight=captured,
    )
