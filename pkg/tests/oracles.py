"""Independent reference computations used to pin expected test values.

Everything here deliberately avoids the package's own numerical paths:
dense matrices instead of tridiagonal solvers, quadrature instead of
box-quantization extraction, closed forms and high-precision arithmetic
instead of floating shortcuts.
"""

from __future__ import annotations

import decimal
import math

import numpy as np
import scipy.integrate


# --- analytic s-wave square-well scattering ---------------------------------

def square_well_bound_states(depth: float, r0: float) -> int:
    """Number of s-wave bound states of a well of positive depth (2m = 1)."""
    if depth <= 0:
        return 0
    return int(math.floor(math.sqrt(depth) * r0 / math.pi + 0.5))


def square_well_delta(k_eval, u0: float, r0: float) -> np.ndarray:
    """Physical-branch analytic phase shift from tan(k r0 + d) = (k/k_in) tan(k_in r0).

    Built on a dense k grid, unwrapped with period pi, anchored at
    delta(0+) = n_bound * pi, then interpolated at the requested momenta.
    """
    k_eval = np.atleast_1d(np.asarray(k_eval, dtype=float))
    ks = np.linspace(1e-6, float(k_eval.max()) * 1.02 + 0.1, 40001)
    kin = np.sqrt(ks * ks - u0)
    phi = np.arctan2(ks * np.sin(kin * r0), kin * np.cos(kin * r0)) - ks * r0
    phi = np.unwrap(phi, period=np.pi)
    nb = square_well_bound_states(-u0, r0)
    phi += math.pi * round((nb * math.pi - phi[0]) / math.pi)
    return np.interp(k_eval, ks, phi)


def born_delta(k_eval, potential_on, upper: float) -> np.ndarray:
    """First-order phase shift -(1/k) integral U(x) sin^2(k x) dx by quadrature."""
    k_eval = np.atleast_1d(np.asarray(k_eval, dtype=float))
    x = np.linspace(0.0, upper, 200001)
    u = potential_on(x)
    out = np.empty_like(k_eval)
    for i, k in enumerate(k_eval):
        out[i] = -np.trapezoid(u * np.sin(k * x) ** 2, x) / k
    return out


# --- dense-matrix eigensolve -------------------------------------------------

def dense_eigen(length: float, n_points: int, potential_values, n_eigen: int):
    """Eigenpairs of the same three-point operator via a full dense matrix."""
    h = length / (n_points + 1)
    H = np.diag(np.full(n_points, 2.0 / h**2) + np.asarray(potential_values))
    off = np.full(n_points - 1, -1.0 / h**2)
    H += np.diag(off, 1) + np.diag(off, -1)
    w, v = np.linalg.eigh(H)
    return w[:n_eigen], v[:, :n_eigen] / math.sqrt(h)


# --- determinants ------------------------------------------------------------

def dense_det(matrix) -> float:
    return float(np.linalg.det(np.asarray(matrix)))


def singular_values(matrix) -> np.ndarray:
    return np.linalg.svd(np.asarray(matrix), compute_uv=False)


# --- cascade (Furry/geometric) law -------------------------------------------

def furry_pmf(n, mean_gain: float) -> np.ndarray:
    n = np.atleast_1d(np.asarray(n, dtype=float))
    p = 1.0 / mean_gain
    return p * (1.0 - p) ** (n - 1.0)


def furry_tail(threshold: int, mean_gain: float) -> float:
    """P(arrivals >= threshold) for a single seed."""
    return (1.0 - 1.0 / mean_gain) ** (threshold - 1)


def chi_square_vs_geometric(counts, mean_gain: float, min_expected: float = 5.0):
    """(statistic, dof) of binned counts against the geometric law, tail-merged."""
    counts = np.asarray(counts)
    trials = counts.size
    p = 1.0 / mean_gain
    k = 1
    while trials * p * (1.0 - p) ** (k - 1) >= min_expected:
        k += 1
    observed = np.bincount(np.minimum(counts, k), minlength=k + 1)[1:]
    probs = [p * (1.0 - p) ** (j - 1) for j in range(1, k)]
    probs.append((1.0 - p) ** (k - 1))
    expected = trials * np.asarray(probs)
    stat = float(np.sum((observed - expected) ** 2 / expected))
    return stat, len(probs) - 1


# --- WKB ----------------------------------------------------------------------

def piecewise_linear_action_closed_form(xs, vs, energy: float) -> float:
    """integral sqrt(V - E) over V > E, per-segment antiderivative (exact)."""
    total = 0.0
    for i in range(len(xs) - 1):
        x0, x1, v0, v1 = xs[i], xs[i + 1], vs[i], vs[i + 1]
        if x1 <= x0:
            continue
        g0, g1 = v0 - energy, v1 - energy
        if g0 <= 0 and g1 <= 0:
            continue
        slope = (g1 - g0) / (x1 - x0)
        if slope == 0.0:
            total += (x1 - x0) * math.sqrt(g0)
            continue
        lo = x0 if g0 > 0 else x0 - g0 / slope
        hi = x1 if g1 > 0 else x0 - g0 / slope
        glo = g0 + slope * (lo - x0)
        ghi = g0 + slope * (hi - x0)
        total += (2.0 / (3.0 * slope)) * (max(ghi, 0.0) ** 1.5 - max(glo, 0.0) ** 1.5)
    return total


def piecewise_linear_action_quad(xs, vs, energy: float) -> float:
    """Same integral via adaptive quadrature on the interpolated profile."""
    xs = np.asarray(xs, dtype=float)
    vs = np.asarray(vs, dtype=float)

    def integrand(x):
        return math.sqrt(max(float(np.interp(x, xs, vs)) - energy, 0.0))

    val, _ = scipy.integrate.quad(integrand, xs[0], xs[-1], limit=400,
                                  points=list(xs[1:-1]))
    return float(val)


# --- nucleation ---------------------------------------------------------------

_PI_50 = decimal.Decimal("3.14159265358979323846264338327950288419716939937511")


def homogeneous_barrier_decimal(sigma: float, dg: float) -> float:
    """16 pi sigma^3 / (3 dg^2) at 50-digit precision, rounded to double."""
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        s = decimal.Decimal(repr(sigma))
        g = decimal.Decimal(repr(dg))
        value = 16 * _PI_50 * s**3 / (3 * g**2)
        return float(value)
