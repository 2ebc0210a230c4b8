"""Metastable-state kinetics: WKB tunneling lifetimes and nucleation barriers.

Units stay dimensionless (hbar = 1, 2m = 1), so the WKB decay rate of a state
at energy E behind a barrier V(x) is nu * exp(-2 * integral sqrt(V - E)).
Nucleation follows classical theory for a spherical critical bubble, with the
usual contact-angle factor for a seeded (heterogeneous) transition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UnsupportedProfileError

_ROOT_TOL = 1e-10
_PANELS = 64  # Simpson panels per profile segment


@dataclass(frozen=True)
class BarrierProfile:
    """Piecewise-linear V(x) on [0, x_max] with a metastable level at energy_E.

    breakpoints_x must be ascending; a repeated x encodes a vertical jump
    (e.g. the wall of a rectangular barrier).  V must exceed energy_E on
    exactly one interval strictly inside the domain.
    """

    breakpoints_x: tuple
    breakpoints_v: tuple
    energy_E: float
    attempt_frequency: float

    def __post_init__(self):
        xs = tuple(float(x) for x in self.breakpoints_x)
        vs = tuple(float(v) for v in self.breakpoints_v)
        if len(xs) != len(vs) or len(xs) < 2:
            raise ConfigurationError("breakpoints_x and breakpoints_v must match with length >= 2")
        if any(not math.isfinite(x) for x in xs) or any(not math.isfinite(v) for v in vs):
            raise ConfigurationError("breakpoints must be finite")
        if any(b < a for a, b in zip(xs, xs[1:])):
            raise ConfigurationError("breakpoints_x must be ascending")
        if xs[0] != 0.0:
            raise ConfigurationError("profile must start at x = 0")
        if xs[-1] <= 0.0:
            raise ConfigurationError("profile must have positive extent")
        if not (math.isfinite(self.energy_E)):
            raise ConfigurationError("energy_E must be finite")
        if not (self.attempt_frequency > 0 and math.isfinite(self.attempt_frequency)):
            raise ConfigurationError("attempt_frequency must be positive")
        object.__setattr__(self, "breakpoints_x", xs)
        object.__setattr__(self, "breakpoints_v", vs)
        object.__setattr__(self, "energy_E", float(self.energy_E))
        object.__setattr__(self, "attempt_frequency", float(self.attempt_frequency))


def _segments(profile: BarrierProfile):
    xs, vs = profile.breakpoints_x, profile.breakpoints_v
    return [
        (xs[i], xs[i + 1], vs[i], vs[i + 1])
        for i in range(len(xs) - 1)
        if xs[i + 1] > xs[i]
    ]


def _above_intervals(profile: BarrierProfile):
    """Intervals where V(x) - E > 0, merged across touching endpoints."""
    e = profile.energy_E
    raw = []
    for x0, x1, v0, v1 in _segments(profile):
        g0, g1 = v0 - e, v1 - e
        if g0 <= 0 and g1 <= 0:
            continue
        if g0 > 0 and g1 > 0:
            raw.append((x0, x1))
            continue
        # one crossing inside the segment; bisection per the contract
        lo, hi = x0, x1
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            gm = g0 + (g1 - g0) * (mid - x0) / (x1 - x0)
            if (gm > 0) == (g0 > 0):
                lo = mid
            else:
                hi = mid
            if hi - lo <= _ROOT_TOL:
                break
        root = 0.5 * (lo + hi)
        raw.append((x0, root) if g0 > 0 else (root, x1))
    merged = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1] + _ROOT_TOL:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _barrier_interval(profile: BarrierProfile):
    intervals = _above_intervals(profile)
    if not intervals:
        raise ConfigurationError("no barrier above energy_E; the state is not metastable")
    if len(intervals) > 1:
        raise UnsupportedProfileError(
            f"{len(intervals)} disjoint barrier intervals; only single-barrier profiles supported"
        )
    a, b = intervals[0]
    if a <= 0.0 or b >= profile.breakpoints_x[-1]:
        raise ConfigurationError("barrier must lie strictly inside the domain")
    return a, b


def _simpson(fvals: np.ndarray, dx: float) -> float:
    return dx / 3.0 * float(fvals[0] + fvals[-1] + 4.0 * fvals[1:-1:2].sum() + 2.0 * fvals[2:-1:2].sum())


def _segment_action(p: float, q: float, gp: float, gq: float) -> float:
    """integral of sqrt(g) over [p, q] for linear g with g >= 0, Simpson per contract.

    When g vanishes at an endpoint the integrand has a sqrt kink; substituting
    x = root +/- u^2 turns it into a polynomial, which Simpson integrates
    exactly.  Rectangular (constant) pieces are exact as well.
    """
    if q <= p:
        return 0.0
    if gp == gq:
        return (q - p) * math.sqrt(max(gp, 0.0))
    slope = (gq - gp) / (q - p)
    if gp <= 0.0:  # root at p
        umax = math.sqrt(q - p)
        u = np.linspace(0.0, umax, 2 * _PANELS + 1)
        f = 2.0 * math.sqrt(slope) * u * u
        return _simpson(f, u[1] - u[0])
    if gq <= 0.0:  # root at q
        umax = math.sqrt(q - p)
        u = np.linspace(0.0, umax, 2 * _PANELS + 1)
        f = 2.0 * math.sqrt(-slope) * u * u
        return _simpson(f, u[1] - u[0])
    x = np.linspace(p, q, 2 * _PANELS + 1)
    f = np.sqrt(gp + slope * (x - p))
    return _simpson(f, x[1] - x[0])


def wkb_action(profile: BarrierProfile) -> float:
    """integral over the barrier of sqrt(V(x) - E)."""
    a, b = _barrier_interval(profile)
    e = profile.energy_E
    total = 0.0
    for x0, x1, v0, v1 in _segments(profile):
        lo, hi = max(x0, a), min(x1, b)
        if hi <= lo:
            continue
        # an endpoint strictly inside the segment is a bisected root of V - E
        g_lo = 0.0 if lo > x0 else v0 - e
        g_hi = 0.0 if hi < x1 else v1 - e
        total += _segment_action(lo, hi, g_lo, g_hi)
    return total


@dataclass(frozen=True)
class WkbRate:
    action: float
    log_rate: float

    @property
    def rate(self) -> float:
        try:
            return math.exp(self.log_rate)
        except OverflowError:
            return math.inf

    @property
    def lifetime(self) -> float:
        r = self.rate
        return math.inf if r == 0.0 else 1.0 / r


def wkb_rate(profile: BarrierProfile) -> WkbRate:
    """Decay rate nu * exp(-2 * action) of the metastable level."""
    action = wkb_action(profile)
    return WkbRate(action=action, log_rate=math.log(profile.attempt_frequency) - 2.0 * action)


@dataclass(frozen=True)
class RateRatio:
    ln_ratio: float

    @property
    def log10_ratio(self) -> float:
        return self.ln_ratio / math.log(10.0)

    @property
    def ratio(self) -> float:
        try:
            return math.exp(self.ln_ratio)
        except OverflowError:
            return math.inf


def lifetime_ratio(unperturbed: BarrierProfile, perturbed: BarrierProfile) -> RateRatio:
    """rate(perturbed) / rate(unperturbed); > 1 when the particle shrank the barrier."""
    ru = wkb_rate(unperturbed)
    rp = wkb_rate(perturbed)
    return RateRatio(ln_ratio=rp.log_rate - ru.log_rate)


@dataclass(frozen=True)
class NucleationParams:
    """Classical nucleation inputs: all positive, theta in [0, pi]."""

    surface_tension_sigma: float
    bulk_drive_dg: float
    contact_angle_theta: float
    temperature_kT: float

    def __post_init__(self):
        for name in ("surface_tension_sigma", "bulk_drive_dg", "temperature_kT"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ConfigurationError(f"{name} must be strictly positive, got {v}")
            object.__setattr__(self, name, v)
        th = float(self.contact_angle_theta)
        if not (0.0 <= th <= math.pi):
            raise ConfigurationError(f"contact_angle_theta must be in [0, pi], got {th}")
        object.__setattr__(self, "contact_angle_theta", th)


def homogeneous_barrier(params: NucleationParams) -> float:
    """Bulk critical-bubble barrier 16 pi sigma^3 / (3 dg^2)."""
    s, dg = params.surface_tension_sigma, params.bulk_drive_dg
    return 16.0 * math.pi * s**3 / (3.0 * dg**2)


def contact_angle_factor(theta: float) -> float:
    """Seed catalysis factor f(theta) = (2 + cos t)(1 - cos t)^2 / 4 in [0, 1]."""
    if not (0.0 <= theta <= math.pi):
        raise ConfigurationError(f"theta must be in [0, pi], got {theta}")
    c = math.cos(theta)
    if abs(c) < 2.5e-16:
        c = 0.0  # quarter-turn representation artifact; f moves by < 1 ulp here
    return (2.0 + c) * (1.0 - c) ** 2 / 4.0


def seeded_rate_ratio(params: NucleationParams) -> float:
    """Seeded over unseeded nucleation rate, exp[(1 - f(theta)) dG*/kT] >= 1."""
    f = contact_angle_factor(params.contact_angle_theta)
    ln_ratio = (1.0 - f) * homogeneous_barrier(params) / params.temperature_kT
    try:
        return math.exp(ln_ratio)
    except OverflowError:
        return math.inf


def critical_radius_and_min_deposit(params: NucleationParams) -> tuple[float, float]:
    """(r*, E_min): critical bubble radius 2 sigma / dg and the work to build it.

    E_min = surface term + bulk term of the critical bubble; the simplified
    thermal-spike budget for the least localized energy that nucleates.
    """
    s, dg = params.surface_tension_sigma, params.bulk_drive_dg
    r_star = 2.0 * s / dg
    e_min = 4.0 * math.pi * r_star**2 * s + (4.0 * math.pi / 3.0) * r_star**3 * dg
    return r_star, e_min
