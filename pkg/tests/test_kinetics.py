import math

import numpy as np
import pytest

import oracles
from fermidet import (
    BarrierProfile,
    ConfigurationError,
    NucleationParams,
    UnsupportedProfileError,
    contact_angle_factor,
    critical_radius_and_min_deposit,
    homogeneous_barrier,
    lifetime_ratio,
    seeded_rate_ratio,
    wkb_action,
    wkb_rate,
)


def rectangular(v0, width, x_lo=2.0, x_max=10.0, energy=0.0, nu=1.0):
    x_hi = x_lo + width
    return BarrierProfile((0.0, x_lo, x_lo, x_hi, x_hi, x_max),
                          (0.0, 0.0, v0, v0, 0.0, 0.0), energy, nu)


def parabolic(v0, half_width, center=5.0, x_max=10.0, n_seg=200, energy=0.0, nu=1.0):
    xs = np.linspace(0.0, x_max, n_seg + 1)
    vs = np.maximum(v0 * (1.0 - ((xs - center) / half_width) ** 2), 0.0)
    return BarrierProfile(tuple(xs), tuple(vs), energy, nu)


class TestWkb:
    def test_rectangular_action_exact(self):
        prof = rectangular(v0=100.0, width=5.0)
        assert wkb_action(prof) == pytest.approx(5.0 * 10.0, rel=1e-13)
        assert 2.0 * wkb_action(prof) == pytest.approx(2.0 * 5.0 * math.sqrt(100.0), rel=1e-13)

    def test_vanishing_barrier_rate_approaches_attempt_frequency(self):
        prof = rectangular(v0=1e-14, width=2.0, nu=7.5)
        assert wkb_rate(prof).rate == pytest.approx(7.5, rel=1e-6)

    def test_parabolic_matches_adaptive_quadrature(self):
        prof = parabolic(v0=12.0, half_width=3.0, n_seg=80)
        got = wkb_action(prof)
        want = oracles.piecewise_linear_action_quad(prof.breakpoints_x,
                                                    prof.breakpoints_v, 0.0)
        assert got == pytest.approx(want, rel=1e-6)

    def test_parabolic_matches_closed_form(self):
        prof = parabolic(v0=12.0, half_width=3.0, energy=2.5)
        want = oracles.piecewise_linear_action_closed_form(prof.breakpoints_x,
                                                           prof.breakpoints_v, 2.5)
        assert wkb_action(prof) == pytest.approx(want, rel=1e-10)

    def test_monotone_in_width_and_height(self):
        widths = [wkb_rate(rectangular(50.0, w)).rate for w in (1.0, 2.0, 4.0)]
        assert widths[0] > widths[1] > widths[2]
        heights = [wkb_rate(rectangular(v, 3.0)).rate for v in (10.0, 20.0, 40.0)]
        assert heights[0] > heights[1] > heights[2]

    def test_no_barrier_rejected(self):
        prof = BarrierProfile((0.0, 5.0, 10.0), (0.0, 1.0, 0.0), 2.0, 1.0)
        with pytest.raises(ConfigurationError):
            wkb_rate(prof)

    def test_double_barrier_rejected(self):
        prof = BarrierProfile((0.0, 2.0, 3.0, 5.0, 7.0, 8.0, 10.0),
                              (0.0, 4.0, 0.0, 0.0, 4.0, 0.0, 0.0), 1.0, 1.0)
        with pytest.raises(UnsupportedProfileError):
            wkb_rate(prof)

    def test_barrier_at_domain_edge_rejected(self):
        prof = BarrierProfile((0.0, 4.0, 10.0), (5.0, 5.0, 0.0), 1.0, 1.0)
        with pytest.raises(ConfigurationError):
            wkb_rate(prof)

    def test_descending_breakpoints_rejected(self):
        with pytest.raises(ConfigurationError):
            BarrierProfile((0.0, 3.0, 2.0), (0.0, 1.0, 0.0), 0.0, 1.0)


class TestLifetimeRatio:
    def test_identical_profiles_exactly_one(self):
        a = parabolic(v0=9.0, half_width=2.0)
        b = parabolic(v0=9.0, half_width=2.0)
        r = lifetime_ratio(a, b)
        assert r.ln_ratio == 0.0
        assert r.ratio == 1.0

    def test_rectangular_height_drop_gives_twenty_log_units(self):
        r = lifetime_ratio(rectangular(100.0, 5.0), rectangular(64.0, 5.0))
        assert r.ln_ratio == pytest.approx(2.0 * 5.0 * (10.0 - 8.0), rel=1e-12)
        assert r.log10_ratio == pytest.approx(20.0 / math.log(10.0), rel=1e-12)

    def test_small_barrier_reduction_accelerates(self):
        r = lifetime_ratio(parabolic(10.0, 3.0), parabolic(9.0, 3.0))
        assert r.ratio > 1.0


class TestNucleation:
    def test_homogeneous_barrier_unit_values(self):
        p = NucleationParams(1.0, 1.0, 0.5, 1.0)
        assert homogeneous_barrier(p) == pytest.approx(16.0 * math.pi / 3.0, rel=1e-15)

    def test_doubling_drive_quarters_barrier(self):
        p1 = NucleationParams(1.0, 1.0, 0.5, 1.0)
        p2 = NucleationParams(1.0, 2.0, 0.5, 1.0)
        assert homogeneous_barrier(p1) / homogeneous_barrier(p2) == pytest.approx(4.0, rel=1e-14)

    def test_against_high_precision_oracle(self):
        # water-ish toy magnitudes
        sigma, dg = 0.072, 0.35
        p = NucleationParams(sigma, dg, 0.5, 0.025)
        assert homogeneous_barrier(p) == pytest.approx(
            oracles.homogeneous_barrier_decimal(sigma, dg), rel=1e-14)

    def test_zero_drive_rejected(self):
        with pytest.raises(ConfigurationError):
            NucleationParams(1.0, 0.0, 0.5, 1.0)

    def test_contact_angle_anchors_exact(self):
        assert contact_angle_factor(0.0) == 0.0
        assert contact_angle_factor(math.pi) == 1.0
        assert contact_angle_factor(math.pi / 2) == 0.5

    def test_contact_angle_monotone_and_bounded(self):
        thetas = np.linspace(0.0, math.pi, 1000)
        vals = np.array([contact_angle_factor(float(t)) for t in thetas])
        assert np.all(vals >= 0.0) and np.all(vals <= 1.0)
        assert np.all(np.diff(vals) > 0.0)

    def test_contact_angle_domain(self):
        for bad in (-0.1, math.pi + 0.1):
            with pytest.raises(ConfigurationError):
                contact_angle_factor(bad)

    def test_seeded_ratio_ineffective_seed(self):
        p = NucleationParams(1.0, 1.0, math.pi, 0.1)
        assert seeded_rate_ratio(p) == 1.0

    def test_seeded_ratio_exp25_case(self):
        barrier = homogeneous_barrier(NucleationParams(1.0, 1.0, 0.5, 1.0))
        p = NucleationParams(1.0, 1.0, math.pi / 2, barrier / 50.0)
        assert seeded_rate_ratio(p) == pytest.approx(math.exp(25.0), rel=1e-12)

    def test_seeded_ratio_monotone_decreasing_in_theta(self):
        thetas = np.linspace(0.01, math.pi, 200)
        vals = [seeded_rate_ratio(NucleationParams(1.0, 2.0, float(t), 0.5))
                for t in thetas]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert all(v >= 1.0 for v in vals)

    def test_critical_radius_and_deposit_values(self):
        p = NucleationParams(1.0, 2.0, 0.5, 1.0)
        r_star, e_min = critical_radius_and_min_deposit(p)
        assert r_star == pytest.approx(1.0, rel=1e-15)
        assert e_min == pytest.approx(4.0 * math.pi + 8.0 * math.pi / 3.0, rel=1e-14)

    def test_deposit_scaling_exponents(self):
        sigmas = np.geomspace(0.05, 2.0, 12)
        e_sigma = [critical_radius_and_min_deposit(NucleationParams(float(s), 1.3, 0.5, 1.0))[1]
                   for s in sigmas]
        slope = np.polyfit(np.log(sigmas), np.log(e_sigma), 1)[0]
        assert slope == pytest.approx(3.0, abs=1e-10)
        drives = np.geomspace(0.1, 4.0, 12)
        e_dg = [critical_radius_and_min_deposit(NucleationParams(0.8, float(g), 0.5, 1.0))[1]
                for g in drives]
        slope = np.polyfit(np.log(drives), np.log(e_dg), 1)[0]
        assert slope == pytest.approx(-2.0, abs=1e-10)
