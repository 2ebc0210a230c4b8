import math

import numpy as np
import pytest

import oracles
from fermidet import (
    ConfigurationError,
    Geometry,
    PotentialShape,
    PotentialSpec,
    UnsupportedGeometryError,
    bo_energy,
    eval_potential,
    extract_phase_shifts,
    make_grid,
    solve_spectrum,
)

WELL = PotentialSpec(PotentialShape.SQUARE_WELL, -5.0, 1.0, 0.0)


def test_free_box_levels_match_continuum():
    grid = make_grid(math.pi, 512, Geometry.RADIAL_SWAVE)
    sp = solve_spectrum(grid, None, 10)
    n = np.arange(1, 11)
    assert np.all(np.abs(sp.energies - n**2) / n**2 < 1e-3)


def test_free_box_orbitals_match_sines():
    grid = make_grid(math.pi, 512, Geometry.RADIAL_SWAVE)
    sp = solve_spectrum(grid, None, 10)
    x = grid.points()
    for j in range(10):
        exact = math.sqrt(2.0 / grid.length_L) * np.sin((j + 1) * math.pi * x / grid.length_L)
        got = sp.orbitals[:, j]
        if np.dot(got, exact) < 0:
            got = -got
        assert np.max(np.abs(got - exact)) < 1e-3


def test_exact_discrete_free_levels():
    # the discrete operator has closed-form eigenvalues (4/h^2) sin^2(n pi h / 2L)
    grid = make_grid(10.0, 199, Geometry.RADIAL_SWAVE)
    sp = solve_spectrum(grid, None, 19)
    h, L = grid.spacing_h, grid.length_L
    n = np.arange(1, 20)
    exact = (4.0 / h**2) * np.sin(n * math.pi * h / (2 * L)) ** 2
    assert np.max(np.abs(sp.energies - exact) / exact) < 1e-12


def test_against_dense_eigensolver_oracle():
    grid = make_grid(40.0, 799, Geometry.RADIAL_SWAVE)
    sp = solve_spectrum(grid, WELL, 25)
    w_dense, _ = oracles.dense_eigen(40.0, 799, eval_potential(WELL, grid), 25)
    assert np.max(np.abs(sp.energies - w_dense)) < 1e-9
    free = solve_spectrum(grid, None, 1)
    assert sp.energies[0] < free.energies[0]  # attractive well lowers the ground level


def test_orthonormality_and_order():
    grid = make_grid(40.0, 800, Geometry.RADIAL_SWAVE)
    sp = solve_spectrum(grid, WELL, 64)
    assert sp.orthonormality_defect() <= 1e-10
    assert np.all(np.diff(sp.energies) > 0)
    assert sp.n_eigenpairs == 64


def test_convergence_is_second_order():
    # successive h-halvings shrink the level differences by ~4
    L, m = 10.0, 16
    sols = [solve_spectrum(make_grid(L, n, Geometry.RADIAL_SWAVE), None, m)
            for n in (159, 319, 639)]
    for j in range(m // 4):
        d1 = abs(sols[0].energies[j] - sols[1].energies[j])
        d2 = abs(sols[1].energies[j] - sols[2].energies[j])
        assert d1 / d2 >= 3.5


def test_too_many_eigenpairs_rejected():
    grid = make_grid(10.0, 50, Geometry.RADIAL_SWAVE)
    with pytest.raises(ConfigurationError):
        solve_spectrum(grid, None, 51)


def test_adequacy_rule_is_hard():
    # h = 0.5 cannot resolve r0 = 1 at factor 20
    grid = make_grid(40.0, 79, Geometry.RADIAL_SWAVE)
    with pytest.raises(ConfigurationError):
        solve_spectrum(grid, WELL, 4)


class TestPhaseShifts:
    def test_free_vs_free_is_zero(self):
        grid = make_grid(40.0, 799, Geometry.RADIAL_SWAVE)
        free = solve_spectrum(grid, None, 30)
        table = extract_phase_shifts(free, free)
        assert np.max(np.abs(table.deltas)) <= 1e-8
        assert table.n_bound == 0
        assert table.branch_offset_pi == 0

    def test_matches_analytic_square_well(self):
        # well edge midway between grid points; otherwise the pointwise-sampled
        # edge shifts the effective width by O(h)
        n_points = int(40 * 40.5) - 1
        grid = make_grid(40.0, n_points, Geometry.RADIAL_SWAVE)
        free = solve_spectrum(grid, None, 45)
        inter = solve_spectrum(grid, WELL, 45)
        table = extract_phase_shifts(free, inter)
        mask = (table.momenta >= 0.5) & (table.momenta <= 3.0)
        got = table.deltas_physical[mask]
        want = oracles.square_well_delta(table.momenta[mask], -5.0, 1.0)
        assert mask.sum() > 20
        assert np.max(np.abs(got - want)) < 1e-3

    def test_weak_potential_matches_born(self):
        weak = PotentialSpec(PotentialShape.SQUARE_WELL, -0.05, 1.0, 0.0)
        n_points = int(40 * 40.5) - 1
        grid = make_grid(40.0, n_points, Geometry.RADIAL_SWAVE)
        free = solve_spectrum(grid, None, 45)
        inter = solve_spectrum(grid, weak, 45)
        table = extract_phase_shifts(free, inter)
        mask = (table.momenta >= 0.5) & (table.momenta <= 3.0)
        born = oracles.born_delta(table.momenta[mask],
                                  lambda x: np.where(x <= 1.0, -0.05, 0.0), 2.0)
        got = table.deltas_physical[mask]
        assert np.max(np.abs(got - born) / np.abs(born)) < 0.10

    def test_levinson_branch_reported_not_hidden(self):
        # one bound state: raw deltas sit near pi at k -> 0; the table keeps the
        # reduced branch but reports the offset so the physical branch is explicit
        grid = make_grid(40.0, 1619, Geometry.RADIAL_SWAVE)
        free = solve_spectrum(grid, None, 40)
        inter = solve_spectrum(grid, WELL, 40)
        assert inter.energies[0] < 0  # exactly one bound level for this depth
        assert inter.energies[1] > 0
        table = extract_phase_shifts(free, inter)
        assert table.n_bound == 1
        assert table.branch_offset_pi == 1
        assert abs(table.deltas_physical[0] - math.pi) < 0.2
        assert np.max(np.abs(np.diff(table.deltas))) < math.pi / 2

    def test_mismatched_grids_rejected(self):
        a = solve_spectrum(make_grid(40.0, 799, Geometry.RADIAL_SWAVE), None, 10)
        b = solve_spectrum(make_grid(41.0, 799, Geometry.RADIAL_SWAVE), None, 10)
        with pytest.raises(ConfigurationError):
            extract_phase_shifts(a, b)

    def test_linear_box_unsupported(self):
        grid = make_grid(40.0, 799, Geometry.LINEAR_BOX)
        sp = solve_spectrum(grid, None, 10)
        with pytest.raises(UnsupportedGeometryError):
            extract_phase_shifts(sp, sp)

    def test_repulsive_potential_gives_negative_shifts(self):
        bump = PotentialSpec(PotentialShape.SQUARE_WELL, 2.0, 1.0, 0.0)
        grid = make_grid(40.0, 1619, Geometry.RADIAL_SWAVE)
        free = solve_spectrum(grid, None, 30)
        inter = solve_spectrum(grid, bump, 30)
        table = extract_phase_shifts(free, inter)
        assert table.n_bound == 0
        assert np.all(table.deltas < 0)

    def test_fermi_index_selects_delta(self):
        grid = make_grid(40.0, 1619, Geometry.RADIAL_SWAVE)
        free = solve_spectrum(grid, None, 40)
        inter = solve_spectrum(grid, WELL, 40)
        table = extract_phase_shifts(free, inter, fermi_index=20)
        assert table.fermi_index == 20
        assert table.delta_F == table.deltas[20 - 1 - table.n_bound]


class TestBoEnergy:
    GRID = make_grid(30.0, 599, Geometry.LINEAR_BOX)

    def test_free_energy_is_flat_and_matches_box_sum(self):
        centers = [8.0, 12.0, 15.0, 22.0]
        e = bo_energy(self.GRID, PotentialShape.SQUARE_WELL, 0.0, 1.0, centers, 8)
        assert np.max(e) - np.min(e) < 1e-12
        exact = sum((n * math.pi / 30.0) ** 2 for n in range(1, 9))
        assert abs(e[0] - exact) / exact < 1e-3

    def test_attractive_lowers_energy_everywhere(self):
        centers = [6.0, 10.0, 15.0, 20.0, 24.0]
        free = bo_energy(self.GRID, PotentialShape.SQUARE_WELL, 0.0, 1.0, centers, 8)
        well = bo_energy(self.GRID, PotentialShape.SQUARE_WELL, -3.0, 1.0, centers, 8)
        assert np.all(well < free)
        # cross-check one point against the dense oracle
        spec = PotentialSpec(PotentialShape.SQUARE_WELL, -3.0, 1.0, 10.0)
        w_dense, _ = oracles.dense_eigen(30.0, 599, eval_potential(spec, self.GRID), 8)
        assert abs(well[1] - w_dense.sum()) < 1e-9

    def test_mirror_symmetry(self):
        e = bo_energy(self.GRID, PotentialShape.GAUSSIAN, -2.0, 1.0, [9.0, 21.0], 10)
        assert abs(e[0] - e[1]) <= 1e-9

    def test_center_near_wall_rejected(self):
        with pytest.raises(ConfigurationError):
            bo_energy(self.GRID, PotentialShape.SQUARE_WELL, -3.0, 1.0, [0.5], 8)

    def test_radial_geometry_rejected(self):
        grid = make_grid(30.0, 599, Geometry.RADIAL_SWAVE)
        with pytest.raises(UnsupportedGeometryError):
            bo_energy(grid, PotentialShape.SQUARE_WELL, -3.0, 1.0, [15.0], 8)
