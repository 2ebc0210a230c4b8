"""Desk-scale workbench for many-fermion overlap decay and detector kinetics.

Three threads, one dimensionless unit system (hbar = 1, 2m = 1):

* spectra of a 1D hard-wall gas with a finite-range scatterer, and the phase
  shifts read off box quantization (grids, spectral);
* Slater-determinant overlaps between the free and scattered ground states,
  their power-law decay with particle number, and the coefficient structure
  of the scattered state over the free basis (overlap);
* metastability and triggering: WKB lifetimes, nucleation barriers with seed
  catalysis, and Townsend-cascade gain statistics (kinetics, avalanche).
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    NumericalError,
    UnsupportedGeometryError,
    UnsupportedProfileError,
)
from .grids import (
    Geometry,
    Grid,
    PotentialShape,
    PotentialSpec,
    eval_potential,
    make_grid,
)
from .spectral import (
    ADEQUACY_FACTOR,
    PhaseShiftTable,
    Spectrum,
    assert_grid_adequate,
    bo_energy,
    extract_phase_shifts,
    solve_spectrum,
)
from .overlap import (
    DecompositionReport,
    OverlapScan,
    PowerLawFit,
    SiteOverlaps,
    SlaterOverlap,
    coefficient_scan,
    fit_exponent,
    impurity_site_overlap,
    orbital_overlap_matrix,
    overlap_scan,
    scan_grid,
    site_overlap_ladder,
    slater_overlap,
)
from .kinetics import (
    BarrierProfile,
    NucleationParams,
    RateRatio,
    WkbRate,
    contact_angle_factor,
    critical_radius_and_min_deposit,
    homogeneous_barrier,
    lifetime_ratio,
    seeded_rate_ratio,
    wkb_action,
    wkb_rate,
)
from .avalanche import (
    DEFAULT_BACKEND,
    AvalancheParams,
    AvalancheStats,
    available_backends,
    gain_statistics,
    run_trials,
    simulate_avalanche,
    trigger_probability,
)

__all__ = [
    "ADEQUACY_FACTOR",
    "AvalancheParams",
    "AvalancheStats",
    "BarrierProfile",
    "ConfigurationError",
    "DEFAULT_BACKEND",
    "DecompositionReport",
    "Geometry",
    "Grid",
    "NucleationParams",
    "NumericalError",
    "OverlapScan",
    "PhaseShiftTable",
    "PotentialShape",
    "PotentialSpec",
    "PowerLawFit",
    "RateRatio",
    "SiteOverlaps",
    "SlaterOverlap",
    "Spectrum",
    "UnsupportedGeometryError",
    "UnsupportedProfileError",
    "WkbRate",
    "assert_grid_adequate",
    "available_backends",
    "bo_energy",
    "coefficient_scan",
    "contact_angle_factor",
    "critical_radius_and_min_deposit",
    "eval_potential",
    "extract_phase_shifts",
    "fit_exponent",
    "gain_statistics",
    "homogeneous_barrier",
    "impurity_site_overlap",
    "lifetime_ratio",
    "make_grid",
    "orbital_overlap_matrix",
    "overlap_scan",
    "run_trials",
    "scan_grid",
    "seeded_rate_ratio",
    "simulate_avalanche",
    "site_overlap_ladder",
    "slater_overlap",
    "solve_spectrum",
    "trigger_probability",
    "wkb_action",
    "wkb_rate",
]
