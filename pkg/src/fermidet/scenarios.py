"""Canned study configurations runnable as `fermidet scenario <name>`."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    config: dict


SCENARIOS = {
    "anderson-default": Scenario(
        "anderson-default",
        "Fixed-density overlap-decay ladder, attractive square well (N = 50..800)",
        {
            "run": {"rng_seed": "0"},
            "overlap-scan": {
                "shape": "square_well",
                "strength": "-5.0",
                "range": "1.0",
                "density": "1.0",
                "n_values": "50,100,200,400,800",
            },
        },
    ),
    "bubble-seed": Scenario(
        "bubble-seed",
        "Heterogeneous nucleation sweep over contact angle at dG*/kT near 60",
        {
            "run": {"rng_seed": "0"},
            "kinetics": {
                "mode": "nucleation_sweep",
                "surface_tension": "1.0",
                "bulk_drive": "1.0",
                "temperature": "0.28",
                "theta_points": "33",
            },
        },
    ),
    "geiger-gain": Scenario(
        "geiger-gain",
        "Townsend cascade gain histogram, alpha*gap = 3, 1e5 trials",
        {
            "run": {"rng_seed": "12345"},
            "avalanche": {
                "alpha": "3.0",
                "gap": "1.0",
                "n_initial": "1",
                "trials": "100000",
                "threshold": "20",
                "bin_width": "1",
            },
        },
    ),
    "lifetime-demo": Scenario(
        "lifetime-demo",
        "WKB lifetime of a rectangular barrier vs the same barrier lowered 100 -> 64",
        {
            "run": {"rng_seed": "0"},
            "kinetics": {
                "mode": "wkb_pair",
                "breakpoints_x": "0,2,2,7,7,10",
                "breakpoints_v": "0,0,100,100,0,0",
                "breakpoints_v_perturbed": "0,0,64,64,0,0",
                "energy": "0.0",
                "attempt_frequency": "1.0",
            },
        },
    ),
    "silicon-site": Scenario(
        "silicon-site",
        "Impurity at two box sites: cross-site and site-vs-free overlap ladder",
        {
            "run": {"rng_seed": "0"},
            "site-overlap": {
                "shape": "square_well",
                "strength": "-3.0",
                "range": "1.0",
                "center_a": "8.0",
                "center_b": "14.0",
                "n_values": "8,16,32,64",
                "density": "0.4",
            },
        },
    ),
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise ConfigurationError(f"unknown scenario {name!r}; choose from: {known}") from None


def list_scenarios() -> list[tuple[str, str]]:
    """(name, description) pairs in lexicographic order."""
    return [(n, SCENARIOS[n].description) for n in sorted(SCENARIOS)]
