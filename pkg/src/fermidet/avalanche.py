"""Townsend cascade Monte Carlo: exponential gain from a few seed electrons.

Each electron at position x draws an exponential free path with mean
1/alpha; landing short of the gap it ionizes (two electrons continue from
there), otherwise it arrives at the anode.  No attachment, feedback or
space charge: a pure birth process, whose single-seed arrival count follows
the geometric law P(n) = (1/m)(1 - 1/m)^(n-1) with m = exp(alpha * gap).

Trials use counter-based RNG substreams keyed by (seed, trial index), so the
histogram is reproducible bit for bit under any trial partition.  The kernel
is the compiled extension when built, else the pure-Python twin.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError
from . import _cascade_py

try:
    from . import _cascade as _default_kernel

    DEFAULT_BACKEND = "compiled"
except ImportError:
    _default_kernel = _cascade_py
    DEFAULT_BACKEND = "pure-python"

_KERNELS = {"pure-python": _cascade_py}
if DEFAULT_BACKEND == "compiled":
    _KERNELS["compiled"] = _default_kernel

MAX_ALPHA_GAP = 50.0


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_KERNELS))


@dataclass(frozen=True)
class AvalancheParams:
    townsend_alpha: float
    gap_d: float
    n_initial: int
    trials: int
    rng_seed: int

    def __post_init__(self):
        if not (self.townsend_alpha >= 0 and math.isfinite(self.townsend_alpha)):
            raise ConfigurationError(f"townsend_alpha must be >= 0, got {self.townsend_alpha}")
        if not (self.gap_d > 0 and math.isfinite(self.gap_d)):
            raise ConfigurationError(f"gap_d must be > 0, got {self.gap_d}")
        if self.n_initial < 0:
            raise ConfigurationError(f"n_initial must be >= 0, got {self.n_initial}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        ad = self.townsend_alpha * self.gap_d
        if ad > MAX_ALPHA_GAP:
            raise ConfigurationError(
                f"alpha * gap = {ad:.3g} > {MAX_ALPHA_GAP:g}: expected gain overflows the model"
            )
        object.__setattr__(self, "townsend_alpha", float(self.townsend_alpha))
        object.__setattr__(self, "gap_d", float(self.gap_d))
        object.__setattr__(self, "n_initial", int(self.n_initial))
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "rng_seed", int(self.rng_seed))

    @property
    def analytic_mean(self) -> float:
        return self.n_initial * math.exp(self.townsend_alpha * self.gap_d)


def run_trials(params: AvalancheParams, n_jobs: int = 1, backend: str | None = None) -> np.ndarray:
    """Per-trial arrival counts; identical for any n_jobs and both backends."""
    if backend is None:
        kernel = _default_kernel
    else:
        try:
            kernel = _KERNELS[backend]
        except KeyError:
            raise ConfigurationError(
                f"backend {backend!r} not available; have {available_backends()}"
            ) from None
    if n_jobs < 1:
        raise ConfigurationError(f"n_jobs must be >= 1, got {n_jobs}")
    args = (params.townsend_alpha, params.gap_d, params.n_initial, params.rng_seed)
    if n_jobs == 1 or params.trials < 2 * n_jobs:
        return kernel.cascade_counts(*args, 0, params.trials)
    bounds = np.linspace(0, params.trials, n_jobs + 1).astype(int)
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        chunks = list(pool.map(
            lambda se: kernel.cascade_counts(*args, int(se[0]), int(se[1] - se[0])),
            zip(bounds[:-1], bounds[1:]),
        ))
    return np.concatenate(chunks)


@dataclass(frozen=True)
class AvalancheStats:
    """Summary of one Monte Carlo gain run."""

    trials: int
    mean_gain: float
    variance_gain: float
    hist_values: np.ndarray
    hist_counts: np.ndarray
    bin_width: int
    trigger_threshold: int
    trigger_fraction: float
    analytic_mean: float | None = None

    def __post_init__(self):
        for name in ("hist_values", "hist_counts"):
            a = np.asarray(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if int(np.sum(self.hist_counts)) != self.trials:
            raise ConfigurationError("histogram mass does not match the trial count")


def gain_statistics(counts, bin_width: int = 1, trigger_threshold: int = 1,
                    analytic_mean: float | None = None) -> AvalancheStats:
    """Exact two-pass mean/variance plus a binned histogram of the counts."""
    c = np.asarray(counts, dtype=np.int64)
    if c.ndim != 1 or c.size == 0:
        raise ConfigurationError("counts must be a non-empty 1D array")
    if bin_width < 1:
        raise ConfigurationError(f"bin_width must be >= 1, got {bin_width}")
    if trigger_threshold < 1:
        raise ConfigurationError(f"trigger_threshold must be >= 1, got {trigger_threshold}")
    mean = float(np.mean(c))
    var = float(np.sum((c - mean) ** 2) / (c.size - 1)) if c.size > 1 else 0.0
    binned = (c // bin_width) * bin_width
    values, freq = np.unique(binned, return_counts=True)
    return AvalancheStats(
        trials=int(c.size),
        mean_gain=mean,
        variance_gain=var,
        hist_values=values,
        hist_counts=freq,
        bin_width=int(bin_width),
        trigger_threshold=int(trigger_threshold),
        trigger_fraction=float(np.mean(c >= trigger_threshold)),
        analytic_mean=analytic_mean,
    )


def simulate_avalanche(params: AvalancheParams, trigger_threshold: int = 1,
                       bin_width: int = 1, n_jobs: int = 1,
                       backend: str | None = None) -> AvalancheStats:
    counts = run_trials(params, n_jobs=n_jobs, backend=backend)
    stats = gain_statistics(counts, bin_width=bin_width, trigger_threshold=trigger_threshold,
                            analytic_mean=params.analytic_mean)
    if params.townsend_alpha >= 0 and stats.mean_gain < params.n_initial:
        raise NumericalError("mean gain below the seed count; kernel invariant broken")
    return stats


def trigger_probability(params: AvalancheParams, threshold: int,
                        n_jobs: int = 1, backend: str | None = None) -> float:
    """Fraction of trials delivering at least `threshold` electrons."""
    if threshold < 1:
        raise ConfigurationError(f"threshold must be >= 1, got {threshold}")
    counts = run_trials(params, n_jobs=n_jobs, backend=backend)
    return float(np.mean(counts >= threshold))
