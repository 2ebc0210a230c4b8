"""Pure-Python cascade kernel; the bit-identical fallback for fermidet._cascade.

Draw j of trial t is a pure function of (seed, t, j): a splitmix-style mix of
key(seed, t) + j * GOLDEN.  Both kernels implement exactly this arithmetic in
IEEE doubles, so their trial counts agree bit for bit on the same platform
and any partition of the trial range returns the same numbers.
"""

from __future__ import annotations

import numpy as np

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM = 0xD1B54A32D192ED03
_TWO_NEG53 = 2.0**-53


def _mix64(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def trial_key(seed: int, trial: int) -> int:
    return _mix64((seed & _M64) ^ ((trial * _STREAM) & _M64))


def cascade_counts(alpha: float, gap: float, n_initial: int, seed: int,
                   trial_start: int, n_trials: int) -> np.ndarray:
    """Arrival counts of n_trials cascades for trials [trial_start, trial_start + n_trials)."""
    counts = np.empty(n_trials, dtype=np.int64)
    if alpha <= 0.0 or n_initial == 0:
        counts[:] = n_initial
        return counts
    from math import log  # local bind, hot loop

    inv_alpha = 1.0 / alpha
    mask = _M64
    golden = _GOLDEN
    for t in range(n_trials):
        key = trial_key(seed, trial_start + t)
        draw = 0
        stack = [0.0] * n_initial
        pop = stack.pop
        push = stack.append
        arrived = 0
        while stack:
            x = pop()
            draw += 1
            z = key + draw * golden & mask
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & mask
            z = (z ^ (z >> 27)) * 0x94D049BB133111EB & mask
            z ^= z >> 31
            x = x - log(((z >> 11) + 1) * _TWO_NEG53) * inv_alpha
            if x < gap:
                push(x)
                push(x)
            else:
                arrived += 1
        counts[t] = arrived
    return counts
