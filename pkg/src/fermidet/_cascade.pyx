# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cascade kernel; arithmetic must stay bit-identical to _cascade_py.

Draw j of trial t mixes key(seed, t) + j * GOLDEN through the splitmix64
output scramble; the uniform is ((z >> 11) + 1) * 2^-53 in (0, 1].  Any
change here must be mirrored in the pure-Python twin.
"""

from libc.math cimport log
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc, realloc

import numpy as np


cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t _STREAM = 0xD1B54A32D192ED03ULL
cdef double _TWO_NEG53 = 2.0 ** -53


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def trial_key(seed, trial):
    return int(_mix64((<uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)) ^
                      ((<uint64_t> (trial & 0xFFFFFFFFFFFFFFFF)) * _STREAM)))


def cascade_counts(double alpha, double gap, long n_initial, seed,
                   long trial_start, long n_trials):
    """Arrival counts for trials [trial_start, trial_start + n_trials)."""
    counts = np.empty(n_trials, dtype=np.int64)
    cdef int64_t[::1] out = counts
    cdef uint64_t useed = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef long t
    if alpha <= 0.0 or n_initial == 0:
        for t in range(n_trials):
            out[t] = n_initial
        return counts

    cdef double inv_alpha = 1.0 / alpha
    cdef uint64_t key, z, draw
    cdef double x, u
    cdef int64_t arrived
    cdef size_t cap = 16 if n_initial < 8 else 2 * <size_t> n_initial
    cdef size_t top
    cdef double* stack = <double*> malloc(cap * sizeof(double))
    cdef double* grown
    cdef long i
    if stack == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(n_trials):
                key = _mix64(useed ^ ((<uint64_t> (trial_start + t)) * _STREAM))
                draw = 0
                arrived = 0
                top = 0
                for i in range(n_initial):
                    stack[top] = 0.0
                    top += 1
                while top > 0:
                    top -= 1
                    x = stack[top]
                    draw += 1
                    z = _mix64(key + draw * _GOLDEN)
                    u = (<double> ((z >> 11) + 1)) * _TWO_NEG53
                    x = x - log(u) * inv_alpha
                    if x < gap:
                        if top + 2 > cap:
                            with gil:
                                cap *= 2
                                grown = <double*> realloc(stack, cap * sizeof(double))
                                if grown == NULL:
                                    raise MemoryError()
                                stack = grown
                        stack[top] = x
                        stack[top + 1] = x
                        top += 2
                    else:
                        arrived += 1
                out[t] = arrived
    finally:
        free(stack)
    return counts
