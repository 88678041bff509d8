"""Numba kernels behind the state-vector engine.

Every kernel mutates the amplitude array in place, runs single-threaded and
touches elements in ascending index order, so results are deterministic
bit-for-bit.  The two probability kernels accumulate in the same index order;
which one runs is a pure function of the measured qubit list, never of timing.
"""

import numpy as np
from numba import njit

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@njit(cache=True)
def h_kernel(amps, q):
    # (a0, a1) -> ((a0+a1)/sqrt2, (a0-a1)/sqrt2) over pairs differing in bit q
    step = 1 << q
    base = 0
    while base < amps.size:
        for i in range(base, base + step):
            a0 = amps[i]
            a1 = amps[i + step]
            amps[i] = (a0 + a1) * _INV_SQRT2
            amps[i + step] = (a0 - a1) * _INV_SQRT2
        base += step << 1


@njit(cache=True)
def x_kernel(amps, q):
    step = 1 << q
    base = 0
    while base < amps.size:
        for i in range(base, base + step):
            a = amps[i]
            amps[i] = amps[i + step]
            amps[i + step] = a
        base += step << 1


@njit(cache=True)
def cnot_kernel(amps, control, target):
    cbit = 1 << control
    tbit = 1 << target
    for i in range(amps.size):
        if (i & cbit) and not (i & tbit):
            j = i | tbit
            a = amps[i]
            amps[i] = amps[j]
            amps[j] = a


@njit(cache=True)
def probs_run_kernel(amps, lo, k):
    # marginal over the contiguous qubit run [lo, lo+k)
    out = np.zeros(1 << k, dtype=np.float64)
    mask = (1 << k) - 1
    for i in range(amps.size):
        a = amps[i]
        out[(i >> lo) & mask] += a.real * a.real + a.imag * a.imag
    return out


@njit(cache=True)
def probs_gather_kernel(amps, qubits):
    # marginal over an arbitrary qubit list; outcome bit j reads qubits[j]
    k = qubits.size
    out = np.zeros(1 << k, dtype=np.float64)
    for i in range(amps.size):
        a = amps[i]
        sub = 0
        for j in range(k):
            sub |= ((i >> qubits[j]) & 1) << j
        out[sub] += a.real * a.real + a.imag * a.imag
    return out


@njit(cache=True)
def collapse_run_kernel(amps, lo, k, outcome, scale):
    mask = (1 << k) - 1
    for i in range(amps.size):
        if ((i >> lo) & mask) != outcome:
            amps[i] = 0.0
        else:
            amps[i] *= scale


@njit(cache=True)
def collapse_gather_kernel(amps, qubits, outcome, scale):
    k = qubits.size
    for i in range(amps.size):
        sub = 0
        for j in range(k):
            sub |= ((i >> qubits[j]) & 1) << j
        if sub != outcome:
            amps[i] = 0.0
        else:
            amps[i] *= scale
