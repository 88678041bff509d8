"""Dense state-vector simulation of small qubit systems.

A :class:`StateVector` holds one complex128 amplitude per basis state of an
``m``-qubit register, with amplitude-index bit ``i`` belonging to qubit ``i``
(the same convention as :class:`~sebv.bits.BitString` positions).  The gate
set is exactly what the protocols need: Hadamard, X, CNOT and the dot-product
oracle compiled to CNOTs.  Gates and measurements mutate the state in place
and return it, so call sites can chain or ignore the return value; distinct
states are independent and safe to drive from different threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bits import MAX_WIDTH, BitString
from .rng import Rng

MAX_QUBITS = 28

# Probabilities smaller than this are numerical dust from exact cancellations
# (true support probabilities are never below 2**-MAX_WIDTH).
PROB_CUTOFF = 1e-12


@dataclass(frozen=True)
class MeasurementResult:
    """Outcome of a partial measurement plus the collapsed, renormalized state."""

    outcome: BitString
    post_state: "StateVector"


class StateVector:
    """Normalized amplitudes of an ``num_qubits``-qubit pure state."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}"
            )
        self.num_qubits = num_qubits
        self.amplitudes = np.zeros(1 << num_qubits, dtype=np.complex128)
        self.amplitudes[0] = 1.0

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        """Wrap an explicit amplitude array (must be normalized, length 2**m)."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        m = int(amps.size).bit_length() - 1
        if 1 << m != amps.size or not 1 <= m <= MAX_QUBITS:
            raise ValueError(f"amplitude count {amps.size} is not 2**m for valid m")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"amplitudes not normalized (norm {norm})")
        state = cls.__new__(cls)
        state.num_qubits = m
        state.amplitudes = amps.copy()
        return state

    def copy(self) -> "StateVector":
        state = StateVector.__new__(StateVector)
        state.num_qubits = self.num_qubits
        state.amplitudes = self.amplitudes.copy()
        return state

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _check_qubit(self, q: int):
        if not 0 <= q < self.num_qubits:
            raise IndexError(f"qubit {q} out of range for {self.num_qubits} qubits")

    # -- gates ---------------------------------------------------------------

    def h(self, q: int) -> "StateVector":
        """Hadamard on qubit ``q``."""
        self._check_qubit(q)
        _kernels.h_kernel(self.amplitudes, q)
        return self

    def x(self, q: int) -> "StateVector":
        """Bit flip on qubit ``q``."""
        self._check_qubit(q)
        _kernels.x_kernel(self.amplitudes, q)
        return self

    def cnot(self, control: int, target: int) -> "StateVector":
        """Flip ``target`` where ``control`` is 1."""
        self._check_qubit(control)
        self._check_qubit(target)
        if control == target:
            raise ValueError(f"control and target must differ, both are {control}")
        _kernels.cnot_kernel(self.amplitudes, control, target)
        return self

    def dot_oracle(self, key: BitString, inputs, output: int) -> "StateVector":
        """XOR ``key . x mod 2`` into the output qubit.

        Compiled as one CNOT from ``inputs[i]`` to ``output`` for every set key
        bit ``i``.  With the output qubit in (|0> - |1>)/sqrt2 the net effect is
        the phase (-1)**(key . x) on each input basis state |x> (phase
        kickback).
        """
        inputs = list(inputs)
        if len(inputs) != key.width:
            raise ValueError(
                f"oracle arity mismatch: {len(inputs)} input qubits for a "
                f"width-{key.width} key"
            )
        if len(set(inputs)) != len(inputs):
            raise ValueError(f"input qubits must be distinct: {inputs}")
        if output in inputs:
            raise ValueError(f"output qubit {output} overlaps the input qubits")
        self._check_qubit(output)
        for q in inputs:
            self._check_qubit(q)
        for i in range(key.width):
            if key.bit(i):
                self.cnot(inputs[i], output)
        return self

    # -- measurement ---------------------------------------------------------

    def _subset_probs(self, qubits: list[int]) -> np.ndarray:
        if not qubits:
            raise ValueError("qubit subset must not be empty")
        if len(qubits) > MAX_WIDTH:
            raise ValueError(f"subsets are limited to {MAX_WIDTH} qubits")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"qubit subset must be distinct: {qubits}")
        for q in qubits:
            self._check_qubit(q)
        lo, k = qubits[0], len(qubits)
        if qubits == list(range(lo, lo + k)):
            return _kernels.probs_run_kernel(self.amplitudes, lo, k)
        return _kernels.probs_gather_kernel(
            self.amplitudes, np.asarray(qubits, dtype=np.int64)
        )

    def probabilities(self, qubits) -> dict[BitString, float]:
        """Exact outcome distribution of measuring ``qubits``.

        Returns a map from outcome (bit ``j`` of the outcome reads
        ``qubits[j]``) to probability; outcomes below ``PROB_CUTOFF`` are
        omitted.  The retained probabilities sum to 1 within 1e-10.
        """
        qubits = list(qubits)
        probs = self._subset_probs(qubits)
        k = len(qubits)
        return {
            BitString(k, i): float(p)
            for i, p in enumerate(probs)
            if p > PROB_CUTOFF
        }

    def measure(self, qubits, rng: Rng) -> MeasurementResult:
        """Sample and collapse a computational-basis measurement of ``qubits``.

        The outcome is drawn with a single uniform draw against the cumulative
        distribution in outcome-index order, then the state is projected onto
        the sampled outcome and renormalized in place.
        """
        qubits = list(qubits)
        probs = self._subset_probs(qubits)
        cumulative = np.cumsum(probs)
        u = rng.uniform()
        outcome = int(np.searchsorted(cumulative, u, side="right"))
        if outcome >= probs.size:
            # u beyond the last cumulative value (total marginally below 1)
            outcome = int(np.nonzero(probs)[0][-1])
        scale = 1.0 / np.sqrt(probs[outcome])
        lo, k = qubits[0], len(qubits)
        if qubits == list(range(lo, lo + k)):
            _kernels.collapse_run_kernel(self.amplitudes, lo, k, outcome, scale)
        else:
            _kernels.collapse_gather_kernel(
                self.amplitudes, np.asarray(qubits, dtype=np.int64), outcome, scale
            )
        return MeasurementResult(BitString(k, outcome), self)
