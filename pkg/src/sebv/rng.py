"""Seeded random number generation with bit-exact reproducibility.

All stochastic behaviour in the package flows through :class:`Rng` so that a
64-bit seed pins down every sample.  The backing generator is numpy's PCG64;
its algorithm identifier is recorded in transcripts and reports so a run can
state what produced its randomness.

Sub-generators for retries, shots and sessions are derived with
:meth:`Rng.derive`, a pure function of ``(seed, index)``.  Derivation does not
consume state from the parent, so work split across shots or sessions can be
tallied in any order and still reproduce bit-for-bit.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

ALGORITHM = "pcg64"


class Rng:
    """A seedable uniform source (identical seed, identical sample sequence)."""

    __slots__ = ("seed", "_generator")

    algorithm = ALGORITHM

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self) -> float:
        """One double-precision draw from [0, 1)."""
        return float(self._generator.random())

    def bits(self, width: int) -> int:
        """A uniform integer in [0, 2**width)."""
        return int(self._generator.integers(0, 1 << width))

    def derive(self, index: int) -> "Rng":
        """Child generator for sub-task ``index``; independent of draws so far."""
        child = np.random.SeedSequence((self.seed, int(index))).generate_state(1, np.uint64)[0]
        return Rng(int(child))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed})"
