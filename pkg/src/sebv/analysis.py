"""Shot aggregation, joint-readout histograms and uniformity checks.

Joint readouts concatenate Bob's input register and then Alice's, each
MSB-first, i.e. qubits ``q6 q5 q4 q2 q1 q0`` for n=3.  The ideal support of a
histogram is the 2**n readouts whose Bob part equals
``key_a ^ key_b ^ alice part``, each carrying probability 2**-n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from scipy.stats import chi2

from .bits import BitString
from .circuits import RegisterLayout, build_sebv_circuit, simulate
from .protocol import ProtocolConfig
from .rng import Rng

SIGNIFICANCE = 0.001


def joint_readout(bob: BitString, alice: BitString) -> str:
    """Render one joint readout, Bob's register then Alice's, MSB-first."""
    return f"{bob}{alice}"


@dataclass(frozen=True)
class OutcomeHistogram:
    """Counts of joint input-register readouts across shots."""

    n: int
    shots: int
    counts: dict[str, int]

    def frequencies(self) -> dict[str, float]:
        return {readout: count / self.shots for readout, count in self.counts.items()}

    def observed_support(self) -> set[str]:
        return {readout for readout, count in self.counts.items() if count > 0}

    def to_csv(self) -> str:
        """``readout,count,frequency`` rows, sorted by readout; byte-stable."""
        lines = ["readout,count,frequency"]
        for readout in sorted(self.counts):
            count = self.counts[readout]
            lines.append(f"{readout},{count},{count / self.shots!r}")
        return "\n".join(lines) + "\n"

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "shots": self.shots,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


def collect_histogram(config: ProtocolConfig, shots: int, rng: Rng) -> OutcomeHistogram:
    """Tally joint readouts over ``shots`` independent single-attempt executions.

    No retry logic is applied; this is the raw outcome statistic.  Shot ``i``
    measures on the derived sub-seed ``i``, so tallies merge independently of
    shot order.  The pre-measurement state is identical in every shot (gates
    are deterministic), so it is built once and copied per shot.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    layout = RegisterLayout(config.n)
    base = simulate(build_sebv_circuit(config.n, config.key_a, config.key_b))
    counts: dict[str, int] = {}
    for index in range(shots):
        shot_rng = rng.derive(index)
        state = base.copy()
        alice = state.measure(list(layout.alice_input), shot_rng).outcome
        bob = state.measure(list(layout.bob_input), shot_rng).outcome
        readout = joint_readout(bob, alice)
        counts[readout] = counts.get(readout, 0) + 1
    return OutcomeHistogram(config.n, shots, counts)


def expected_support(n: int, key_a: BitString, key_b: BitString) -> set[str]:
    """The 2**n joint readouts with ``bob part == key_a ^ key_b ^ alice part``."""
    parity = key_a ^ key_b
    return {
        joint_readout(BitString(n, z) ^ parity, BitString(n, z))
        for z in range(1 << n)
    }


@dataclass(frozen=True)
class UniformityCheck:
    expected_support: frozenset[str]
    chi_square: float
    passed: bool


def check_uniformity(histogram: OutcomeHistogram, expected: set[str]) -> UniformityCheck:
    """Support equality plus a chi-square uniformity test.

    Passes iff the observed support equals ``expected`` and the chi-square
    statistic over the expected cells stays below the critical value at
    significance ``SIGNIFICANCE`` with ``len(expected) - 1`` degrees of
    freedom.
    """
    support_ok = histogram.observed_support() == expected
    cell_expectation = histogram.shots / len(expected)
    statistic = sum(
        (histogram.counts.get(readout, 0) - cell_expectation) ** 2 / cell_expectation
        for readout in sorted(expected)
    )
    critical = float(chi2.ppf(1.0 - SIGNIFICANCE, len(expected) - 1))
    return UniformityCheck(
        expected_support=frozenset(expected),
        chi_square=float(statistic),
        passed=support_ok and statistic < critical,
    )
