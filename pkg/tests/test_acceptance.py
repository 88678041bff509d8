"""End-to-end acceptance suite.

Each test enforces one acceptance criterion at its stated tolerance and prints
one ``criterion N: PASS/FAIL`` line (run with ``pytest -s`` to see the lines
as they happen).  Criteria with a runtime budget assert it; the first test
warms the jitted kernels so compilation time is not billed to any criterion.
"""

import json
import time
from contextlib import contextmanager
from itertools import product

import numpy as np
import pytest
from scipy.stats import chi2

from sebv import (
    AttackKind,
    BitString,
    ProtocolConfig,
    RetryLimitError,
    Rng,
    StateVector,
    Variant,
    attack_sessions,
    build_bv_circuit,
    check_uniformity,
    collect_histogram,
    expected_support,
    passive_eve,
    run_bv,
    run_session,
    simulate,
)
from sebv.cli import main as cli_main

FROZEN_SEED = 2026


@contextmanager
def criterion(label, budget=None):
    start = time.perf_counter()
    outcome = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None and elapsed >= budget:
            raise AssertionError(
                f"runtime {elapsed:.2f}s exceeds the {budget}s budget"
            )
        outcome = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        print(f"criterion {label}: {outcome} [{elapsed:.2f}s]")


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile/load the jitted kernels before anything is timed
    config = ProtocolConfig(Variant.FSEBV, 2, BitString(2, 1), BitString(2, 2), 0)
    run_session(config)
    collect_histogram(config, 1, Rng(0))
    next(iter(attack_sessions(config, AttackKind.INTERCEPT_RESEND, 1, Rng(0))))
    simulate(build_bv_circuit(BitString(2, 3))).probabilities([0, 2])


def test_criterion_1_bv_determinism():
    with criterion("1 (single-query key recovery is deterministic)", budget=5.0):
        for bits in range(1, 256):
            key = BitString(8, bits)
            assert run_bv(key, Rng(bits)) == key
        for n in range(1, 5):
            for bits in range(1 << n):
                key = BitString(n, bits)
                probs = simulate(build_bv_circuit(key)).probabilities(list(range(n)))
                assert set(probs) == {key}
                assert abs(probs[key] - 1.0) <= 1e-10


def _histogram_criterion(key_b_text, parity_text):
    key_a = BitString.from_text("101")
    key_b = BitString.from_text(key_b_text)
    parity = BitString.from_text(parity_text)
    config = ProtocolConfig(Variant.FSEBV, 3, key_a, key_b, FROZEN_SEED)
    histogram = collect_histogram(config, 2048, Rng(FROZEN_SEED))
    support = histogram.observed_support()
    assert len(support) == 8
    for readout in support:
        bob = BitString.from_text(readout[:3])
        alice = BitString.from_text(readout[3:])
        assert bob ^ alice == parity
    for frequency in histogram.frequencies().values():
        assert abs(frequency - 0.125) <= 0.04
    assert check_uniformity(histogram, expected_support(3, key_a, key_b)).passed


def test_criterion_2_joint_distribution_both_keys():
    with criterion("2 (2048-shot joint readouts, keys 101/110)", budget=1.0):
        _histogram_criterion("110", "011")


def test_criterion_3_joint_distribution_one_sided_key():
    with criterion("3 (2048-shot joint readouts, keys 101/000)", budget=1.0):
        _histogram_criterion("000", "101")


def test_criterion_4_key_agreement_at_scale():
    with criterion("4 (20000 random sessions agree on a nonzero key)", budget=60.0):
        draw = np.random.default_rng(424242)

        def random_config(variant):
            n = int(draw.integers(2, 9))
            reversed_roles = bool(draw.integers(0, 2))
            seed = int(draw.integers(0, 2**63))
            if variant is Variant.FSEBV:
                key_a = BitString(n, int(draw.integers(0, 1 << n)))
                key_b = BitString(n, int(draw.integers(0, 1 << n)))
            else:
                chosen = BitString(n, int(draw.integers(1, 1 << n)))
                zero = BitString.zeros(n)
                key_a, key_b = (zero, chosen) if reversed_roles else (chosen, zero)
            return ProtocolConfig(
                variant, n, key_a, key_b, seed, roles_reversed=reversed_roles
            )

        successes = 0
        for variant in (Variant.FSEBV, Variant.SSEBV):
            for _ in range(10000):
                try:
                    transcript = run_session(random_config(variant))
                except RetryLimitError:
                    continue
                successes += 1
                assert transcript.final_key_alice == transcript.final_key_bob
                assert not transcript.final_key_alice.is_zero
        assert successes == 20000  # retry exhaustion has probability ~2**-384


def test_criterion_5_retry_rate():
    with criterion("5 (zero-readout retry rate near 1/8)", budget=None):
        draw = np.random.default_rng(31337)
        sessions = 10000
        retried = 0
        for index in range(sessions):
            config = ProtocolConfig(
                Variant.FSEBV,
                3,
                BitString(3, int(draw.integers(0, 8))),
                BitString(3, int(draw.integers(0, 8))),
                seed=index,
            )
            retried += run_session(config).retries_used > 0
        assert abs(retried / sessions - 0.125) <= 0.013


def test_criterion_6_delta_identity():
    with criterion("6 (alternating-sum identity, exhaustive n<=4)", budget=1.0):
        for n in range(1, 5):
            for s, z in product(range(1 << n), repeat=2):
                total = sum(
                    -1 if ((s ^ z) & x).bit_count() & 1 else 1 for x in range(1 << n)
                )
                assert total == ((1 << n) if s == z else 0)


def test_criterion_7_oracle_equivalence():
    with criterion("7 (CNOT-compiled oracle equals the dense matrix)", budget=None):
        for n in (1, 2, 3):
            for bits in range(1 << n):
                key = BitString(n, bits)
                dim = 1 << (n + 1)
                dense = np.zeros((dim, dim))
                for x in range(1 << n):
                    f = (x & bits).bit_count() & 1
                    for y in (0, 1):
                        dense[x | ((y ^ f) << n), x | (y << n)] = 1.0
                generator = np.random.default_rng(1000 + (n << 4) + bits)
                amps = generator.standard_normal(dim) + 1j * generator.standard_normal(dim)
                amps /= np.linalg.norm(amps)
                state = StateVector.from_amplitudes(amps)
                reference = dense @ state.amplitudes
                state.dot_oracle(key, list(range(n)), n)
                assert np.max(np.abs(state.amplitudes - reference)) < 1e-12


def test_criterion_8_eve_keyspace():
    with criterion("8 (passive Eve faces 2**n candidates)", budget=None):
        for key_a, key_b in product(range(4), repeat=2):
            config = ProtocolConfig(
                Variant.FSEBV, 2, BitString(2, key_a), BitString(2, key_b), seed=17
            )
            transcript = run_session(config)
            announced = transcript.attempts[-1].messages[-1].payload
            candidates = {
                unknown_key ^ announced.bits ^ unknown_readout
                for unknown_key in range(4)
                for unknown_readout in range(4)
            }
            assert len(candidates) == 4
            assert transcript.final_key_bob.bits in candidates
            assert passive_eve(transcript).candidate_key_count == 4
        for n in range(1, 9):
            config = ProtocolConfig(
                Variant.FSEBV, n, BitString.zeros(n), BitString(n, 1), seed=n
            )
            assert passive_eve(run_session(config)).candidate_key_count == 1 << n


def test_criterion_9_intercept_resend_detection():
    with criterion("9 (intercept-resend breaks parity, readouts stay uniform)", budget=None):
        sessions = 10000
        config = ProtocolConfig(
            Variant.FSEBV, 3, BitString(3, 0b101), BitString(3, 0b110), seed=0
        )
        violations = 0
        alice_counts = np.zeros(8)
        bob_counts = np.zeros(8)
        for session in attack_sessions(
            config, AttackKind.INTERCEPT_RESEND, sessions, Rng(FROZEN_SEED)
        ):
            violations += session.parity_violated
            alice_counts[session.alice_measurement.bits] += 1
            bob_counts[session.bob_measurement.bits] += 1
        assert abs(violations / sessions - 0.875) <= 0.013
        critical = chi2.ppf(0.999, 7)
        for counts in (alice_counts, bob_counts):
            statistic = np.sum((counts - sessions / 8) ** 2 / (sessions / 8))
            assert statistic < critical


def test_criterion_10_cli_reproducibility(tmp_path, capsys):
    with criterion("10 (seeded CLI runs are byte-identical)", budget=None):
        invocations = {
            "run.jsonl": [
                "run", "--protocol", "fsebv", "--key-a", "101", "--key-b", "110",
                "--seed", "21",
            ],
            "hist.csv": [
                "histogram", "--key-a", "101", "--key-b", "110", "--shots", "2048",
                "--seed", "21",
            ],
            "hist.jsonl": [
                "histogram", "--key-a", "101", "--key-b", "000", "--shots", "2048",
                "--seed", "21", "--format", "jsonl",
            ],
            "attack.jsonl": [
                "attack", "--attack", "intercept-resend", "--key-a", "101",
                "--key-b", "110", "--sessions", "1000", "--seed", "21",
            ],
            "circuit.qasm": ["export-qasm", "--key-a", "101", "--key-b", "110"],
            "bv.jsonl": ["bv", "--key-a", "101", "--seed", "21"],
        }
        for name, argv in invocations.items():
            first = tmp_path / f"first-{name}"
            second = tmp_path / f"second-{name}"
            assert cli_main(argv + ["--output", str(first)]) == 0
            assert cli_main(argv + ["--output", str(second)]) == 0
            assert first.read_bytes() == second.read_bytes(), name
        run_record = json.loads((tmp_path / "first-run.jsonl").read_text())
        assert run_record["final_key_alice"] == run_record["final_key_bob"]
        capsys.readouterr()
