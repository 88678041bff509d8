"""Eavesdropper models: what Eve learns passively and what tampering costs her.

A passive Eve reads every public-channel broadcast but never touches a qubit,
so the state is exactly what it would have been without her; the final key
stays hidden behind 2**n equally consistent candidates.  The active model is
an intercept-resend attack in the computational basis: Eve measures every
entangled pair in transit and forwards the collapsed qubits.  The collapse
destroys the correlation that enforces the parity law, so attacked sessions
violate ``z0 ^ w0 == key_a ^ key_b`` with probability 1 - 2**-n, while both
readouts stay uniform and independent of everything Eve holds - her guess
still lands with probability 2**-n.

Eve's best guess is modelled as testing one of her 2**n candidates uniformly
at random; interception yields no better rule because the post-collapse
readouts carry no information about her intercepted values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .bits import BitString
from .circuits import RegisterLayout, prepare_bell_pairs
from .protocol import (
    ProtocolConfig,
    PublicMessage,
    SessionTranscript,
    apply_party_operations,
)
from .rng import Rng


class AttackKind(str, Enum):
    PASSIVE = "passive"
    INTERCEPT_RESEND = "intercept-resend"


@dataclass(frozen=True)
class EveObservation:
    """Everything a listening-only Eve holds after a session."""

    overheard: tuple[PublicMessage, ...]
    candidate_key_count: int


def passive_eve(transcript: SessionTranscript) -> EveObservation:
    """Eve's takeaway from the public channel alone.

    Whatever was announced, the unknowns (the other tentative key and the
    readout in fSEBV, the chosen key in sSEBV) leave 2**n final keys equally
    consistent with her knowledge.
    """
    overheard = tuple(
        message for attempt in transcript.attempts for message in attempt.messages
    )
    return EveObservation(overheard, 1 << transcript.config.n)


@dataclass(frozen=True)
class SessionUnderAttack:
    """Per-session observables collected by the attack driver."""

    alice_measurement: BitString
    bob_measurement: BitString
    true_key: BitString
    eve_guess: BitString
    parity_violated: bool


def attack_sessions(
    config: ProtocolConfig, kind: AttackKind, sessions: int, rng: Rng
) -> Iterator[SessionUnderAttack]:
    """Yield ``sessions`` independent single-attempt executions under ``kind``.

    Sessions are raw single attempts (no retry bookkeeping) so the statistics
    are undiluted.  Session ``i`` runs on the derived sub-seed ``i``; inside a
    session the draw order is Eve's interceptions (if any), Alice's readout,
    Bob's readout, then Eve's guess.
    """
    if sessions < 1:
        raise ValueError(f"sessions must be >= 1, got {sessions}")
    layout = RegisterLayout(config.n)
    parity = config.key_a ^ config.key_b
    for index in range(sessions):
        session_rng = rng.derive(index)
        state = prepare_bell_pairs(config.n)
        if kind is AttackKind.INTERCEPT_RESEND:
            # Eve measures every pair in transit; the pair collapses to |x>|x>
            # and she forwards the collapsed qubits.
            state.measure(list(layout.alice_input), session_rng)
            state.measure(list(layout.bob_input), session_rng)
        apply_party_operations(state, config)
        z0 = state.measure(list(layout.alice_input), session_rng).outcome
        w0 = state.measure(list(layout.bob_input), session_rng).outcome
        if config.variant.value == "fsebv":
            true_key = w0 if config.initiator == "bob" else z0
        else:
            true_key = config.key_a if config.initiator == "alice" else config.key_b
        guess = BitString.random(config.n, session_rng)
        yield SessionUnderAttack(
            alice_measurement=z0,
            bob_measurement=w0,
            true_key=true_key,
            eve_guess=guess,
            parity_violated=(z0 ^ w0) != parity,
        )


@dataclass(frozen=True)
class AttackReport:
    attack_kind: AttackKind
    sessions: int
    parity_violation_rate: float
    eve_key_hit_rate: float

    def to_record(self) -> dict:
        return {
            "attack": self.attack_kind.value,
            "sessions": self.sessions,
            "parity_violation_rate": self.parity_violation_rate,
            "eve_key_hit_rate": self.eve_key_hit_rate,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


def run_attack(
    config: ProtocolConfig, kind: AttackKind, sessions: int, rng: Rng
) -> AttackReport:
    """Aggregate parity violations and Eve's hit rate over many sessions."""
    violations = 0
    hits = 0
    for session in attack_sessions(config, kind, sessions, rng):
        violations += session.parity_violated
        hits += session.eve_guess == session.true_key
    return AttackReport(
        attack_kind=kind,
        sessions=sessions,
        parity_violation_rate=violations / sessions,
        eve_key_hit_rate=hits / sessions,
    )


def intercept_resend_eve(config: ProtocolConfig, sessions: int, rng: Rng) -> AttackReport:
    """Convenience wrapper for the active attack."""
    return run_attack(config, AttackKind.INTERCEPT_RESEND, sessions, rng)
