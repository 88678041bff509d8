"""Two-party state machines for the fSEBV and sSEBV key exchanges.

Both variants run the same quantum episode per attempt: the Bell-pair source,
a Hadamard on each party's output qubit, each party's dot-product oracle, a
Hadamard layer on both input registers, and a measurement of both input
registers.  The readouts z0 (Alice) and w0 (Bob) always satisfy the parity law

    z0 XOR w0 == key_a XOR key_b.

In the fully symmetric variant (fSEBV) the initiator's readout becomes the
secret key; a readout of all zeros is unacceptable and triggers a retry with a
fresh entangled state.  Once a usable key is read out, the initiator announces
their tentative key on the public channel and the responder derives the same
key by XOR.  In the semi-symmetric variant (sSEBV) the responder is obliged to
use the all-zero key, so the initiator's chosen key is what the responder
recovers after the initiator announces their measurement; a chosen key of all
zeros is rejected up front.

Simultaneity of the two measurements cannot be represented in a single-process
simulator, so each attempt measures Alice's register first and Bob's second on
the shared state; outcome statistics do not depend on this order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

from .bits import BitString
from .circuits import RegisterLayout, prepare_bell_pairs
from .rng import Rng
from .state import StateVector

DEFAULT_MAX_RETRIES = 64


class Variant(str, Enum):
    FSEBV = "fsebv"
    SSEBV = "ssebv"


class PartyRole(str, Enum):
    INITIATOR = "initiator"
    RESPONDER = "responder"


class MessageKind(str, Enum):
    RETRY_REQUEST = "retry_request"
    KEY_ANNOUNCEMENT = "key_announcement"
    MEASUREMENT_ANNOUNCEMENT = "measurement_announcement"


@dataclass(frozen=True)
class PublicMessage:
    """One broadcast on the authenticated public channel."""

    sender: str  # "alice" | "bob"
    kind: MessageKind
    payload: BitString | None = None


@dataclass(frozen=True)
class ProtocolConfig:
    variant: Variant
    n: int
    key_a: BitString
    key_b: BitString
    seed: int
    max_retries: int = DEFAULT_MAX_RETRIES
    roles_reversed: bool = False

    def __post_init__(self):
        layout = RegisterLayout(self.n)  # validates the width range
        del layout
        if self.key_a.width != self.n or self.key_b.width != self.n:
            raise ValueError(
                f"key widths ({self.key_a.width}, {self.key_b.width}) "
                f"must equal n={self.n}"
            )
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.variant is Variant.SSEBV:
            chosen = self.key_b if self.roles_reversed else self.key_a
            forced = self.key_a if self.roles_reversed else self.key_b
            if not forced.is_zero:
                raise ValueError(
                    "ssebv: the non-choosing party's key must be all-zero"
                )
            if chosen.is_zero:
                raise ValueError("ssebv: an all-zero chosen key is unacceptable")

    @property
    def initiator(self) -> str:
        """The driving party: whose readout is the key (fSEBV) or who chooses it (sSEBV)."""
        if self.variant is Variant.FSEBV:
            return "alice" if self.roles_reversed else "bob"
        return "bob" if self.roles_reversed else "alice"

    @property
    def responder(self) -> str:
        return "bob" if self.initiator == "alice" else "alice"

    def role_of(self, party: str) -> PartyRole:
        return PartyRole.INITIATOR if party == self.initiator else PartyRole.RESPONDER

    def to_record(self) -> dict:
        return {
            "variant": self.variant.value,
            "n": self.n,
            "key_a": str(self.key_a),
            "key_b": str(self.key_b),
            "seed": self.seed,
            "max_retries": self.max_retries,
            "roles_reversed": self.roles_reversed,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ProtocolConfig":
        return cls(
            variant=Variant(record["variant"]),
            n=int(record["n"]),
            key_a=BitString.from_text(record["key_a"]),
            key_b=BitString.from_text(record["key_b"]),
            seed=int(record["seed"]),
            max_retries=int(record["max_retries"]),
            roles_reversed=bool(record["roles_reversed"]),
        )


@dataclass(frozen=True)
class Attempt:
    alice_measurement: BitString
    bob_measurement: BitString
    messages: tuple[PublicMessage, ...]


@dataclass(frozen=True)
class SessionTranscript:
    """Complete record of one session; replaying config+seed reproduces it bit-exactly."""

    config: ProtocolConfig
    attempts: tuple[Attempt, ...]
    final_key_alice: BitString | None
    final_key_bob: BitString | None
    retries_used: int
    rng_algorithm: str = field(default=Rng.algorithm)

    @property
    def succeeded(self) -> bool:
        return self.final_key_alice is not None

    def to_record(self) -> dict:
        """Serializable form; field order is fixed and documented here.

        Top level: variant, n, key_a, key_b, seed, max_retries, roles_reversed,
        rng_algorithm, attempts, final_key_alice, final_key_bob, retries_used.
        Each attempt: alice_measurement, bob_measurement, messages; each
        message: sender, kind, payload.  Bit strings render MSB-first.
        """
        record = self.config.to_record()
        record["rng_algorithm"] = self.rng_algorithm
        record["attempts"] = [
            {
                "alice_measurement": str(a.alice_measurement),
                "bob_measurement": str(a.bob_measurement),
                "messages": [
                    {
                        "sender": msg.sender,
                        "kind": msg.kind.value,
                        "payload": None if msg.payload is None else str(msg.payload),
                    }
                    for msg in a.messages
                ],
            }
            for a in self.attempts
        ]
        record["final_key_alice"] = (
            None if self.final_key_alice is None else str(self.final_key_alice)
        )
        record["final_key_bob"] = (
            None if self.final_key_bob is None else str(self.final_key_bob)
        )
        record["retries_used"] = self.retries_used
        return record

    def to_json_line(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


class RetryLimitError(Exception):
    """Raised when every allowed attempt produced the all-zero readout."""

    def __init__(self, transcript: SessionTranscript):
        super().__init__(
            f"no usable key after {len(transcript.attempts)} attempts"
        )
        self.transcript = transcript


def derive_key(own_key: BitString, own_measurement: BitString, announced: BitString) -> BitString:
    """Bitwise XOR of the party's key, its readout, and the announced string."""
    return own_key ^ own_measurement ^ announced


def reverse_roles(config: ProtocolConfig) -> ProtocolConfig:
    """Swap which party drives the session.

    For fSEBV the keys stay with their owners and only the driving role flips:
    the reversed session takes Alice's readout as the key and has Alice
    announce her own tentative key.  For sSEBV the chosen key must follow the
    chooser, so the key values swap as well.  Reversing twice restores the
    original config.
    """
    if config.variant is Variant.SSEBV:
        return replace(
            config,
            key_a=config.key_b,
            key_b=config.key_a,
            roles_reversed=not config.roles_reversed,
        )
    return replace(config, roles_reversed=not config.roles_reversed)


def apply_party_operations(state: StateVector, config: ProtocolConfig) -> StateVector:
    """Both parties' gate sequence on an already-distributed entangled state."""
    layout = RegisterLayout(config.n)
    state.h(layout.alice_output)
    state.h(layout.bob_output)
    state.dot_oracle(config.key_a, layout.alice_input, layout.alice_output)
    state.dot_oracle(config.key_b, layout.bob_input, layout.bob_output)
    for q in layout.alice_input:
        state.h(q)
    for q in layout.bob_input:
        state.h(q)
    return state


def premeasurement_state(config: ProtocolConfig) -> StateVector:
    """The shared state just before the two input registers are measured."""
    return apply_party_operations(prepare_bell_pairs(config.n), config)


def _measure_attempt(config: ProtocolConfig, rng: Rng) -> tuple[BitString, BitString]:
    layout = RegisterLayout(config.n)
    state = premeasurement_state(config)
    z0 = state.measure(list(layout.alice_input), rng).outcome
    w0 = state.measure(list(layout.bob_input), rng).outcome
    return z0, w0


def run_fsebv(config: ProtocolConfig) -> SessionTranscript:
    """Run one fully symmetric session.

    Per attempt the initiator's readout is the tentative final key; all-zero
    readouts trigger a retry request and a fresh attempt with a derived
    sub-seed.  On success the initiator announces their own tentative key and
    the responder XORs it with their key and readout, so both final keys agree
    and equal ``key_a ^ key_b ^ z0`` (equivalently ``... ^ w0``).

    Raises :class:`RetryLimitError` (transcript attached) if every allowed
    attempt read out zero.
    """
    if config.variant is not Variant.FSEBV:
        raise ValueError(f"run_fsebv needs an fsebv config, got {config.variant.value}")
    session_rng = Rng(config.seed)
    initiator = config.initiator
    attempts: list[Attempt] = []
    for attempt_index in range(config.max_retries + 1):
        rng = session_rng.derive(attempt_index)
        z0, w0 = _measure_attempt(config, rng)
        key_readout = w0 if initiator == "bob" else z0
        if key_readout.is_zero:
            retry = PublicMessage(initiator, MessageKind.RETRY_REQUEST)
            attempts.append(Attempt(z0, w0, (retry,)))
            continue
        own_key = config.key_b if initiator == "bob" else config.key_a
        announcement = PublicMessage(initiator, MessageKind.KEY_ANNOUNCEMENT, own_key)
        attempts.append(Attempt(z0, w0, (announcement,)))
        if initiator == "bob":
            final_alice = derive_key(config.key_a, z0, own_key)
            final_bob = w0
        else:
            final_alice = z0
            final_bob = derive_key(config.key_b, w0, own_key)
        return SessionTranscript(
            config=config,
            attempts=tuple(attempts),
            final_key_alice=final_alice,
            final_key_bob=final_bob,
            retries_used=len(attempts) - 1,
        )
    raise RetryLimitError(
        SessionTranscript(
            config=config,
            attempts=tuple(attempts),
            final_key_alice=None,
            final_key_bob=None,
            retries_used=config.max_retries,
        )
    )


def run_ssebv(config: ProtocolConfig) -> SessionTranscript:
    """Run one semi-symmetric session.

    The responder's key is all-zero, so the responder's readout equals the
    chosen key XOR the initiator's readout.  The initiator announces their
    measurement and the responder XORs it away, recovering the chosen key.
    The key was fixed in advance and validated non-zero, so no retry applies.
    """
    if config.variant is not Variant.SSEBV:
        raise ValueError(f"run_ssebv needs an ssebv config, got {config.variant.value}")
    rng = Rng(config.seed).derive(0)
    z0, w0 = _measure_attempt(config, rng)
    initiator = config.initiator
    if initiator == "alice":
        announcement = PublicMessage("alice", MessageKind.MEASUREMENT_ANNOUNCEMENT, z0)
        final_alice = config.key_a
        final_bob = derive_key(config.key_b, w0, z0)
    else:
        announcement = PublicMessage("bob", MessageKind.MEASUREMENT_ANNOUNCEMENT, w0)
        final_bob = config.key_b
        final_alice = derive_key(config.key_a, z0, w0)
    return SessionTranscript(
        config=config,
        attempts=(Attempt(z0, w0, (announcement,)),),
        final_key_alice=final_alice,
        final_key_bob=final_bob,
        retries_used=0,
    )


def run_session(config: ProtocolConfig) -> SessionTranscript:
    """Dispatch to the configured variant."""
    if config.variant is Variant.FSEBV:
        return run_fsebv(config)
    return run_ssebv(config)
