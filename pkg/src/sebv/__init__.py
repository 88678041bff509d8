"""Simulation kit for the fSEBV and sSEBV entanglement-based key exchanges."""

from .adversary import (
    AttackKind,
    AttackReport,
    EveObservation,
    attack_sessions,
    intercept_resend_eve,
    passive_eve,
    run_attack,
)
from .analysis import (
    OutcomeHistogram,
    UniformityCheck,
    check_uniformity,
    collect_histogram,
    expected_support,
    joint_readout,
)
from .bits import BitString
from .circuits import (
    CircuitDescription,
    Gate,
    RegisterLayout,
    build_bv_circuit,
    build_sebv_circuit,
    classical_bv_queries,
    export_qasm,
    prepare_bell_pairs,
    run_bv,
    simulate,
)
from .protocol import (
    Attempt,
    MessageKind,
    PartyRole,
    ProtocolConfig,
    PublicMessage,
    RetryLimitError,
    SessionTranscript,
    Variant,
    derive_key,
    premeasurement_state,
    reverse_roles,
    run_fsebv,
    run_session,
    run_ssebv,
)
from .rng import Rng
from .state import MAX_QUBITS, MeasurementResult, StateVector

__version__ = "0.1.0"

__all__ = [
    "AttackKind",
    "AttackReport",
    "Attempt",
    "BitString",
    "CircuitDescription",
    "EveObservation",
    "Gate",
    "MAX_QUBITS",
    "MeasurementResult",
    "MessageKind",
    "OutcomeHistogram",
    "PartyRole",
    "ProtocolConfig",
    "PublicMessage",
    "RegisterLayout",
    "RetryLimitError",
    "Rng",
    "SessionTranscript",
    "StateVector",
    "UniformityCheck",
    "Variant",
    "attack_sessions",
    "build_bv_circuit",
    "build_sebv_circuit",
    "check_uniformity",
    "classical_bv_queries",
    "collect_histogram",
    "derive_key",
    "expected_support",
    "export_qasm",
    "intercept_resend_eve",
    "joint_readout",
    "passive_eve",
    "premeasurement_state",
    "prepare_bell_pairs",
    "reverse_roles",
    "run_attack",
    "run_bv",
    "run_fsebv",
    "run_session",
    "run_ssebv",
    "simulate",
]
