"""Circuit builders, the register layout, and OpenQASM 2.0 export.

Three circuits are built here: the Bell-pair source that seeds both key
exchange variants, the plain Bernstein-Vazirani query circuit, and the
entangled two-party variant where each side injects its own key.  Builders are
pure and deterministic: gate order within a layer is fixed (Alice's qubits
ascending, then Bob's), so exported QASM text is byte-stable for equal inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import BitString
from .rng import Rng
from .state import MAX_QUBITS, StateVector

MAX_KEY_WIDTH = (MAX_QUBITS - 2) // 2  # two inputs + two outputs must fit


@dataclass(frozen=True)
class RegisterLayout:
    """Maps the four logical registers of a width-``n`` exchange onto qubits.

    Alice's input register is qubits 0..n-1 and her output qubit is n; Bob's
    input register is n+1..2n and his output qubit is 2n+1.  For n=3 this puts
    Alice's inputs on q0,q1,q2 (output q3) and Bob's on q4,q5,q6 (output q7).
    """

    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_KEY_WIDTH:
            raise ValueError(f"key width must be in [1, {MAX_KEY_WIDTH}], got {self.n}")

    @property
    def alice_input(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    @property
    def alice_output(self) -> int:
        return self.n

    @property
    def bob_input(self) -> tuple[int, ...]:
        return tuple(range(self.n + 1, 2 * self.n + 1))

    @property
    def bob_output(self) -> int:
        return 2 * self.n + 1

    @property
    def num_qubits(self) -> int:
        return 2 * self.n + 2


@dataclass(frozen=True)
class Gate:
    kind: str  # "h" | "x" | "cx"
    qubits: tuple[int, ...]

    def __post_init__(self):
        arity = {"h": 1, "x": 1, "cx": 2}
        if self.kind not in arity:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != arity[self.kind]:
            raise ValueError(f"{self.kind} takes {arity[self.kind]} qubits")


@dataclass(frozen=True)
class CircuitDescription:
    """An ordered gate list plus the set of qubits measured at the end."""

    num_qubits: int
    gates: tuple[Gate, ...]
    measurements: tuple[int, ...]

    def __post_init__(self):
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate {gate} references qubit {q} out of range")
        for q in self.measurements:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"measured qubit {q} out of range")


def simulate(circuit: CircuitDescription) -> StateVector:
    """Run the gate list on |0...0> and return the pre-measurement state."""
    state = StateVector(circuit.num_qubits)
    for gate in circuit.gates:
        if gate.kind == "h":
            state.h(gate.qubits[0])
        elif gate.kind == "x":
            state.x(gate.qubits[0])
        else:
            state.cnot(gate.qubits[0], gate.qubits[1])
    return state


def _bell_prep_gates(layout: RegisterLayout) -> list[Gate]:
    # H + CNOT per pair makes |Phi+> on (alice_input[i], bob_input[i]);
    # both output qubits are prepared at |1> with an X.
    gates = []
    for i in range(layout.n):
        gates.append(Gate("h", (layout.alice_input[i],)))
        gates.append(Gate("cx", (layout.alice_input[i], layout.bob_input[i])))
    gates.append(Gate("x", (layout.alice_output,)))
    gates.append(Gate("x", (layout.bob_output,)))
    return gates


# The Bell-plus-outputs state depends only on n and every gate is
# deterministic, so small instances are built once and copied per session.
_BELL_CACHE: dict[int, StateVector] = {}
_BELL_CACHE_MAX_N = 8


def prepare_bell_pairs(n: int) -> StateVector:
    """The (2n+2)-qubit starting state of both protocol variants.

    Each of Alice's input qubits is maximally entangled with Bob's matching
    input qubit and both output qubits are |1>, i.e. the joint input registers
    carry amplitude 1/sqrt(2**n) on every |x>|x> and nothing else.
    """
    layout = RegisterLayout(n)
    if n in _BELL_CACHE:
        return _BELL_CACHE[n].copy()
    state = StateVector(layout.num_qubits)
    for gate in _bell_prep_gates(layout):
        if gate.kind == "h":
            state.h(gate.qubits[0])
        elif gate.kind == "x":
            state.x(gate.qubits[0])
        else:
            state.cnot(gate.qubits[0], gate.qubits[1])
    if n <= _BELL_CACHE_MAX_N:
        _BELL_CACHE[n] = state
        return state.copy()
    return state


def _oracle_gates(key: BitString, inputs: tuple[int, ...], output: int) -> list[Gate]:
    return [Gate("cx", (inputs[i], output)) for i in range(key.width) if key.bit(i)]


def build_bv_circuit(s: BitString) -> CircuitDescription:
    """Single-query circuit recovering the hidden key ``s``.

    Layout: input register on qubits 0..n-1, output qubit n prepared at |1>.
    H everywhere, the oracle's CNOTs, H on the inputs again, then the input
    register is measured.
    """
    n = s.width
    inputs = tuple(range(n))
    output = n
    gates = [Gate("x", (output,))]
    gates += [Gate("h", (q,)) for q in inputs]
    gates.append(Gate("h", (output,)))
    gates += _oracle_gates(s, inputs, output)
    gates += [Gate("h", (q,)) for q in inputs]
    return CircuitDescription(n + 1, tuple(gates), inputs)


def run_bv(s: BitString, rng: Rng) -> BitString:
    """Execute the single-query circuit; the measured input register is ``s``."""
    state = simulate(build_bv_circuit(s))
    return state.measure(list(range(s.width)), rng).outcome


def classical_bv_queries(s: BitString) -> list[tuple[BitString, int]]:
    """The n one-hot queries a classical player needs, most significant first.

    Each query reveals one key bit; reassembling the answers yields ``s``.
    """
    queries = []
    for position in range(s.width - 1, -1, -1):
        query = BitString(s.width, 1 << position)
        queries.append((query, s.dot(query)))
    return queries


def build_sebv_circuit(n: int, key_a: BitString, key_b: BitString) -> CircuitDescription:
    """The entangled two-party circuit with both parties' oracles.

    Bell-pair source, H on both output qubits, Alice's then Bob's oracle
    CNOTs, H on both input registers, and a final measurement of both input
    registers.  ``key_b`` all-zero yields the semi-symmetric circuit (no
    Bob-side oracle CNOTs).
    """
    if key_a.width != n or key_b.width != n:
        raise ValueError(
            f"key widths ({key_a.width}, {key_b.width}) must equal n={n}"
        )
    layout = RegisterLayout(n)
    gates = _bell_prep_gates(layout)
    gates.append(Gate("h", (layout.alice_output,)))
    gates.append(Gate("h", (layout.bob_output,)))
    gates += _oracle_gates(key_a, layout.alice_input, layout.alice_output)
    gates += _oracle_gates(key_b, layout.bob_input, layout.bob_output)
    gates += [Gate("h", (q,)) for q in layout.alice_input]
    gates += [Gate("h", (q,)) for q in layout.bob_input]
    return CircuitDescription(
        layout.num_qubits, tuple(gates), layout.alice_input + layout.bob_input
    )


def export_qasm(circuit: CircuitDescription) -> str:
    """Render a circuit as OpenQASM 2.0 text.

    One quantum and one classical register, both sized ``num_qubits``; each
    measured qubit lands in the classical bit with the same index.  Output is
    byte-stable for a fixed circuit.
    """
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{circuit.num_qubits}];",
        f"creg c[{circuit.num_qubits}];",
    ]
    for gate in circuit.gates:
        if gate.kind == "cx":
            lines.append(f"cx q[{gate.qubits[0]}],q[{gate.qubits[1]}];")
        else:
            lines.append(f"{gate.kind} q[{gate.qubits[0]}];")
    for q in sorted(circuit.measurements):
        lines.append(f"measure q[{q}] -> c[{q}];")
    return "\n".join(lines) + "\n"
