"""Parameterized-circuit representation.

A circuit is an ordered tuple of gates over named parameters. A single
parameter may appear at several gate occurrences (e.g. shared rotation
angles in a circuit and its structural dagger); occurrences are
addressed by their gate position so the parameter-shift rule can offset
one occurrence at a time. Circuits are immutable values: `bind`,
`shift_occurrence`, `conjugate` etc. return new circuits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import simcore
from .simcore import GATE_ARITY, PARAMETERIZED_KINDS, StateVector

UNITARY_MAX_QUBITS = 6


@dataclass(frozen=True)
class ParamRef:
    """Angle reference: effective angle = sign * value(name) + shift."""

    name: str
    sign: int = 1
    shift: float = 0.0


@dataclass(frozen=True)
class GateInstance:
    kind: str
    qubits: tuple[int, ...]
    angle: float | ParamRef | None = None


@dataclass(frozen=True)
class ParamCircuit:
    n_qubits: int
    gates: tuple[GateInstance, ...]
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        declared = {name for name, _ in self.params}
        if len(declared) != len(self.params):
            raise ValueError("duplicate parameter declaration")
        for g in self.gates:
            if g.kind not in GATE_ARITY:
                raise ValueError(f"unknown gate kind {g.kind!r}")
            if len(g.qubits) != GATE_ARITY[g.kind]:
                raise ValueError(f"{g.kind} takes {GATE_ARITY[g.kind]} qubit(s)")
            if len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"duplicate qubits in {g}")
            for q in g.qubits:
                if not (0 <= q < self.n_qubits):
                    raise ValueError(f"qubit {q} out of range")
            takes_angle = g.kind in PARAMETERIZED_KINDS
            if takes_angle and g.angle is None:
                raise ValueError(f"{g.kind} requires an angle")
            if not takes_angle and g.angle is not None:
                raise ValueError(f"{g.kind} takes no angle")
            if isinstance(g.angle, ParamRef) and g.angle.name not in declared:
                raise ValueError(f"undeclared parameter {g.angle.name!r}")

    def values(self) -> dict[str, float]:
        return dict(self.params)

    def occurrences_of(self, name: str) -> tuple[int, ...]:
        """Gate positions at which `name` appears (the occurrence ids)."""
        if name not in self.values():
            raise KeyError(f"unknown parameter {name!r}")
        return tuple(
            i
            for i, g in enumerate(self.gates)
            if isinstance(g.angle, ParamRef) and g.angle.name == name
        )


def resolved_angle(gate: GateInstance, values: dict[str, float]) -> float | None:
    if isinstance(gate.angle, ParamRef):
        ref = gate.angle
        return ref.sign * values[ref.name] + ref.shift
    return gate.angle


def bind(circ: ParamCircuit, values: dict[str, float]) -> ParamCircuit:
    """Set all parameter values; the source circuit is left untouched."""
    declared = circ.values()
    unknown = set(values) - set(declared)
    if unknown:
        raise KeyError(f"unknown parameter(s) {sorted(unknown)}")
    missing = set(declared) - set(values)
    if missing:
        raise KeyError(f"missing parameter(s) {sorted(missing)}")
    new_params = tuple((name, float(values[name])) for name, _ in circ.params)
    return replace(circ, params=new_params)


def shift_occurrence(circ: ParamCircuit, occurrence: int, delta: float) -> ParamCircuit:
    """Offset the effective angle of one parameter occurrence by `delta`."""
    if not (0 <= occurrence < len(circ.gates)):
        raise IndexError(f"no gate at occurrence {occurrence}")
    g = circ.gates[occurrence]
    if not isinstance(g.angle, ParamRef):
        raise ValueError(f"gate at occurrence {occurrence} has no parameter reference")
    shifted = replace(g, angle=replace(g.angle, shift=g.angle.shift + delta))
    gates = circ.gates[:occurrence] + (shifted,) + circ.gates[occurrence + 1 :]
    return replace(circ, gates=gates)


def _negated_angle(angle: float | ParamRef) -> float | ParamRef:
    if isinstance(angle, ParamRef):
        return ParamRef(angle.name, -angle.sign, -angle.shift)
    return -angle


# conjugation rules: RY, CNOT and H have real matrices; the others are
# complex-conjugated by negating the angle.
_CONJ_NEGATES = {"RX": True, "RY": False, "P": True, "RZZ": True, "CNOT": False, "H": False}


def conjugate(circ: ParamCircuit) -> ParamCircuit:
    """Circuit whose unitary is the elementwise complex conjugate."""
    gates = []
    for g in circ.gates:
        if g.kind not in _CONJ_NEGATES:
            raise ValueError(f"no conjugation rule for {g.kind!r}")
        if _CONJ_NEGATES[g.kind]:
            g = replace(g, angle=_negated_angle(g.angle))
        gates.append(g)
    return replace(circ, gates=tuple(gates))


def inverse(circ: ParamCircuit) -> ParamCircuit:
    """Structural inverse: reversed gate order, negated angles."""
    gates = []
    for g in reversed(circ.gates):
        if g.angle is not None:
            g = replace(g, angle=_negated_angle(g.angle))
        gates.append(g)
    return replace(circ, gates=tuple(gates))


def remap_qubits(circ: ParamCircuit, mapping: dict[int, int], n_qubits: int) -> ParamCircuit:
    """Relocate the circuit onto other wires of an `n_qubits` register."""
    gates = tuple(
        replace(g, qubits=tuple(mapping[q] for q in g.qubits)) for g in circ.gates
    )
    return ParamCircuit(n_qubits, gates, circ.params)


def resolve(circ: ParamCircuit) -> ParamCircuit:
    """Replace every parameter reference by its current literal angle."""
    values = circ.values()
    gates = tuple(
        replace(g, angle=resolved_angle(g, values))
        if isinstance(g.angle, ParamRef)
        else g
        for g in circ.gates
    )
    return ParamCircuit(circ.n_qubits, gates, ())


def run(circ: ParamCircuit, state: StateVector) -> StateVector:
    """Apply the circuit's gates in order to `state`."""
    if state.n_qubits != circ.n_qubits:
        raise ValueError(
            f"state has {state.n_qubits} qubits, circuit needs {circ.n_qubits}"
        )
    values = circ.values()
    out = state
    for g in circ.gates:
        out = simcore.apply_gate(out, g.kind, g.qubits, resolved_angle(g, values))
    return out


def unitary_of(circ: ParamCircuit) -> np.ndarray:
    """Dense unitary; column j is the circuit applied to basis state j."""
    n = circ.n_qubits
    if n > UNITARY_MAX_QUBITS:
        raise ValueError(f"unitary_of limited to {UNITARY_MAX_QUBITS} qubits, got {n}")
    values = circ.values()
    dim = 2**n
    if n <= 2:
        # small registers: plain matrix products are fastest
        u = np.eye(dim, dtype=complex)
        for g in circ.gates:
            m = simcore.gate_matrix(g.kind, resolved_angle(g, values))
            u = _embed(m, g.qubits, n) @ u
        return u
    # treat the column index as a spectator axis of the row tensor
    arr = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in circ.gates:
        m = simcore.gate_matrix(g.kind, resolved_angle(g, values))
        k = len(g.qubits)
        t = m.reshape((2,) * (2 * k))
        arr = np.tensordot(t, arr, axes=(list(range(k, 2 * k)), list(g.qubits)))
        arr = np.moveaxis(arr, range(k), g.qubits)
    return arr.reshape(dim, dim)


def _embed(mat: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Expand a 1- or 2-qubit matrix to the full register (n <= 2 here)."""
    if len(qubits) == n and qubits == tuple(range(n)):
        return mat
    if len(qubits) == 1 and n == 2:
        i2 = np.eye(2)
        return np.kron(mat, i2) if qubits[0] == 0 else np.kron(i2, mat)
    if len(qubits) == 2 and qubits == (1, 0):
        swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        return swap @ mat @ swap
    raise ValueError(f"cannot embed gate on {qubits} into {n} qubits")


# text serialization ----------------------------------------------------
#
# One gate per line, `KIND q0[,q1] angle|@param[+-shift][*sign]`, with a
# self-contained preamble: a `qubits N` line and one `param NAME VALUE`
# line per declared parameter.


def to_text(circ: ParamCircuit) -> str:
    lines = [f"qubits {circ.n_qubits}"]
    for name, value in circ.params:
        lines.append(f"param {name} {float(value)!r}")
    for g in circ.gates:
        qubits = ",".join(str(q) for q in g.qubits)
        if g.angle is None:
            lines.append(f"{g.kind} {qubits}")
        elif isinstance(g.angle, ParamRef):
            ref = f"@{g.angle.name}"
            if g.angle.shift:
                ref += f"{g.angle.shift:+.17g}"
            if g.angle.sign != 1:
                ref += f"*{g.angle.sign}"
            lines.append(f"{g.kind} {qubits} {ref}")
        else:
            lines.append(f"{g.kind} {qubits} {float(g.angle)!r}")
    return "\n".join(lines) + "\n"


def _parse_ref(token: str) -> ParamRef:
    body = token[1:]
    sign = 1
    if "*" in body:
        body, sign_str = body.split("*", 1)
        sign = int(sign_str)
    shift = 0.0
    for pos in range(1, len(body)):
        if body[pos] in "+-":
            shift = float(body[pos:])
            body = body[:pos]
            break
    return ParamRef(body, sign, shift)


def from_text(text: str) -> ParamCircuit:
    n_qubits = None
    params: list[tuple[str, float]] = []
    gates: list[GateInstance] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "qubits":
            n_qubits = int(tokens[1])
            continue
        if tokens[0] == "param":
            params.append((tokens[1], float(tokens[2])))
            continue
        kind = tokens[0]
        qubits = tuple(int(q) for q in tokens[1].split(","))
        angle: float | ParamRef | None = None
        if len(tokens) > 2:
            angle = _parse_ref(tokens[2]) if tokens[2].startswith("@") else float(tokens[2])
        gates.append(GateInstance(kind, qubits, angle))
    if n_qubits is None:
        raise ValueError("missing 'qubits N' line")
    return ParamCircuit(n_qubits, tuple(gates), tuple(params))
