"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the package internals:
gates are embedded with explicit Kronecker products and evolution
operators come from scipy, so agreement with the library is a real
cross-check rather than a tautology.
"""

import numpy as np
from scipy.linalg import expm

from vff.circuit import GateInstance, ParamCircuit

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def oracle_gate_matrix(kind: str, angle) -> np.ndarray:
    """Reference gate matrices built from matrix exponentials."""
    if kind == "RX":
        return expm(1j * angle * X / 2)
    if kind == "RY":
        return expm(1j * angle * Y / 2)
    if kind == "P":
        return np.diag([1.0, np.exp(1j * angle)])
    if kind == "RZZ":
        return expm(1j * angle * np.kron(Z, Z) / 2)
    if kind == "H":
        return H
    if kind == "CNOT":
        return CNOT
    raise ValueError(kind)


def embed(mat: np.ndarray, qubits, n: int) -> np.ndarray:
    """Embed a gate matrix into an n-qubit register, qubit 0 leftmost.

    Works for one-qubit gates and for two-qubit gates on arbitrary wire
    pairs, by conjugating with explicit basis-permutation matrices.
    """
    qubits = tuple(qubits)
    if len(qubits) == 1:
        ops = [mat if q == qubits[0] else I2 for q in range(n)]
        out = ops[0]
        for op in ops[1:]:
            out = np.kron(out, op)
        return out
    # permutation sending (qubits[0], qubits[1]) to the two leftmost wires
    perm = list(qubits) + [q for q in range(n) if q not in qubits]
    dim = 2**n
    p = np.zeros((dim, dim), dtype=complex)
    for src in range(dim):
        bits = [(src >> (n - 1 - q)) & 1 for q in range(n)]
        dst = 0
        for pos, q in enumerate(perm):
            dst |= bits[q] << (n - 1 - pos)
        p[dst, src] = 1.0
    big = np.kron(mat, np.eye(2 ** (n - 2), dtype=complex))
    return p.conj().T @ big @ p


def oracle_circuit_unitary(circ: ParamCircuit) -> np.ndarray:
    """Independent dense unitary of a fully bound circuit."""
    from vff.circuit import resolved_angle

    values = circ.values()
    u = np.eye(2**circ.n_qubits, dtype=complex)
    for g in circ.gates:
        u = embed(oracle_gate_matrix(g.kind, resolved_angle(g, values)), g.qubits, circ.n_qubits) @ u
    return u


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


PARAM_GATE_KINDS = ("RX", "RY", "P", "RZZ")
ALL_KINDS = ("RX", "RY", "P", "RZZ", "CNOT", "H")


def random_circuit(rng: np.random.Generator, n_qubits: int = 2, n_gates: int = 8) -> ParamCircuit:
    """Random literal-angle circuit over the full gate set."""
    gates = []
    for _ in range(n_gates):
        kind = ALL_KINDS[rng.integers(len(ALL_KINDS))]
        if kind in ("RZZ", "CNOT"):
            q = list(rng.choice(n_qubits, size=2, replace=False))
            qubits = (int(q[0]), int(q[1]))
        else:
            qubits = (int(rng.integers(n_qubits)),)
        angle = float(rng.uniform(-np.pi, np.pi)) if kind in PARAM_GATE_KINDS else None
        gates.append(GateInstance(kind, qubits, angle))
    return ParamCircuit(n_qubits, tuple(gates))


def global_phase_gadget(phi: float) -> tuple[GateInstance, ...]:
    """Gates realizing exp(i phi) * identity on qubit 0."""
    return (
        GateInstance("RX", (0,), float(np.pi)),
        GateInstance("P", (0,), float(phi + np.pi)),
        GateInstance("RX", (0,), float(np.pi)),
        GateInstance("P", (0,), float(phi + np.pi)),
    )


def with_global_phase(circ: ParamCircuit, phi: float) -> ParamCircuit:
    return ParamCircuit(circ.n_qubits, circ.gates + global_phase_gadget(phi), circ.params)
