"""Dense statevector simulation of few-qubit registers.

Conventions, fixed package-wide:

* Qubit 0 is the leftmost bit of an outcome label, i.e. the most
  significant bit of a basis-state index.
* Gate matrices:  RX(t) = exp(+i t X/2),  RY(t) = exp(+i t Y/2),
  P(g) = diag(1, exp(i g)),  RZZ(t) = exp(+i t Z(x)Z/2);
  H and CNOT are the standard real matrices.
* Randomness comes from numpy's PCG64. Independent sub-streams are
  derived with `child_seed`, keyed by structured integers such as
  (step, evaluation index, circuit index), so every circuit evaluation
  owns a private stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 12
NORM_TOL = 1e-10


@dataclass
class StateVector:
    """Dense complex amplitudes over `n_qubits` qubits (length 2**n)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError(
                f"amplitude vector has length {self.amplitudes.size}, "
                f"expected {2**self.n_qubits}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class MeasurementOutcome:
    """One observed bit pattern over a declared qubit subset."""

    bits: str
    count: int


def init_zero(n_qubits: int) -> StateVector:
    """All-zeros computational basis state |0...0>."""
    if not (1 <= n_qubits <= MAX_QUBITS):
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


# gate matrices ---------------------------------------------------------

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

PAULI_1Q = {"X": _X, "Y": _Y, "Z": _Z}


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, 1j * s], [1j * s, c]])


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def p_matrix(gamma: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * gamma)]])


def rzz_matrix(theta: float) -> np.ndarray:
    a, b = np.exp(1j * theta / 2), np.exp(-1j * theta / 2)
    return np.diag([a, b, b, a])


GATE_ARITY = {"RX": 1, "RY": 1, "P": 1, "RZZ": 2, "CNOT": 2, "H": 1}
PARAMETERIZED_KINDS = ("RX", "RY", "P", "RZZ")


def gate_matrix(kind: str, angle: float | None = None) -> np.ndarray:
    """Dense matrix of a named gate; `angle` required for rotation gates."""
    if kind in PARAMETERIZED_KINDS:
        if angle is None:
            raise ValueError(f"{kind} requires an angle")
        return {
            "RX": rx_matrix,
            "RY": ry_matrix,
            "P": p_matrix,
            "RZZ": rzz_matrix,
        }[kind](angle)
    if angle is not None:
        raise ValueError(f"{kind} takes no angle")
    if kind == "H":
        return H_MATRIX
    if kind == "CNOT":
        return CNOT_MATRIX
    raise ValueError(f"unknown gate kind {kind!r}")


# gate application ------------------------------------------------------


def _check_qubits(qubits, n_qubits, arity=None):
    qs = tuple(int(q) for q in qubits)
    if arity is not None and len(qs) != arity:
        raise ValueError(f"expected {arity} qubit(s), got {qs}")
    if len(set(qs)) != len(qs):
        raise ValueError(f"duplicate qubit indices {qs}")
    for q in qs:
        if not (0 <= q < n_qubits):
            raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")
    return qs


def apply_matrix(state: StateVector, mat: np.ndarray, qubits) -> StateVector:
    """Apply a 2^k x 2^k unitary to the listed qubits (new state returned)."""
    qs = _check_qubits(qubits, state.n_qubits)
    k = len(qs)
    if mat.shape != (2**k, 2**k):
        raise ValueError(f"matrix shape {mat.shape} does not act on {k} qubit(s)")
    psi = state.amplitudes.reshape((2,) * state.n_qubits)
    t = mat.reshape((2,) * (2 * k))
    out = np.tensordot(t, psi, axes=(list(range(k, 2 * k)), list(qs)))
    out = np.moveaxis(out, range(k), qs)
    return StateVector(state.n_qubits, np.ascontiguousarray(out).reshape(-1))


def apply_gate(state: StateVector, kind: str, qubits, angle: float | None = None) -> StateVector:
    """Apply a named gate with a resolved angle."""
    qs = _check_qubits(qubits, state.n_qubits, GATE_ARITY[kind])
    return apply_matrix(state, gate_matrix(kind, angle), qs)


# measurement -----------------------------------------------------------


def probabilities(state: StateVector, qubits) -> np.ndarray:
    """Marginal outcome distribution over the listed qubits.

    Entry b of the result is the probability of the bit pattern whose
    leftmost bit belongs to the first listed qubit.
    """
    qs = _check_qubits(qubits, state.n_qubits)
    p = np.abs(state.amplitudes.reshape((2,) * state.n_qubits)) ** 2
    other = tuple(ax for ax in range(state.n_qubits) if ax not in qs)
    marg = p.sum(axis=other) if other else p
    # axes of marg follow increasing qubit index; reorder to the listed order
    sorted_q = sorted(qs)
    marg = marg.transpose([sorted_q.index(q) for q in qs])
    return marg.reshape(-1)


def sample(state: StateVector, qubits, shots: int, seed: int) -> list[MeasurementOutcome]:
    """Multinomial measurement of the listed qubits.

    Identical (state, qubits, shots, seed) always yields identical counts.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    qs = _check_qubits(qubits, state.n_qubits)
    p = probabilities(state, qs)
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    counts = rng.multinomial(shots, p)
    width = len(qs)
    return [
        MeasurementOutcome(format(i, f"0{width}b"), int(c))
        for i, c in enumerate(counts)
        if c > 0
    ]


def child_seed(seed: int, *key: int) -> int:
    """Derive an independent sub-stream seed from (seed, *key)."""
    mask = (1 << 64) - 1
    ss = np.random.SeedSequence([int(seed) & mask] + [int(k) & mask for k in key])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
