"""Spectral ansatz V = W . D . W^dagger for a two-qubit target.

W is 3 layers of (RX, RY, P) on each qubit with a CNOT(0->1) between
consecutive layers: 18 shared angles theta1..theta18, 2 CNOTs. D is the
exact diagonal ansatz RZZ(gamma1) then P(gamma2) on qubit 0 and
P(gamma3) on qubit 1 (3 angles, the 2^n - 1 diagonal freedoms of SU(4)
for n=2; the gates commute, the order is fixed for serialization only).

W^dagger is realized structurally (reversed order, negated angles), so
the theta parameters are shared between the two segments and the whole
V circuit stays executable on the sampling path. Fast-forwarding to
time t rescales the diagonal angles to gamma * t/dt at fixed depth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .circuit import GateInstance, ParamCircuit, ParamRef, inverse

N_THETA = 18
N_GAMMA = 3

THETA_NAMES = tuple(f"theta{k}" for k in range(1, N_THETA + 1))
GAMMA_NAMES = tuple(f"gamma{k}" for k in range(1, N_GAMMA + 1))
PARAM_NAMES = THETA_NAMES + GAMMA_NAMES

# (layer, qubit, gate kind) for theta1..theta18, in circuit order
THETA_LAYOUT = tuple(
    (layer, qubit, kind)
    for layer in (1, 2, 3)
    for qubit in (0, 1)
    for kind in ("RX", "RY", "P")
)


@dataclass(frozen=True)
class SpectralAnsatz:
    """Parameter store: 18 basis-change angles and 3 diagonal angles."""

    theta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        if theta.shape != (N_THETA,):
            raise ValueError(f"theta must have {N_THETA} entries")
        if gamma.shape != (N_GAMMA,):
            raise ValueError(f"gamma must have {N_GAMMA} entries")
        if not (np.isfinite(theta).all() and np.isfinite(gamma).all()):
            raise ValueError("angles must be finite")
        theta.setflags(write=False)
        gamma.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "gamma", gamma)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.theta, self.gamma])

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "SpectralAnsatz":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (N_THETA + N_GAMMA,):
            raise ValueError(f"expected {N_THETA + N_GAMMA} entries")
        return cls(vec[:N_THETA], vec[N_THETA:])

    def to_dict(self) -> dict:
        return {"theta": [float(x) for x in self.theta],
                "gamma": [float(x) for x in self.gamma]}

    @classmethod
    def from_dict(cls, doc: dict) -> "SpectralAnsatz":
        return cls(np.array(doc["theta"], dtype=float),
                   np.array(doc["gamma"], dtype=float))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "SpectralAnsatz":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _theta_params(theta: np.ndarray) -> tuple[tuple[str, float], ...]:
    return tuple((name, float(v)) for name, v in zip(THETA_NAMES, theta))


def _gamma_params(gamma: np.ndarray) -> tuple[tuple[str, float], ...]:
    return tuple((name, float(v)) for name, v in zip(GAMMA_NAMES, gamma))


def _w_gates() -> list[GateInstance]:
    gates: list[GateInstance] = []
    k = 0
    for layer in (1, 2, 3):
        if layer > 1:
            gates.append(GateInstance("CNOT", (0, 1)))
        for qubit in (0, 1):
            for kind in ("RX", "RY", "P"):
                gates.append(GateInstance(kind, (qubit,), ParamRef(THETA_NAMES[k])))
                k += 1
    return gates


def _d_gates() -> list[GateInstance]:
    return [
        GateInstance("RZZ", (0, 1), ParamRef(GAMMA_NAMES[0])),
        GateInstance("P", (0,), ParamRef(GAMMA_NAMES[1])),
        GateInstance("P", (1,), ParamRef(GAMMA_NAMES[2])),
    ]


def build_W(theta: np.ndarray) -> ParamCircuit:
    """Basis-change circuit: 3 parameterized layers, 2 CNOTs."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (N_THETA,):
        raise ValueError(f"theta must have {N_THETA} entries")
    return ParamCircuit(2, tuple(_w_gates()), _theta_params(theta))


def build_D(gamma: np.ndarray) -> ParamCircuit:
    """Exact diagonal ansatz on 2 qubits."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (N_GAMMA,):
        raise ValueError(f"gamma must have {N_GAMMA} entries")
    return ParamCircuit(2, tuple(_d_gates()), _gamma_params(gamma))


def build_V(a: SpectralAnsatz) -> ParamCircuit:
    """Full spectral circuit: W^dagger, then D, then W, sharing theta."""
    w = build_W(a.theta)
    gates = inverse(w).gates + tuple(_d_gates()) + w.gates
    return ParamCircuit(2, gates, _theta_params(a.theta) + _gamma_params(a.gamma))


def build_V_fast_forward(a: SpectralAnsatz, t: float, dt: float) -> ParamCircuit:
    """V with the diagonal angles rescaled to gamma * t/dt.

    The depth is independent of t; t/dt may be any real number, so
    non-integer and negative powers of V are reachable. For non-integer
    powers the result follows the phases linearly in gamma, which
    matches the principal matrix power whenever the diagonal phases of
    D lie inside (-pi, pi).
    """
    if dt == 0:
        raise ValueError("dt must be nonzero")
    scaled = replace(a, gamma=np.asarray(a.gamma, dtype=float) * (t / dt))
    return build_V(scaled)


def entangler_cnot_count(circ: ParamCircuit) -> int:
    """Two-qubit cost in CNOT units (an RZZ compiles to 2 CNOTs)."""
    return sum(1 if g.kind == "CNOT" else 2 for g in circ.gates if g.kind in ("CNOT", "RZZ"))
