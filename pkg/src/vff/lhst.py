"""Local Hilbert-Schmidt test for two 2-qubit circuits.

Two 4-qubit circuits are built over registers A = (0, 1) and B = (2, 3):
Bell pairs are prepared across (A_j, B_j), the candidate acts on A and
the complex conjugate of the reference acts on B, and one pair is
un-prepared and measured. The cost

    C = 1 - (Pr(00)_pair0 + Pr(00)_pair1) / 2

vanishes exactly when the two unitaries agree up to a global phase.
Each Pr(00) is the entanglement fidelity of the channel seen by that
pair, so C also bounds the global Hilbert-Schmidt cost: C <= C_HST <= 2C
for two qubits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import circuit as circ_mod
from . import simcore
from .circuit import GateInstance, ParamCircuit

PAIRS = ((0, 2), (1, 3))


@dataclass
class EvalCounter:
    """Counts executed test circuits and cost evaluations."""

    circuits: int = 0
    costs: int = 0


@dataclass(frozen=True)
class CostEstimate:
    value: float
    pr00_pair1: float
    pr00_pair2: float
    mode: str  # "analytic" | "sampled"
    shots: int
    seed: int

    def __post_init__(self):
        reconstructed = 1.0 - (self.pr00_pair1 + self.pr00_pair2) / 2.0
        if abs(self.value - reconstructed) > 1e-12:
            raise ValueError("cost value inconsistent with pair probabilities")
        if not (-1e-12 <= self.value <= 1.0 + 1e-12):
            raise ValueError(f"cost {self.value} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "pr00_pair1": self.pr00_pair1,
            "pr00_pair2": self.pr00_pair2,
            "mode": self.mode,
            "shots": self.shots,
            "seed": self.seed,
        }


def build_lhst_circuits(u: ParamCircuit, v: ParamCircuit) -> tuple[ParamCircuit, ParamCircuit]:
    """The two 4-qubit test circuits (pair 0 and pair 1 variants).

    Parameters of `u` and `v` are resolved to literal angles first, so
    the two inputs may share parameter names.
    """
    if u.n_qubits != 2 or v.n_qubits != 2:
        raise ValueError("both circuits must act on 2 qubits")
    u_gates = circ_mod.remap_qubits(circ_mod.resolve(u), {0: 0, 1: 1}, 4).gates
    v_conj = circ_mod.conjugate(circ_mod.resolve(v))
    v_gates = circ_mod.remap_qubits(v_conj, {0: 2, 1: 3}, 4).gates

    prep = (
        GateInstance("H", (0,)),
        GateInstance("H", (1,)),
        GateInstance("CNOT", (0, 2)),
        GateInstance("CNOT", (1, 3)),
    )
    circuits = []
    for a_j, b_j in PAIRS:
        unprep = (GateInstance("CNOT", (a_j, b_j)), GateInstance("H", (a_j,)))
        circuits.append(ParamCircuit(4, prep + u_gates + v_gates + unprep))
    return circuits[0], circuits[1]


def _pair_states(u: ParamCircuit, v: ParamCircuit, counter: EvalCounter | None):
    for test_circuit, pair in zip(build_lhst_circuits(u, v), PAIRS):
        state = circ_mod.run(test_circuit, simcore.init_zero(4))
        if counter is not None:
            counter.circuits += 1
        yield state, pair


def cost_analytic(u: ParamCircuit, v: ParamCircuit, counter: EvalCounter | None = None) -> CostEstimate:
    """Exact cost from the marginal Pr(00) of each test circuit."""
    pr00 = [
        float(simcore.probabilities(state, pair)[0])
        for state, pair in _pair_states(u, v, counter)
    ]
    if counter is not None:
        counter.costs += 1
    value = 1.0 - (pr00[0] + pr00[1]) / 2.0
    return CostEstimate(value, pr00[0], pr00[1], "analytic", 0, 0)


def cost_sampled(
    u: ParamCircuit,
    v: ParamCircuit,
    shots: int,
    seed: int,
    counter: EvalCounter | None = None,
) -> CostEstimate:
    """Cost from multinomial sampling of the two measured pairs.

    Circuit i draws from the sub-stream keyed by (seed, i); repeated
    calls with the same arguments give identical estimates.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    pr00 = []
    for i, (state, pair) in enumerate(_pair_states(u, v, counter)):
        outcomes = simcore.sample(state, pair, shots, simcore.child_seed(seed, i))
        hits = sum(o.count for o in outcomes if o.bits == "00")
        pr00.append(hits / shots)
    if counter is not None:
        counter.costs += 1
    value = 1.0 - (pr00[0] + pr00[1]) / 2.0
    return CostEstimate(value, pr00[0], pr00[1], "sampled", shots, seed)


def hst_global(u: ParamCircuit, v: ParamCircuit) -> float:
    """Global Hilbert-Schmidt cost 1 - |Tr(U V^dag)|^2 / d^2 (oracle only)."""
    if u.n_qubits != 2 or v.n_qubits != 2:
        raise ValueError("both circuits must act on 2 qubits")
    u_mat = circ_mod.unitary_of(u)
    v_mat = circ_mod.unitary_of(v)
    d = u_mat.shape[0]
    overlap = abs(np.trace(u_mat @ v_mat.conj().T)) ** 2 / d**2
    return float(max(0.0, 1.0 - overlap))


def cost_from_unitaries(u_mat: np.ndarray, v_mat: np.ndarray) -> float:
    """Closed form of the test cost from dense 4x4 unitaries.

    With M = U V^dag, Pr(00) of pair j is ||Tr_j M||_F^2 / 8 where Tr_j
    traces out qubit j of M. Used as a fast path for inner optimization
    and as an independent check of the circuit route.
    """
    m = (u_mat @ v_mat.conj().T).reshape(2, 2, 2, 2)
    t0 = np.einsum("abac->bc", m)
    t1 = np.einsum("abcb->ac", m)
    pr0 = np.linalg.norm(t0) ** 2 / 8.0
    pr1 = np.linalg.norm(t1) ** 2 / 8.0
    return float(1.0 - (pr0 + pr1) / 2.0)
