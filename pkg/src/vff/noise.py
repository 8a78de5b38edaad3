"""Gate-level depolarizing noise with readout flips, from calibration data.

The noise model is Monte-Carlo trajectory based: after each ideal gate,
a uniformly random non-identity Pauli is applied to the gate's qubits
with probability 3p/4 (one qubit) or 15p/16 (two qubits), where p is
the gate's depolarizing probability. Those prefactors make the
trajectory ensemble average exactly the depolarizing channel
rho -> (1-p) rho + p I/d, so p = 1 drives a qubit to the maximally
mixed state. Readout errors flip each measured bit independently with
the qubit's SPAM probability epsilon.

Depolarizing probabilities are taken directly from reported randomized-
benchmarking errors (single-qubit u2 error and per-pair CNOT error), a
standard first-order identification. Any two-qubit gate on a pair uses
that pair's CNOT error; pairs absent from the calibration fall back to
the mean of the listed CNOT errors. T1/T2 are parsed and reported but
not simulated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import circuit as circ_mod
from . import simcore
from .circuit import GateInstance, ParamCircuit
from .lhst import PAIRS, CostEstimate, EvalCounter, build_lhst_circuits
from .simcore import PAULI_1Q, StateVector, child_seed

_SPAM_CONSISTENCY_TOL = 1e-9

_PAULI_LABELS_1Q = ("X", "Y", "Z")
# all 15 non-identity two-qubit Paulis as (label_on_first, label_on_second)
_PAULI_LABELS_2Q = tuple(
    (a, b)
    for a in ("I", "X", "Y", "Z")
    for b in ("I", "X", "Y", "Z")
    if not (a == "I" and b == "I")
)


@dataclass(frozen=True)
class QubitCalibration:
    id: int
    t1_us: float
    t2_us: float
    spam: float
    u2_error: float


@dataclass(frozen=True)
class CalibrationTable:
    qubits: tuple[QubitCalibration, ...]
    cnot: tuple[tuple[tuple[int, int], float], ...]

    def cnot_errors(self) -> dict[tuple[int, int], float]:
        return dict(self.cnot)


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} = {value} outside [0, 1]")
    return value


def load_calibration(source) -> CalibrationTable:
    """Parse a calibration document (path, JSON text handle, or dict).

    When both asymmetric readout rates t0_given_1 and t1_given_0 are
    present, the SPAM error is their mean; an explicitly listed spam
    value must then agree with that mean.
    """
    if isinstance(source, dict):
        doc = source
    else:
        with open(source) as fh:
            doc = json.load(fh)
    if "qubits" not in doc or not doc["qubits"]:
        raise ValueError("calibration document has no qubit rows")

    qubits = []
    for row in doc["qubits"]:
        t1, t2 = float(row["t1_us"]), float(row["t2_us"])
        if t1 <= 0 or t2 <= 0:
            raise ValueError(f"T1/T2 must be positive, got {t1}, {t2}")
        if "t0_given_1" in row and "t1_given_0" in row:
            mean = (
                _check_probability("t0_given_1", row["t0_given_1"])
                + _check_probability("t1_given_0", row["t1_given_0"])
            ) / 2.0
            if "spam" in row and abs(float(row["spam"]) - mean) > _SPAM_CONSISTENCY_TOL:
                raise ValueError(
                    f"spam={row['spam']} inconsistent with asymmetric rates (mean {mean})"
                )
            spam = mean
        else:
            spam = _check_probability("spam", row["spam"])
        qubits.append(
            QubitCalibration(
                id=int(row["id"]),
                t1_us=t1,
                t2_us=t2,
                spam=spam,
                u2_error=_check_probability("u2_error", row["u2_error"]),
            )
        )

    cnot = []
    for row in doc.get("cnot", []):
        a, b = (int(q) for q in row["pair"])
        cnot.append(((a, b), _check_probability("cnot error", row["error"])))
    return CalibrationTable(tuple(qubits), tuple(cnot))


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate depolarizing probabilities and per-qubit readout flips."""

    p1: tuple[float, ...]
    p2: tuple[tuple[tuple[int, int], float], ...]
    readout: tuple[float, ...]
    default_p2: float

    @classmethod
    def from_calibration(cls, table: CalibrationTable) -> "NoiseModel":
        by_id = sorted(table.qubits, key=lambda q: q.id)
        errors = [e for _, e in table.cnot]
        return cls(
            p1=tuple(q.u2_error for q in by_id),
            p2=table.cnot,
            readout=tuple(q.spam for q in by_id),
            default_p2=float(np.mean(errors)) if errors else 0.0,
        )

    @classmethod
    def noiseless(cls, n_qubits: int) -> "NoiseModel":
        return cls((0.0,) * n_qubits, (), (0.0,) * n_qubits, 0.0)

    def scaled(self, factor: float) -> "NoiseModel":
        """All depolarizing probabilities multiplied by `factor`."""
        return NoiseModel(
            p1=tuple(min(1.0, p * factor) for p in self.p1),
            p2=tuple((pair, min(1.0, e * factor)) for pair, e in self.p2),
            readout=self.readout,
            default_p2=min(1.0, self.default_p2 * factor),
        )

    def gate_probability(self, qubits) -> float:
        if len(qubits) == 1:
            q = qubits[0]
            if q >= len(self.p1):
                raise ValueError(f"noise model does not cover qubit {q}")
            return self.p1[q]
        lookup = dict(self.p2)
        a, b = qubits
        if (a, b) in lookup:
            return lookup[(a, b)]
        if (b, a) in lookup:
            return lookup[(b, a)]
        return self.default_p2

    def readout_error(self, qubit: int) -> float:
        if qubit >= len(self.readout):
            raise ValueError(f"noise model does not cover qubit {qubit}")
        return self.readout[qubit]


# trajectory machinery ---------------------------------------------------


def _trajectory_probability(p: float, n_gate_qubits: int) -> float:
    # Pauli-injection probability realizing depolarizing strength p
    d2 = 4**n_gate_qubits
    return p * (d2 - 1) / d2


def _inject_pauli(state: StateVector, qubits, rng: np.random.Generator) -> StateVector:
    if len(qubits) == 1:
        label = _PAULI_LABELS_1Q[rng.integers(3)]
        return simcore.apply_matrix(state, PAULI_1Q[label], qubits)
    la, lb = _PAULI_LABELS_2Q[rng.integers(15)]
    if la != "I":
        state = simcore.apply_matrix(state, PAULI_1Q[la], (qubits[0],))
    if lb != "I":
        state = simcore.apply_matrix(state, PAULI_1Q[lb], (qubits[1],))
    return state


def apply_noise(
    state: StateVector, gate: GateInstance, model: NoiseModel, rng: np.random.Generator
) -> StateVector:
    """Ideal gate followed by a possible random Pauli on its qubits."""
    if isinstance(gate.angle, circ_mod.ParamRef):
        raise ValueError("gate angle must be resolved before noisy execution")
    out = simcore.apply_gate(state, gate.kind, gate.qubits, gate.angle)
    q = _trajectory_probability(model.gate_probability(gate.qubits), len(gate.qubits))
    if q > 0.0 and rng.random() < q:
        out = _inject_pauli(out, gate.qubits, rng)
    return out


def _resolved_gates(circ: ParamCircuit) -> tuple[GateInstance, ...]:
    return circ_mod.resolve(circ).gates


def _trajectory_state(
    gates,
    n_qubits: int,
    model: NoiseModel,
    rng: np.random.Generator,
    q_vec: np.ndarray,
    ideal_state: StateVector,
) -> StateVector:
    """One noisy run; reuses the cached ideal state when no error fires."""
    mask = rng.random(len(gates)) < q_vec
    if not mask.any():
        return ideal_state
    state = simcore.init_zero(n_qubits)
    for g, hit in zip(gates, mask):
        state = simcore.apply_gate(state, g.kind, g.qubits, g.angle)
        if hit:
            state = _inject_pauli(state, g.qubits, rng)
    return state


def _prepare(circ: ParamCircuit, model: NoiseModel):
    gates = _resolved_gates(circ)
    q_vec = np.array(
        [_trajectory_probability(model.gate_probability(g.qubits), len(g.qubits)) for g in gates]
    )
    ideal = circ_mod.run(circ, simcore.init_zero(circ.n_qubits))
    return gates, q_vec, ideal


def sample_noisy_pr(
    circ: ParamCircuit,
    qubits,
    model: NoiseModel,
    shots: int,
    seed: int,
    target_bits: str = "00",
) -> float:
    """Fraction of noisy shots observing `target_bits` on `qubits`.

    Each shot is an independent trajectory with its own RNG sub-stream
    keyed by (seed, shot index); readout flips are applied to the drawn
    bits.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    gates, q_vec, ideal = _prepare(circ, model)
    ideal_probs = simcore.probabilities(ideal, qubits)
    eps = np.array([model.readout_error(q) for q in qubits])
    width = len(qubits)
    target = int(target_bits, 2)

    hits = 0
    for t in range(shots):
        rng = np.random.Generator(np.random.PCG64(child_seed(seed, t)))
        state = _trajectory_state(gates, circ.n_qubits, model, rng, q_vec, ideal)
        probs = ideal_probs if state is ideal else simcore.probabilities(state, qubits)
        outcome = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
        outcome = min(outcome, 2**width - 1)
        flips = rng.random(width) < eps
        for pos in range(width):
            if flips[pos]:
                outcome ^= 1 << (width - 1 - pos)
        if outcome == target:
            hits += 1
    return hits / shots


def noisy_cost(
    u: ParamCircuit,
    v: ParamCircuit,
    model: NoiseModel,
    shots: int,
    seed: int,
    counter: EvalCounter | None = None,
) -> CostEstimate:
    """Test cost with trajectory noise on every gate and readout flips."""
    pr00 = []
    for i, (test_circuit, pair) in enumerate(zip(build_lhst_circuits(u, v), PAIRS)):
        pr00.append(sample_noisy_pr(test_circuit, pair, model, shots, child_seed(seed, i)))
        if counter is not None:
            counter.circuits += 1
    if counter is not None:
        counter.costs += 1
    value = 1.0 - (pr00[0] + pr00[1]) / 2.0
    return CostEstimate(value, pr00[0], pr00[1], "sampled", shots, seed)


def noisy_state_fidelity(
    circ: ParamCircuit,
    input_state: StateVector,
    reference: StateVector,
    model: NoiseModel,
    trajectories: int,
    seed: int,
) -> float:
    """Mean fidelity of noisy trajectories against a reference state.

    Gate noise only; readout flips model measurement and do not act on
    the state, so they are not included here.
    """
    if trajectories < 1:
        raise ValueError("trajectories must be >= 1")
    gates = _resolved_gates(circ)
    q_vec = np.array(
        [_trajectory_probability(model.gate_probability(g.qubits), len(g.qubits)) for g in gates]
    )
    ideal = circ_mod.run(circ, input_state)
    ideal_fid = abs(np.vdot(reference.amplitudes, ideal.amplitudes)) ** 2

    total = 0.0
    for t in range(trajectories):
        rng = np.random.Generator(np.random.PCG64(child_seed(seed, t)))
        mask = rng.random(len(gates)) < q_vec
        if not mask.any():
            total += ideal_fid
            continue
        state = input_state
        for g, hit in zip(gates, mask):
            state = simcore.apply_gate(state, g.kind, g.qubits, g.angle)
            if hit:
                state = _inject_pauli(state, g.qubits, rng)
        total += abs(np.vdot(reference.amplitudes, state.amplitudes)) ** 2
    return total / trajectories
