"""Gradient-descent training of the spectral ansatz.

Gradients use the two-point parameter-shift rule, applied per parameter
occurrence: every rotation gate here (RX, RY, RZZ, and P up to a global
phase of the occurrence) has a generator with two eigenvalues one apart,
so for each occurrence o

    dC/d(angle_o) = [C(angle_o + pi/2) - C(angle_o - pi/2)] / 2

holds exactly, and the derivative with respect to a shared parameter is
the signed sum over its occurrences. Each theta appears twice in V (in
the basis change and its dagger) and each gamma once, so one gradient
needs 2*(18*2 + 3) = 78 cost evaluations, i.e. 156 test circuits.

The learning rate follows eta(j) = eta0 / (1 + j/delta)^kappa.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import lhst, metrics, noise as noise_mod
from .ansatz import N_GAMMA, N_THETA, PARAM_NAMES, SpectralAnsatz, build_D, build_V
from .circuit import ParamCircuit, shift_occurrence, unitary_of
from .lhst import EvalCounter, cost_analytic, cost_from_unitaries, cost_sampled
from .model import IsingParams, trotter_step_circuit
from .simcore import child_seed

N_PARAMS = len(PARAM_NAMES)
SHIFT = math.pi / 2


@dataclass(frozen=True)
class LearningSchedule:
    """Decaying learning rate; defaults match the reference experiment."""

    eta0: float = 1.1
    kappa: float = 0.5
    delta: float = 12.0
    n_steps: int = 16

    def eta(self, j: int) -> float:
        return self.eta0 / (1.0 + j / self.delta) ** self.kappa


class InitializationError(RuntimeError):
    """Raised when the zero-coupling pre-training misses its threshold."""

    def __init__(self, best_ansatz: SpectralAnsatz, best_cost: float, threshold: float):
        super().__init__(
            f"initialization reached cost {best_cost:.3e}, needed <= {threshold:.0e}"
        )
        self.best_ansatz = best_ansatz
        self.best_cost = best_cost


def _cost_value(
    u: ParamCircuit,
    v: ParamCircuit,
    mode: str,
    shots: int,
    seed: int,
    noise_model,
    counter: EvalCounter | None,
) -> float:
    if mode == "analytic":
        return cost_analytic(u, v, counter).value
    if noise_model is not None:
        return noise_mod.noisy_cost(u, v, noise_model, shots, seed, counter).value
    return cost_sampled(u, v, shots, seed, counter).value


def gradient(
    u: ParamCircuit,
    a: SpectralAnsatz,
    mode: str = "analytic",
    shots: int = 8000,
    seed: int = 0,
    noise_model=None,
    counter: EvalCounter | None = None,
) -> np.ndarray:
    """Parameter-shift gradient of the test cost, ordered like PARAM_NAMES.

    Sampled evaluations draw from sub-streams keyed by (seed, k) where k
    is the evaluation index in a fixed parameter/occurrence order, so the
    result does not depend on evaluation scheduling.
    """
    if mode not in ("analytic", "sampled"):
        raise ValueError(f"unknown gradient mode {mode!r}")
    v = build_V(a)
    grad = np.zeros(N_PARAMS)
    eval_idx = 0
    for i, name in enumerate(PARAM_NAMES):
        for occ in v.occurrences_of(name):
            sign = v.gates[occ].angle.sign
            two_point = []
            for delta in (SHIFT, -SHIFT):
                shifted = shift_occurrence(v, occ, delta)
                value = _cost_value(
                    u, shifted, mode, shots, child_seed(seed, eval_idx), noise_model, counter
                )
                eval_idx += 1
                two_point.append(value)
            grad[i] += sign * (two_point[0] - two_point[1]) / 2.0
    return grad


# zero-coupling initialization ------------------------------------------


def _fast_cost(u_mat: np.ndarray, v: ParamCircuit) -> float:
    return cost_from_unitaries(u_mat, unitary_of(v))


def _embedded(kind: str, qubits, angle: float | None) -> np.ndarray:
    from .circuit import _embed
    from .simcore import gate_matrix

    return _embed(gate_matrix(kind, angle), tuple(qubits), 2)


def _fast_gradient(u_mat: np.ndarray, a: SpectralAnsatz) -> np.ndarray:
    """Shift-rule gradient of the closed-form cost.

    The shifted unitaries are assembled from prefix/suffix products, so
    each of the 84 evaluations costs two 4x4 matrix products instead of
    a full circuit replay. Rotation gates compose additively in their
    angle, hence gate(angle + delta) = gate(delta) @ gate(angle).
    """
    from .circuit import resolved_angle

    v = build_V(a)
    values = v.values()
    mats = [_embedded(g.kind, g.qubits, resolved_angle(g, values)) for g in v.gates]
    n_gates = len(mats)
    eye = np.eye(4, dtype=complex)

    prefix = [eye]  # prefix[i] = product of gates 0..i-1
    for m in mats:
        prefix.append(m @ prefix[-1])
    suffix = [eye] * (n_gates + 1)  # suffix[i] = product of gates i+1..end
    for i in range(n_gates - 1, -1, -1):
        suffix[i] = suffix[i + 1] @ mats[i]
    # suffix[i] currently includes gate i; shift up by one
    suffix = suffix[1:] + [eye]

    shift_mats = {}
    grad = np.zeros(N_PARAMS)
    for i, name in enumerate(PARAM_NAMES):
        for occ in v.occurrences_of(name):
            g = v.gates[occ]
            sign = g.angle.sign
            key = (g.kind, g.qubits)
            if key not in shift_mats:
                shift_mats[key] = (
                    _embedded(g.kind, g.qubits, SHIFT),
                    _embedded(g.kind, g.qubits, -SHIFT),
                )
            e_plus, e_minus = shift_mats[key]
            base = mats[occ] @ prefix[occ]
            c_plus = cost_from_unitaries(u_mat, suffix[occ] @ (e_plus @ base))
            c_minus = cost_from_unitaries(u_mat, suffix[occ] @ (e_minus @ base))
            grad[i] += sign * (c_plus - c_minus) / 2.0
    return grad


def _zero_coupling_solution(b_dt: float, flip0: bool, flip1: bool) -> np.ndarray:
    """Closed-form diagonalization of the J = 0 step exp(-i B dt (X1+X2)).

    The eigenbasis is the X product basis; one outer layer per qubit
    realizes the Hadamard-like map exactly (P(pi) RY(pi/2) = H sends
    |0> to |+>, RY(pi/2) alone sends |0> to |->), the CNOT pair cancels
    through the zeroed middle layer, and the diagonal angles place the
    eigenphases -2*B*dt, 0, 0, +2*B*dt on the matching columns.
    """
    theta = np.zeros(N_THETA)
    gamma = np.zeros(N_GAMMA)
    for q, flip in ((0, flip0), (1, flip1)):
        theta[3 * q + 1] = math.pi / 2  # layer-1 RY
        theta[3 * q + 2] = 0.0 if flip else math.pi  # layer-1 P
        gamma[1 + q] = (-1.0 if flip else 1.0) * 2.0 * b_dt
    return np.concatenate([theta, gamma])


def init_params(
    p: IsingParams,
    seed: int,
    cost_threshold: float = 1e-3,
    max_steps: int = 500,
    restarts: int = 10,
) -> SpectralAnsatz:
    """Initialize by solving the zero-coupling (J = 0) problem.

    The J = 0 step is a product of X rotations whose diagonalization the
    ansatz family contains exactly, so it is solved in closed form (the
    per-qubit basis assignment is drawn from the seed), perturbed by
    small random angles, and polished by gradient descent on the
    analytic cost until it is below `cost_threshold`. Starting from the
    exact solution matters: descent from generic random angles reaches
    the same cost but lands on gauge representatives that train several
    times slower against the coupled target.

    Raises InitializationError (carrying the best attempt) if no
    restart reaches the threshold.
    """
    target = trotter_step_circuit(replace(p, J=0.0))
    u_mat = unitary_of(target)
    sched = LearningSchedule()
    rng = np.random.default_rng(child_seed(seed, 915))

    best_vec, best_cost = None, math.inf
    for _ in range(restarts):
        base = _zero_coupling_solution(p.B * p.dt, rng.random() < 0.5, rng.random() < 0.5)
        vec = base + rng.normal(0.0, 0.02, N_PARAMS)
        for step in range(max_steps):
            a = SpectralAnsatz.from_vector(vec)
            cost = _fast_cost(u_mat, build_V(a))
            if cost < best_cost:
                best_cost, best_vec = cost, vec.copy()
            if cost <= cost_threshold:
                return a
            vec = vec - sched.eta(step) * _fast_gradient(u_mat, a)
    raise InitializationError(SpectralAnsatz.from_vector(best_vec), best_cost, cost_threshold)


# training loop ----------------------------------------------------------


@dataclass(frozen=True)
class TraceRow:
    j: int
    eta: float
    raw_cost: float
    ideal_cost: float
    params: np.ndarray
    gradient: np.ndarray
    frob_uv: float
    eig_err: float
    grad_angle_deg: float
    circuit_evals: int


@dataclass
class TrainingTrace:
    rows: list[TraceRow] = field(default_factory=list)

    CSV_COLUMNS = (
        ["j", "eta", "raw_cost", "ideal_cost"]
        + list(PARAM_NAMES)
        + [f"g_{name}" for name in PARAM_NAMES]
        + ["frob_uv", "eig_err", "grad_angle_deg", "circuit_evals"]
    )

    def csv_text(self) -> str:
        lines = [",".join(self.CSV_COLUMNS)]
        for r in self.rows:
            cells = [str(r.j), repr(float(r.eta)), repr(float(r.raw_cost)), repr(float(r.ideal_cost))]
            cells += [repr(float(x)) for x in r.params]
            cells += [repr(float(x)) for x in r.gradient]
            cells += [repr(float(r.frob_uv)), repr(float(r.eig_err)), repr(float(r.grad_angle_deg))]
            cells.append(str(r.circuit_evals))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.csv_text())

    def to_json(self, path) -> None:
        doc = {"columns": self.CSV_COLUMNS, "rows": []}
        for r in self.rows:
            doc["rows"].append(
                {
                    "j": r.j,
                    "eta": float(r.eta),
                    "raw_cost": float(r.raw_cost),
                    "ideal_cost": float(r.ideal_cost),
                    "params": [float(x) for x in r.params],
                    "gradient": [float(x) for x in r.gradient],
                    "frob_uv": float(r.frob_uv),
                    "eig_err": float(r.eig_err),
                    "grad_angle_deg": None if math.isnan(r.grad_angle_deg) else float(r.grad_angle_deg),
                    "circuit_evals": r.circuit_evals,
                }
            )
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")

    def final_ansatz(self) -> SpectralAnsatz:
        return SpectralAnsatz.from_vector(self.rows[-1].params)


def _sorted_eigenvalues(mat: np.ndarray) -> np.ndarray:
    evals = np.linalg.eigvals(mat)
    return evals[np.argsort(np.angle(evals))]


def train(
    u: ParamCircuit,
    a0: SpectralAnsatz,
    sched: LearningSchedule,
    shots: int = 8000,
    seed: int = 0,
    noise_model=None,
    analytic: bool = False,
) -> TrainingTrace:
    """Run `sched.n_steps` gradient-descent updates from `a0`.

    The trace has one row per visited parameter point, j = 0..n_steps.
    Every row records the measured ("raw") cost and gradient used for
    the update, the noise-free analytic cost at the same point (a purely
    classical diagnostic that never feeds back into the updates), and
    the metric columns. The final row is measured but not applied.
    """
    mode = "analytic" if analytic else "sampled"
    u_mat = unitary_of(u)
    exact_diag = _sorted_eigenvalues(u_mat)

    trace = TrainingTrace()
    vec = a0.as_vector()
    for j in range(sched.n_steps + 1):
        a = SpectralAnsatz.from_vector(vec)
        counter = EvalCounter()
        raw = _cost_value(
            u, build_V(a), mode, shots, child_seed(seed, j, 0), noise_model, counter
        )
        grad_raw = gradient(
            u, a, mode, shots, child_seed(seed, j, 1), noise_model, counter
        )
        if analytic:
            ideal = raw
            grad_exact = grad_raw
        else:
            ideal = cost_analytic(u, build_V(a)).value
            grad_exact = gradient(u, a, "analytic")

        v_mat = unitary_of(build_V(a))
        frob, _ = metrics.frobenius_phase_distance(u_mat, v_mat)
        learned_diag = np.diag(unitary_of(build_D(a.gamma)))
        eig_err = metrics.eigenvalue_error(exact_diag, learned_diag).distance
        try:
            angle = metrics.gradient_angle(grad_raw, grad_exact)
        except ValueError:
            angle = math.nan

        eta_j = sched.eta(j)
        trace.rows.append(
            TraceRow(
                j=j,
                eta=eta_j,
                raw_cost=raw,
                ideal_cost=ideal,
                params=vec.copy(),
                gradient=grad_raw.copy(),
                frob_uv=frob,
                eig_err=eig_err,
                grad_angle_deg=angle,
                circuit_evals=counter.circuits,
            )
        )
        if j < sched.n_steps:
            vec = vec - eta_j * grad_raw
    return trace
