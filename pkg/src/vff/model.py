"""Transverse-field Ising model: Hamiltonian, Trotter circuits, exact evolution.

The model is H = J * sum_i Z_i Z_{i+1} + B * sum_i X_i with periodic
indexing, so with 2 spins the single bond is counted twice and
H = 2J Z(x)Z + B (X(x)I + I(x)X).

One Trotter step covers time dt and consists of two symmetric
(second-order) half-steps. Each half-step applies RX(theta_b) to every
spin, the ZZ bond product, and the RX layer again, with
theta_b = -B dt/2 and theta_j = -2J dt/2. The signs are chosen so the
step approximates exp(-i H dt); the printed rotation conventions
RX(t) = exp(+i t X/2), RZZ(t) = exp(+i t ZZ/2) would otherwise
exponentiate +iH.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import GateInstance, ParamCircuit

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class IsingParams:
    """Model parameters; defaults are the 2-spin working point."""

    n_spins: int = 2
    J: float = 1.0
    B: float = 1.0
    dt: float = 0.2

    def __post_init__(self):
        if self.n_spins < 2:
            raise ValueError("need at least 2 spins")
        if self.dt < 0:
            raise ValueError("dt must be nonnegative")


def _pauli_at(op: np.ndarray, site: int, n: int) -> np.ndarray:
    full = np.array([[1.0]], dtype=complex)
    for q in range(n):
        full = np.kron(full, op if q == site else _I2)
    return full


def build_hamiltonian(p: IsingParams) -> np.ndarray:
    """Dense Hermitian matrix of the periodic Ising chain."""
    n = p.n_spins
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        zz = _pauli_at(_Z, i, n) @ _pauli_at(_Z, (i + 1) % n, n)
        h += p.J * zz
        h += p.B * _pauli_at(_X, i, n)
    return h


def trotter_angles(p: IsingParams) -> tuple[float, float]:
    """(theta_b, theta_j) for one half-step; magnitudes B*dt/2 and 2J*dt/2."""
    return -p.B * p.dt / 2, -2 * p.J * p.dt / 2


def trotter_step_circuit(p: IsingParams) -> ParamCircuit:
    """Second-order Trotter step for time dt (two symmetric half-steps)."""
    if p.n_spins != 2:
        raise ValueError("trotter_step_circuit supports exactly 2 spins")
    theta_b, theta_j = trotter_angles(p)
    half = [
        GateInstance("RX", (0,), theta_b),
        GateInstance("RX", (1,), theta_b),
        # the periodic bond sum visits the single bond from both sides
        GateInstance("RZZ", (0, 1), theta_j),
        GateInstance("RZZ", (0, 1), theta_j),
        GateInstance("RX", (0,), theta_b),
        GateInstance("RX", (1,), theta_b),
    ]
    return ParamCircuit(2, tuple(half + half))


def trotterized_evolution(p: IsingParams, k_steps: int) -> ParamCircuit:
    """`k_steps` concatenated Trotter steps (time k_steps * dt)."""
    if k_steps < 0:
        raise ValueError("k_steps must be >= 0")
    step = trotter_step_circuit(p)
    return ParamCircuit(2, step.gates * k_steps)


def exact_evolution(hamiltonian: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) by dense eigendecomposition of the Hermitian H."""
    h = np.asarray(hamiltonian, dtype=complex)
    if np.linalg.norm(h - h.conj().T) > HERMITICITY_TOL:
        raise ValueError("Hamiltonian is not Hermitian")
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
