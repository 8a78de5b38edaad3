"""Variational learning of a two-qubit spectral decomposition.

Learns W D W^dagger for the short-time Trotter step of a 2-spin Ising
model via the local Hilbert-Schmidt test and gradient descent, then
fast-forwards the dynamics at fixed circuit depth by rescaling the
diagonal angles.
"""

from .ansatz import SpectralAnsatz, build_D, build_V, build_V_fast_forward, build_W
from .circuit import GateInstance, ParamCircuit, ParamRef, bind, conjugate, run, shift_occurrence, unitary_of
from .config import ExperimentConfig
from .lhst import CostEstimate, EvalCounter, build_lhst_circuits, cost_analytic, cost_sampled, hst_global
from .metrics import eigenvalue_error, frobenius_phase_distance, gradient_angle, state_fidelity
from .model import IsingParams, build_hamiltonian, exact_evolution, trotter_step_circuit, trotterized_evolution
from .noise import CalibrationTable, NoiseModel, apply_noise, load_calibration, noisy_cost
from .simcore import MeasurementOutcome, StateVector, init_zero, probabilities, sample
from .trainer import LearningSchedule, TrainingTrace, gradient, init_params, train

__all__ = [
    "SpectralAnsatz", "build_D", "build_V", "build_V_fast_forward", "build_W",
    "GateInstance", "ParamCircuit", "ParamRef", "bind", "conjugate", "run",
    "shift_occurrence", "unitary_of",
    "ExperimentConfig",
    "CostEstimate", "EvalCounter", "build_lhst_circuits", "cost_analytic",
    "cost_sampled", "hst_global",
    "eigenvalue_error", "frobenius_phase_distance", "gradient_angle", "state_fidelity",
    "IsingParams", "build_hamiltonian", "exact_evolution", "trotter_step_circuit",
    "trotterized_evolution",
    "CalibrationTable", "NoiseModel", "apply_noise", "load_calibration", "noisy_cost",
    "MeasurementOutcome", "StateVector", "init_zero", "probabilities", "sample",
    "LearningSchedule", "TrainingTrace", "gradient", "init_params", "train",
]
