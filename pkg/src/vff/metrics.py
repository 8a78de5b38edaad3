"""Diagnostics: phase-minimized distances, spectrum matching, gradient angle.

All comparisons mod out the physically irrelevant global phase. The
eigenvalue comparison additionally minimizes over a reordering of the
learnt diagonal, searched exhaustively (4! = 24 permutations).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .simcore import StateVector

UNIT_MODULUS_TOL = 1e-6
ZERO_GRADIENT_TOL = 1e-12


def frobenius_phase_distance(u_mat: np.ndarray, v_mat: np.ndarray) -> tuple[float, float]:
    """min over phi of ||U - e^{i phi} V||_F and the minimizing phi.

    Closed form: distance^2 = ||U||^2 + ||V||^2 - 2 |Tr(U^dag V)| at
    phi = -arg Tr(U^dag V).
    """
    u = np.asarray(u_mat, dtype=complex)
    v = np.asarray(v_mat, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    overlap = np.trace(u.conj().T @ v)
    d2 = np.linalg.norm(u) ** 2 + np.linalg.norm(v) ** 2 - 2 * abs(overlap)
    return float(np.sqrt(max(0.0, d2))), float(-np.angle(overlap))


@dataclass(frozen=True)
class SpectrumComparison:
    exact_eigenvalues: tuple[complex, ...]
    learned_eigenvalues: tuple[complex, ...]
    best_phase: float
    best_permutation: tuple[int, ...]
    distance: float


def eigenvalue_error(d_exact_diag, d_learned_diag) -> SpectrumComparison:
    """Distance between two unit-modulus spectra, minimized over a
    global phase and a reordering of the learnt entries.

    distance^2 = sum_i |exact_i - e^{i phi} learned_{chi(i)}|^2 at the
    optimal (phi, chi).
    """
    exact = np.asarray(d_exact_diag, dtype=complex).reshape(-1)
    learned = np.asarray(d_learned_diag, dtype=complex).reshape(-1)
    if exact.shape != learned.shape:
        raise ValueError("spectra must have equal length")
    for name, vals in (("exact", exact), ("learned", learned)):
        if np.max(np.abs(np.abs(vals) - 1.0)) > UNIT_MODULUS_TOL:
            raise ValueError(f"{name} spectrum is not unit modulus")

    n = exact.size
    best: tuple[float, float, tuple[int, ...]] | None = None
    for perm in permutations(range(n)):
        overlap = np.sum(exact.conj() * learned[list(perm)])
        d2 = 2.0 * n - 2.0 * abs(overlap)
        if best is None or d2 < best[0]:
            best = (float(d2), float(-np.angle(overlap)), perm)
    d2, phase, perm = best
    return SpectrumComparison(
        exact_eigenvalues=tuple(exact),
        learned_eigenvalues=tuple(learned),
        best_phase=phase,
        best_permutation=perm,
        distance=float(np.sqrt(max(0.0, d2))),
    )


def gradient_angle(g_measured, g_exact) -> float:
    """Angle in degrees between two gradient vectors, in [0, 180].

    Undefined for (near-)zero vectors, which happens once training has
    converged and the gradient is dominated by noise; those are flagged
    with a ValueError so callers can record the step as undefined.
    """
    a = np.asarray(g_measured, dtype=float).reshape(-1)
    b = np.asarray(g_exact, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise ValueError("gradient vectors must have equal length")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < ZERO_GRADIENT_TOL or nb < ZERO_GRADIENT_TOL:
        raise ValueError("gradient angle undefined for zero vectors")
    cosine = np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0)
    return float(np.degrees(np.arccos(cosine)))


def state_fidelity(psi: StateVector, phi: StateVector) -> float:
    """|<psi|phi>|^2 for two normalized states."""
    if psi.n_qubits != phi.n_qubits:
        raise ValueError("states act on different register sizes")
    for s in (psi, phi):
        if abs(s.norm() - 1.0) > 1e-8:
            raise ValueError("state is not normalized")
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)
