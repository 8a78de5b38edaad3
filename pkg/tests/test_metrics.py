import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import haar_unitary
from vff.metrics import (
    eigenvalue_error,
    frobenius_phase_distance,
    gradient_angle,
    state_fidelity,
)
from vff.simcore import StateVector


def grid_scan_distance(u, v, n_points=10**4):
    """Literal minimization over a phase grid, refined around the best point."""
    center, half_width = 0.0, np.pi
    best_phi, best = 0.0, np.inf
    for _ in range(3):
        phis = center + np.linspace(-half_width, half_width, n_points, endpoint=False)
        diffs = u[None, :, :] - np.exp(1j * phis)[:, None, None] * v[None, :, :]
        norms = np.linalg.norm(diffs.reshape(n_points, -1), axis=1)
        idx = int(np.argmin(norms))
        best_phi, best = phis[idx], norms[idx]
        center, half_width = best_phi, 4 * half_width / n_points
    return best


class TestFrobeniusPhaseDistance:
    def test_equal_matrices(self):
        u = haar_unitary(np.random.default_rng(0), 4)
        d, _ = frobenius_phase_distance(u, u)
        assert d <= 1e-9

    def test_pure_phase(self):
        u = haar_unitary(np.random.default_rng(1), 4)
        d, phase = frobenius_phase_distance(u, np.exp(0.3j) * u)
        assert d <= 1e-9
        assert np.exp(1j * phase) == pytest.approx(np.exp(-0.3j), abs=1e-9)

    def test_identity_vs_z(self):
        z = np.diag([1.0, -1.0]).astype(complex)
        d, _ = frobenius_phase_distance(np.eye(2), z)
        assert d == pytest.approx(2.0, abs=1e-12)
        assert d == pytest.approx(grid_scan_distance(np.eye(2, dtype=complex), z), abs=1e-3)

    def test_closed_form_matches_grid_scan(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            u, v = haar_unitary(rng, 4), haar_unitary(rng, 4)
            d, _ = frobenius_phase_distance(u, v)
            assert d == pytest.approx(grid_scan_distance(u, v), abs=1e-3)
            assert d <= grid_scan_distance(u, v) + 1e-12  # closed form is the true min

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        u, v = haar_unitary(rng, 4), haar_unitary(rng, 4)
        assert frobenius_phase_distance(u, v)[0] == pytest.approx(
            frobenius_phase_distance(v, u)[0], abs=1e-12
        )

    def test_positive_for_inequivalent(self):
        rng = np.random.default_rng(4)
        u, v = haar_unitary(rng, 4), haar_unitary(rng, 4)
        assert frobenius_phase_distance(u, v)[0] > 1e-3

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            frobenius_phase_distance(np.eye(2), np.eye(4))


def grid_scan_eigenvalue_error(exact, learned, n_points=10**4):
    from itertools import permutations

    best = np.inf
    for perm in permutations(range(len(exact))):
        arranged = learned[list(perm)]
        center, half_width = 0.0, np.pi
        for _ in range(3):
            phis = center + np.linspace(-half_width, half_width, n_points, endpoint=False)
            d2 = np.sum(
                np.abs(exact[None, :] - np.exp(1j * phis)[:, None] * arranged[None, :]) ** 2,
                axis=1,
            )
            idx = int(np.argmin(d2))
            center, half_width = phis[idx], 4 * half_width / n_points
        best = min(best, d2[idx])
    return np.sqrt(best)


class TestEigenvalueError:
    def test_identical_spectra(self):
        spec = np.exp(1j * np.array([0.1, 0.5, -0.7, 2.0]))
        comp = eigenvalue_error(spec, spec)
        assert comp.distance <= 1e-9
        assert comp.best_permutation == (0, 1, 2, 3)

    def test_relabeled_spectrum(self):
        exact = np.array([1, 1j, -1, -1j])
        learned = np.array([1j, 1, -1j, -1])
        comp = eigenvalue_error(exact, learned)
        assert comp.distance <= 1e-9
        # the reported permutation and phase must reproduce the exact
        # spectrum (several reorderings tie at zero for this spectrum)
        arranged = learned[list(comp.best_permutation)]
        np.testing.assert_allclose(
            np.exp(1j * comp.best_phase) * arranged, exact, atol=1e-9
        )

    def test_distance_squared_matches_sum_formula(self):
        rng = np.random.default_rng(5)
        exact = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
        learned = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
        comp = eigenvalue_error(exact, learned)
        arranged = learned[list(comp.best_permutation)]
        explicit = np.sum(np.abs(exact - np.exp(1j * comp.best_phase) * arranged) ** 2)
        assert comp.distance**2 == pytest.approx(explicit, abs=1e-10)

    def test_matches_grid_scan_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(3):
            exact = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
            learned = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
            comp = eigenvalue_error(exact, learned)
            assert comp.distance == pytest.approx(
                grid_scan_eigenvalue_error(exact, learned), abs=1e-8
            )

    def test_rejects_non_unit_modulus(self):
        with pytest.raises(ValueError):
            eigenvalue_error(np.array([1.0, 1.0, 1.0, 0.5]), np.ones(4))


class TestGradientAngle:
    def test_parallel(self):
        g = np.arange(1.0, 22.0)
        assert gradient_angle(g, g) == pytest.approx(0.0, abs=1e-6)

    def test_antiparallel(self):
        g = np.arange(1.0, 22.0)
        assert gradient_angle(g, -g) == pytest.approx(180.0, abs=1e-6)

    def test_orthogonal(self):
        a = np.zeros(21)
        b = np.zeros(21)
        a[0] = 1.0
        b[1] = 1.0
        assert gradient_angle(a, b) == pytest.approx(90.0, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
    def test_invariant_under_positive_rescaling(self, s1, s2):
        rng = np.random.default_rng(7)
        a, b = rng.normal(size=21), rng.normal(size=21)
        base = gradient_angle(a, b)
        assert gradient_angle(s1 * a, s2 * b) == pytest.approx(base, abs=1e-6)

    def test_zero_vector_flagged(self):
        with pytest.raises(ValueError):
            gradient_angle(np.zeros(21), np.ones(21))


class TestStateFidelity:
    def test_identical(self):
        s = StateVector(1, np.array([0.6, 0.8j]))
        assert state_fidelity(s, s) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        a = StateVector(1, np.array([1.0, 0.0]))
        b = StateVector(1, np.array([0.0, 1.0]))
        assert state_fidelity(a, b) == 0.0

    def test_plus_versus_zero(self):
        plus = StateVector(1, np.array([1.0, 1.0]) / np.sqrt(2))
        zero = StateVector(1, np.array([1.0, 0.0]))
        assert state_fidelity(plus, zero) == pytest.approx(0.5, abs=1e-12)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(8)
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        a = StateVector(2, amps)
        b = StateVector(2, np.exp(1.1j) * amps)
        assert state_fidelity(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            state_fidelity(StateVector(1, np.array([2.0, 0.0])), StateVector(1, np.array([1.0, 0.0])))

    def test_rejects_size_mismatch(self):
        with pytest.raises(ValueError):
            state_fidelity(StateVector(1, np.array([1.0, 0.0])), StateVector(2, np.array([1, 0, 0, 0.0])))
