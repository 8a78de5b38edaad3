from pathlib import Path

import numpy as np
import pytest

from helpers import random_circuit
from vff.circuit import GateInstance, ParamCircuit
from vff.lhst import cost_analytic, cost_sampled
from vff.noise import (
    NoiseModel,
    apply_noise,
    load_calibration,
    noisy_cost,
    noisy_state_fidelity,
    sample_noisy_pr,
)
from vff.simcore import init_zero

CALIBRATION_PATH = Path(__file__).resolve().parent.parent / "data" / "sample_calibration.json"


@pytest.fixture(scope="module")
def table():
    return load_calibration(CALIBRATION_PATH)


@pytest.fixture(scope="module")
def model(table):
    return NoiseModel.from_calibration(table)


class TestLoadCalibration:
    def test_first_qubit_row(self, table):
        q0 = table.qubits[0]
        assert (q0.t1_us, q0.t2_us) == (136.6, 178.0)
        assert q0.spam == pytest.approx(0.056)
        assert q0.u2_error == pytest.approx(3.70e-4)

    def test_cnot_pair_error(self, table):
        assert table.cnot_errors()[(2, 3)] == pytest.approx(3.81e-2)

    def test_asymmetric_rates_average(self):
        doc = {
            "qubits": [
                {"id": 0, "t1_us": 100.0, "t2_us": 100.0, "u2_error": 1e-4,
                 "t0_given_1": 0.06, "t1_given_0": 0.05}
            ]
        }
        assert load_calibration(doc).qubits[0].spam == pytest.approx(0.055)

    def test_inconsistent_spam_rejected(self):
        doc = {
            "qubits": [
                {"id": 0, "t1_us": 100.0, "t2_us": 100.0, "u2_error": 1e-4,
                 "spam": 0.2, "t0_given_1": 0.06, "t1_given_0": 0.05}
            ]
        }
        with pytest.raises(ValueError):
            load_calibration(doc)

    def test_out_of_range_probability_rejected(self):
        doc = {"qubits": [{"id": 0, "t1_us": 1.0, "t2_us": 1.0, "spam": 1.5, "u2_error": 0.0}]}
        with pytest.raises(ValueError):
            load_calibration(doc)

    def test_nonpositive_t1_rejected(self):
        doc = {"qubits": [{"id": 0, "t1_us": 0.0, "t2_us": 1.0, "spam": 0.1, "u2_error": 0.0}]}
        with pytest.raises(ValueError):
            load_calibration(doc)

    def test_empty_document_rejected(self):
        with pytest.raises(ValueError):
            load_calibration({"qubits": []})


class TestNoiseModel:
    def test_from_calibration_fields(self, model):
        assert model.p1 == pytest.approx((3.70e-4, 2.01e-4, 2.48e-4, 4.74e-4))
        assert model.readout == pytest.approx((0.056, 0.045, 0.024, 0.020))
        assert model.default_p2 == pytest.approx((1.04e-3 + 8.12e-3 + 3.81e-2) / 3)

    def test_pair_lookup_is_undirected(self, model):
        assert model.gate_probability((3, 2)) == pytest.approx(3.81e-2)
        assert model.gate_probability((2, 3)) == pytest.approx(3.81e-2)

    def test_unlisted_pair_falls_back(self, model):
        assert model.gate_probability((0, 2)) == pytest.approx(model.default_p2)

    def test_uncovered_qubit_rejected(self, model):
        with pytest.raises(ValueError):
            model.gate_probability((7,))

    def test_scaling(self, model):
        doubled = model.scaled(2.0)
        assert doubled.gate_probability((0,)) == pytest.approx(2 * 3.70e-4)
        assert doubled.readout == model.readout


class TestApplyNoise:
    def test_zero_noise_is_ideal(self):
        model = NoiseModel.noiseless(2)
        rng = np.random.default_rng(0)
        gate = GateInstance("RX", (0,), 0.7)
        noisy = apply_noise(init_zero(2), gate, model, rng)
        from vff.simcore import apply_gate

        ideal = apply_gate(init_zero(2), "RX", (0,), 0.7)
        np.testing.assert_array_equal(noisy.amplitudes, ideal.amplitudes)

    def test_full_depolarizing_reaches_maximally_mixed(self):
        # p = 1 must average to I/2: purity of the trajectory mean -> 0.5
        model = NoiseModel((1.0,), (), (0.0,), 0.0)
        gate = GateInstance("RX", (0,), 0.7)
        rng = np.random.default_rng(1)
        rho = np.zeros((2, 2), dtype=complex)
        n_traj = 10**4
        for _ in range(n_traj):
            psi = apply_noise(init_zero(1), gate, model, rng).amplitudes
            rho += np.outer(psi, psi.conj())
        rho /= n_traj
        purity = float(np.real(np.trace(rho @ rho)))
        assert purity == pytest.approx(0.5, abs=0.02)

    def test_unresolved_angle_rejected(self):
        from vff.circuit import ParamRef

        model = NoiseModel.noiseless(1)
        with pytest.raises(ValueError):
            apply_noise(init_zero(1), GateInstance("RX", (0,), ParamRef("x")), model,
                        np.random.default_rng(0))


class TestSampling:
    def test_half_readout_error_is_uniform(self):
        model = NoiseModel((0.0,), (), (0.5,), 0.0)
        circ = ParamCircuit(1, ())  # stays in |0>
        pr0 = sample_noisy_pr(circ, (0,), model, shots=4000, seed=2, target_bits="0")
        assert pr0 == pytest.approx(0.5, abs=5 * 0.5 / np.sqrt(4000))

    def test_trajectory_average_matches_depolarizing_channel(self):
        # single RX(0.9) with p = 0.3: P(0) = (1-p) cos^2(0.45) + p/2
        p = 0.3
        model = NoiseModel((p,), (), (0.0,), 0.0)
        circ = ParamCircuit(1, (GateInstance("RX", (0,), 0.9),))
        pr0 = sample_noisy_pr(circ, (0,), model, shots=10**5, seed=3, target_bits="0")
        expected = (1 - p) * np.cos(0.45) ** 2 + p / 2
        assert pr0 == pytest.approx(expected, abs=0.01)

    def test_determinism(self, model):
        circ = random_circuit(np.random.default_rng(4), 2, 6)
        a = sample_noisy_pr(circ, (0, 1), model, shots=300, seed=5)
        b = sample_noisy_pr(circ, (0, 1), model, shots=300, seed=5)
        assert a == b


class TestNoisyCost:
    def test_zero_noise_agrees_with_sampling(self):
        rng = np.random.default_rng(6)
        u = random_circuit(rng, 2, 6)
        v = random_circuit(rng, 2, 6)
        model = NoiseModel.noiseless(4)
        exact = cost_analytic(u, v).value
        noisy = noisy_cost(u, v, model, shots=4000, seed=7).value
        clean = cost_sampled(u, v, shots=4000, seed=7).value
        sigma = 5 * np.sqrt(0.25 / 4000)
        assert abs(noisy - exact) <= sigma
        assert abs(clean - exact) <= sigma

    def test_strictly_positive_at_exact_match(self, model):
        rng = np.random.default_rng(8)
        u = random_circuit(rng, 2, 8)
        shots = 4000
        estimate = noisy_cost(u, u, model, shots=shots, seed=9)
        sigma = np.sqrt(0.25 / shots)
        assert estimate.value > 3 * sigma

    def test_noise_cannot_beat_ideal_at_optimum(self, model):
        rng = np.random.default_rng(10)
        shots = 1500
        sigma = np.sqrt(0.25 / shots)
        for _ in range(20):
            u = random_circuit(rng, 2, rng.integers(1, 8))
            noisy = noisy_cost(u, u, model, shots=shots, seed=int(rng.integers(2**31)))
            assert noisy.value >= cost_analytic(u, u).value - 5 * sigma

    def test_monotone_in_noise_scale(self, model):
        rng = np.random.default_rng(11)
        u = random_circuit(rng, 2, 8)
        values = [
            noisy_cost(u, u, model.scaled(s), shots=3000, seed=12).value
            for s in (0.5, 1.0, 2.0)
        ]
        assert values[0] < values[1] < values[2]


class TestNoisyFidelity:
    def test_zero_noise_reproduces_ideal(self):
        from vff.circuit import run
        from vff.metrics import state_fidelity

        rng = np.random.default_rng(13)
        circ = random_circuit(rng, 2, 6)
        psi0 = init_zero(2)
        reference = run(circ, psi0)
        fid = noisy_state_fidelity(circ, psi0, reference, NoiseModel.noiseless(2), 50, seed=14)
        assert fid == pytest.approx(1.0, abs=1e-12)

    def test_noise_lowers_fidelity(self, model):
        from vff.circuit import run

        rng = np.random.default_rng(15)
        circ = random_circuit(rng, 2, 20)
        psi0 = init_zero(2)
        reference = run(circ, psi0)
        fid = noisy_state_fidelity(circ, psi0, reference, model.scaled(20.0), 400, seed=16)
        assert fid < 0.99
