import math

import numpy as np
import pytest

from qslack.ansatz import ConvexCombinationState, layered_unitary_circuit, qcbm_circuit
from qslack.estimate import (
    Estimator,
    Prepared,
    ShotModel,
    estimate_collision,
    estimate_overlap_loschmidt,
    estimate_overlap_swap,
    estimate_pauli_expect,
    hoeffding_shots,
    prepare,
)
from qslack.pauli import PauliString, WalshVector
from tests.conftest import ket, random_density

EXACT = ShotModel()


def cc_pair(rng, n=2):
    state = ConvexCombinationState(qcbm_circuit(n, 2), layered_unitary_circuit(n, 2))
    a = prepare(state, rng.uniform(0, 2 * np.pi, state.n_params))
    b = prepare(state, rng.uniform(0, 2 * np.pi, state.n_params))
    return a, b


class TestExactMode:
    def test_pauli_z_on_zero(self):
        rho = np.outer(ket("0"), ket("0").conj())
        e = estimate_pauli_expect(rho, PauliString((3,)), EXACT)
        assert e.value == 1.0 and e.std_err == 0.0

    def test_identity_string(self, rng):
        e = estimate_pauli_expect(random_density(4, rng), PauliString((0, 0)), EXACT)
        assert np.isclose(e.value, 1.0)

    def test_pure_state_self_overlap(self):
        rho = np.outer(ket("00"), ket("00").conj())
        assert np.isclose(estimate_overlap_swap(rho, rho, EXACT).value, 1.0)

    def test_orthogonal_states(self):
        r0 = np.outer(ket("0"), ket("0").conj())
        r1 = np.outer(ket("1"), ket("1").conj())
        assert np.isclose(estimate_overlap_swap(r0, r1, EXACT).value, 0.0)

    def test_maximally_mixed_overlap(self):
        half = np.eye(2) / 2
        assert np.isclose(estimate_overlap_swap(half, half, EXACT).value, 0.5)

    def test_collision_cases(self):
        point = np.array([1.0, 0.0, 0.0, 0.0])
        uniform = np.full(4, 0.25)
        assert np.isclose(estimate_collision(point, point, EXACT).value, 1.0)
        assert np.isclose(estimate_collision(uniform, uniform, EXACT).value, 0.25)
        assert np.isclose(estimate_collision(np.array([1.0, 0]), np.array([0, 1.0]), EXACT).value, 0.0)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            estimate_overlap_swap(np.eye(2) / 2, np.eye(4) / 4, EXACT)
        with pytest.raises(ValueError):
            estimate_collision(np.array([1.0]), np.array([0.5, 0.5]), EXACT)


class TestLoschmidt:
    def test_identical_point_mass(self):
        state = ConvexCombinationState(qcbm_circuit(1, 1), layered_unitary_circuit(1, 1))
        a = prepare(state, np.zeros(state.n_params))
        assert np.isclose(estimate_overlap_loschmidt(a, a, EXACT).value, 1.0)

    def test_matches_swap_on_random_pairs(self, rng):
        for _ in range(200):
            a, b = cc_pair(rng)
            swap = estimate_overlap_swap(a, b, EXACT).value
            echo = estimate_overlap_loschmidt(a, b, EXACT).value
            assert abs(swap - echo) < 1e-10

    def test_sample_access_variant(self, rng):
        # second argument given only as a dense state: q(x) = <x|U^dag sigma U|x>
        a, _ = cc_pair(rng)
        sigma = random_density(4, rng)
        echo = estimate_overlap_loschmidt(a, sigma, EXACT).value
        q = np.real(np.diag(a.basis.conj().T @ sigma @ a.basis))
        assert abs(echo - float(a.dist @ q)) < 1e-12
        assert abs(echo - np.trace(a.rho @ sigma).real) < 1e-10

    def test_needs_cc_first_argument(self, rng):
        with pytest.raises(ValueError):
            estimate_overlap_loschmidt(random_density(4, rng), random_density(4, rng), EXACT)


class TestShotMode:
    def test_binomial_concentration(self, rng):
        # |estimate - m| <= 5 sqrt((1 - m^2)/N) in >= 99% of trials
        rho = random_density(2, rng)
        m = estimate_pauli_expect(rho, PauliString((3,)), EXACT).value
        n = 10_000
        est = Estimator(ShotModel("shots", n=n), rng)
        band = 5 * math.sqrt((1 - m**2) / n)
        hits = sum(
            abs(est.pauli_expect(rho, PauliString((3,))).value - m) <= band
            for _ in range(1000)
        )
        assert hits >= 990

    def test_unbiased_and_variance_calibrated(self, rng):
        rho = random_density(2, rng)
        sigma = random_density(2, rng)
        m = estimate_overlap_swap(rho, sigma, EXACT).value
        n = 10_000
        est = Estimator(ShotModel("shots", n=n), rng)
        draws = np.array([est.overlap(rho, sigma).value for _ in range(10_000)])
        se_pool = math.sqrt((1 - m**2) / n) / math.sqrt(len(draws))
        assert abs(draws.mean() - m) <= 3 * se_pool
        assert abs(draws.std() - math.sqrt((1 - m**2) / n)) <= 0.1 * math.sqrt((1 - m**2) / n)

    def test_gaussian_regime_used_for_huge_counts(self, rng):
        est = Estimator(ShotModel("shots", n=10**12), rng)
        vals = [est.overlap(np.eye(2) / 2, np.eye(2) / 2).value for _ in range(50)]
        spread = np.std(vals)
        assert spread < 5e-6
        assert abs(np.mean(vals) - 0.5) < 5e-6

    def test_estimates_stay_in_band(self, rng):
        est = Estimator(ShotModel("shots", n=400), rng)
        for _ in range(200):
            rho = random_density(2, rng)
            e = est.overlap(rho, rho)
            eps = 5 * math.sqrt(1.0 / 400)
            assert -eps <= e.value <= 1 + eps

    def test_determinism_same_seed(self):
        rho = np.eye(2) / 2
        a = Estimator(ShotModel("shots", n=100, seed=5)).overlap(rho, rho).value
        b = Estimator(ShotModel("shots", n=100, seed=5)).overlap(rho, rho).value
        assert a == b

    def test_purity_uses_collision_for_cc(self, rng):
        a, _ = cc_pair(rng)
        exact = Estimator().purity(a).value
        assert abs(exact - np.sum(a.dist**2)) < 1e-12


class TestHoeffding:
    def test_reference_point(self):
        assert hoeffding_shots(0.1, 0.05) == 185

    def test_unit_case(self):
        assert hoeffding_shots(1.0, 2.0 / math.e**2) == 1

    def test_quadratic_scaling(self):
        assert hoeffding_shots(0.05, 0.05) == pytest.approx(4 * hoeffding_shots(0.1, 0.05), rel=0.01)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            hoeffding_shots(0.0, 0.1)
        with pytest.raises(ValueError):
            hoeffding_shots(0.1, 1.5)


class TestPrepared:
    def test_prepare_purification(self, rng):
        from qslack.ansatz import PurificationState
        t = PurificationState(layered_unitary_circuit(2, 2), 1, 1)
        pr = prepare(t, rng.uniform(0, 2 * np.pi, t.n_params))
        assert pr.rho.shape == (2, 2) and not pr.is_cc

    def test_prepare_cc_and_consistency(self, rng):
        a, _ = cc_pair(rng)
        assert a.is_cc
        rebuilt = (a.basis * a.dist) @ a.basis.conj().T
        assert np.allclose(rebuilt, a.rho)

    def test_walsh_expect_matches_dot(self, rng):
        p = np.abs(rng.standard_normal(4))
        p /= p.sum()
        w = WalshVector((1, 0))
        assert np.isclose(Estimator().walsh_expect(Prepared(dist=p), w).value, w.dense() @ p)
