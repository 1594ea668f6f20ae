import numpy as np
import pytest
from itertools import product

from qslack import linalg, objective as obj
from qslack.estimate import Estimator, Prepared
from qslack.pauli import PauliObservable, PauliString, WalshObservable
from qslack.oracle import exact_negativity, exact_root_fidelity, exact_trace_distance, exact_tvd
from tests.conftest import bell_state, ket, random_density, random_hermitian

EST = Estimator()


def pauli_coeffs_of(m: np.ndarray, n: int) -> np.ndarray:
    """Coefficient vector of a matrix in the lexicographic Pauli-string basis."""
    return np.array([
        np.trace(PauliString(labels).dense() @ m) / 2**n
        for labels in sorted(product(range(4), repeat=n))
    ])


def random_dist(size, rng):
    p = np.abs(rng.standard_normal(size))
    return p / p.sum()


class TestTraceDistanceDual:
    def test_identical_states_unit_objective(self, rng):
        rho = random_density(4, rng)
        omega = random_density(4, rng)
        tb = obj.td_dual_objective(rho, rho, omega, omega, 1.0, 1.0, 10.0, EST)
        # lambda omega - rho + sigma - mu tau vanishes identically
        assert abs(tb.value - 1.0) < 1e-12
        assert abs(tb.penalty) < 1e-12

    def test_zero_scalars_leave_cross_terms(self, rng):
        rho, sigma = random_density(4, rng), random_density(4, rng)
        omega, tau = random_density(4, rng), random_density(4, rng)
        tb = obj.td_dual_objective(rho, sigma, omega, tau, 0.0, 0.0, 3.0, EST)
        assert abs(tb.value - 3.0 * linalg.hs_norm_sq(sigma - rho)) < 1e-10

    def test_expansion_matches_dense(self, rng):
        for n in (1, 2):
            d = 2**n
            for _ in range(25):
                args = [random_density(d, rng) for _ in range(4)]
                lam, mu = rng.uniform(0, 2, 2)
                tb = obj.td_dual_objective(*args, lam, mu, 10.0, EST)
                dv, dp = obj.td_dual_dense(*args, lam, mu, 10.0)
                assert abs(tb.value - dv) < 1e-9
                assert abs(tb.penalty - dp) < 1e-9

    def test_optimum_is_trace_distance(self, rng):
        # decompose rho - sigma into positive and negative parts
        rho, sigma = random_density(4, rng), random_density(4, rng)
        w, v = np.linalg.eigh(rho - sigma)
        pos = (v * np.maximum(w, 0)) @ v.conj().T
        neg = (v * np.maximum(-w, 0)) @ v.conj().T
        lam, mu = np.trace(pos).real, np.trace(neg).real
        tb = obj.td_dual_objective(rho, sigma, pos / lam, neg / mu, lam, mu, 100.0, EST)
        td = exact_trace_distance(rho, sigma)
        assert abs(tb.penalty) < 1e-10
        assert abs(tb.value - td) < 1e-6


class TestTraceDistancePrimal:
    def test_zero_scalars_identity_norm(self, rng):
        rho, sigma = random_density(4, rng), random_density(4, rng)
        tau, omega = random_density(4, rng), random_density(4, rng)
        tb = obj.td_primal_objective(rho, sigma, tau, omega, 0.0, 0.0, 2.0, EST)
        assert abs(tb.value + 2.0 * 4) < 1e-10

    def test_exact_cover_kills_penalty(self, rng):
        rho, sigma = random_density(2, rng), random_density(2, rng)
        half = np.eye(2) / 2
        tb = obj.td_primal_objective(rho, sigma, half, half, 1.0, 1.0, 10.0, EST)
        assert abs(tb.penalty) < 1e-12

    def test_expansion_matches_dense(self, rng):
        for n in (1, 2):
            d = 2**n
            for _ in range(25):
                args = [random_density(d, rng) for _ in range(4)]
                lam, mu = rng.uniform(0, 2, 2)
                tb = obj.td_primal_objective(*args, lam, mu, 10.0, EST)
                dv, dp = obj.td_primal_dense(*args, lam, mu, 10.0)
                assert abs(tb.value - dv) < 1e-9

    def test_optimum_is_trace_distance(self, rng):
        rho, sigma = random_density(4, rng), random_density(4, rng)
        w, v = np.linalg.eigh(rho - sigma)
        proj = (v * (w > 0)) @ v.conj().T
        lam = np.trace(proj).real
        rest = np.eye(4) - proj
        mu = np.trace(rest).real
        tb = obj.td_primal_objective(rho, sigma, proj / lam, rest / mu, lam, mu, 100.0, EST)
        assert abs(tb.penalty) < 1e-10
        assert abs(tb.value - exact_trace_distance(rho, sigma)) < 1e-6


class TestFidelityPrimal:
    def test_pure_equal_states_feasible_point(self):
        rho = np.outer(ket("0"), ket("0").conj())
        omega = 0.5 * np.block([[rho, rho], [rho, rho]])
        alpha = pauli_coeffs_of(rho, 1)
        tb = obj.fidelity_primal_objective(rho, rho, omega, alpha, 2.0, 45.0, EST)
        assert abs(tb.penalty) < 1e-12
        assert abs(tb.value - 1.0) < 1e-9

    def test_zero_alpha_zero_lambda(self, rng):
        rho, sigma = random_density(2, rng), random_density(2, rng)
        omega = random_density(4, rng)
        alpha = np.zeros(4, dtype=complex)
        tb = obj.fidelity_primal_objective(rho, sigma, omega, alpha, 0.0, 7.0, EST)
        expected = -7.0 * (np.trace(rho @ rho).real + np.trace(sigma @ sigma).real)
        assert abs(tb.value - expected) < 1e-10

    def test_expansion_matches_dense(self, rng):
        for n in (1, 2):
            d = 2**n
            for _ in range(25):
                rho, sigma = random_density(d, rng), random_density(d, rng)
                omega = random_density(2 * d, rng)
                alpha = rng.standard_normal(4**n) + 1j * rng.standard_normal(4**n)
                lam = rng.uniform(0, 2)
                tb = obj.fidelity_primal_objective(rho, sigma, omega, alpha, lam, 45.0, EST)
                dv, dp = obj.fidelity_primal_dense(rho, sigma, omega, alpha, lam, 45.0)
                assert abs(tb.value - dv) < 1e-9
                assert abs(tb.penalty - dp) < 1e-9


class TestFidelityDual:
    def test_zero_scalars_constant(self, rng):
        n = 1
        rho, sigma = random_density(2, rng), random_density(2, rng)
        omega, tau = random_density(2, rng), random_density(2, rng)
        xi = random_density(4, rng)
        tb = obj.fidelity_dual_objective(rho, sigma, omega, tau, xi, 0.0, 0.0, 0.0, 5.0, EST)
        assert abs(tb.value - 5.0 * 2.0 ** (n + 1)) < 1e-10

    def test_expansion_matches_dense(self, rng):
        for n in (1, 2):
            d = 2**n
            for _ in range(25):
                rho, sigma = random_density(d, rng), random_density(d, rng)
                omega, tau = random_density(d, rng), random_density(d, rng)
                xi = random_density(2 * d, rng)
                lam, mu, nu = rng.uniform(0, 2, 3)
                tb = obj.fidelity_dual_objective(rho, sigma, omega, tau, xi, lam, mu, nu, 5.0, EST)
                dv, dp = obj.fidelity_dual_dense(rho, sigma, omega, tau, xi, lam, mu, nu, 5.0)
                assert abs(tb.value - dv) < 1e-9

    def test_maximally_mixed_feasible_guess(self):
        # Y = Z = I is dual feasible and meets the oracle value sqrt(F) = 1
        n = 1
        eye = np.eye(2) / 2
        block = np.block([[np.eye(2), np.eye(2)], [np.eye(2), np.eye(2)]])
        xi = block / np.trace(block).real
        nu = np.trace(block).real
        tb = obj.fidelity_dual_objective(eye, eye, eye, eye, xi, 2.0, 2.0, nu, 5.0, EST)
        assert abs(tb.penalty) < 1e-10
        assert abs(tb.value - exact_root_fidelity(eye, eye)) < 1e-9


class TestNegativityPrimal:
    def test_uniform_slabs_penalty_value(self, rng):
        n = 2
        rho = random_density(4, rng)
        quarter = np.eye(4) / 4
        alpha = np.zeros(16)
        tb = obj.negativity_primal_objective(rho, quarter, quarter, alpha, 1.0, 1.0, 5.0, 1, 1, EST)
        expected_pen = 2.0 ** (n + 1) + 2 * 2.0 ** (-n) - 4
        assert abs(tb.penalty - expected_pen) < 1e-10

    def test_identity_alpha_gives_unit_overlap(self, rng):
        rho = random_density(4, rng)
        alpha = np.zeros(16)
        alpha[0] = 1.0
        tb = obj.negativity_primal_objective(rho, np.eye(4) / 4, np.eye(4) / 4, alpha, 0.0, 0.0, 5.0, 1, 1, EST)
        g1 = tb.value + 5.0 * tb.penalty
        assert abs(g1 - 1.0) < 1e-10

    def test_expansion_matches_dense(self, rng):
        for _ in range(25):
            rho, sigma, tau = (random_density(4, rng) for _ in range(3))
            alpha = rng.standard_normal(16) * 0.3
            lam, mu = rng.uniform(0, 2, 2)
            tb = obj.negativity_primal_objective(rho, sigma, tau, alpha, lam, mu, 5.0, 1, 1, EST)
            dv, dp = obj.negativity_primal_dense(rho, sigma, tau, alpha, lam, mu, 5.0, 1, 1)
            assert abs(tb.value - dv) < 1e-9
            assert abs(tb.penalty - dp) < 1e-9

    def test_bell_feasible_point_reaches_negativity(self):
        # H = sign matrix of the partial transpose attains E_N for Bell input:
        # the objective applies the transpose to H through the coefficient signs
        bell = bell_state()
        pt = linalg.partial_transpose_b(bell, 2, 2)
        w, v = np.linalg.eigh(pt)
        h = (v * np.sign(w)) @ v.conj().T
        alpha = np.real(pauli_coeffs_of(h, 2))
        sigma = (np.eye(4) - h) / np.trace(np.eye(4) - h).real
        tau = (np.eye(4) + h) / np.trace(np.eye(4) + h).real
        lam = np.trace(np.eye(4) - h).real
        mu = np.trace(np.eye(4) + h).real
        tb = obj.negativity_primal_objective(bell, sigma, tau, alpha, lam, mu, 100.0, 1, 1, EST)
        assert abs(tb.penalty) < 1e-9
        assert abs(tb.value - 2.0) < 1e-6


class TestNegativityDual:
    def test_zero_everything_leaves_purity(self, rng):
        rho = random_density(4, rng)
        sigma, tau = random_density(4, rng), random_density(4, rng)
        z = np.zeros(16)
        tb = obj.negativity_dual_objective(rho, sigma, tau, z, z, 0.0, 0.0, 3.0, 1, 1, EST)
        assert abs(tb.value - 3.0 * np.trace(rho @ rho).real) < 1e-10

    def test_expansion_matches_dense(self, rng):
        for _ in range(25):
            rho, sigma, tau = (random_density(4, rng) for _ in range(3))
            alpha = rng.standard_normal(16) * 0.3
            beta = rng.standard_normal(16) * 0.3
            lam, mu = rng.uniform(0, 2, 2)
            tb = obj.negativity_dual_objective(rho, sigma, tau, alpha, beta, lam, mu, 7.0, 1, 1, EST)
            dv, dp = obj.negativity_dual_dense(rho, sigma, tau, alpha, beta, lam, mu, 7.0, 1, 1)
            assert abs(tb.value - dv) < 1e-9

    def test_bell_positive_negative_parts(self):
        bell = bell_state()
        pt = linalg.partial_transpose_b(bell, 2, 2)
        w, v = np.linalg.eigh(pt)
        k_mat = (v * np.maximum(w, 0)) @ v.conj().T
        l_mat = (v * np.maximum(-w, 0)) @ v.conj().T
        alpha = np.real(pauli_coeffs_of(k_mat, 2))
        beta = np.real(pauli_coeffs_of(l_mat, 2))
        lam, mu = np.trace(k_mat).real, np.trace(l_mat).real
        tb = obj.negativity_dual_objective(bell, k_mat / lam, l_mat / mu, alpha, beta,
                                           lam, mu, 100.0, 1, 1, EST)
        assert abs(tb.penalty) < 1e-9
        assert abs(tb.value - exact_negativity(bell, 2, 2)) < 1e-6
        assert abs(tb.value - 2.0) < 1e-6


def paper_h(n=2):
    return PauliObservable.from_text(n, {"ZZ": 1.0, "XI": 1.0, "IX": 1.0})


class TestChamPrimal:
    def test_no_constraints_is_plain_energy(self, rng):
        rho = random_density(4, rng)
        h = paper_h()
        tb = obj.cham_primal_objective(rho, h, [], np.zeros(0), np.zeros(0), 100.0, EST)
        assert abs(tb.value - np.trace(h.dense() @ rho).real) < 1e-10
        assert tb.penalty == 0.0

    def test_exact_slack_kills_penalty(self, rng):
        h = PauliObservable.from_text(1, {"Z": 1.0})
        a1 = PauliObservable.from_text(1, {"X": 1.0})
        rho = random_density(2, rng)
        x_val = np.trace(a1.dense() @ rho).real
        z = np.array([0.3])
        b = np.array([x_val - 0.3])
        tb = obj.cham_primal_objective(rho, h, [a1], b, z, 50.0, EST)
        assert abs(tb.penalty) < 1e-12

    def test_expansion_matches_dense(self, rng):
        h = paper_h()
        a_list = [PauliObservable.from_text(2, {"YI": 1.0}), PauliObservable.from_text(2, {"IZ": 1.0})]
        b = np.array([0.2, 0.1])
        a_dense = [a.dense() for a in a_list]
        for _ in range(25):
            rho = random_density(4, rng)
            z = rng.uniform(0, 1, 2)
            tb = obj.cham_primal_objective(rho, h, a_list, b, z, 100.0, EST)
            dv, dp = obj.cham_primal_dense(rho, h.dense(), a_dense, b, z, 100.0)
            assert abs(tb.value - dv) < 1e-9


class TestChamDual:
    def test_mu_only_matches_identity_shift(self, rng):
        h = paper_h()
        omega = random_density(4, rng)
        mu = -0.7
        tb = obj.cham_dual_objective(omega, h, [], np.zeros(0), np.zeros(0), mu, 0.0, 100.0, EST)
        pen_direct = linalg.hs_norm_sq(h.dense() - mu * np.eye(4))
        assert abs(tb.penalty - pen_direct) < 1e-9

    def test_exact_fit_reaches_minimum_energy(self):
        h = paper_h()
        hd = h.dense()
        w = np.linalg.eigvalsh(hd)
        mu = w[0]
        gap = hd - mu * np.eye(4)
        nu = np.trace(gap).real
        omega = gap / nu
        tb = obj.cham_dual_objective(omega, h, [], np.zeros(0), np.zeros(0), mu, nu, 100.0, EST)
        assert abs(tb.penalty) < 1e-9
        assert abs(tb.value - w[0]) < 1e-9

    def test_expansion_matches_dense(self, rng):
        h = paper_h()
        a_list = [PauliObservable.from_text(2, {"YI": 1.0}), PauliObservable.from_text(2, {"IZ": 1.0})]
        b = np.array([0.2, 0.1])
        a_dense = [a.dense() for a in a_list]
        for _ in range(25):
            omega = random_density(4, rng)
            y = rng.uniform(0, 1, 2)
            mu = rng.uniform(-1, 1)
            nu = rng.uniform(0, 1)
            tb = obj.cham_dual_objective(omega, h, a_list, b, y, mu, nu, 100.0, EST)
            dv, dp = obj.cham_dual_dense(omega, h.dense(), a_dense, b, y, mu, nu, 100.0)
            assert abs(tb.value - dv) < 1e-9
            assert abs(tb.penalty - dp) < 1e-9


class TestInteriorPoint:
    def test_no_constraints_is_energy(self, rng):
        rho = random_density(4, rng)
        h = paper_h()
        tb = obj.interior_point_cham(rho, h, [], np.zeros(0), 0.5, EST)
        assert abs(tb.value - np.trace(h.dense() @ rho).real) < 1e-10

    def test_vanishing_barrier_parameter(self, rng):
        h = PauliObservable.from_text(1, {"Z": 1.0})
        a1 = PauliObservable.from_text(1, {"X": 1.0})
        rho = (np.eye(2) + 0.5 * np.array([[0, 1], [1, 0]])) / 2
        vals = []
        for eta in (1e-1, 1e-3, 1e-6):
            vals.append(obj.interior_point_cham(rho, h, [a1], np.array([0.1]), eta, EST).value)
        energy = np.trace(h.dense() @ rho).real
        assert abs(vals[-1] - energy) < 1e-4
        assert abs(vals[0] - energy) > abs(vals[-1] - energy)

    def test_infeasible_state_signals(self):
        h = paper_h()
        a_list = [PauliObservable.from_text(2, {"YI": 1.0}), PauliObservable.from_text(2, {"IZ": 1.0})]
        with pytest.raises(obj.BarrierViolationError):
            obj.interior_point_cham(np.eye(4) / 4, h, a_list, np.array([0.2, 0.1]), 0.1, EST)


class TestTvd:
    def test_dual_identical_inputs(self, rng):
        p = random_dist(4, rng)
        r = random_dist(4, rng)
        tb = obj.tvd_dual_objective(p, p, r, r, 1.0, 1.0, 10.0, EST)
        assert abs(tb.value - 1.0) < 1e-12

    def test_dual_zero_scalars(self, rng):
        p, q, r, s = (random_dist(4, rng) for _ in range(4))
        tb = obj.tvd_dual_objective(p, q, r, s, 0.0, 0.0, 10.0, EST)
        assert abs(tb.value - 10.0 * np.sum((q - p) ** 2)) < 1e-12

    def test_dual_expansion_matches_dense(self, rng):
        for n in (1, 2):
            for _ in range(25):
                p, q, r, s = (random_dist(2**n, rng) for _ in range(4))
                lam, mu = rng.uniform(0, 2, 2)
                tb = obj.tvd_dual_objective(p, q, r, s, lam, mu, 10.0, EST)
                dv, dp = obj.tvd_dual_dense(p, q, r, s, lam, mu, 10.0)
                assert abs(tb.value - dv) < 1e-9

    def test_primal_expansion_matches_dense(self, rng):
        for n in (1, 2):
            for _ in range(25):
                p, q, r, s = (random_dist(2**n, rng) for _ in range(4))
                lam, mu = rng.uniform(0, 2, 2)
                tb = obj.tvd_primal_objective(p, q, r, s, lam, mu, 10.0, EST)
                dv, dp = obj.tvd_primal_dense(p, q, r, s, lam, mu, 10.0)
                assert abs(tb.value - dv) < 1e-9

    def test_both_sides_reach_tvd_at_optimum(self, rng):
        p, q = random_dist(4, rng), random_dist(4, rng)
        diff = p - q
        pos = np.maximum(diff, 0)
        neg = np.maximum(-diff, 0)
        lam, mu = pos.sum(), neg.sum()
        tb = obj.tvd_dual_objective(p, q, pos / lam, neg / mu, lam, mu, 100.0, EST)
        tvd = exact_tvd(p, q)
        assert abs(tb.value - tvd) < 1e-9
        ind = (diff > 0).astype(float)
        lam_p = ind.sum()
        rest = 1.0 - ind
        mu_p = rest.sum()
        tb2 = obj.tvd_primal_objective(p, q, ind / lam_p, rest / mu_p, lam_p, mu_p, 100.0, EST)
        assert abs(tb2.value - tvd) < 1e-9


class TestClassicalCham:
    def test_no_constraints_uniform(self, rng):
        h = WalshObservable.from_text(2, {"11": 1.0, "00": 0.3})
        p = np.full(4, 0.25)
        tb = obj.classical_cham_primal_objective(p, h, [], np.zeros(0), np.zeros(0), 10.0, EST)
        assert abs(tb.value - np.mean(h.dense())) < 1e-12

    def test_primal_expansion_matches_dense(self, rng):
        h = WalshObservable.from_text(2, {"11": 1.0})
        a_list = [WalshObservable.from_text(2, {"10": 0.5}), WalshObservable.from_text(2, {"01": 0.7})]
        b = np.array([0.1, 0.3])
        a_dense = [a.dense() for a in a_list]
        for _ in range(25):
            p = random_dist(4, rng)
            z = rng.uniform(0, 1, 2)
            tb = obj.classical_cham_primal_objective(p, h, a_list, b, z, 10.0, EST)
            dv, dp = obj.classical_cham_primal_dense(p, h.dense(), a_dense, b, z, 10.0)
            assert abs(tb.value - dv) < 1e-10

    def test_dual_expansion_matches_dense(self, rng):
        h = WalshObservable.from_text(2, {"11": 1.0})
        a_list = [WalshObservable.from_text(2, {"10": 0.5}), WalshObservable.from_text(2, {"01": 0.7})]
        b = np.array([0.1, 0.3])
        a_dense = [a.dense() for a in a_list]
        for _ in range(25):
            w = random_dist(4, rng)
            y = rng.uniform(0, 1, 2)
            mu = rng.uniform(-1, 1)
            nu = rng.uniform(0, 1)
            tb = obj.classical_cham_dual_objective(w, h, a_list, b, y, mu, nu, 10.0, EST)
            dv, dp = obj.classical_cham_dual_dense(w, h.dense(), a_dense, b, y, mu, nu, 10.0)
            assert abs(tb.value - dv) < 1e-10


def random_lcs_instance(n, rng, n_terms=2):
    d = 2**n
    return obj.LcsInstance(
        n_in=n, n_out=n,
        a_terms=[(rng.uniform(-1, 1), random_density(d, rng)) for _ in range(n_terms)],
        b_terms=[(rng.uniform(-1, 1), random_density(d, rng)) for _ in range(n_terms)],
        phi_terms=[(rng.uniform(-1, 1), random_density(d, rng), random_density(d, rng))
                   for _ in range(n_terms)],
    )


def random_pauli_instance(n, rng, n_terms=3):
    labels = sorted(product(range(4), repeat=n))
    pick = lambda: {tuple(labels[i]): rng.uniform(-1, 1) for i in rng.choice(len(labels), n_terms, replace=False)}
    phi = {}
    for _ in range(n_terms):
        lx = tuple(labels[rng.integers(len(labels))])
        ly = tuple(labels[rng.integers(len(labels))])
        phi[(lx, ly)] = rng.uniform(-1, 1)
    return obj.PauliMapInstance(
        a_obs=PauliObservable(n, pick()),
        b_obs=PauliObservable(n, pick()),
        phi_map=phi,
    )


class TestGenericBuilders:
    def test_trivial_zero_instance(self, rng):
        n = 1
        inst = obj.LcsInstance(n_in=n, n_out=n, a_terms=[], b_terms=[],
                               phi_terms=[(1.0, np.eye(2) / 2, np.eye(2) / 2)])
        rho, sigma = random_density(2, rng), random_density(2, rng)
        tb = obj.generic_primal_objective(inst, rho, sigma, 0.0, 0.0, 5.0, EST)
        assert abs(tb.value) < 1e-12

    def test_constructed_feasible_point(self, rng):
        # B := lambda Phi(rho) + mu sigma makes the penalty vanish
        n = 1
        rho, sigma = random_density(2, rng), random_density(2, rng)
        phi_terms = [(0.7, random_density(2, rng), random_density(2, rng))]
        lam, mu = 1.3, 0.4
        inst_partial = obj.LcsInstance(n, n, [(1.0, random_density(2, rng))], [], phi_terms)
        b_mat = lam * inst_partial.phi(rho) + mu * sigma
        coeff = np.trace(b_mat).real
        inst = obj.LcsInstance(n, n, inst_partial.a_terms,
                               [(coeff, linalg.hermitianize(b_mat) / coeff)], phi_terms)
        tb = obj.generic_primal_objective(inst, rho, sigma, lam, mu, 50.0, EST)
        assert abs(tb.penalty) < 1e-10
        expected = lam * np.trace(inst.a_dense() @ rho).real
        assert abs(tb.value - expected) < 1e-9

    def test_dual_zero_case(self, rng):
        n = 1
        inst = obj.LcsInstance(n, n, [], [(1.0, random_density(2, rng))],
                               [(0.5, random_density(2, rng), random_density(2, rng))])
        tau, omega = random_density(2, rng), random_density(2, rng)
        tb = obj.generic_dual_objective(inst, tau, omega, 0.0, 0.0, 5.0, EST)
        assert abs(tb.value) < 1e-12

    def test_adjoint_identity(self, rng):
        for make in (random_lcs_instance, random_pauli_instance):
            for _ in range(10):
                inst = make(1, rng)
                x = random_hermitian(2, rng)
                y = random_hermitian(2, rng)
                lhs = linalg.hs_inner(y, inst.phi(x))
                rhs = linalg.hs_inner(inst.phi_dag(y), x)
                assert abs(lhs - rhs) < 1e-10

    @pytest.mark.parametrize("kind", ["lcs", "pauli"])
    def test_expansion_matches_dense(self, kind, rng):
        make = random_lcs_instance if kind == "lcs" else random_pauli_instance
        for n in (1, 2):
            d = 2**n
            for _ in range(15):
                inst = make(n, rng)
                rho, sigma = random_density(d, rng), random_density(d, rng)
                lam, mu = rng.uniform(0, 2, 2)
                tb = obj.generic_primal_objective(inst, rho, sigma, lam, mu, 5.0, EST)
                dv, dp = obj.generic_primal_dense(inst, rho, sigma, lam, mu, 5.0)
                assert abs(tb.value - dv) < 1e-9
                tau, omega = random_density(d, rng), random_density(d, rng)
                kap, nu = rng.uniform(0, 2, 2)
                tb = obj.generic_dual_objective(inst, tau, omega, kap, nu, 5.0, EST)
                dv, dp = obj.generic_dual_dense(inst, tau, omega, kap, nu, 5.0)
                assert abs(tb.value - dv) < 1e-9


class TestPenaltyStructure:
    def test_objective_affine_in_c(self, rng):
        rho, sigma, omega, tau = (random_density(4, rng) for _ in range(4))
        vals = {}
        for c in (1.0, 2.0, 5.0):
            tb = obj.td_dual_objective(rho, sigma, omega, tau, 0.9, 0.8, c, EST)
            vals[c] = (tb.value, tb.penalty)
        pen = vals[1.0][1]
        for c in (2.0, 5.0):
            assert abs(vals[c][0] - (vals[1.0][0] + (c - 1.0) * pen)) < 1e-9
            assert abs(vals[c][1] - pen) < 1e-12

    def test_sandwich_at_oracle_optimum(self, rng):
        # primal objective <= oracle <= dual objective at feasible optima
        rho, sigma = random_density(4, rng), random_density(4, rng)
        td = exact_trace_distance(rho, sigma)
        w, v = np.linalg.eigh(rho - sigma)
        proj = (v * (w > 0)) @ v.conj().T
        lam_p = np.trace(proj).real
        rest = np.eye(4) - proj
        mu_p = np.trace(rest).real
        primal = obj.td_primal_objective(rho, sigma, proj / lam_p, rest / mu_p,
                                         lam_p, mu_p, 100.0, EST).value
        pos = (v * np.maximum(w, 0)) @ v.conj().T
        neg = (v * np.maximum(-w, 0)) @ v.conj().T
        lam_d, mu_d = np.trace(pos).real, np.trace(neg).real
        dual = obj.td_dual_objective(rho, sigma, pos / lam_d, neg / mu_d,
                                     lam_d, mu_d, 100.0, EST).value
        assert primal <= td + 1e-6
        assert dual >= td - 1e-6
        assert abs(primal - td) < 1e-6 and abs(dual - td) < 1e-6
