import numpy as np
import pytest

from polyosc import krawtchouk as kr
from polyosc.polyrec import eval_orthonormal

P_SAMPLES = (0.2, 0.5, 0.8)


class TestPolynomialTable:
    def test_hand_value_at_origin(self):
        # kt_1(x) = (pN - x)/sqrt(p(1-p)N); at p = 1/2, N = 2 the value at
        # x = 0 is sqrt(2).
        assert kr.ktilde(1, 0, 0.5, 2) == pytest.approx(np.sqrt(2.0))
        tab = kr.ktilde_table(0.5, 2)
        assert tab[1, 0] == pytest.approx(np.sqrt(2.0))

    def test_table_matches_hypergeometric_sum(self):
        for p in P_SAMPLES:
            for N in (1, 4, 7):
                tab = kr.ktilde_table(p, N)
                ref = np.array(
                    [[kr.ktilde(n, x, p, N) for x in range(N + 1)]
                     for n in range(N + 1)]
                )
                den = np.maximum(1.0, np.abs(ref))
                assert np.max(np.abs(tab - ref) / den) < 1e-12, (p, N)

    def test_table_matches_chain_recurrence(self):
        p, N = 0.3, 9
        ch = kr.recurrence_chain(p, N)
        tab = kr.ktilde_table(p, N)
        xs = np.arange(N + 1, dtype=float)
        for n in (0, 1, 4, 9):
            vals = np.atleast_1d(eval_orthonormal(ch, n, xs))
            den = np.maximum(1.0, np.abs(tab[n]))
            assert np.max(np.abs(vals - tab[n]) / den) < 1e-9

    def test_self_duality(self):
        # The plain normalization K_n(x) = kt_n(x)/kt_n(0) is symmetric in
        # (n, x).
        for p in P_SAMPLES:
            tab = kr.ktilde_table(p, 12)
            plain = tab / tab[:, :1]
            assert np.max(np.abs(plain - plain.T)) < 1e-11

    def test_sign_flip_family(self):
        p, N = 0.4, 5
        for n in range(N + 1):
            for x in (0, 2, 5):
                assert kr.khat(n, x, p, N) == pytest.approx(
                    (-1.0) ** n * kr.ktilde(n, x, p, N)
                )

    def test_weights_normalized(self):
        for p in P_SAMPLES:
            rho = kr.weight_rho(np.arange(13), p, 12)
            assert float(np.sum(rho)) == pytest.approx(1.0, abs=1e-13)

    def test_validation(self):
        with pytest.raises(ValueError):
            kr.ktilde_table(0.0, 4)
        with pytest.raises(ValueError):
            kr.ktilde_table(1.2, 4)
        with pytest.raises(ValueError):
            kr.ktilde_table(0.4, 0)

    def test_table_copies_are_independent(self):
        one = kr.ktilde_table(0.3, 4)
        one[0, 0] = 77.0
        assert kr.ktilde_table(0.3, 4)[0, 0] == 1.0


class TestOrthogonality:
    @pytest.mark.parametrize("p", P_SAMPLES)
    @pytest.mark.parametrize("N", (1, 6, 18, 30))
    def test_dual_pairs(self, p, N):
        r1, r2 = kr.dual_orthogonality_residuals(p, N)
        assert r1 < 1e-11
        assert r2 < 1e-11

    @pytest.mark.parametrize("p", P_SAMPLES)
    def test_grid_pairs(self, p):
        g1, g2 = kr.grid_orthogonality_residuals(p, 25)
        assert g1 < 1e-11
        assert g2 < 1e-11

    def test_difference_equation(self):
        for p in P_SAMPLES:
            assert kr.difference_equation_residual(p, 16) < 1e-11


class TestLatticeOscillator:
    def test_spectrum_formula(self):
        osc = kr.build_lattice_oscillator(0.3, 11)
        vals = np.linalg.eigvalsh(osc.hamiltonian)
        n = np.arange(12.0)
        want = np.sort(11.0 * (n + 0.5) - n**2)
        assert np.max(np.abs(vals - want)) < 1e-10
        assert np.allclose(np.sort(osc.expected_spectrum()), want)

    def test_ladder_commutator_closes(self):
        osc = kr.build_lattice_oscillator(0.7, 9)
        assert kr.ladder_commutator_residual(osc) < 1e-11

    def test_su2_algebra(self):
        kp, km, k0 = kr.polynomial_ladders(0.45, 8)
        assert kr.so3_residuals(kp, km, k0) < 1e-11
        # K0 is the centered number operator
        assert np.allclose(np.diag(k0).real, np.arange(9.0) - 4.0, atol=1e-12)


class TestGridSide:
    def test_grid_geometry(self):
        p, N = 0.25, 8
        xi = kr.grid(p, N)
        h = np.sqrt(2.0 * N * p * (1 - p))
        assert np.allclose(xi, h * (np.arange(N + 1) - p * N))

    def test_grid_spectrum_is_half_integers(self):
        for p in P_SAMPLES:
            H = kr.grid_hamiltonian(p, 14)
            assert np.max(np.abs(np.linalg.eigvalsh(H) - (np.arange(15) + 0.5))) < 1e-11

    def test_factorization(self):
        for p in P_SAMPLES:
            assert kr.grid_factorization_residual(p, 12) < 1e-11

    def test_eigenfunctions(self):
        assert kr.grid_eigen_residual(0.35, 10) < 1e-11

    def test_ladder_action_small_case(self):
        # N = 1: Psi has two levels; lowering the top one must return
        # sqrt(1 * (N - 1 + 1)) = 1 times the bottom one.
        p, N = 0.3, 1
        psi = kr.grid_functions(p, N)
        _, am = kr.grid_ladders(p, N)
        assert np.allclose(am @ psi[1], psi[0], atol=1e-13)
        assert kr.grid_ladder_action_residual(p, N) < 1e-13

    def test_ladder_action_general(self):
        for p in P_SAMPLES:
            assert kr.grid_ladder_action_residual(p, 13) < 1e-11


class TestIntertwiner:
    @pytest.mark.parametrize("p", P_SAMPLES)
    @pytest.mark.parametrize("N", (1, 7, 20))
    def test_transport(self, p, N):
        T, _, _, _ = kr.polynomial_to_grid_map(p, N)
        assert np.max(np.abs(T.T @ T - np.eye(N + 1))) < 1e-12
        assert kr.transport_residual(p, N) < 1e-11

    def test_hamiltonian_relation(self):
        for p in P_SAMPLES:
            assert kr.hamiltonian_relation_residual(p, 17) < 1e-10

    def test_difference_forms(self):
        for p in P_SAMPLES:
            assert kr.difference_form_residual(p, 14) < 1e-10

    def test_difference_forms_large_table(self):
        # p far from 1/2 at N = 30 pushes table entries to ~1e11; the
        # ladder-action defect must stay relative-small there
        assert kr.difference_form_residual(0.8, 30) < 1e-10
        assert kr.difference_form_residual(0.05, 30) < 1e-10
