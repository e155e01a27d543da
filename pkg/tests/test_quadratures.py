import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvur.quadratures import (
    QuadratureSet,
    commutator_matrix,
    equidistributed_set,
    from_symplectic,
    gamma_yz,
    observables_moments,
    p_quadratures,
    pairwise_commuting,
    rotated_quadrature,
    stack,
    wedge_norm,
    x_quadratures,
)
from cvur.states import fock_number, vacuum
from cvur.symplectic import random_symplectic

from .conftest import random_gaussian

seeds = st.integers(0, 2**31)


def symplectic_pair(n, seed):
    A, B = random_symplectic(n, seed=seed), random_symplectic(n, seed=seed + 10_000)
    return A, B, from_symplectic(A), from_symplectic(B)


class TestQuadratureSet:
    def test_rotated(self):
        assert np.allclose(rotated_quadrature(0).coeffs, [[1, 0]])
        assert np.allclose(rotated_quadrature(math.pi / 2).coeffs, [[0, 1]], atol=1e-16)

    def test_zero_row_rejected(self):
        with pytest.raises(ValueError, match="zero row"):
            QuadratureSet([[1, 0], [0, 0]])

    def test_odd_width_rejected(self):
        with pytest.raises(ValueError):
            QuadratureSet([[1, 0, 0]])

    def test_blocks(self):
        Q = QuadratureSet([[1, 2, 3, 4]])
        assert Q.n_modes == 2 and np.array_equal(Q.a, [[1, 2]]) and np.array_equal(Q.ap, [[3, 4]])

    def test_stack_mode_mismatch(self):
        with pytest.raises(ValueError):
            stack(x_quadratures(1), x_quadratures(2))


class TestCommutators:
    def test_x_p(self):
        assert np.allclose(commutator_matrix(x_quadratures(), p_quadratures()).ktilde, [[1]])

    @given(st.floats(-4, 4), st.floats(-4, 4))
    def test_rotated_pair(self, theta, phi):
        K = commutator_matrix(rotated_quadrature(theta), rotated_quadrature(phi)).ktilde
        assert np.isclose(K[0, 0], math.sin(phi - theta), atol=1e-14)

    @given(st.integers(1, 3), seeds)
    def test_block_formula(self, n, seed):
        A, B, Y, Z = symplectic_pair(n, seed)
        Aa, Ab = A[:n, :n], A[:n, n:]
        Ba, Bb = B[:n, :n], B[:n, n:]
        K = commutator_matrix(Y, Z).ktilde
        assert np.allclose(K.T, Bb @ Aa.T - Ba @ Ab.T, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            commutator_matrix(x_quadratures(1), x_quadratures(2))
        with pytest.raises(ValueError):
            commutator_matrix(x_quadratures(2), rotated_quadrature(0.1))

    def test_pairwise(self):
        assert pairwise_commuting(x_quadratures(3))
        assert not pairwise_commuting(stack(x_quadratures(), p_quadratures()))

    @given(st.integers(1, 4), seeds)
    def test_symplectic_rows_commute(self, n, seed):
        assert pairwise_commuting(from_symplectic(random_symplectic(n, seed=seed)))


class TestWedge:
    def test_unit(self):
        assert wedge_norm([1, 0], [0, 1]) == 1

    def test_triple(self):
        assert np.isclose(wedge_norm([1, 0, -1], [0, 1, -1]), math.sqrt(3))

    @pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
    def test_equidistributed(self, m):
        R = equidistributed_set(m)
        assert abs(wedge_norm(R.a[:, 0], R.ap[:, 0]) - m / 2) < 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            wedge_norm([1, 0], [1, 0, 0])

    @given(st.integers(2, 7), seeds)
    def test_relation_to_commutators(self, m, seed):
        R = QuadratureSet(np.random.default_rng(seed).normal(size=(m, 2)))
        _, C = observables_moments(vacuum(1), R)
        w = wedge_norm(R.a[:, 0], R.ap[:, 0])
        assert np.isclose(w**2, 4 * np.sum(np.triu(C, 1) ** 2), atol=1e-10)


class TestEquidistributed:
    def test_m2_degenerate(self):
        R = equidistributed_set(2)
        assert np.allclose(R.coeffs, [[1, 0], [-1, 0]], atol=1e-15)
        assert wedge_norm(R.a[:, 0], R.ap[:, 0]) < 1e-15

    def test_m4(self):
        assert np.allclose(equidistributed_set(4).coeffs, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)

    def test_m3_commutators(self):
        _, C = observables_moments(vacuum(1), equidistributed_set(3))
        i, j = np.indices((3, 3))
        assert np.allclose(C, 0.5 * np.sin(2 * np.pi * (j - i) / 3))

    def test_rejects_m1(self):
        with pytest.raises(ValueError):
            equidistributed_set(1)


class TestGamma:
    def test_x_p_gives_gamma(self):
        g = random_gaussian(2, 3, thermal_max=1.0)
        blocks = gamma_yz(g, x_quadratures(2), p_quadratures(2))
        assert np.allclose(blocks.Gamma, g.cov)
        assert np.allclose(blocks.Gamma_yz, g.cov[:2, 2:])

    @given(st.integers(1, 3), seeds)
    def test_pure_identity(self, n, seed):
        _, _, Y, Z = symplectic_pair(n, seed)
        g = random_gaussian(n, seed + 1)
        det_k = commutator_matrix(Y, Z).abs_det
        assert np.isclose(np.linalg.det(gamma_yz(g, Y, Z).Gamma), det_k**2 / 4**n, rtol=1e-8)

    @given(st.integers(1, 3), seeds)
    def test_general_identity(self, n, seed):
        _, _, Y, Z = symplectic_pair(n, seed)
        g = random_gaussian(n, seed + 2, thermal_max=2.0)
        det_k = commutator_matrix(Y, Z).abs_det
        assert np.isclose(np.linalg.det(gamma_yz(g, Y, Z).Gamma), np.linalg.det(g.cov) * det_k**2, rtol=1e-8)

    @given(st.integers(1, 3), seeds)
    def test_generalised_hadamard(self, n, seed):
        _, _, Y, Z = symplectic_pair(n, seed)
        blocks = gamma_yz(random_gaussian(n, seed, thermal_max=1.0), Y, Z)
        assert np.linalg.det(blocks.Gamma_y) * np.linalg.det(blocks.Gamma_z) >= np.linalg.det(blocks.Gamma) * (1 - 1e-9)

    def test_rejects_non_commuting(self):
        with pytest.raises(ValueError, match="commuting"):
            gamma_yz(vacuum(1), stack(x_quadratures(), p_quadratures()), stack(x_quadratures(), p_quadratures()))

    def test_fock_state_supported(self):
        blocks = gamma_yz(fock_number(1, 8), x_quadratures(), p_quadratures())
        assert np.allclose(blocks.Gamma, np.diag([1.5, 1.5]))


class TestObservables:
    def test_x_p_vacuum(self):
        G, C = observables_moments(vacuum(1), stack(x_quadratures(), p_quadratures()))
        assert np.allclose(G, np.eye(2) / 2)
        assert np.allclose(C, [[0, 0.5], [-0.5, 0]])
        assert np.isclose(np.linalg.det(C), 0.25)

    @pytest.mark.parametrize("m", [3, 5, 7])
    def test_odd_m_det_zero(self, m):
        R = QuadratureSet(np.random.default_rng(m).normal(size=(m, 2)))
        _, C = observables_moments(vacuum(1), R)
        assert np.array_equal(C, -C.T)
        assert abs(np.linalg.det(C)) < 1e-12

    @given(st.integers(1, 3), seeds)
    def test_stacked_det_c(self, n, seed):
        _, _, Y, Z = symplectic_pair(n, seed)
        _, C = observables_moments(vacuum(n), stack(Y, Z))
        assert np.isclose(np.linalg.det(C), commutator_matrix(Y, Z).abs_det ** 2 / 4**n, rtol=1e-8)
