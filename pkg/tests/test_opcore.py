import numpy as np
import pytest

from mudilate.opcore import (Operator, OperatorTuple, OpcoreError,
                             NegativeEigenvalueError, NonCommutingError,
                             NotHermitianError, Subspace, herm_sqrt,
                             joint_eigs, kernel_basis, numerical_radius,
                             op_norm, restrict, spectral_radius)
from mudilate.spaces import hardy_shift, window, ModelSpace

from conftest import random_contraction


def power_iteration_norm(m, iters=2000):
    """Independent oracle for the largest singular value."""
    rng = np.random.default_rng(3)
    x = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    g = m.conj().T @ m
    for _ in range(iters):
        x = g @ x
        x = x / np.linalg.norm(x)
    return float(np.sqrt(np.real(x.conj() @ g @ x)))


class TestOperator:
    def test_dimensions_and_adjoint(self):
        a = Operator(np.arange(6).reshape(2, 3))
        assert (a.rows, a.cols) == (2, 3)
        assert (a.H.rows, a.H.cols) == (3, 2)
        np.testing.assert_allclose(a.H.mat, a.mat.conj().T)

    def test_rejects_bad_input(self):
        with pytest.raises(OpcoreError):
            Operator(np.zeros((0, 2)))
        with pytest.raises(OpcoreError):
            Operator([[np.nan, 0], [0, 1]])
        with pytest.raises(OpcoreError):
            Operator(np.zeros(3))

    def test_composition_shape_check(self):
        a = Operator(np.zeros((2, 3)))
        b = Operator(np.zeros((2, 2)))
        with pytest.raises(OpcoreError):
            a @ b

    def test_bandwidth_propagation(self):
        m = hardy_shift(1, 6)
        assert m.bandwidth == 1
        assert (m @ m).bandwidth == 2
        assert (m + m.H).bandwidth == 1
        assert (2.0 * m).bandwidth == 1


class TestOpNorm:
    def test_identity(self):
        assert op_norm(Operator.identity(3)) == pytest.approx(1.0)

    def test_rank_one(self):
        assert op_norm(Operator([[0, 0.5], [0, 0]])) == pytest.approx(0.5)

    def test_against_power_iteration(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        assert op_norm(Operator(a)) == pytest.approx(power_iteration_norm(a), abs=1e-10)

    def test_submultiplicative(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            assert op_norm(a @ b) <= op_norm(a) * op_norm(b) + 1e-9
            assert op_norm(Operator(a).H) == pytest.approx(op_norm(a))


class TestHermSqrt:
    def test_diagonal(self):
        s = herm_sqrt(Operator(np.diag([4.0, 1.0])))
        np.testing.assert_allclose(s.mat, np.diag([2.0, 1.0]), atol=1e-12)

    def test_projection_is_fixed(self):
        q = np.zeros((3, 3))
        q[:2, :2] = 0.5
        s = herm_sqrt(Operator(q))
        np.testing.assert_allclose(s.mat, q, atol=1e-12)

    def test_square_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            b = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            h = b @ b.conj().T
            s = herm_sqrt(Operator(h))
            np.testing.assert_allclose(s.mat @ s.mat, h, atol=1e-9)
            assert np.linalg.eigvalsh(s.mat).min() >= -1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            herm_sqrt(Operator([[0, 1], [0, 0]]))

    def test_rejects_indefinite_naming_eigenvalue(self):
        with pytest.raises(NegativeEigenvalueError) as exc:
            herm_sqrt(Operator(np.diag([1.0, -0.5])))
        assert "-0.5" in str(exc.value) or "-5" in str(exc.value)

    def test_clamps_tiny_negative(self):
        s = herm_sqrt(Operator(np.diag([1.0, -5e-11])))
        assert s.mat[1, 1] == 0.0


class TestSpectralRadius:
    def test_nilpotent(self):
        assert spectral_radius(Operator([[0, 1], [0, 0]])) == pytest.approx(0.0, abs=1e-12)

    def test_diagonal(self):
        assert spectral_radius(Operator(np.diag([0.3, 0.9]))) == pytest.approx(0.9)

    def test_rejects_rectangular(self):
        with pytest.raises(OpcoreError):
            spectral_radius(Operator(np.zeros((2, 3))))

    def test_exam1_summed_pairs_bounded(self, exam1):
        # oracle: characteristic-polynomial roots of the windowed matrix
        space, tup, _, w = exam1
        for i in range(3):
            s = tup.ops[i].mat + tup.ops[5 - i].mat
            sw = w.compress(s).mat
            r = spectral_radius(sw)
            assert r <= 2.0 + 1e-9
            roots = np.roots(np.poly(sw))
            assert r == pytest.approx(float(np.abs(roots).max()), abs=1e-7)


class TestNumericalRadius:
    def test_jordan_cell(self):
        assert numerical_radius(Operator([[0, 1], [0, 0]])) == pytest.approx(0.5, abs=1e-8)

    def test_identity(self):
        assert numerical_radius(Operator.identity(4)) == pytest.approx(1.0, abs=1e-10)

    def test_against_unit_vector_sampling(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            n = rng.integers(2, 6)
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            w = numerical_radius(Operator(a))
            best = 0.0
            for _ in range(4000):
                x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                x /= np.linalg.norm(x)
                best = max(best, abs(x.conj() @ a @ x))
            assert best - 1e-9 <= w <= op_norm(a) + 1e-12

    def test_diagonal_lower_bound(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            assert numerical_radius(Operator(a)) >= np.abs(np.diag(a)).max() - 1e-8

    def test_exam1_fundamental_combination(self, exam1):
        space, tup, expected_f, w = exam1
        fa = w.compress(expected_f["F1"]).mat
        fb = w.compress(expected_f["F6"]).mat
        assert numerical_radius(Operator(fa + 1j * fb)) <= 1.0 + 1e-8


class TestKernelBasis:
    def test_zero_matrix(self):
        k = kernel_basis(Operator.zeros(3))
        assert k.dim == 3

    def test_full_rank(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((5, 5)) + np.eye(5) * 4
        assert kernel_basis(Operator(a)).dim == 0

    def test_exam1_defect_kernel_is_third_summand(self, exam1):
        space, tup, _, w = exam1
        from mudilate.fundamentals import defect
        dd = defect(tup.ops[6])
        k = kernel_basis(dd.D.mat)
        # every kernel vector lives in the third summand
        sl = space.summand_slice(2)
        outside = k.basis.copy()
        outside[sl] = 0.0
        assert np.linalg.norm(outside, 2) <= 1e-12
        assert k.dim == space.summands[2][1] - 2

    def test_orthogonal_to_row_space(self):
        rng = np.random.default_rng(14)
        a = rng.standard_normal((4, 6))
        k = kernel_basis(Operator(a), tol=1e-10)
        for col in k.basis.T:
            assert np.linalg.norm(a @ col) <= 1e-10


class TestJointEigs:
    def test_diagonal_pair(self):
        got = joint_eigs([np.diag([1.0, 2.0]), np.diag([3.0, 4.0])])
        assert sorted((z1.real, z2.real) for z1, z2 in got) == [(1.0, 3.0), (2.0, 4.0)]

    def test_scalar_tuple_on_distinguished_boundary(self):
        # a 1x1 seven-tuple at a distinguished-boundary point is its own
        # joint spectrum
        from mudilate.domains import DomainPoint, on_K, point_pi
        x = point_pi(np.exp(0.4j), np.exp(-1.2j))
        assert on_K(x)[0]
        got = joint_eigs([np.array([[v]]) for v in x.coords])
        assert len(got) == 1
        np.testing.assert_allclose(got[0], x.coords, atol=1e-14)

    def test_commuting_upper_triangular(self):
        a = np.array([[1.0, 2.0, 0.0], [0, 3.0, 1.0], [0, 0, 5.0]])
        b = a @ a - 2 * a
        got = joint_eigs([a, b])
        roots_a = sorted(np.roots(np.poly(a)).real)
        got_a = sorted(z1.real for z1, _ in got)
        np.testing.assert_allclose(got_a, roots_a, atol=1e-7)
        for z1, z2 in got:
            assert z2 == pytest.approx(z1 * z1 - 2 * z1, abs=1e-7)

    def test_normal_tuples_from_shared_unitary(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            q, _ = np.linalg.qr(rng.standard_normal((n, n))
                                + 1j * rng.standard_normal((n, n)))
            d1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            d2 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            mats = [q @ np.diag(d1) @ q.conj().T, q @ np.diag(d2) @ q.conj().T]
            got = joint_eigs(mats)
            want = sorted(zip(d1, d2), key=lambda t: (t[0].real, t[0].imag))
            have = sorted(got, key=lambda t: (t[0].real, t[0].imag))
            for (a1, a2), (b1, b2) in zip(want, have):
                assert abs(a1 - b1) <= 1e-7 and abs(a2 - b2) <= 1e-7

    def test_rejects_non_commuting(self):
        m = hardy_shift(1, 5).mat
        with pytest.raises(NonCommutingError) as exc:
            joint_eigs([m, m.conj().T])
        assert exc.value.worst > 0.5


class TestTupleAndSubspace:
    def test_arity_enforced(self):
        ops = [Operator.identity(2)] * 6
        with pytest.raises(OpcoreError):
            OperatorTuple("gamma7", ops)

    def test_subspace_orthonormality(self):
        with pytest.raises(OpcoreError):
            Subspace(np.ones((3, 2)), 3)

    def test_restrict(self):
        s = Subspace(np.eye(4)[:, :2], 4)
        a = np.arange(16).reshape(4, 4).astype(complex)
        np.testing.assert_allclose(restrict(a, s).mat, a[:2, :2])


class TestInequalityChain:
    def test_r_omega_norm_sample(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(2, 7))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            r, w, nn = spectral_radius(a), numerical_radius(Operator(a)), op_norm(a)
            assert r <= w + 1e-8
            assert w <= nn + 1e-8
