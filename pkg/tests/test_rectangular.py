import numpy as np
import pytest

from simeq.errors import Degenerate, GramMismatch, NotRankOneEqual
from simeq.linalg import fro
from simeq.matrices import MatrixSet
from simeq.rectangular import (equivalence_certificate, phase_recover,
                               right_factor_recover)


def mset(*mats, field=None):
    return MatrixSet.from_arrays(list(mats), field=field)


def haar(rng, n, complex_=True):
    g = rng.standard_normal((n, n))
    if complex_:
        g = g + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def complex_orthogonal(rng, n):
    import scipy.linalg
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scipy.linalg.expm((g - g.T) / (2.0 * max(1.0, np.sqrt(n))))


class TestPhaseRecover:
    def test_equal_vectors(self):
        a = np.array([1.0, 2.0, -1.0])
        assert phase_recover(a, a) == 1.0

    def test_real_negation(self):
        a = np.array([1.0, -3.0])
        assert phase_recover(-a, a) == -1.0

    def test_complex_hand_example(self):
        # a a* = b b* = [[1,-i],[i,1]] and (-i) * (i,-1) = (1, i)
        a = np.array([1.0, 1.0j])
        b = np.array([1.0j, -1.0])
        theta = phase_recover(a, b)
        assert abs(theta - (-1.0j)) <= 1e-12

    def test_scaling_property(self):
        rng = np.random.default_rng(0)
        b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        for phi in rng.uniform(0, 2 * np.pi, size=8):
            theta = np.exp(1j * phi)
            got = phase_recover(theta * b, b)
            assert abs(got - theta) <= 1e-10

    def test_outer_product_mismatch_rejected(self):
        with pytest.raises(NotRankOneEqual):
            phase_recover(np.array([1.0, 0.0]), np.array([1.0, 1.0]))

    def test_zero_b_nonzero_a_rejected(self):
        with pytest.raises(NotRankOneEqual):
            phase_recover(np.array([1.0, 0.0]), np.zeros(2))


class TestRightFactorRecover:
    def test_equal_matrices(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((3, 4))
        v = right_factor_recover(a, a, "conjugate-transpose")
        assert fro(a - a @ v) <= 1e-8 * max(1.0, fro(a))
        assert fro(v @ v.conj().T - np.eye(4)) <= 1e-8

    def test_rank_one_permutation_example(self):
        a = np.array([[1.0, 0.0], [0.0, 0.0]])
        b = np.array([[0.0, 1.0], [0.0, 0.0]])
        v = right_factor_recover(a, b, "conjugate-transpose")
        assert np.allclose(v, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-10)

    @pytest.mark.parametrize("seed", range(8))
    def test_random_round_trip_including_rank_deficient(self, seed):
        rng = np.random.default_rng(seed)
        if seed % 2:
            b = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        else:
            # rank 1 < min(4, 3)
            b = np.outer(rng.standard_normal(4) + 1j * rng.standard_normal(4),
                         rng.standard_normal(3) + 1j * rng.standard_normal(3))
        v0 = haar(rng, 3)
        a = b @ v0
        v = right_factor_recover(a, b, "conjugate-transpose")
        assert fro(a - b @ v) <= 1e-8 * max(1.0, fro(a))
        assert fro(v @ v.conj().T - np.eye(3)) <= 1e-8

    def test_gram_mismatch_rejected(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((3, 3))
        b = a + 0.1
        with pytest.raises(GramMismatch):
            right_factor_recover(a, b, "conjugate-transpose")

    @pytest.mark.parametrize("seed", range(6))
    def test_transpose_star_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        m, n = (2, 5) if seed % 2 else (5, 3)
        b = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        v0 = complex_orthogonal(rng, n)
        a = b @ v0
        v = right_factor_recover(a, b, "transpose")
        assert fro(a - b @ v) <= 1e-8 * max(1.0, fro(a))
        assert fro(v @ v.T - np.eye(n)) <= 1e-8

    def test_transpose_star_isotropic_rows_degenerate(self):
        # a a^t = 0 although a != 0: no recovery is possible from the Gram
        a = np.array([[1.0, 1.0j]])
        b = np.array([[1.0j, 1.0]])
        with pytest.raises(Degenerate):
            right_factor_recover(a, b, "transpose")

    def test_real_inputs_give_real_factor(self):
        rng = np.random.default_rng(3)
        b = rng.standard_normal((4, 3))
        v0 = haar(rng, 3, complex_=False)
        v = right_factor_recover(b @ v0, b, "conjugate-transpose")
        assert not np.iscomplexobj(v)


class TestEquivalenceCertificate:
    def test_identical_sets_identity_certificate(self):
        rng = np.random.default_rng(4)
        s = mset(*[rng.standard_normal((3, 2)) for _ in range(2)])
        cert = equivalence_certificate(s, s, "unitary-equiv")
        assert np.allclose(cert.left, np.eye(3))
        assert np.allclose(cert.right, np.eye(2))
        assert cert.residual <= 1e-12

    def test_k1_equal_singular_values(self):
        rng = np.random.default_rng(5)
        u, v = haar(rng, 4), haar(rng, 3)
        sing = np.zeros((4, 3))
        np.fill_diagonal(sing, [2.0, 1.0, 0.5])
        a1 = u @ sing @ v.conj().T
        u2, v2 = haar(rng, 4), haar(rng, 3)
        b1 = u2 @ sing @ v2.conj().T
        cert = equivalence_certificate(mset(a1), mset(b1), "unitary-equiv")
        assert cert.residual <= 1e-8 * fro(a1)

    def test_k1_unequal_singular_values_fails(self):
        # Gram letters diag(4,1) vs diag(4,0.25): only singular intertwiners
        from simeq.errors import SingularFamily
        a1 = np.diag([2.0, 1.0]).astype(complex)
        b1 = np.diag([2.0, 0.5]).astype(complex)
        with pytest.raises((SingularFamily, Degenerate, GramMismatch)):
            equivalence_certificate(mset(a1), mset(b1), "unitary-equiv")

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip_k3(self, seed):
        rng = np.random.default_rng(seed)
        mats = [rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
                for _ in range(3)]
        u0, v0 = haar(rng, 4), haar(rng, 3)
        bmats = [u0 @ m @ v0.conj().T for m in mats]
        a, b = mset(*mats), mset(*bmats)
        cert = equivalence_certificate(a, b, "unitary-equiv", seed=seed)
        assert max(fro(cert.left @ x - y @ cert.right)
                   for x, y in zip(a.matrices, b.matrices)) <= 1e-8
        assert fro(cert.left @ cert.left.conj().T - np.eye(4)) <= 1e-8
        assert fro(cert.right @ cert.right.conj().T - np.eye(3)) <= 1e-8

    def test_gram_trace_invariance_on_round_trip(self):
        # when a certificate exists the Gram fingerprints agree
        from simeq.fingerprint import (compare_fingerprints, gram_alphabet,
                                       make_fingerprint)
        rng = np.random.default_rng(6)
        mats = [rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
                for _ in range(2)]
        u0, v0 = haar(rng, 3), haar(rng, 2)
        bmats = [u0 @ m @ v0.conj().T for m in mats]
        fa = make_fingerprint(gram_alphabet(mset(*mats), "conjugate-transpose"), 3)
        fb = make_fingerprint(gram_alphabet(mset(*bmats), "conjugate-transpose"), 3)
        assert compare_fingerprints(fa, fb, rtol=1e-9) is None
