import numpy as np
import pytest

from simeq.closure import is_star_closed
from simeq.errors import InvalidInput, InvalidShape
from simeq.fingerprint import (compare_fingerprints, gram_alphabet,
                               make_fingerprint, word_trace)
from simeq.matrices import MatrixSet
from simeq.words import canonical_rotation

UPPER = np.array([[1.0, 1.0], [0.0, 1.0]])


def mset(*mats, field=None):
    return MatrixSet.from_arrays(list(mats), field=field)


def naive_word_trace(mats, w):
    """Oracle: plain left-to-right product, then trace."""
    prod = np.eye(mats[0].shape[0], dtype=complex)
    for i in w:
        prod = prod @ mats[i]
    return complex(np.trace(prod))


class TestWordTrace:
    def test_identity_power(self):
        assert word_trace([np.eye(3)], (0, 0)) == pytest.approx(3.0)

    def test_cyclic_invariance_of_pair(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        y = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        scale = np.linalg.norm(x, "fro") * np.linalg.norm(y, "fro")
        assert abs(word_trace([x, y], (0, 1)) - word_trace([x, y], (1, 0))) \
            <= 1e-12 * scale

    def test_gram_word_hand_value(self):
        # A A* = [[2,1],[1,1]], trace 3
        assert word_trace([UPPER, UPPER.conj().T], (0, 1)) == pytest.approx(3.0)

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(1)
        mats = [rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
                for _ in range(3)]
        for _ in range(200):
            length = int(rng.integers(1, 7))
            w = tuple(int(x) for x in rng.integers(0, 3, size=length))
            scale = np.prod([np.linalg.norm(mats[i], "fro") for i in w])
            assert abs(word_trace(mats, w) - naive_word_trace(mats, w)) \
                <= 1e-12 * scale

    def test_shape_mismatch(self):
        with pytest.raises(InvalidShape):
            word_trace([np.eye(2), np.eye(3)], (0, 1))


class TestMakeFingerprint:
    def test_identity_entries(self):
        fp = make_fingerprint(mset(np.eye(2)), 3)
        assert fp.entries == {(0,): 2.0, (0, 0): 2.0, (0, 0, 0): 2.0}

    def test_unipotent_powers_all_trace_two(self):
        fp = make_fingerprint(mset(UPPER), 4)
        assert all(t == pytest.approx(2.0) for t in fp.entries.values())

    def test_diagonal_power_sums(self):
        fp = make_fingerprint(mset(np.diag([1.0, 2.0])), 2)
        assert fp.entries[(0,)] == pytest.approx(3.0)
        assert fp.entries[(0, 0)] == pytest.approx(5.0)

    def test_entries_cover_canonical_words_in_order(self):
        rng = np.random.default_rng(2)
        s = mset(*[rng.standard_normal((3, 3)) for _ in range(2)])
        fp = make_fingerprint(s, 4)
        words = list(fp.entries)
        assert words == sorted(words, key=lambda w: (len(w), w))
        assert all(canonical_rotation(w) == w for w in words)

    def test_batched_matches_naive(self):
        rng = np.random.default_rng(3)
        mats = [rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
                for _ in range(2)]
        fp = make_fingerprint(mset(*mats), 5)
        for w, t in fp.entries.items():
            assert abs(t - naive_word_trace(mats, w)) <= 1e-10 * max(1.0, abs(t))


class TestCompareFingerprints:
    def test_equal_sets_match(self):
        rng = np.random.default_rng(4)
        s = mset(*[rng.standard_normal((3, 3)) for _ in range(2)])
        assert compare_fingerprints(make_fingerprint(s, 4),
                                    make_fingerprint(s, 4)) is None

    def test_unipotent_vs_identity_distinguished_at_gram_word(self):
        fa = make_fingerprint(mset(UPPER, UPPER.conj().T), 4)
        fb = make_fingerprint(mset(np.eye(2), np.eye(2)), 4)
        mm = compare_fingerprints(fa, fb)
        assert mm is not None
        assert mm.word == (0, 1)
        assert mm.trace_a == pytest.approx(3.0)
        assert mm.trace_b == pytest.approx(2.0)

    def test_small_perturbation_detected_early(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((3, 3))
        b = a.copy()
        b[0, 0] += 1e-3
        mm = compare_fingerprints(make_fingerprint(mset(a), 3),
                                  make_fingerprint(mset(b), 3))
        assert mm is not None
        assert len(mm.word) <= 2

    def test_symmetry(self):
        fa = make_fingerprint(mset(UPPER, UPPER.conj().T), 3)
        fb = make_fingerprint(mset(np.eye(2), np.eye(2)), 3)
        mab = compare_fingerprints(fa, fb)
        mba = compare_fingerprints(fb, fa)
        assert mab.word == mba.word
        assert mab.trace_a == mba.trace_b and mab.trace_b == mba.trace_a

    def test_unitary_conjugation_invariance(self):
        rng = np.random.default_rng(6)
        mats = [rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
                for _ in range(2)]
        q, r = np.linalg.qr(rng.standard_normal((5, 5))
                            + 1j * rng.standard_normal((5, 5)))
        q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        conj = [q.conj().T @ m @ q for m in mats]
        mm = compare_fingerprints(make_fingerprint(mset(*mats), 4),
                                  make_fingerprint(mset(*conj), 4),
                                  rtol=1e-9)
        assert mm is None

    def test_cap_mismatch_rejected(self):
        s = mset(np.eye(2))
        with pytest.raises(InvalidInput):
            compare_fingerprints(make_fingerprint(s, 2), make_fingerprint(s, 3))


class TestGramAlphabet:
    def test_single_projector(self):
        g = gram_alphabet(mset(np.array([[1.0, 0.0], [0.0, 0.0]])),
                          "conjugate-transpose")
        assert g.size == 1
        assert np.allclose(g.matrices[0], np.diag([1.0, 0.0]))

    def test_cardinality_and_shape(self):
        rng = np.random.default_rng(7)
        s = mset(*[rng.standard_normal((4, 3)) for _ in range(2)])
        g = gram_alphabet(s, "conjugate-transpose")
        assert g.size == 4
        assert g.rows == g.cols == 4

    def test_exactly_star_closed(self):
        rng = np.random.default_rng(8)
        s = mset(*[rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
                   for _ in range(3)])
        for star in ("conjugate-transpose", "transpose"):
            g = gram_alphabet(s, star)
            assert is_star_closed(g, star, tol=1e-13)

    def test_transpose_star_labels(self):
        rng = np.random.default_rng(9)
        s = mset(*[rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                   for _ in range(2)])
        g = gram_alphabet(s, "transpose")
        assert g.labels[0] == "A1·A1^t"
        assert np.allclose(g.matrices[1], s.matrices[0] @ s.matrices[1].T)
