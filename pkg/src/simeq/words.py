"""Words over a finite alphabet, canonical under cyclic rotation.

Traces of matrix words are cyclic invariants (tr(xy) = tr(yx)), so one
representative per rotation class suffices.  Words are plain tuples of
letter indices; enumeration order is (length, lexicographic) and is part
of the deterministic external contract.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidInput, ResourceLimit

Word = tuple[int, ...]

DEFAULT_NECKLACE_CAP = 10_000_000


def validate_word(w: Sequence[int], alphabet_size: int) -> Word:
    w = tuple(int(x) for x in w)
    if len(w) < 1:
        raise InvalidInput("a word must have at least one letter")
    if any(x < 0 or x >= alphabet_size for x in w):
        raise InvalidInput(f"letter index out of range for alphabet of "
                           f"size {alphabet_size}: {w}")
    return w


def least_rotation(w: Sequence[int]) -> int:
    """Index of the lexicographically least cyclic rotation (Booth's
    algorithm, linear time)."""
    s = tuple(w) + tuple(w)
    n = len(s)
    f = [-1] * n
    k = 0
    for j in range(1, n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_rotation(w: Sequence[int]) -> Word:
    """Lexicographically least cyclic rotation of w.  Idempotent."""
    w = tuple(w)
    if not w:
        raise InvalidInput("a word must have at least one letter")
    k = least_rotation(w)
    return w[k:] + w[:k]


def _euler_phi(d: int) -> int:
    return sum(1 for i in range(1, d + 1) if math.gcd(i, d) == 1)


def necklace_count(alphabet_size: int, length: int) -> int:
    """Number of cyclic-rotation classes of words of exactly this length:
    (1/L) * sum over d | L of phi(d) * s^(L/d)."""
    total = sum(_euler_phi(d) * alphabet_size ** (length // d)
                for d in range(1, length + 1) if length % d == 0)
    return total // length


def _canonical_words_of_length(s: int, length: int,
                               chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    """Yield (n, length) arrays of canonical words of one length, in
    lexicographic order.  Works on base-s digit expansions in chunks so
    nothing quadratic in s**length is ever materialized at once."""
    total = s ** length
    powers = (s ** np.arange(length - 1, -1, -1)).astype(np.int64)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % s
        keys = digits @ powers
        mask = np.ones(len(idx), dtype=bool)
        for r in range(1, length):
            rotated = np.concatenate([digits[:, r:], digits[:, :r]], axis=1)
            mask &= keys <= rotated @ powers
        if np.any(mask):
            yield digits[mask].astype(np.int64)


def enumerate_word_arrays(alphabet_size: int, max_len: int,
                          cap: int = DEFAULT_NECKLACE_CAP) -> list[np.ndarray]:
    """Canonical representatives grouped by length: a list of (n_L, L)
    integer arrays for L = 1..max_len, each in lexicographic order."""
    if alphabet_size < 1 or max_len < 1:
        raise InvalidInput("alphabet_size and max_len must be >= 1")
    total = sum(necklace_count(alphabet_size, L) for L in range(1, max_len + 1))
    if total > cap:
        raise ResourceLimit(f"enumeration would produce {total} words, "
                            f"over the cap of {cap}")
    out = []
    for length in range(1, max_len + 1):
        blocks = list(_canonical_words_of_length(alphabet_size, length))
        arr = np.concatenate(blocks) if blocks else np.empty((0, length), np.int64)
        out.append(arr)
    return out


def enumerate_words(alphabet_size: int, max_len: int,
                    cap: int = DEFAULT_NECKLACE_CAP) -> list[Word]:
    """All canonical words of length 1..max_len in (length, lex) order."""
    words: list[Word] = []
    for arr in enumerate_word_arrays(alphabet_size, max_len, cap=cap):
        words.extend(tuple(int(x) for x in row) for row in arr)
    return words


def word_length_bound(n: int) -> int:
    """Length of trace words sufficient to decide similarity of a pair of
    n x n matrices: ceil(n*sqrt(2n^2/(4(n-1)) + 1/4) + (n-4)/2).

    Evaluated exactly: the float estimate is corrected by the equivalent
    integer inequality (2m - n + 4)^2 (n-1) >= n^2 (2n^2 + n - 1).
    """
    if n < 1:
        raise InvalidInput("matrix size must be >= 1")
    if n == 1:
        return 1
    radicand = (2.0 * n * n) / (4.0 * (n - 1)) + 0.25
    approx = n * math.sqrt(radicand) + (n - 4) / 2.0
    rhs = n * n * (2 * n * n + n - 1)

    def holds(m: int) -> bool:
        u = 2 * m - n + 4
        return u >= 0 and u * u * (n - 1) >= rhs

    m = max(1, math.floor(approx) - 1)
    while not holds(m):
        m += 1
    return m
