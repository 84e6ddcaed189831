"""Trace invariants of matrix words.

A fingerprint is the map from every canonical word up to a length cap to
the trace of the corresponding matrix product.  Two sets with matching
fingerprints (and the right closedness) are simultaneously similar; the
first mismatching word in enumeration order is a finite witness that
they are not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidShape
from .matrices import MatrixSet, Star, STAR_SUFFIX, apply_star
from .words import (DEFAULT_NECKLACE_CAP, Word, enumerate_word_arrays,
                    validate_word)

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10

# cap on floats per batched product so chunks stay cache-friendly
_BATCH_BUDGET = 4_000_000


def word_trace(letters, w) -> complex:
    """Trace of the product letters[w[0]] @ letters[w[1]] @ ...

    The last product is folded into the trace directly via
    tr(XY) = sum(X * Y^t) entrywise.
    """
    mats = [np.asarray(m) for m in (letters.matrices if isinstance(letters, MatrixSet) else letters)]
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise InvalidShape("word letters must be square and equally sized")
    w = validate_word(w, len(mats))
    if len(w) == 1:
        return complex(np.trace(mats[w[0]]))
    prod = mats[w[0]]
    for idx in w[1:-1]:
        prod = prod @ mats[idx]
    last = mats[w[-1]]
    return complex(np.sum(prod * last.T))


@dataclass(frozen=True)
class Fingerprint:
    """Canonical word -> trace map for one alphabet, plus per-word scale
    bounds (products of member Frobenius norms) for relative comparison."""

    labels: tuple[str, ...]
    max_len: int
    entries: dict[Word, complex]
    scales: dict[Word, float]

    @property
    def alphabet_size(self) -> int:
        return len(self.labels)

    def word_label(self, w: Word) -> str:
        return "·".join(self.labels[i] for i in w)


@dataclass(frozen=True)
class Mismatch:
    """First distinguishing word found, with the two traces."""

    word: Word
    trace_a: complex
    trace_b: complex
    label: str


def _batched_traces(stack: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Traces of all words in one (count, length) index array over the
    (s, n, n) letter stack, chunked to bound memory."""
    count, length = words.shape
    n = stack.shape[1]
    if count == 0:
        return np.empty(0, dtype=stack.dtype)
    chunk = max(1, _BATCH_BUDGET // (n * n * max(1, length)))
    out = np.empty(count, dtype=np.complex128)
    for start in range(0, count, chunk):
        block = words[start:start + chunk]
        prod = stack[block[:, 0]]
        for j in range(1, length - 1):
            prod = prod @ stack[block[:, j]]
        if length == 1:
            tr = np.einsum("bii->b", prod)
        else:
            last = stack[block[:, -1]]
            tr = np.einsum("bij,bji->b", prod, last)
        out[start:start + chunk] = tr
    return out


def make_fingerprint(s: MatrixSet, max_len: int,
                     cap: int = DEFAULT_NECKLACE_CAP) -> Fingerprint:
    """Fingerprint of a square set: traces of every canonical word of
    length 1..max_len, in (length, lexicographic) order."""
    s.require_square("fingerprinting")
    if max_len < 1:
        raise InvalidInput("max_len must be >= 1")
    stack = s.stacked()
    bounds = np.array([max(np.linalg.norm(m, "fro"), 1e-300) for m in s.matrices])
    entries: dict[Word, complex] = {}
    scales: dict[Word, float] = {}
    for arr in enumerate_word_arrays(s.size, max_len, cap=cap):
        traces = _batched_traces(stack, arr)
        word_scales = np.prod(bounds[arr], axis=1)
        for row, tr, sc in zip(arr, traces, word_scales):
            w = tuple(int(x) for x in row)
            entries[w] = complex(tr)
            scales[w] = float(sc)
    return Fingerprint(s.labels, max_len, entries, scales)


def compare_fingerprints(fa: Fingerprint, fb: Fingerprint,
                         rtol: float = DEFAULT_RTOL,
                         atol: float = DEFAULT_ATOL) -> Mismatch | None:
    """None when every word's traces agree within atol + rtol*scale;
    otherwise the first mismatching word in enumeration order."""
    if fa.alphabet_size != fb.alphabet_size:
        raise InvalidInput("fingerprints have different alphabet sizes")
    if fa.max_len != fb.max_len:
        raise InvalidInput("fingerprints have different word-length caps")
    for w, ta in fa.entries.items():
        tb = fb.entries[w]
        scale = max(fa.scales[w], fb.scales[w])
        if abs(ta - tb) > atol + rtol * scale:
            return Mismatch(w, ta, tb, fa.word_label(w))
    return None


def gram_alphabet(s: MatrixSet, star: Star) -> MatrixSet:
    """The k^2 square matrices A_i star(A_j) over all ordered pairs.

    Using all ordered pairs (not only i <= j) makes the result exactly
    star-closed: star(A_i star(A_j)) = A_j star(A_i) is itself a member.
    """
    suffix = STAR_SUFFIX[star]
    members = []
    labels = []
    for mi, li in zip(s.matrices, s.labels):
        for mj, lj in zip(s.matrices, s.labels):
            members.append(mi @ apply_star(mj, star))
            labels.append(f"{li}·{lj}{suffix}")
    return s.with_members(members, labels)
