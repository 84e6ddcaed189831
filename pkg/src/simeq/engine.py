"""Decision engine for the six similarity/equivalence kinds.

A decision is three-valued.  Equivalent carries a certificate that is
re-verified from scratch, so YES is sound regardless of the word-length
cap; Distinguished carries a word whose traces demonstrably differ, so
NO is sound by the trace criterion; Inconclusive covers an exhausted
retry budget or a cap below the sufficiency bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import closure
from .errors import (BranchCut, ConstructionFailed, Degenerate, GramMismatch,
                     InvalidInput, NoIntertwiner, Singular, SingularFamily)
from .fingerprint import (DEFAULT_ATOL, DEFAULT_RTOL,
                          compare_fingerprints, gram_alphabet,
                          make_fingerprint)
from .intertwiner import IsometryKind, construct_isometry
from .linalg import fro
from .matrices import MatrixSet, Star, apply_star, check_compatible
from .rectangular import Certificate, equivalence_certificate
from .words import Word, word_length_bound

SIMILARITY_KINDS = ("unitary-similar", "orthogonal-similar",
                    "complex-orthogonal-similar")
EQUIVALENCE_KINDS = ("unitary-equiv", "orthogonal-equiv",
                     "complex-orthogonal-equiv")
KINDS = SIMILARITY_KINDS + EQUIVALENCE_KINDS

DEFAULT_MAX_WORD_LEN = 6
CERT_TOL = 1e-8

_RETRYABLE = (BranchCut, ConstructionFailed, Degenerate, NoIntertwiner,
              Singular, SingularFamily, GramMismatch)


def kind_is_equivalence(kind: str) -> bool:
    return kind in EQUIVALENCE_KINDS


def kind_requires_real(kind: str) -> bool:
    return kind in ("orthogonal-similar", "orthogonal-equiv")


def kind_star(kind: str) -> Star:
    """Closure star for similarity kinds, Gram star for equivalence kinds."""
    if kind in ("unitary-similar", "unitary-equiv", "orthogonal-equiv"):
        return "conjugate-transpose"
    return "transpose"


def kind_isometry(kind: str) -> IsometryKind:
    if kind.startswith("unitary"):
        return "unitary"
    if kind.startswith("complex-orthogonal"):
        return "complex-orthogonal"
    return "real-orthogonal"


def isometry_star(kind: str) -> Star:
    """Star under which the certificate factors must be isometries."""
    return "conjugate-transpose" if kind.startswith("unitary") else "transpose"


@dataclass(frozen=True)
class EngineConfig:
    max_word_len: int | None = None
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    trials: int = 8
    seed: int = 0
    augment_closure: bool = True

    def __post_init__(self):
        if self.rtol < 0 or self.atol < 0:
            raise InvalidInput("rtol and atol must be nonnegative")
        if self.trials < 1:
            raise InvalidInput("trials must be >= 1")
        if self.max_word_len is not None and self.max_word_len < 1:
            raise InvalidInput("max_word_len must be >= 1")


@dataclass(frozen=True)
class Decision:
    verdict: str  # "equivalent" | "distinguished" | "inconclusive"
    kind: str
    word_cap_used: int
    bound: int
    config: EngineConfig
    certificate: Certificate | None = None
    word: Word | None = None
    word_label: str | None = None
    trace_left: complex | None = None
    trace_right: complex | None = None
    reason: str | None = None


@dataclass(frozen=True)
class VerifyReport:
    isometry_defect_left: float
    isometry_defect_right: float | None
    intertwining_residual: float
    threshold: float
    residual_threshold: float
    passed: bool


def _validate(kind: str, a: MatrixSet, b: MatrixSet):
    if kind not in KINDS:
        raise InvalidInput(f"unknown kind {kind!r}; expected one of {KINDS}")
    check_compatible(a, b)
    if kind_requires_real(kind) and a.field != "real":
        raise InvalidInput(f"{kind} requires real-field inputs")
    if not kind_is_equivalence(kind):
        a.require_square(kind)


def _sets_identical(a: MatrixSet, b: MatrixSet) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a.matrices, b.matrices))


def _set_scale(a: MatrixSet, b: MatrixSet) -> float:
    return max(1.0, max(fro(m) for m in a.matrices),
               max(fro(m) for m in b.matrices))


def similarity_residual(u: np.ndarray, a: MatrixSet, b: MatrixSet) -> float:
    return max(fro(x @ u - u @ y) for x, y in zip(a.matrices, b.matrices))


def equivalence_residual(u: np.ndarray, v: np.ndarray,
                         a: MatrixSet, b: MatrixSet) -> float:
    return max(fro(u @ x - y @ v) for x, y in zip(a.matrices, b.matrices))


def _identity_certificate(kind: str, a: MatrixSet) -> Certificate:
    dtype = np.float64 if a.field == "real" else np.complex128
    left = np.eye(a.rows, dtype=dtype)
    right = np.eye(a.cols, dtype=dtype) if kind_is_equivalence(kind) else None
    return Certificate(kind, left, right, 0.0)


def decide(kind: str, a: MatrixSet, b: MatrixSet,
           config: EngineConfig | None = None) -> Decision:
    """Full decision procedure; deterministic given (inputs, config)."""
    config = config or EngineConfig()
    _validate(kind, a, b)

    square_size = a.rows  # Gram matrices are rows x rows for equivalence kinds
    bound = word_length_bound(square_size)
    cap = (config.max_word_len if config.max_word_len is not None
           else min(bound, DEFAULT_MAX_WORD_LEN))

    def out(**kw) -> Decision:
        return Decision(kind=kind, word_cap_used=cap, bound=bound,
                        config=config, **kw)

    star = kind_star(kind)
    strict = not kind_is_equivalence(kind) and not config.augment_closure
    if strict and not (closure.is_star_closed(a, star)
                       and closure.is_star_closed(b, star)):
        raise InvalidInput("strict closure mode: input sets are not "
                           "star-closed; rerun with closure augmentation "
                           "enabled")

    if _sets_identical(a, b):
        return out(verdict="equivalent", certificate=_identity_certificate(kind, a))

    if kind_is_equivalence(kind):
        work_a = gram_alphabet(a, star)
        work_b = gram_alphabet(b, star)
    elif strict:
        work_a, work_b = a, b
    else:
        work_a, work_b = closure.paired_star_augment(a, b, star)

    fa = make_fingerprint(work_a, cap)
    fb = make_fingerprint(work_b, cap)
    mismatch = compare_fingerprints(fa, fb, rtol=config.rtol, atol=config.atol)
    if mismatch is not None:
        return out(verdict="distinguished", word=mismatch.word,
                   word_label=mismatch.label, trace_left=mismatch.trace_a,
                   trace_right=mismatch.trace_b)

    try:
        if kind_is_equivalence(kind):
            cert = equivalence_certificate(a, b, kind, seed=config.seed,
                                           trials=config.trials,
                                           gram_a=work_a, gram_b=work_b)
        else:
            u = construct_isometry(work_a, work_b, kind_isometry(kind),
                                   seed=config.seed, trials=config.trials)
            cert = Certificate(kind, u, None, similarity_residual(u, a, b))
    except _RETRYABLE as err:
        return out(verdict="inconclusive", reason=_inconclusive_reason(
            err, cap, bound, config.trials))

    report = verify_certificate(kind, cert, a, b)
    if not report.passed:
        return out(verdict="inconclusive", reason=(
            "constructed certificate failed re-verification: "
            f"isometry defect {report.isometry_defect_left:.3e}, "
            f"residual {report.intertwining_residual:.3e}"))
    return out(verdict="equivalent", certificate=cert)


def _inconclusive_reason(err: Exception, cap: int, bound: int,
                         trials: int) -> str:
    parts = [f"construction failed after up to {trials} attempts: "
             f"{err.__class__.__name__}: {err}"]
    if cap < bound:
        parts.append(f"word traces were only compared up to length {cap}, "
                     f"below the sufficiency bound {bound}, so the trace "
                     "match is not conclusive")
    else:
        parts.append(f"word traces matched up to length {cap} (pair bound "
                     f"{bound}; the bound is stated for a pair of matrices "
                     "and is used here as a default cap, not a completeness "
                     "guarantee)")
    return "; ".join(parts)


def verify_certificate(kind: str, cert: Certificate, a: MatrixSet,
                       b: MatrixSet, threshold: float = CERT_TOL) -> VerifyReport:
    """Recompute every certificate defect from scratch.

    Passes iff both isometry defects are <= threshold and the
    intertwining residual is <= threshold * max(1, member norms).
    """
    if kind not in KINDS:
        raise InvalidInput(f"unknown kind {kind!r}")
    check_compatible(a, b)
    star = isometry_star(kind)
    u = np.asarray(cert.left)
    if u.shape != (a.rows, a.rows):
        raise InvalidInput(f"left factor has shape {u.shape}, "
                           f"expected {(a.rows, a.rows)}")
    defect_left = fro(u @ apply_star(u, star) - np.eye(a.rows))
    if kind_is_equivalence(kind):
        if cert.right is None:
            raise InvalidInput("equivalence certificate is missing the right factor")
        v = np.asarray(cert.right)
        if v.shape != (a.cols, a.cols):
            raise InvalidInput(f"right factor has shape {v.shape}, "
                               f"expected {(a.cols, a.cols)}")
        defect_right = fro(v @ apply_star(v, star) - np.eye(a.cols))
        resid = equivalence_residual(u, v, a, b)
    else:
        a.require_square(kind)
        defect_right = None
        resid = similarity_residual(u, a, b)
    scale = _set_scale(a, b)
    passed = (defect_left <= threshold
              and (defect_right is None or defect_right <= threshold)
              and resid <= threshold * scale)
    return VerifyReport(defect_left, defect_right, resid, threshold,
                        threshold * scale, passed)


def _haar_unitary(rng: np.random.Generator, n: int, real: bool) -> np.ndarray:
    g = rng.standard_normal((n, n))
    if not real:
        g = (g + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _complex_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    k = (g - g.T) / (2.0 * max(1.0, np.sqrt(n)))  # keep exp(K) well-conditioned
    return scipy.linalg.expm(k)


def _draw_isometry(rng: np.random.Generator, kind: str, n: int) -> np.ndarray:
    iso = kind_isometry(kind)
    if iso == "unitary":
        return _haar_unitary(rng, n, real=False)
    if iso == "real-orthogonal":
        return _haar_unitary(rng, n, real=True)
    return _complex_orthogonal(rng, n)


def generate_instance(kind: str, m: int, n: int, k: int, seed: int,
                      perturb_eps: float = 0.0):
    """Random test instance: Gaussian A_i, B_i their transform under a
    freshly drawn isometry pair (or single isometry for similarity
    kinds), plus optional Gaussian noise on B_1.

    Returns (A, B, truth) with truth "equivalent" when perturb_eps is
    zero and "perturbed-unknown" otherwise.  Bit-deterministic per seed.
    """
    if kind not in KINDS:
        raise InvalidInput(f"unknown kind {kind!r}")
    if m < 1 or n < 1 or k < 1:
        raise InvalidInput("dimensions and cardinality must be >= 1")
    if not kind_is_equivalence(kind) and m != n:
        raise InvalidInput(f"{kind} needs square matrices, got {m}x{n}")
    if perturb_eps < 0:
        raise InvalidInput("perturb_eps must be >= 0")
    real = kind_requires_real(kind)
    rng = np.random.default_rng(seed)

    def gauss(rows, cols):
        g = rng.standard_normal((rows, cols))
        if not real:
            g = (g + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)
        return g

    mats_a = [gauss(m, n) for _ in range(k)]
    iso = kind_isometry(kind)
    star_t = (lambda x: x.conj().T) if iso == "unitary" else (lambda x: x.T)
    if kind_is_equivalence(kind):
        u0 = _draw_isometry(rng, kind, m)
        v0 = _draw_isometry(rng, kind, n)
        mats_b = [u0 @ x @ star_t(v0) for x in mats_a]
    else:
        u0 = _draw_isometry(rng, kind, n)
        mats_b = [star_t(u0) @ x @ u0 for x in mats_a]

    truth = "equivalent"
    if perturb_eps > 0:
        mats_b[0] = mats_b[0] + perturb_eps * gauss(m, n)
        truth = "perturbed-unknown"

    field = "real" if real else "complex"
    set_a = MatrixSet.from_arrays(mats_a, [f"A{i + 1}" for i in range(k)], field)
    set_b = MatrixSet.from_arrays(mats_b, [f"B{i + 1}" for i in range(k)], field)
    return set_a, set_b, truth
