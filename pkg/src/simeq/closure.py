"""Closedness tests and enforcement for matrix sets.

A set is star-closed when every member's adjoint (conjugate transpose or
plain transpose) lies in the linear span of the set; that hypothesis is
what makes the trace criterion an if-and-only-if.  Span membership is
decided by least squares over the vectorized matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput, InvalidShape
from .matrices import MatrixSet, Star, STAR_SUFFIX, apply_star

SPAN_RTOL = 1e-10


def _span_residual(target: np.ndarray, members: list[np.ndarray]) -> float:
    """Relative Frobenius residual of the best least-squares fit of
    target by a linear combination of members."""
    cols = np.stack([m.reshape(-1) for m in members], axis=1)
    rhs = target.reshape(-1)
    coeff, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
    resid = np.linalg.norm(rhs - cols @ coeff)
    return float(resid)


def is_star_closed(s: MatrixSet, star: Star, tol: float = SPAN_RTOL) -> bool:
    """True iff star(M) is in span{s} within tol, for every member M."""
    s.require_square("star-closedness")
    members = list(s.matrices)
    for m in members:
        t = apply_star(m, star)
        if _span_residual(t, members) > tol * max(1.0, np.linalg.norm(m, "fro")):
            return False
    return True


def _fresh_label(base: str, taken) -> str:
    label = base
    while label in taken:
        label += "'"
    return label


def star_augment(s: MatrixSet, star: Star, tol: float = SPAN_RTOL) -> MatrixSet:
    """Append star(M) for every member whose adjoint is outside the span.

    The result is star-closed: appended adjoints star back onto original
    members, and skipped ones were already in the span.  Idempotent up to
    span and member count.
    """
    s.require_square("star augmentation")
    members = list(s.matrices)
    labels = list(s.labels)
    suffix = STAR_SUFFIX[star]
    for m, lab in zip(s.matrices, s.labels):
        t = apply_star(m, star)
        if _span_residual(t, members) > tol * max(1.0, np.linalg.norm(m, "fro")):
            members.append(t)
            labels.append(_fresh_label(lab + suffix, labels))
    return s.with_members(members, labels)


def paired_star_augment(a: MatrixSet, b: MatrixSet, star: Star,
                        tol: float = SPAN_RTOL) -> tuple[MatrixSet, MatrixSet]:
    """Augment two corresponding sets in lock-step.

    The pair (star(A_i), star(B_i)) is appended whenever either side's
    adjoint falls outside its own span, so the letter correspondence
    stays aligned.  Any isometry intertwining A_i with B_i intertwines
    their adjoints too, so appending on both sides never changes the
    decision; misaligned per-side augmentation would.
    """
    a.require_square("star augmentation")
    b.require_square("star augmentation")
    mem_a, mem_b = list(a.matrices), list(b.matrices)
    lab_a, lab_b = list(a.labels), list(b.labels)
    suffix = STAR_SUFFIX[star]
    for i in range(a.size):
        ta = apply_star(a.matrices[i], star)
        tb = apply_star(b.matrices[i], star)
        ra = _span_residual(ta, list(a.matrices))
        rb = _span_residual(tb, list(b.matrices))
        need_a = ra > tol * max(1.0, np.linalg.norm(a.matrices[i], "fro"))
        need_b = rb > tol * max(1.0, np.linalg.norm(b.matrices[i], "fro"))
        if need_a or need_b:
            mem_a.append(ta)
            mem_b.append(tb)
            lab_a.append(_fresh_label(a.labels[i] + suffix, lab_a))
            lab_b.append(_fresh_label(b.labels[i] + suffix, lab_b))
    return a.with_members(mem_a, lab_a), b.with_members(mem_b, lab_b)


def is_jordan_closed(s: MatrixSet, tol: float = SPAN_RTOL) -> bool:
    """True iff XY + YX stays in span{s} for all member pairs.

    Members must be real symmetric (checked to tol); the anticommutator
    closure is the extra hypothesis in Albert-style similarity criteria
    for symmetric sets.
    """
    s.require_square("jordan-closedness")
    if s.field != "real":
        raise InvalidInput("jordan-closedness is defined for real sets")
    members = list(s.matrices)
    for m, lab in zip(s.matrices, s.labels):
        if np.linalg.norm(m - m.T, "fro") > tol * max(1.0, np.linalg.norm(m, "fro")):
            raise InvalidInput(f"member {lab} is not symmetric")
    for x in members:
        for y in members:
            anti = x @ y + y @ x
            scale = max(1.0, np.linalg.norm(anti, "fro"))
            if _span_residual(anti, members) > tol * scale:
                return False
    return True


def pencil_charpoly_probe(a: MatrixSet, b: MatrixSet, samples: int,
                          rng_seed: int, tol: float = 1e-8) -> bool:
    """Compare characteristic polynomials of random pencil members
    sum_i t_i A_i versus sum_i t_i B_i.

    Coefficients t are i.i.d. uniform on [-1, 1].  Agreement is necessary
    but not sufficient for simultaneous similarity: it cannot see the
    difference between, say, a unipotent Jordan block and the identity.
    """
    a.require_square("characteristic polynomial probe")
    b.require_square("characteristic polynomial probe")
    if a.size != b.size:
        raise InvalidInput("sets must have equal cardinality")
    if a.rows != b.rows:
        raise InvalidShape("sets must have equal dimensions")
    rng = np.random.default_rng(rng_seed)
    for _ in range(samples):
        t = rng.uniform(-1.0, 1.0, size=a.size)
        pa = sum(ti * m for ti, m in zip(t, a.matrices))
        pb = sum(ti * m for ti, m in zip(t, b.matrices))
        ca = np.poly(np.linalg.eigvals(pa))
        cb = np.poly(np.linalg.eigvals(pb))
        scale = np.maximum(1.0, np.maximum(np.abs(ca), np.abs(cb)))
        if np.any(np.abs(ca - cb) > tol * scale):
            return False
    return True
