"""Equivalence of rectangular sets: U A_i = B_i V with both factors
isometries of the declared star.

The reduction: the square Gram alphabets {A_i star(A_j)} and
{B_i star(B_j)} are simultaneously similar iff the original sets are
equivalent, and once a similarity isometry U is in hand, stacking the
blocks U A_i over B_i leaves a single right-factor recovery problem
A = B V for the stacked matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (BranchCut, ConstructionFailed, Degenerate, GramMismatch,
                     InvalidInput, NotRankOneEqual, SingularFamily)
from .fingerprint import gram_alphabet
from .intertwiner import construct_isometry
from .linalg import fro, principal_sqrt
from .matrices import MatrixSet, Star, apply_star, check_compatible

RECOVERY_TOL = 1e-8

EQUIV_KINDS = ("unitary-equiv", "orthogonal-equiv", "complex-orthogonal-equiv")

_EQUIV_STAR: dict[str, Star] = {
    "unitary-equiv": "conjugate-transpose",
    "orthogonal-equiv": "conjugate-transpose",
    "complex-orthogonal-equiv": "transpose",
}

_EQUIV_ISOMETRY = {
    "unitary-equiv": "unitary",
    "orthogonal-equiv": "real-orthogonal",
    "complex-orthogonal-equiv": "complex-orthogonal",
}


@dataclass(frozen=True)
class Certificate:
    """Explicit isometries witnessing a YES verdict.

    For similarity kinds `right` is None and residual is
    max_i ||A_i U - U B_i||_F; for equivalence kinds residual is
    max_i ||U A_i - B_i V||_F.
    """

    kind: str
    left: np.ndarray
    right: np.ndarray | None
    residual: float


def phase_recover(a, b, tol: float = RECOVERY_TOL):
    """The unimodular theta with a = theta * b, given a a* = b b*.

    Real inputs give theta in {+1.0, -1.0}; complex give a unit-modulus
    complex number.
    """
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    if a.shape != b.shape:
        raise InvalidInput("vectors must have equal length")
    na2 = float(np.vdot(a, a).real)
    nb2 = float(np.vdot(b, b).real)
    outer_gap = fro(np.outer(a, a.conj()) - np.outer(b, b.conj()))
    if outer_gap > tol * max(1.0, na2):
        raise NotRankOneEqual(f"a a* and b b* differ by {outer_gap:.3e}")
    if nb2 == 0.0:
        if na2 > tol:
            raise NotRankOneEqual("b is zero but a is not")
        return 1.0 if not (np.iscomplexobj(a) or np.iscomplexobj(b)) else complex(1.0)
    h = complex(np.vdot(b, a))
    theta = h / abs(h) if abs(h) > 0 else complex(1.0)
    real_inputs = not (np.iscomplexobj(a) or np.iscomplexobj(b))
    if real_inputs:
        theta = 1.0 if theta.real >= 0 else -1.0
    if np.linalg.norm(a - theta * b) > tol * math.sqrt(nb2):
        raise NotRankOneEqual("no unimodular phase maps b onto a")
    return theta


def _complete_orthonormal(cols: np.ndarray, n: int) -> np.ndarray:
    """Extend orthonormal columns to a full unitary basis of C^n.

    Deterministic: each round appends the canonical basis vector whose
    residual against the collected columns is largest (ties break toward
    the lower index), Gram-Schmidt with one re-orthogonalization pass.
    """
    dtype = cols.dtype if cols.size else np.float64
    got = [cols[:, j].copy() for j in range(cols.shape[1])]
    eye = np.eye(n, dtype=dtype)
    while len(got) < n:
        best, best_norm = None, -1.0
        for j in range(n):
            v = eye[:, j].copy()
            for g in got:
                v -= np.vdot(g, v) * g
            nv = float(np.linalg.norm(v))
            if nv > best_norm + 1e-12:
                best, best_norm = v, nv
        v = best
        for g in got:  # second pass for numerical hygiene
            v -= np.vdot(g, v) * g
        got.append(v / np.linalg.norm(v))
    return np.stack(got, axis=1)


def _gram_gap(a: np.ndarray, b: np.ndarray, star: Star) -> float:
    return fro(a @ apply_star(a, star) - b @ apply_star(b, star))


def _recover_conjugate(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Shared-left-basis construction: U, sigma from the SVD of a (an
    eigenbasis of a a* = b b*), right factors v_i = a* u_i / sigma_i and
    w_i = b* u_i / sigma_i, completed to unitaries; answer W V*."""
    m, n = a.shape
    u, sigma, vh = np.linalg.svd(a, full_matrices=True)
    smax = sigma[0] if len(sigma) else 0.0
    noise = _gram_gap(a, b, "conjugate-transpose") \
        + max(m, n) * np.finfo(np.float64).eps * smax ** 2
    cut = math.sqrt(10.0 * noise)
    r = int(np.sum(sigma > cut))
    v1 = vh.conj().T  # exact unitary, kernel completion included
    w_cols = (b.conj().T @ u[:, :r]) / sigma[:r] if r else np.zeros((n, 0), a.dtype)
    # modified Gram-Schmidt: w columns are orthonormal up to Gram noise
    for j in range(r):
        for i in range(j):
            w_cols[:, j] -= np.vdot(w_cols[:, i], w_cols[:, j]) * w_cols[:, i]
        nrm = np.linalg.norm(w_cols[:, j])
        if nrm < 0.5:
            raise Degenerate("right-factor columns collapsed during "
                             "orthonormalization")
        w_cols[:, j] /= nrm
    v2 = _complete_orthonormal(w_cols, n)
    return v2 @ v1.conj().T


def _bilinear_orthonormalize(x: np.ndarray) -> np.ndarray:
    """Columns y spanning span(x) with y^t y = I, via x C^{-1/2} for the
    bilinear Gram C = x^t x.  BranchCut/Degenerate when C is singular or
    has spectrum touching the negative real axis (isotropic columns)."""
    c = x.T @ x
    s = principal_sqrt(c)  # symmetric, commutes with c
    return np.linalg.solve(s.T, x.T).T


def _unitary_nullspace(m: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of {x in C^n : m x = 0} for an r x n matrix."""
    if m.shape[0] == 0:
        return np.eye(n, dtype=m.dtype if m.size else np.complex128)
    _, sigma, vh = np.linalg.svd(m, full_matrices=True)
    smax = sigma[0] if len(sigma) else 0.0
    rank = int(np.sum(sigma > max(m.shape) * np.finfo(np.float64).eps * smax * 100))
    return vh[rank:].conj().T


def _recover_transpose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Transpose-star analogue: bilinear-orthonormal eigenbasis o_i of
    the complex symmetric a a^t, factors v_i = a^t o_i / sqrt(lambda_i),
    w_i = b^t o_i / sqrt(lambda_i), both completed bilinearly.

    Degenerates when a a^t loses rank against a (isotropic rows) or an
    eigenspace admits no bilinear-orthonormal basis; callers treat that
    as a retryable failure.
    """
    m, n = a.shape
    g = a @ a.T
    norm_g = max(fro(g), np.finfo(np.float64).eps)
    lam, x = np.linalg.eig(g)
    order = np.lexsort((lam.imag, lam.real))
    lam, x = lam[order], x[:, order]
    zero_cut = _gram_gap(a, b, "transpose") * 10.0 \
        + 1e-10 * norm_g + 100 * m * np.finfo(np.float64).eps * norm_g
    cluster_tol = 1e-8 * norm_g

    v_cols, w_cols = [], []
    i = 0
    while i < len(lam):
        j = i + 1
        while j < len(lam) and abs(lam[j] - lam[j - 1]) <= cluster_tol:
            j += 1
        block = lam[i:j]
        if np.mean(np.abs(block)) > zero_cut:
            oc = _bilinear_orthonormalize(x[:, i:j])
            mu = np.sqrt(np.mean(block).astype(np.complex128))
            v_cols.append(a.T @ oc / mu)
            w_cols.append(b.T @ oc / mu)
        i = j

    if v_cols:
        vr = np.concatenate(v_cols, axis=1)
        wr = np.concatenate(w_cols, axis=1)
    else:
        vr = np.zeros((n, 0), dtype=np.complex128)
        wr = np.zeros((n, 0), dtype=np.complex128)
    r = vr.shape[1]
    if r > n:
        raise Degenerate("more principal directions than columns")
    if r < n:
        comp_v = _bilinear_orthonormalize(_unitary_nullspace(vr.T, n))
        comp_w = _bilinear_orthonormalize(_unitary_nullspace(wr.T, n))
        if comp_v.shape[1] != n - r or comp_w.shape[1] != n - r:
            raise Degenerate("completion dimension mismatch")
        t1 = np.concatenate([vr, comp_v], axis=1)
        t2 = np.concatenate([wr, comp_w], axis=1)
    else:
        t1, t2 = vr, wr
    if fro(t1.T @ t1 - np.eye(n)) > 1e-6 or fro(t2.T @ t2 - np.eye(n)) > 1e-6:
        raise Degenerate("bilinear basis failed to orthonormalize")
    return t2 @ t1.T


def right_factor_recover(a, b, star: Star, tol: float = RECOVERY_TOL) -> np.ndarray:
    """V with star(V) V = I and A = B V, given A star(A) = B star(B).

    The conjugate-transpose case follows the shared-singular-basis
    construction and always succeeds on valid input; the transpose case
    is best-effort over C and raises Degenerate when the bilinear
    geometry collapses.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InvalidInput(f"shapes differ: {a.shape} vs {b.shape}")
    gap = _gram_gap(a, b, star)
    na = fro(a)
    if gap > tol * max(1.0, na * na):
        raise GramMismatch(f"A star(A) and B star(B) differ by {gap:.3e}, "
                           f"over tolerance {tol * max(1.0, na * na):.3e}")
    if star == "conjugate-transpose":
        v = _recover_conjugate(a, b)
    else:
        v = _recover_transpose(a, b)
    n = a.shape[1]
    defect = fro(v @ apply_star(v, star) - np.eye(n))
    resid = fro(a - b @ v)
    if defect > RECOVERY_TOL or resid > RECOVERY_TOL * max(1.0, na):
        raise Degenerate(f"recovered factor failed verification: isometry "
                         f"defect {defect:.3e}, residual {resid:.3e}")
    if not (np.iscomplexobj(a) or np.iscomplexobj(b)):
        v = v.real if np.iscomplexobj(v) else v
    return v


def _sets_identical(a: MatrixSet, b: MatrixSet) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a.matrices, b.matrices))


def equivalence_certificate(a: MatrixSet, b: MatrixSet, kind: str,
                            seed: int = 0, trials: int = 8,
                            gram_a: MatrixSet | None = None,
                            gram_b: MatrixSet | None = None) -> Certificate:
    """Full pipeline: Gram alphabets -> similarity isometry U -> stacked
    right-factor recovery -> verified Certificate.

    Retries with fresh randomness when a construction stage hits a
    branch cut or degenerate configuration; deterministic per seed.
    """
    if kind not in EQUIV_KINDS:
        raise InvalidInput(f"unknown equivalence kind {kind!r}")
    check_compatible(a, b)
    star = _EQUIV_STAR[kind]
    if kind == "orthogonal-equiv" and a.field != "real":
        raise InvalidInput("orthogonal equivalence requires real sets")

    if _sets_identical(a, b):
        eye_l = np.eye(a.rows) if a.field == "real" else np.eye(a.rows, dtype=complex)
        eye_r = np.eye(a.cols) if a.field == "real" else np.eye(a.cols, dtype=complex)
        return Certificate(kind, eye_l, eye_r, _equiv_residual(eye_l, eye_r, a, b))

    if gram_a is None:
        gram_a = gram_alphabet(a, star)
    if gram_b is None:
        gram_b = gram_alphabet(b, star)

    seeds = np.random.SeedSequence(seed).generate_state(max(trials, 1))
    last_err: Exception | None = None
    for attempt_seed in seeds:
        try:
            # engine convention gives G^A u = u G^B; the block-stacking
            # identity needs w G^A = G^B w, and w = star(u) = u^{-1} does it
            u = construct_isometry(gram_a, gram_b, _EQUIV_ISOMETRY[kind],
                                   seed=int(attempt_seed), trials=trials)
            u = apply_star(u, star)
            stack_a = np.concatenate([u @ m for m in a.matrices], axis=0)
            stack_b = np.concatenate(list(b.matrices), axis=0)
            v = right_factor_recover(stack_a, stack_b, star)
            return Certificate(kind, u, v, _equiv_residual(u, v, a, b))
        except (Degenerate, BranchCut, ConstructionFailed, SingularFamily,
                GramMismatch) as err:
            last_err = err
    raise last_err if last_err is not None else Degenerate("no attempt ran")


def _equiv_residual(u: np.ndarray, v: np.ndarray, a: MatrixSet, b: MatrixSet) -> float:
    return max(fro(u @ x - y @ v) for x, y in zip(a.matrices, b.matrices))
