"""Intertwiner construction: solve A_i X = X B_i jointly, pick an
invertible solution, and upgrade it to a unitary / real orthogonal /
complex orthogonal similarity.

The upgrade steps are the polar factor (P P*)^{-1/2} P for the unitary
and real orthogonal kinds and principal_sqrt(P P^t)^{-1} P for the
complex orthogonal kind; both need the sets to be closed under the
respective star so that P* (resp. P^t) intertwines in the opposite
direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (BranchCut, ConstructionFailed, InvalidInput,
                     NoIntertwiner, NotAnIntertwiner, Singular,
                     SingularFamily)
from .linalg import fro, polar_unitary, principal_sqrt
from .matrices import MatrixSet, check_compatible

IsometryKind = Literal["unitary", "real-orthogonal", "complex-orthogonal"]

NULLSPACE_RTOL = 1e-10
INVERTIBLE_RTOL = 1e-8
INTERTWINE_RTOL = 1e-8
ISOMETRY_TOL = 1e-8


@dataclass(frozen=True)
class SylvesterBasis:
    """Orthonormal (entrywise) basis of {X : A_i X = X B_i for all i}."""

    dimension: int
    basis: tuple[np.ndarray, ...]
    residual_bound: float

    @property
    def size(self) -> int:
        return len(self.basis)


def joint_sylvester_basis(a: MatrixSet, b: MatrixSet,
                          rtol: float = NULLSPACE_RTOL) -> SylvesterBasis:
    """Null space of X -> (A_1 X - X B_1, ..., A_k X - X B_k).

    Row-major vectorization turns each block into
    kron(A_i, I) - kron(I, B_i^t); basis vectors are the right singular
    vectors with singular value <= rtol * max(1, sigma_max).
    """
    check_compatible(a, b)
    a.require_square("joint Sylvester solve")
    n = a.rows
    eye = np.eye(n)
    blocks = [np.kron(m, eye) - np.kron(eye, w.T)
              for m, w in zip(a.matrices, b.matrices)]
    op = np.concatenate(blocks, axis=0)
    _, sigma, vh = np.linalg.svd(op)  # k n^2 rows >= n^2 cols, sigma covers vh
    cutoff = rtol * max(1.0, sigma[0])
    null_rows = vh[sigma <= cutoff].conj()  # rows of vh are v_i^*
    basis = tuple(row.reshape(n, n) for row in null_rows)
    resid = 0.0
    for x in basis:
        worst = max(fro(m @ x - x @ w) for m, w in zip(a.matrices, b.matrices))
        resid = max(resid, worst)  # ||x||_F = 1 for singular vectors
    return SylvesterBasis(dimension=n, basis=basis, residual_bound=resid)


def pick_invertible(basis: SylvesterBasis, rng_seed: int, trials: int = 8,
                    rtol: float = INVERTIBLE_RTOL) -> np.ndarray:
    """Random Gaussian combination of the basis with sigma_min bounded
    away from zero; resampled up to `trials` times."""
    if basis.size == 0:
        raise NoIntertwiner("the joint Sylvester system has only the zero solution")
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    complex_basis = any(np.iscomplexobj(x) for x in basis.basis)
    stack = np.stack(basis.basis)
    for _ in range(trials):
        if complex_basis:
            c = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
        else:
            c = rng.standard_normal(basis.size)
        p = np.tensordot(c, stack, axes=1)
        sigma = np.linalg.svd(p, compute_uv=False)
        if sigma[0] > 0 and sigma[-1] >= rtol * sigma[0]:
            return p
    raise SingularFamily(f"no invertible combination found in {trials} trials")


def _set_scale(a: MatrixSet, b: MatrixSet) -> float:
    return max(1.0, max(fro(m) for m in a.matrices),
               max(fro(m) for m in b.matrices))


def intertwining_residual(p: np.ndarray, a: MatrixSet, b: MatrixSet) -> float:
    return max(fro(m @ p - p @ w) for m, w in zip(a.matrices, b.matrices))


def similarity_to_isometry(p: np.ndarray, a: MatrixSet, b: MatrixSet,
                           kind: IsometryKind,
                           rtol: float = INTERTWINE_RTOL) -> np.ndarray:
    """Extract an isometry W with A_i W = W B_i from an invertible
    intertwiner P.

    The sets must be star-closed for the relevant star (the engine
    augments them); for the real orthogonal kind all data must be real.
    Both postconditions - the intertwining residual and the isometry
    defect - are re-verified before returning.
    """
    check_compatible(a, b)
    a.require_square("isometry extraction")
    scale = _set_scale(a, b)
    if intertwining_residual(p, a, b) > rtol * max(fro(p), 1e-14) * scale:
        raise NotAnIntertwiner("P does not intertwine the sets within tolerance")

    if kind == "unitary":
        w = polar_unitary(p)
        star = "conjugate-transpose"
    elif kind == "real-orthogonal":
        if a.field != "real" or b.field != "real":
            raise InvalidInput("real orthogonal extraction requires real sets")
        w = polar_unitary(_realize(p))
        star = "conjugate-transpose"
    elif kind == "complex-orthogonal":
        s = principal_sqrt(p @ p.T)
        w = np.linalg.solve(s, p)
        star = "transpose"
    else:
        raise InvalidInput(f"unknown isometry kind {kind!r}")

    defect = fro(w @ (w.conj().T if star == "conjugate-transpose" else w.T)
                 - np.eye(w.shape[0]))
    resid = intertwining_residual(w, a, b)
    if defect > ISOMETRY_TOL or resid > rtol * scale:
        raise ConstructionFailed(
            f"extracted {kind} factor failed verification: "
            f"isometry defect {defect:.3e}, residual {resid:.3e}")
    return w


def construct_isometry(a: MatrixSet, b: MatrixSet, kind: IsometryKind,
                       seed: int = 0, trials: int = 8) -> np.ndarray:
    """Solve the joint Sylvester system once, then sample intertwiners
    until one upgrades to a verified isometry.

    Branch cuts and failed postcondition checks are retried with fresh
    coefficients; an empty solution space propagates immediately since
    no amount of resampling can help.
    """
    basis = joint_sylvester_basis(a, b)
    seeds = np.random.SeedSequence(seed).generate_state(max(trials, 1))
    last_err: Exception | None = None
    for attempt_seed in seeds:
        try:
            p = pick_invertible(basis, int(attempt_seed), trials=trials)
            return similarity_to_isometry(p, a, b, kind)
        except (BranchCut, ConstructionFailed, SingularFamily, Singular) as err:
            last_err = err
    assert last_err is not None
    raise last_err


def _realize(p: np.ndarray) -> np.ndarray:
    """A real invertible matrix from a complex intertwiner.

    Re(P) + t Im(P) is invertible for all but finitely many real t when P
    is; a short deterministic sweep of t values finds one.
    """
    if not np.iscomplexobj(p):
        return p
    re, im = p.real, p.imag
    rng = np.random.default_rng(0)
    for t in [0.0, 1.0, -1.0, *rng.uniform(-2.0, 2.0, size=16)]:
        cand = re + t * im
        sigma = np.linalg.svd(cand, compute_uv=False)
        if sigma[0] > 0 and sigma[-1] >= INVERTIBLE_RTOL * sigma[0]:
            return cand
    raise Singular("no invertible real combination Re(P) + t Im(P) found")
