"""Dense factorization primitives: SVD, PSD square root, polar factor,
principal matrix square root.

All four are pure functions of their array arguments, keep real inputs
real whenever the result is mathematically real, and enforce their own
postconditions.  Tolerances are relative to the Frobenius norm of the
input with a small absolute floor.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import BranchCut, InvalidInput, NotPsd, Singular

ABS_FLOOR = 1e-14


class SvdResult(NamedTuple):
    left: np.ndarray            # rows x rows unitary
    singular_values: np.ndarray  # nonincreasing, length min(rows, cols)
    right: np.ndarray           # cols x cols unitary, A = left @ diag @ right*


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro"))


def _check_finite(a: np.ndarray, name: str = "input"):
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} contains NaN or Inf entries")


def svd(a: np.ndarray) -> SvdResult:
    """Full SVD with the right factor returned as V (not V*), so that
    a = left @ diag(singular_values) @ right.conj().T."""
    a = np.asarray(a)
    _check_finite(a)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return SvdResult(u, s, vh.conj().T)


def psd_sqrt(h: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-tol*||h||_2, 0) are clipped to zero; anything below
    that raises NotPsd.  Hermitianity itself is checked to tol relative.
    """
    h = np.asarray(h)
    _check_finite(h)
    if h.shape[0] != h.shape[1]:
        raise InvalidInput("psd_sqrt requires a square matrix")
    nrm = fro(h)
    if fro(h - h.conj().T) > tol * max(nrm, ABS_FLOOR):
        raise NotPsd("matrix is not hermitian within tolerance")
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    spec_norm = max(np.max(np.abs(w)), ABS_FLOOR)
    if np.min(w) < -tol * spec_norm:
        raise NotPsd(f"eigenvalue {np.min(w):.3e} below -tol*||H||_2")
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    if not np.iscomplexobj(h):
        s = s.real
    return (s + s.conj().T) / 2.0


def polar_unitary(p: np.ndarray, rel_tol: float = 1e-8) -> np.ndarray:
    """Unitary factor (p p*)^{-1/2} p of the polar decomposition.

    Requires sigma_min(p) >= rel_tol * sigma_max(p); real input gives a
    real orthogonal result.
    """
    p = np.asarray(p)
    _check_finite(p)
    if p.shape[0] != p.shape[1]:
        raise InvalidInput("polar factor requires a square matrix")
    u, s, vh = np.linalg.svd(p)
    if s[0] <= 0 or s[-1] < rel_tol * s[0]:
        raise Singular(f"sigma_min/sigma_max = {s[-1] / max(s[0], ABS_FLOOR):.3e} "
                       f"below {rel_tol:.1e}")
    return u @ vh


def principal_sqrt(m: np.ndarray, axis_tol: float = 1e-10) -> np.ndarray:
    """Principal square root: unique root with spectrum in the open right
    half-plane.  Raises BranchCut if any eigenvalue lies within
    axis_tol * max(1, ||m||_F) of the closed negative real axis.
    """
    m = np.asarray(m)
    _check_finite(m)
    if m.shape[0] != m.shape[1]:
        raise InvalidInput("principal_sqrt requires a square matrix")
    scale = max(1.0, fro(m))
    eig = np.linalg.eigvals(m)
    # distance from z to the half-line {x <= 0, y = 0}
    dist = np.where(eig.real <= 0, np.abs(eig.imag), np.abs(eig))
    if np.min(dist) <= axis_tol * scale:
        raise BranchCut(f"eigenvalue {eig[np.argmin(dist)]:.3e} lies on or near "
                        "the closed negative real axis")
    s, _ = scipy.linalg.sqrtm(m, disp=False)
    if not np.iscomplexobj(m) and np.iscomplexobj(s):
        # negative-axis spectrum was excluded above, so the root is real
        s = s.real
    return s
