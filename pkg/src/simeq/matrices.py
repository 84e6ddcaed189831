"""Matrix sets over a declared scalar field.

Matrices are plain numpy arrays: float64 for the real field, complex128
for the complex field.  A MatrixSet bundles same-shaped matrices with
labels and the field tag that the file format and the real-only decision
kinds care about.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import InvalidInput, InvalidShape

Field = Literal["real", "complex"]
Star = Literal["conjugate-transpose", "transpose"]

STAR_SUFFIX = {"conjugate-transpose": "*", "transpose": "^t"}


def apply_star(m: np.ndarray, star: Star) -> np.ndarray:
    """Conjugate transpose or plain transpose of a matrix."""
    if star == "conjugate-transpose":
        return m.conj().T
    if star == "transpose":
        return m.T
    raise InvalidInput(f"unknown star operation {star!r}")


def as_field_array(m, field: Field) -> np.ndarray:
    """Coerce to a 2-D array of the field's dtype, checking finiteness."""
    dtype = np.float64 if field == "real" else np.complex128
    a = np.asarray(m)
    if a.ndim != 2:
        raise InvalidShape(f"expected a 2-D matrix, got ndim={a.ndim}")
    if field == "real" and np.iscomplexobj(a):
        if np.max(np.abs(a.imag), initial=0.0) != 0.0:
            raise InvalidInput("real-field matrix has nonzero imaginary parts")
        a = a.real
    a = a.astype(dtype)
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix contains NaN or Inf entries")
    return a


def infer_field(matrices: Iterable[np.ndarray]) -> Field:
    return "complex" if any(np.iscomplexobj(m) for m in matrices) else "real"


@dataclass(frozen=True)
class MatrixSet:
    """A nonempty tuple of equally-shaped matrices plus per-matrix labels."""

    matrices: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    field: Field

    def __post_init__(self):
        if not self.matrices:
            raise InvalidInput("matrix set must be nonempty")
        shape = self.matrices[0].shape
        for m in self.matrices:
            if m.shape != shape:
                raise InvalidShape(
                    f"all members must share one shape; got {m.shape} vs {shape}")
        if len(self.labels) != len(self.matrices):
            raise InvalidInput("labels length must match the number of matrices")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInput("matrix labels must be unique")

    @classmethod
    def from_arrays(cls, arrays: Sequence, labels: Sequence[str] | None = None,
                    field: Field | None = None) -> "MatrixSet":
        arrays = [np.asarray(a) for a in arrays]
        if field is None:
            field = infer_field(arrays)
        mats = tuple(as_field_array(a, field) for a in arrays)
        if labels is None:
            labels = tuple(f"A{i + 1}" for i in range(len(mats)))
        else:
            labels = tuple(str(l) if l else f"A{i + 1}" for i, l in enumerate(labels))
        return cls(mats, labels, field)

    @property
    def rows(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def cols(self) -> int:
        return self.matrices[0].shape[1]

    @property
    def size(self) -> int:
        return len(self.matrices)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def stacked(self) -> np.ndarray:
        """All members as one (k, rows, cols) array."""
        return np.stack(self.matrices)

    def require_square(self, what: str = "operation"):
        if not self.is_square:
            raise InvalidShape(f"{what} requires square matrices, got "
                               f"{self.rows}x{self.cols}")

    def with_members(self, matrices, labels) -> "MatrixSet":
        return MatrixSet(tuple(matrices), tuple(labels), self.field)


def check_compatible(a: MatrixSet, b: MatrixSet):
    """Same dimensions, same cardinality, same field; raises InvalidInput."""
    if a.size != b.size:
        raise InvalidInput(f"sets have different cardinality: {a.size} vs {b.size}")
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise InvalidShape(f"sets have different dimensions: "
                           f"{a.rows}x{a.cols} vs {b.rows}x{b.cols}")
    if a.field != b.field:
        raise InvalidInput(f"sets have different fields: {a.field} vs {b.field}")
