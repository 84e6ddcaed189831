"""Exception types raised across the package.

Every failure mode that callers are expected to branch on gets its own
class; the engine maps the retryable ones onto Inconclusive verdicts.
"""


class SimeqError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(SimeqError):
    """Inputs violate a documented precondition (shape, field, cardinality)."""


class InvalidShape(InvalidInput):
    """A matrix has the wrong shape for the requested operation."""


class NotPsd(SimeqError):
    """Matrix is not positive semi-definite within tolerance."""


class Singular(SimeqError):
    """Matrix is singular or too close to singular."""


class BranchCut(SimeqError):
    """An eigenvalue sits on the closed negative real axis, so the
    principal square root is undefined.  Retryable: callers draw a new
    random intertwiner and try again."""


class NoIntertwiner(SimeqError):
    """The joint Sylvester system has no nonzero solution."""


class SingularFamily(SimeqError):
    """Every sampled combination of the intertwiner basis was singular."""


class NotAnIntertwiner(SimeqError):
    """The supplied matrix does not intertwine the two sets within tolerance."""


class NotRankOneEqual(SimeqError):
    """The two vectors do not satisfy a·a* = b·b* within tolerance."""


class GramMismatch(SimeqError):
    """A·star(A) and B·star(B) differ by more than the allowed tolerance."""


class Degenerate(SimeqError):
    """Right-factor recovery hit a degenerate configuration (isotropic
    subspace, non-orthogonalizable eigenbasis).  Retryable at the
    pipeline level."""


class ConstructionFailed(SimeqError):
    """An isometry was built but failed its own postcondition check."""


class ResourceLimit(SimeqError):
    """Word enumeration would exceed the configured necklace cap."""


class ParseError(SimeqError):
    """Input file is not well-formed JSON."""


class SchemaError(SimeqError):
    """Input file is valid JSON but violates the matrix-set schema."""


class IoError(SimeqError):
    """Reading or writing a file failed at the OS level."""
