"""simeq: decide simultaneous unitary / orthogonal / complex-orthogonal
similarity and equivalence of matrix sets via trace-word invariants, and
construct explicit certificate isometries when the answer is yes.
"""

from .closure import (is_jordan_closed, is_star_closed, paired_star_augment,
                      pencil_charpoly_probe, star_augment)
from .engine import (Decision, EngineConfig, KINDS, VerifyReport, decide,
                     generate_instance, verify_certificate)
from .errors import SimeqError
from .fingerprint import (Fingerprint, Mismatch, compare_fingerprints,
                          gram_alphabet, make_fingerprint, word_trace)
from .intertwiner import (SylvesterBasis, construct_isometry,
                          joint_sylvester_basis, pick_invertible,
                          similarity_to_isometry)
from .linalg import SvdResult, polar_unitary, principal_sqrt, psd_sqrt, svd
from .matrices import MatrixSet
from .rectangular import (Certificate, equivalence_certificate, phase_recover,
                          right_factor_recover)
from .words import (canonical_rotation, enumerate_words, necklace_count,
                    word_length_bound)

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Decision", "EngineConfig", "Fingerprint", "KINDS",
    "MatrixSet", "Mismatch", "SimeqError", "SvdResult", "SylvesterBasis",
    "VerifyReport", "canonical_rotation", "compare_fingerprints",
    "construct_isometry", "decide", "enumerate_words",
    "equivalence_certificate", "generate_instance", "gram_alphabet",
    "is_jordan_closed", "is_star_closed", "joint_sylvester_basis",
    "make_fingerprint", "necklace_count", "paired_star_augment",
    "pencil_charpoly_probe", "phase_recover", "pick_invertible",
    "polar_unitary", "principal_sqrt", "psd_sqrt", "right_factor_recover",
    "similarity_to_isometry", "star_augment", "svd", "verify_certificate",
    "word_length_bound", "word_trace",
]
