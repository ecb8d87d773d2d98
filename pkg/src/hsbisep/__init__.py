"""Pauli-basis separability analysis and certification for three-qubit states."""

from .analysis import BisepReport, analyze
from .certificate import Certificate, CertificateTerm, VerificationReport, state_digest, verify_certificate
from .construct import (
    assemble_mds_certificate,
    bisep_certificate,
    bisep_cost,
    full_separability_cost,
    fully_separable_certificate,
    mds_norm_sum,
)
from .errors import (
    CriterionNotMet,
    DegenerateTriad,
    EmptyKeepSet,
    HSBisepError,
    InternalSignSolveFailure,
    NonUnitTrace,
    NoSignChange,
    NotHermitian,
    NotMDS,
    NotPSD,
    OutOfRange,
    ThresholdExceeded,
)
from .hs import (
    HSDecomposition,
    canonical_state,
    hs_decompose,
    hs_reconstruct,
    is_mds,
    l1_norm,
    frobenius_norm,
    random_state,
    reference_state,
    rotated_state,
    three_triad_state,
    two_triad_state,
)
from .linalg import TOL, Cut, hermitian_eig, partial_trace, partial_transpose, pauli, pauli_string_matrix, ppt_min_eigs
from .triads import Triad, latin_triads, optimize_frame, triad_decomposition, triad_partition
from .wnoise import (
    bisep_threshold,
    full_sep_threshold,
    ppt_threshold,
    sweep,
    w_bisep_certificate,
    w_hs_reference,
    w_mixed,
    w_state,
)

__version__ = "0.1.0"

__all__ = [
    "BisepReport",
    "Certificate",
    "CertificateTerm",
    "CriterionNotMet",
    "Cut",
    "DegenerateTriad",
    "EmptyKeepSet",
    "HSBisepError",
    "HSDecomposition",
    "InternalSignSolveFailure",
    "NoSignChange",
    "NonUnitTrace",
    "NotHermitian",
    "NotMDS",
    "NotPSD",
    "OutOfRange",
    "TOL",
    "ThresholdExceeded",
    "Triad",
    "VerificationReport",
    "analyze",
    "assemble_mds_certificate",
    "bisep_certificate",
    "bisep_cost",
    "bisep_threshold",
    "canonical_state",
    "frobenius_norm",
    "full_sep_threshold",
    "full_separability_cost",
    "fully_separable_certificate",
    "hermitian_eig",
    "hs_decompose",
    "hs_reconstruct",
    "is_mds",
    "l1_norm",
    "latin_triads",
    "mds_norm_sum",
    "optimize_frame",
    "partial_trace",
    "partial_transpose",
    "pauli",
    "pauli_string_matrix",
    "ppt_min_eigs",
    "ppt_threshold",
    "random_state",
    "reference_state",
    "rotated_state",
    "state_digest",
    "sweep",
    "three_triad_state",
    "triad_decomposition",
    "triad_partition",
    "two_triad_state",
    "verify_certificate",
    "w_bisep_certificate",
    "w_hs_reference",
    "w_mixed",
    "w_state",
]
