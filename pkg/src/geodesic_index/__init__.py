"""Index iteration and multiplicity bookkeeping for closed geodesics on spheres."""
from .iteration import (
    GeodesicModel,
    ModelError,
    SymplecticPathModel,
    index_iterate_elliptic,
    index_iterate_general,
    index_sequence,
    mean_index,
)
from .jump import (
    CertificateNotFound,
    JumpCertificate,
    PreconditionError,
    find_certificates,
    find_common_jump,
    isolation_check,
    verify_certificate,
)
from .morse import check_morse_inequalities, morse_counts
from .numerics import BracketError, Rational, compare, floor_of, from_literal, quadratic, to_literal
from .symplectic import NormalFormData, assemble, decompose, is_irrationally_elliptic
from .topology import betti, betti_table, betti_window_sum
from .verifier import (
    VerificationReport,
    conclude_multiplicity,
    initial_index_check,
    three_sphere_check,
    verify_model_set,
    window_count,
)

__version__ = "0.1.0"
