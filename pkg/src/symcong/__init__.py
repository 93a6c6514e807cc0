"""Mod-p congruences between elliptic curves over Q and their symplectic type."""

from .curve import (
    RationalEC,
    ShortModel,
    conductor,
    is_cm,
    minimal_model,
    quadratic_twist,
    quartic_twist,
    sextic_twist,
    short_model,
    tate_local,
)
from .frobenius import TraceVector, ap, trace_vector
from .galois import cartan_type, condition_S, has_rational_7_isogeny, reducibility, trace_zero_quadratic
from .sieve import build_prime_window, hash_curve, ko_certify, partition, sturm_bound
from .twists import (
    SymplecticType,
    TypeValue,
    cm_twist_congruence,
    find_quadratic_twist_congruence,
    higher_twist_partner,
    higher_twist_type,
    isogeny_criterion,
    quadratic_twist_type,
)
from .reducible import align_characters, fields_isomorphic, reducible_congruent, second_isogeny_field
from .pipeline import freymazur_audit, ingest, run_pipeline, step4_partition

__version__ = "0.1.0"
