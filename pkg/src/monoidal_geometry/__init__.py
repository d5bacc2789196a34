"""Exact computations with commutative monoid objects in FinVect and presheaf categories.

Monoids stand in for rings: their endomorphism rings E(A), localizations,
quotients, covers, integrality, function fields, glued schemes and closed
subschemes are computed with exact arithmetic, and every verdict carries a
re-checkable witness.
"""

from .category import CatInstance, CMorphism, CObject, FiniteSpace, FinVect, Presheaf
from .corpus import corpus_generate, corpus_items, presheaf_corpus
from .endring import EndRing, FiniteRing, RingMap, e_of_morphism, end_ring
from .errors import InputError, Rejected, SelfTestFailure
from .fields import QQ, PrimeField, field_from_tag
from .linalg import Matrix
from .localization import (
    certify_open_immersion,
    conservativity_check,
    localize_element,
    localize_module,
    localize_multset,
    mult_set,
    verify_epi,
    verify_flat,
    zero_detection,
)
from .monoid import (
    ModuleObject,
    MonoidMorphism,
    MonoidObject,
    algebra,
    check_monoid,
    module,
    monoid,
    product_monoid,
    regular_module,
    relative_tensor,
)
from .quotient import (
    base_change_quotient,
    chain_stabilization_check,
    ideal,
    quotient_element,
    quotient_ideal,
    quotient_sequence,
)
from .scheme import (
    QCIdealSheaf,
    affine,
    build_glued,
    check_cover,
    closed_subscheme,
    function_field,
    irreducibility_probe,
    is_integral,
    is_reduced,
    is_weakly_integral,
    local_ring_at,
    validate_gluing,
)

__version__ = "0.1.0"

__all__ = [
    "certify_open_immersion",
    "conservativity_check",
    "localize_element",
    "localize_module",
    "localize_multset",
    "mult_set",
    "verify_epi",
    "verify_flat",
    "zero_detection",
    "ModuleObject",
    "MonoidMorphism",
    "MonoidObject",
    "algebra",
    "check_monoid",
    "module",
    "monoid",
    "product_monoid",
    "regular_module",
    "relative_tensor",
    "base_change_quotient",
    "chain_stabilization_check",
    "ideal",
    "quotient_element",
    "quotient_ideal",
    "quotient_sequence",
    "QCIdealSheaf",
    "affine",
    "build_glued",
    "check_cover",
    "closed_subscheme",
    "function_field",
    "irreducibility_probe",
    "is_integral",
    "is_reduced",
    "is_weakly_integral",
    "local_ring_at",
    "validate_gluing",
    "CatInstance",
    "CMorphism",
    "CObject",
    "FiniteSpace",
    "FinVect",
    "Presheaf",
    "corpus_generate",
    "corpus_items",
    "presheaf_corpus",
    "EndRing",
    "FiniteRing",
    "RingMap",
    "e_of_morphism",
    "end_ring",
    "InputError",
    "Rejected",
    "SelfTestFailure",
    "QQ",
    "PrimeField",
    "field_from_tag",
    "Matrix",
]
