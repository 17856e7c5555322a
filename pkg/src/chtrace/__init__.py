"""chtrace: exact-arithmetic verification of polynomial and trace identities
for 2x2 matrices over structure-constant noncommutative rings."""

__version__ = "0.1.0"

from .scalars import (
    Polynomial,
    Rational,
    VarAllocator,
    poly_add,
    poly_mul,
    rat,
)
from .kernel import (
    BudgetExceededError,
    DimensionBoundError,
    RingDescriptor,
    RingElement,
    RingMismatchError,
    commutator,
    elem_mul,
    generic_element,
    make_full,
    make_grassmann,
    make_rat,
    make_u3star,
    u3star_commutator_parts,
    u3star_embed_oracle,
)
from .matrices import Mat2, mat_mul, mat_pow, scalar_left, scalar_right, trace
from .identities import (
    TraceConditionError,
    ck_sequence,
    lie_nilpotent_bracket,
    lie_solvable_bracket,
)
from .specparse import AlgebraSpecError, build_algebra, parse_algebra_spec
from .verify import (
    VerifyReport,
    Witness,
    WitnessPool,
    probe_question,
    search_witness,
    verify_generic,
    verify_thm21_hypotheses,
)

__all__ = [
    "__version__",
    "Polynomial",
    "Rational",
    "VarAllocator",
    "poly_add",
    "poly_mul",
    "rat",
    "BudgetExceededError",
    "DimensionBoundError",
    "RingDescriptor",
    "RingElement",
    "RingMismatchError",
    "commutator",
    "elem_mul",
    "generic_element",
    "make_full",
    "make_grassmann",
    "make_rat",
    "make_u3star",
    "u3star_commutator_parts",
    "u3star_embed_oracle",
    "Mat2",
    "mat_mul",
    "mat_pow",
    "scalar_left",
    "scalar_right",
    "trace",
    "TraceConditionError",
    "ck_sequence",
    "lie_nilpotent_bracket",
    "lie_solvable_bracket",
    "AlgebraSpecError",
    "build_algebra",
    "parse_algebra_spec",
    "VerifyReport",
    "Witness",
    "WitnessPool",
    "probe_question",
    "search_witness",
    "verify_generic",
    "verify_thm21_hypotheses",
]
