"""Exact Hilbert/Sally machinery for m-primary ideals in polynomial rings."""

from .classify import ClassificationReport, classify
from .closure import (
    MonomialIdeal,
    closure_oracle,
    integral_closure,
    monomial_power,
    normal_power,
    np_member,
)
from .filtration import Filtration, check_admissible, filtration_ideal
from .groebner import (
    GroebnerBasis,
    buchberger,
    colength,
    is_member,
    normal_form,
)
from .hilbert import (
    HilbertData,
    build_hilbert_data,
    gring_series_numerator,
    hilbert_coefficients,
    hilbert_function,
)
from .ideals import (
    Ideal,
    ideal_contains,
    ideal_equal,
    ideal_intersection,
    ideal_power,
    ideal_product,
    ideal_sum,
    intersection_colength,
    quotient_length,
)
from .poly import (
    BlockElimination,
    GradedReverseLex,
    Lexicographic,
    Polynomial,
    Ring,
    compare,
    parse_polynomial,
)
from .reduction import (
    ReductionData,
    SallyTable,
    check_itoh,
    find_minimal_reduction,
    sally_lengths,
    valabrega_valla,
)

__all__ = [
    "BlockElimination",
    "ClassificationReport",
    "Filtration",
    "GradedReverseLex",
    "GroebnerBasis",
    "HilbertData",
    "Ideal",
    "Lexicographic",
    "MonomialIdeal",
    "Polynomial",
    "ReductionData",
    "Ring",
    "SallyTable",
    "buchberger",
    "build_hilbert_data",
    "check_admissible",
    "check_itoh",
    "classify",
    "closure_oracle",
    "colength",
    "compare",
    "filtration_ideal",
    "find_minimal_reduction",
    "gring_series_numerator",
    "hilbert_coefficients",
    "hilbert_function",
    "ideal_contains",
    "ideal_equal",
    "ideal_intersection",
    "ideal_power",
    "ideal_product",
    "ideal_sum",
    "integral_closure",
    "intersection_colength",
    "is_member",
    "monomial_power",
    "normal_form",
    "normal_power",
    "np_member",
    "parse_polynomial",
    "quotient_length",
    "sally_lengths",
    "valabrega_valla",
]
