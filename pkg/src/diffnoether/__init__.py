"""Exact differential polynomials, partial reduction and normalization of
prime differential ideals so that every choice of power series for the free
indeterminates extends to a solution."""

from .diffpoly import DerivTable, DerivVar, DiffPoly, derive, evaluate, order_wrt, separant_initial, substitute
from .domains import CC, QQ, QQt, RatFunc
from .errors import *  # noqa: F401,F403
from .pipeline import (
    ChangeOfVariables,
    PrimitiveElementResult,
    SamplingReport,
    extend_solution_time,
    normalize,
    normalize_hypersurface,
    normalize_time,
    primitive_element_search,
    verify_surjectivity_sample,
)
from .reduction import (
    ReductionCertificate,
    ResultantCertificate,
    partial_reduce,
    resultant_with_cofactors,
    saturation_membership,
    two_polynomials,
)
from .series import (
    ExtensionReport,
    TruncSeries,
    derivative_values_from_series,
    evaluate_on_series,
    extend_solution,
    series_add,
    series_derive,
    series_mul,
    taylor_series,
)
from .textio import format_diffpoly, parse_diffpoly
from .transforms import (
    Automorphism,
    ShiftSearchParams,
    compose,
    find_poly_shift,
    invert,
    is_manageable,
    make_high_order,
    make_manageable,
)

__version__ = "0.1.0"
