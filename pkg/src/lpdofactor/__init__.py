"""Exact factorization of linear partial differential operators by descent."""

from .closed_forms import (
    Order2Coeffs,
    Order3Coeffs,
    TwoFactorCase,
    factorable2_condition,
    laplace_invariants,
    obstacle3_three_factor,
    obstacle3_two_factor,
)
from .engine import (
    NON_UNIQUE_RANGE,
    Decomposition,
    DecompositionSystem,
    ObstacleResult,
    PartialFactorization,
    codimension,
    decomposition_system,
    extend,
    factor,
    factor_two_noncoprime,
    kernel_dimension,
    obstacle_class,
    solve_decomposition,
    system_counts,
)
from .errors import *  # noqa: F401,F403
from .field import ONE, ZERO, DiffPolynomial, FieldElement, Session
from .operators import (
    Lpdo,
    component,
    compose,
    compose_all,
    from_symbol,
    gauge,
    order,
    subtract,
    symbol,
)
from .parsing import parse_field, parse_operator, parse_symbol, parse_type
from .symbols import (
    FactorizationType,
    SymbolPoly,
    coprime,
    factor_constant_form,
    format_symbol,
    gcd2,
    multiply,
    pairwise_coprime,
    similar,
)

__version__ = "0.1.0"
