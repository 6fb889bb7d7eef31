import random

import pytest

import oracles as O
from gen import coprime_type, random_factors, random_operator_with_symbol
from lpdofactor import (
    NON_UNIQUE_RANGE,
    PartialFactorization,
    Session,
    SymbolPoly,
    codimension,
    compose_all,
    extend,
    factor,
    factor_two_noncoprime,
    kernel_dimension,
    obstacle_class,
    order,
    parse_field,
    parse_operator,
    parse_symbol,
    parse_type,
    solve_decomposition,
    symbol,
    system_counts,
)
from lpdofactor.engine import counts_for_degrees
from lpdofactor.errors import (
    DegreeOutOfRange,
    InvalidPartialFactorization,
    InvalidType,
    SeedOrderTooHigh,
    SymbolMismatch,
    SymbolsNotCoprime,
)
from lpdofactor.operators import truncate_below


# -- solver ----------------------------------------------------------------------


def test_solver_degree_out_of_range(s2):
    with pytest.raises(DegreeOutOfRange):
        solve_decomposition(parse_symbol("XY", s2), parse_type("(X)(Y)", s2), 2)


def test_solver_identity_system(laplace_session):
    s = laplace_session
    sol, residual = solve_decomposition(parse_symbol("a X + b Y", s), parse_type("(X)(Y)", s), 1)
    u, v = sol
    # cofactor of X is Y: u*Y + v*X
    assert u == SymbolPoly.constant(parse_field("b", s), 2)
    assert v == SymbolPoly.constant(parse_field("a", s), 2)
    assert residual.is_zero()


def test_solver_empty_system(laplace_session):
    s = laplace_session
    c = parse_symbol("c", s)
    sol, residual = solve_decomposition(c, parse_type("(X)(Y)", s), 0)
    assert all(A.is_zero() for A in sol)
    assert residual == c


def test_solver_residual_is_normal_form(s2):
    T = parse_type("(X)(Y)(X+Y)", s2)
    P = parse_symbol("3 X^2 + x XY - Y^2", s2)
    (A, B, C), residual = solve_decomposition(P, T, 2)
    recomposed = sum((cof * a for cof, a in zip(T.cofactors(), (A, B, C))), residual)
    assert recomposed == P
    assert kernel_dimension(T, 2) == 0


def test_solver_rejects_non_coprime_three_factors(s2):
    T = parse_type("(X)(X)(Y)", s2)
    with pytest.raises(SymbolsNotCoprime):
        solve_decomposition(parse_symbol("X^2", s2), T, 2)


# -- extension -------------------------------------------------------------------


def test_extend_example_order_four(s2):
    left, right = (parse_operator(t, s2) for t in O.EXTENSION_EXAMPLE)
    L = left * right
    T = parse_type("(X^2)(X^2 Y)", s2)
    seed = PartialFactorization([parse_operator("Dx^2", s2), parse_operator("Dx^2*Dy", s2)], 5)
    pf, residual = extend(L, seed, T)
    assert residual.is_zero()
    assert pf.order == 4
    assert order(L - pf.composition()) < 4
    # the listed factors are themselves an order-4 partial factorization
    listed = [parse_operator("Dx^2 + Dy", s2), parse_operator("Dx^2*Dy + Dx*Dy", s2)]
    assert order(L - compose_all(listed, 2)) < 4


def test_extend_exact_factorization_has_zero_residuals(s2):
    factors = [parse_operator("Dx + x", s2), parse_operator("Dy + y^2", s2)]
    L = compose_all(factors, 2)
    T = parse_type("(X)(Y)", s2)
    pf = PartialFactorization([parse_operator("Dx", s2), parse_operator("Dy", s2)], 2)
    while pf.order > 0:
        pf, residual = extend(L, pf, T)
        assert residual.is_zero()
    assert pf.composition() == L


def test_extend_second_order(laplace_session):
    s = laplace_session
    L = parse_operator(O.LAPLACE_OPERATOR, s)
    pf, residual = extend(L, PartialFactorization([parse_operator("Dx", s), parse_operator("Dy", s)], 2), parse_type("(X)(Y)", s))
    assert residual.is_zero() and pf.order == 1
    assert pf.factors == tuple(parse_operator(t, s) for t in O.LAPLACE_FACTORS)


def test_extend_rejects_invalid_partial_factorization(s2):
    L = parse_operator("Dx*Dy + Dx", s2)
    with pytest.raises(InvalidPartialFactorization):
        extend(L, PartialFactorization([parse_operator("Dx", s2), parse_operator("Dy", s2)], 1), parse_type("(X)(Y)", s2))


# -- factor ----------------------------------------------------------------------


def test_factor_laplace(laplace_session):
    s = laplace_session
    L = parse_operator(O.LAPLACE_OPERATOR, s)
    result = factor(L, parse_type("(X)(Y)", s))
    assert result.factors == tuple(parse_operator(t, s) for t in O.LAPLACE_FACTORS)
    assert result.obstacle == parse_operator(O.LAPLACE_XY, s)
    assert result.obstacle_order == 0
    assert not result.factored
    assert result.composition() + result.obstacle == L


def test_factor_round_trip_small(s2):
    rng = random.Random(17)
    for _ in range(5):
        T = coprime_type(rng, 2, 3)
        Fs = random_factors(rng, T)
        result = factor(compose_all(Fs, 2), T)
        assert result.factored and result.factors == tuple(Fs)


def test_factor_with_condition_enforced(laplace_session):
    s = laplace_session
    L = parse_operator("Dx*Dy + a*Dx + b*Dy + a*b + a_x", s)
    assert factor(L, parse_type("(X)(Y)", s)).factored


def test_factor_errors(s2):
    L = parse_operator("Dx*Dy", s2)
    with pytest.raises(SymbolMismatch):
        factor(L, parse_type("(X)(X)", s2))
    with pytest.raises(InvalidType):
        factor(L, parse_type("(XY)(1)", s2))
    L3 = parse_operator("Dx^2*Dy", s2)
    with pytest.raises(SymbolsNotCoprime):
        factor(L3, parse_type("(X)(X)(Y)", s2))


def test_factor_three_dimensional(s2):
    s3 = Session(3)
    Fs = [parse_operator("Dx + y*z", s3), parse_operator("Dy + x", s3), parse_operator("Dz - 1", s3)]
    result = factor(compose_all(Fs, 3), parse_type("(X)(Y)(Z)", s3))
    assert result.factored and result.factors == tuple(Fs)


# -- non-coprime two-factor mode --------------------------------------------------


def test_noncoprime_family_seed(family_session):
    s = family_session
    L = parse_operator(O.BL_OPERATOR, s)
    T = parse_type(O.BL_FAMILY_TYPE, s)
    family = [parse_operator(t, s) for t in O.BL_FAMILY]
    # d = 3, d0 = 1: the seed has order 2 and keeps F1 whole and F2 from order 1
    seed = PartialFactorization([truncate_below(family[0], 0), truncate_below(family[1], 1)], 2)
    result = factor_two_noncoprime(L, T, seed)
    assert result.factored
    assert result.factors == tuple(family)
    assert result.warnings == ()


def test_noncoprime_default_seed(s2):
    L = parse_operator(O.BL_OPERATOR, s2)
    T = parse_type("(X)(X^2 + x*X*Y)", s2)
    result = factor_two_noncoprime(L, T)
    assert result.composition() + result.obstacle == L
    assert any(w.startswith(NON_UNIQUE_RANGE) for w in result.warnings)
    assert factor(L, T).factors == result.factors


def test_noncoprime_seed_order_too_high(s2):
    L = parse_operator(O.BL_OPERATOR, s2)
    T = parse_type("(X)(X^2 + x*X*Y)", s2)
    seed = PartialFactorization([parse_operator("Dx", s2), parse_operator("Dx^2 + x*Dx*Dy", s2)], 3)
    with pytest.raises(SeedOrderTooHigh):
        factor_two_noncoprime(L, T, seed)
    result = factor_two_noncoprime(L, T, seed, allow_nonunique=True)
    assert result.composition() + result.obstacle == L


def test_noncoprime_with_coprime_type_matches_factor(laplace_session):
    s = laplace_session
    L = parse_operator(O.LAPLACE_OPERATOR, s)
    T = parse_type("(X)(Y)", s)
    a, b = factor(L, T), factor_two_noncoprime(L, T)
    assert (a.factors, a.obstacle, a.warnings) == (b.factors, b.obstacle, b.warnings)


def test_three_factor_family_recovered(s2):
    L = parse_operator(O.BL_OPERATOR, s2)
    T = parse_type("(X)(X)(X + x*Y)", s2)
    with pytest.raises(SymbolsNotCoprime):
        factor(L, T)


# -- obstacle class ---------------------------------------------------------------


def test_obstacle_class_examples(laplace_session, s2):
    s = laplace_session
    L = parse_operator(O.LAPLACE_OPERATOR, s)
    assert obstacle_class(L, parse_type("(X)(Y)", s)) == parse_symbol(O.LAPLACE_XY, s)
    assert obstacle_class(L, parse_type("(Y)(X)", s)) == parse_symbol(O.LAPLACE_YX, s)
    F = parse_operator("(Dx + x)*(Dy + 1)", s2)
    assert obstacle_class(F, parse_type("(X)(Y)", s2)).is_zero()


def test_exactness_and_symbol_of_obstacle(s2):
    rng = random.Random(23)
    for _ in range(10):
        T = coprime_type(rng, rng.choice((2, 3)))
        L = random_operator_with_symbol(rng, T.symbol())
        result = factor(L, T)
        assert compose_all(result.factors, 2) + result.obstacle == L
        for F, S in zip(result.factors, T.factors):
            assert symbol(F) == S
        if not result.factored:
            assert symbol(result.obstacle) == result.class_representative[0]
            assert len(result.class_representative) == result.obstacle_order + 1


# -- counting --------------------------------------------------------------------


@pytest.mark.parametrize("key,value", sorted(O.CODIMENSIONS.items()))
def test_codimension_examples(key, value):
    n, d, degrees = key
    assert codimension(n, d, list(degrees)) == value


def test_system_counts_examples(s2):
    assert system_counts(parse_type("(X)(Y)", s2), 1) == (2, 2)
    assert system_counts(parse_type("(X)(Y)(X+Y)", s2), 2) == (3, 3)
    T = parse_type("(X)(Y)(X+Y)", s2)
    assert sum(e - v for e, v in (system_counts(T, t) for t in range(3))) == codimension(2, 3, [1, 1, 1])
    with pytest.raises(DegreeOutOfRange):
        counts_for_degrees(2, [1, 1], 2)
    with pytest.raises(ValueError):
        codimension(2, 3, [1, 1])
