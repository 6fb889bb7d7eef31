import random

import pytest

from gen import LINEAR_FORMS, X, Y
from lpdofactor import (
    FactorizationType,
    Session,
    SymbolPoly,
    factor_constant_form,
    gcd2,
    multiply,
    pairwise_coprime,
    parse_symbol,
    parse_type,
    similar,
)
from lpdofactor.errors import NonConstantCoefficients, UnsupportedDimension
from lpdofactor.symbols import divmod_symbol, product


def sym(text, s=None):
    return parse_symbol(text, s or Session(2))


def test_multiply_examples(s2):
    assert multiply(sym("X"), sym("Y")) == sym("XY")
    assert product([sym("X"), sym("X + x*Y", s2), sym("X")], 2) == sym("X^3 + x*X^2*Y", s2)
    assert multiply(sym("X"), SymbolPoly.zero(2, 2)).is_zero()


def test_gcd2_examples(s2):
    assert gcd2(sym("X"), sym("X*(X + x*Y)", s2)) == sym("X")
    one = gcd2(sym("X"), sym("Y"))
    assert one.degree == 0 and one == SymbolPoly.constant(1, 2)
    assert gcd2(sym("XY"), sym("Y^2")) == sym("Y")


def test_gcd2_is_monic_in_x():
    g = gcd2(sym("2*X^2 - 2*X*Y"), sym("3*X*Y - 3*Y^2"))
    assert g == sym("X - Y")


def test_gcd2_rejects_other_dimensions():
    s3 = Session(3)
    with pytest.raises(UnsupportedDimension):
        gcd2(parse_symbol("X", s3), parse_symbol("Z", s3))


def test_gcd2_divides_and_is_greatest():
    rng = random.Random(3)
    s = Session(2)
    s.declare("a")
    a = s.function("a")
    x = s.var("x")
    for _ in range(20):
        forms = rng.sample(LINEAR_FORMS + [X + Y * a, X * x - Y], 5)
        common = product(forms[:rng.randint(0, 2)], 2)
        A = multiply(common, product(forms[2:3], 2))
        B = multiply(common, product(forms[3:5], 2))
        g = gcd2(A, B)
        for P in (A, B):
            _, rem = divmod_symbol(P, g)
            assert rem.is_zero()
        _, rem = divmod_symbol(g, common)
        assert rem.is_zero()
        assert g.degree == common.degree


def test_pairwise_coprime_examples(s2):
    assert pairwise_coprime(parse_type("(X)(Y)(X+Y)", s2))
    assert not pairwise_coprime(parse_type("(X)(X*(X + x*Y))", s2))
    assert pairwise_coprime(FactorizationType([sym("X"), SymbolPoly.constant(1, 2)]))


def test_factor_constant_form_examples():
    assert factor_constant_form(sym("X^2 Y + X Y^2")) == [sym("X"), sym("Y"), sym("X+Y")]
    assert factor_constant_form(sym("X^2 + Y^2")) == [sym("X^2+Y^2")]
    assert factor_constant_form(sym("X^3")) == [sym("X")] * 3


def test_factor_constant_form_product_and_errors(s2):
    rng = random.Random(9)
    for _ in range(15):
        S = product(rng.sample(LINEAR_FORMS + [X * X + Y * Y], 3), 2) * rng.randint(1, 5)
        assert product(factor_constant_form(S), 2) == S
    with pytest.raises(NonConstantCoefficients):
        factor_constant_form(sym("X + x*Y", s2))


def test_similar_examples():
    s = Session(2)
    assert similar(parse_type("(X)(Y)", s), parse_type("(2X)(Y/2)", s))
    assert not similar(parse_type("(X)(Y)", s), parse_type("(2X)(Y)", s))
    assert similar(parse_type("(X)(Y)(X+Y)", s), parse_type("(3X)(Y/3)(X+Y)", s))
    assert not similar(parse_type("(X)(Y)", s), parse_type("(Y)(X)", s))


def test_type_order_matters():
    s = Session(2)
    assert parse_type("(X)(Y)", s) != parse_type("(Y)(X)", s)
    assert parse_type("(X)(Y)", s).symbol() == parse_type("(Y)(X)", s).symbol()


def test_homogeneity_enforced():
    with pytest.raises(ValueError):
        SymbolPoly({(1, 0): 1, (0, 0): 1}, 2)
