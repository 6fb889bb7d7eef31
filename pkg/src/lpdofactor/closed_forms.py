"""Explicit obstacle formulas for bivariate operators of orders two and three.

These are written out term by term and serve as independent oracles for the
generic descent in :mod:`lpdofactor.engine`.  Derivatives d/dx, d/dy are the
field derivations along the first and second base variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from .field import FieldElement
from .operators import Lpdo


def _dx(f: FieldElement) -> FieldElement:
    return f.derive(1)


def _dy(f: FieldElement) -> FieldElement:
    return f.derive(2)


@dataclass(frozen=True)
class Order2Coeffs:
    """L = Dx Dy + a Dx + b Dy + c."""

    a: FieldElement
    b: FieldElement
    c: FieldElement

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, FieldElement.coerce(getattr(self, name)))

    def operator(self) -> Lpdo:
        return Lpdo({(1, 1): 1, (1, 0): self.a, (0, 1): self.b, (0, 0): self.c}, 2)


@dataclass(frozen=True)
class Order3Coeffs:
    """Lower-order coefficients a20 Dxx + a11 Dxy + a02 Dyy + a10 Dx + a01 Dy + a00."""

    a20: FieldElement
    a11: FieldElement
    a02: FieldElement
    a10: FieldElement
    a01: FieldElement
    a00: FieldElement

    def __post_init__(self):
        for name in ("a20", "a11", "a02", "a10", "a01", "a00"):
            object.__setattr__(self, name, FieldElement.coerce(getattr(self, name)))

    def lower_part(self) -> Lpdo:
        return Lpdo(
            {
                (2, 0): self.a20,
                (1, 1): self.a11,
                (0, 2): self.a02,
                (1, 0): self.a10,
                (0, 1): self.a01,
                (0, 0): self.a00,
            },
            2,
        )


class TwoFactorCase(Enum):
    # symbol XY(X+Y), type (X)(YX+YY)
    X_THEN_YX_PLUS_YY = "X_then_YXplusYY"
    # symbol X^2 Y, type (Y)(XX)
    Y_THEN_XX = "Y_then_XX"


def laplace_invariants(c2: Order2Coeffs) -> Tuple[FieldElement, FieldElement]:
    """Obstacles of types (X)(Y) and (Y)(X): c - ab - a_x and c - ab - b_y."""
    a, b, c = c2.a, c2.b, c2.c
    return c - a * b - _dx(a), c - a * b - _dy(b)


def factorable2_condition(a10, a01, a00) -> FieldElement:
    """Vanishes iff D_1 D_2 + a10 D_1 + a01 D_2 + a00 factors as (X)(Y)."""
    a10, a01, a00 = (FieldElement.coerce(v) for v in (a10, a01, a00))
    return a00 - a10 * a01 - _dx(a10)


def obstacle3_two_factor(c3: Order3Coeffs, case: TwoFactorCase) -> Lpdo:
    a20, a11, a02 = c3.a20, c3.a11, c3.a02
    a10, a01, a00 = c3.a10, c3.a01, c3.a00
    case = TwoFactorCase(case)
    if case is TwoFactorCase.X_THEN_YX_PLUS_YY:
        dy_coeff = a02 * a02 - a11 * a02 + a01 + _dx(a02 - a11)
        free = (
            a00
            - a02 * a10
            + a02 * a02 * a20
            + 2 * a02 * _dx(a20)
            - _dx(a10)
            + a20 * _dx(a02)
            + _dx(_dx(a20))
        )
        return Lpdo({(0, 1): dy_coeff, (0, 0): free}, 2)
    dx_coeff = a10 - a20 * a11 - _dy(a11)
    free = (
        a00
        - a20 * a01
        + a20 * a20 * a02
        + 2 * a20 * _dy(a02)
        - _dy(a01)
        + a02 * _dy(a20)
        + _dy(_dy(a02))
    )
    return Lpdo({(1, 0): dx_coeff, (0, 0): free}, 2)


def obstacle3_three_factor(c3: Order3Coeffs) -> Lpdo:
    """Common obstacle of type (X)(Y)(X+Y) for symbol XY(X+Y)."""
    a20, a11, a02 = c3.a20, c3.a11, c3.a02
    a10, a01, a00 = c3.a10, c3.a01, c3.a00
    s2 = a20 - a11 + a02
    dx_coeff = a10 - a20 * a11 + a20 * a20 - _dx(a20) + _dy(s2)
    dy_coeff = a01 - a02 * a11 + a02 * a02 + _dx(-a11 + a02)
    free = a00 + a20 * a02 * s2 + s2 * _dx(a20) + (a20 * _dx(s2) + _dx(_dy(s2)) + a02 * _dy(s2))
    return Lpdo({(1, 0): dx_coeff, (0, 1): dy_coeff, (0, 0): free}, 2)
