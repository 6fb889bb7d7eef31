"""Homogeneous symbol polynomials over K and factorization types.

A :class:`SymbolPoly` lives in K[X_1, ..., X_n] and is homogeneous.  Monomials
are multi-indices; the canonical monomial order is graded lex with
X_1 > X_2 > ..., i.e. descending tuples within a degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from .errors import InvalidType, NonConstantCoefficients, UnsupportedDimension
from .field import ONE, ZERO, FieldElement

MultiIndex = Tuple[int, ...]
SYMBOL_NAMES = ("X", "Y", "Z")


def monomials(n: int, degree: int) -> List[MultiIndex]:
    """All degree-``degree`` multi-indices in ``n`` variables, graded-lex descending."""
    if degree < 0:
        return []
    if n == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(n - 1, degree - first):
            out.append((first,) + rest)
    return out


def _add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(i + j for i, j in zip(a, b))


class SymbolPoly:
    """Homogeneous polynomial in commuting symbol variables with K coefficients."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, coeffs: Mapping[MultiIndex, object], n: int, degree: Optional[int] = None):
        clean: Dict[MultiIndex, FieldElement] = {}
        for idx, c in coeffs.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != n:
                raise ValueError(f"multi-index {idx} does not have length {n}")
            c = FieldElement.coerce(c)
            if c:
                clean[idx] = c
        degrees = {sum(idx) for idx in clean}
        if len(degrees) > 1:
            raise ValueError(f"symbol is not homogeneous (degrees {sorted(degrees)})")
        if degrees:
            (actual,) = degrees
            if degree is not None and degree != actual:
                raise ValueError(f"declared degree {degree} but terms have degree {actual}")
            degree = actual
        elif degree is None:
            degree = 0
        self.n = n
        self.degree = degree
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int, degree: int = 0) -> "SymbolPoly":
        return cls({}, n, degree)

    @classmethod
    def constant(cls, c, n: int) -> "SymbolPoly":
        return cls({(0,) * n: c}, n, 0)

    @classmethod
    def variable(cls, i: int, n: int) -> "SymbolPoly":
        idx = [0] * n
        idx[i - 1] = 1
        return cls({tuple(idx): ONE}, n, 1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, idx: MultiIndex) -> FieldElement:
        return self.coeffs.get(tuple(idx), ZERO)

    def terms(self) -> List[Tuple[MultiIndex, FieldElement]]:
        """Terms in graded-lex descending order."""
        return sorted(self.coeffs.items(), reverse=True)

    def leading(self) -> Tuple[MultiIndex, FieldElement]:
        idx = max(self.coeffs)
        return idx, self.coeffs[idx]

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs.values())

    def _check(self, other: "SymbolPoly") -> None:
        if self.n != other.n:
            raise ValueError("symbols live in different dimensions")

    def __add__(self, other: "SymbolPoly") -> "SymbolPoly":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, ZERO) + c
        return SymbolPoly(out, self.n)

    def __neg__(self) -> "SymbolPoly":
        return SymbolPoly({i: -c for i, c in self.coeffs.items()}, self.n, self.degree)

    def __sub__(self, other: "SymbolPoly") -> "SymbolPoly":
        return self + (-other)

    def __mul__(self, other) -> "SymbolPoly":
        if not isinstance(other, SymbolPoly):
            c = FieldElement.coerce(other)
            return SymbolPoly({i: a * c for i, a in self.coeffs.items()}, self.n, self.degree)
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolPoly):
            return NotImplemented
        if self.n != other.n or self.coeffs != other.coeffs:
            return False
        return bool(self.coeffs) or self.degree == other.degree

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"SymbolPoly({str(self)!r}, n={self.n})"

    def __str__(self) -> str:
        return format_symbol(self)


def symbol_var_name(i: int) -> str:
    return SYMBOL_NAMES[i - 1] if i <= len(SYMBOL_NAMES) else f"X{i}"


def format_symbol(s: SymbolPoly) -> str:
    if s.is_zero():
        return "0"
    pieces = []
    for idx, c in s.terms():
        mono = "*".join(
            symbol_var_name(i + 1) if k == 1 else f"{symbol_var_name(i + 1)}^{k}"
            for i, k in enumerate(idx)
            if k
        )
        pieces.append(_format_term(c, mono, first=not pieces))
    return "".join(pieces)


def _format_term(c: FieldElement, mono: str, first: bool) -> str:
    """Shared by symbol and operator printing; ``mono`` may be empty."""
    text = str(c)
    single = c.term_count() == 1 and c.is_polynomial()
    # a bare coefficient never needs brackets: + and - associate to the left
    neg = (single or not mono) and text.startswith("-")
    if neg:
        text = text[1:]
    if not mono:
        body = text
    elif single and text == "1":
        body = mono
    elif single:
        body = f"{text}*{mono}"
    else:
        body = f"({text})*{mono}"
    if first:
        return f"-{body}" if neg else body
    return f" - {body}" if neg else f" + {body}"


def multiply(a: SymbolPoly, b: SymbolPoly) -> SymbolPoly:
    a._check(b)
    out: Dict[MultiIndex, FieldElement] = {}
    for i, ca in a.coeffs.items():
        for j, cb in b.coeffs.items():
            k = _add_index(i, j)
            out[k] = out.get(k, ZERO) + ca * cb
    return SymbolPoly(out, a.n, a.degree + b.degree)


def product(factors: Iterable[SymbolPoly], n: int) -> SymbolPoly:
    out = SymbolPoly.constant(ONE, n)
    for f in factors:
        out = multiply(out, f)
    return out


def divmod_symbol(a: SymbolPoly, b: SymbolPoly) -> Tuple[SymbolPoly, SymbolPoly]:
    """Multivariate division of ``a`` by ``b`` over K using graded-lex leading terms.

    For a single divisor the remainder vanishes exactly when ``b`` divides ``a``.
    """
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero symbol")
    lead_b, lc_b = b.leading()
    inv = lc_b.invert()
    q: Dict[MultiIndex, FieldElement] = {}
    rem: Dict[MultiIndex, FieldElement] = {}
    work = dict(a.coeffs)
    while work:
        idx = max(work)
        c = work.pop(idx)
        shift = tuple(i - j for i, j in zip(idx, lead_b))
        if all(s >= 0 for s in shift):
            f = c * inv
            q[shift] = q.get(shift, ZERO) + f
            for jdx, cb in b.coeffs.items():
                if jdx == lead_b:
                    continue
                k = _add_index(jdx, shift)
                v = work.get(k, ZERO) - f * cb
                if v:
                    work[k] = v
                else:
                    work.pop(k, None)
        else:
            rem[idx] = c
    qdeg = a.degree - b.degree
    return SymbolPoly(q, a.n, max(qdeg, 0) if not q else None), SymbolPoly(rem, a.n, a.degree)


# -- bivariate gcd ---------------------------------------------------------


def _require_bivariate(*polys: SymbolPoly) -> None:
    for p in polys:
        if p.n != 2:
            raise UnsupportedDimension(f"gcd/coprimality is implemented for n = 2 only (got n = {p.n})")


def _strip(s: SymbolPoly) -> Tuple[int, int, List[FieldElement]]:
    """Split s = X^a Y^b s' and dehomogenize s' at Y = 1 (coefficients by t-power)."""
    a = min(i for i, _ in s.coeffs)
    b = min(j for _, j in s.coeffs)
    deg = s.degree - a - b
    coeffs = [ZERO] * (deg + 1)
    for (i, j), c in s.coeffs.items():
        coeffs[i - a] = c
    return a, b, coeffs


def _trim(p: List[FieldElement]) -> List[FieldElement]:
    while p and p[-1].is_zero():
        p = p[:-1]
    return p


def _urem(a: List[FieldElement], b: List[FieldElement]) -> List[FieldElement]:
    """Remainder of univariate division; coefficient lists run low to high."""
    a = list(a)
    inv = b[-1].invert()
    db = len(b) - 1
    while a and len(a) - 1 >= db:
        f = a[-1] * inv
        shift = len(a) - 1 - db
        for k, cb in enumerate(b[:-1]):
            a[shift + k] = a[shift + k] - f * cb
        a = _trim(a[:-1])
    return a


def _ugcd(a: List[FieldElement], b: List[FieldElement]) -> List[FieldElement]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _urem(a, b)
    inv = a[-1].invert()
    return [c * inv for c in a]


def gcd2(a: SymbolPoly, b: SymbolPoly) -> SymbolPoly:
    """Greatest common divisor of two nonzero bivariate symbols, monic in X."""
    _require_bivariate(a, b)
    if a.is_zero() or b.is_zero():
        raise ValueError("gcd2 expects nonzero symbols")
    xa, ya, pa = _strip(a)
    xb, yb, pb = _strip(b)
    g = _ugcd(pa, pb)
    deg = len(g) - 1
    xs, ys = min(xa, xb), min(ya, yb)
    coeffs = {(i + xs, deg - i + ys): c for i, c in enumerate(g) if not c.is_zero()}
    out = SymbolPoly(coeffs, 2)
    _, lc = out.leading()
    return out * lc.invert()


def coprime(a: SymbolPoly, b: SymbolPoly) -> bool:
    return gcd2(a, b).degree == 0


@dataclass(frozen=True)
class FactorizationType:
    """Ordered symbol factors (S_1)(S_2)...(S_k) of a factorization."""

    factors: Tuple[SymbolPoly, ...]

    def __init__(self, factors: Sequence[SymbolPoly]):
        factors = tuple(factors)
        if not factors:
            raise InvalidType("a factorization type needs at least one factor")
        dims = {f.n for f in factors}
        if len(dims) != 1:
            raise InvalidType("factors live in different dimensions")
        object.__setattr__(self, "factors", factors)

    @property
    def n(self) -> int:
        return self.factors[0].n

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(f.degree for f in self.factors)

    @property
    def order(self) -> int:
        return sum(self.degrees)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def symbol(self) -> SymbolPoly:
        return product(self.factors, self.n)

    def cofactors(self) -> Tuple[SymbolPoly, ...]:
        """Sym/S_i for every i, formed as products of the other factors."""
        return tuple(
            product((f for j, f in enumerate(self.factors) if j != i), self.n)
            for i in range(len(self.factors))
        )

    def __str__(self) -> str:
        return "".join(f"({format_symbol(f)})" for f in self.factors)


def pairwise_coprime(t: FactorizationType) -> bool:
    _require_bivariate(*t.factors)
    return all(coprime(a, b) for a, b in combinations(t.factors, 2))


def similar(t1: FactorizationType, t2: FactorizationType) -> bool:
    """True iff t2 = (b_1 S_1)...(b_k S_k) for some b_i in K with b_1...b_k = 1."""
    if len(t1) != len(t2):
        raise InvalidType("similarity compares types of equal length")
    prod = ONE
    for s1, s2 in zip(t1, t2):
        if s1.n != s2.n or s1.degree != s2.degree or set(s1.coeffs) != set(s2.coeffs):
            return False
        if s1.is_zero():
            return False
        idx, c1 = s1.leading()
        b = s2.coeffs[idx] / c1
        if any(s2.coeffs[i] != b * c for i, c in s1.coeffs.items()):
            return False
        prod = prod * b
    return prod == ONE


def factor_constant_form(s: SymbolPoly) -> List[SymbolPoly]:
    """Split a bivariate symbol with rational coefficients into factors over Q.

    X and Y powers come first, then linear factors X - rY (sorted by root r),
    then the irreducible non-linear factors.  The leading constant is folded
    into the first factor.
    """
    _require_bivariate(s)
    if s.is_zero():
        raise ValueError("cannot factor the zero symbol")
    if not s.is_rational():
        raise NonConstantCoefficients("factor_constant_form needs rational coefficients")
    xa, yb, coeffs = _strip(s)
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.to_rational().numerator, c.to_rational().denominator)
                       for c in reversed(coeffs)], t, domain=sympy.QQ)
    lc, parts = poly.factor_list()
    for f, mult in parts:
        lc *= f.LC() ** mult
    out: List[SymbolPoly] = [SymbolPoly.variable(1, 2)] * xa + [SymbolPoly.variable(2, 2)] * yb
    linear, other = [], []
    for f, mult in parts:
        f = f.monic()
        if f.degree() == 1:
            root = -f.all_coeffs()[1]
            linear.extend([Fraction(int(root.p), int(root.q))] * mult)
        else:
            other.extend([f] * mult)
    for r in sorted(linear):
        out.append(SymbolPoly({(1, 0): 1, (0, 1): -r}, 2))
    other.sort(key=lambda f: (f.degree(), str(f.as_expr())))
    for f in other:
        cs = f.all_coeffs()
        deg = len(cs) - 1
        out.append(SymbolPoly({(deg - k, k): Fraction(int(c.p), int(c.q)) for k, c in enumerate(cs) if c}, 2))
    const = Fraction(int(sympy.Rational(lc).p), int(sympy.Rational(lc).q))
    if not out:
        return [SymbolPoly.constant(const, 2)]
    out[0] = out[0] * const
    return out
