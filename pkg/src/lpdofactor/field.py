"""The differential coefficient field K.

Elements are reduced fractions of polynomials over Q whose indeterminates are
the base variables x, y, ... and the jets (formal partial derivatives) of
opaque function symbols.  The derivations act on base variables as
d_i x_j = delta_ij and on a jet by shifting its multi-index, unless the
function symbol was declared independent of that variable, in which case the
derivative is zero.

Numerator and denominator are kept coprime (gcd via sympy's sparse
polynomial rings) and the denominator is made monic with respect to a fixed
total order on monomials, so equal elements have identical representations.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, NamedTuple, Optional, Tuple, Union

from gmpy2 import mpq
from sympy import QQ, lex
from sympy.polys.rings import PolyRing

from .errors import ZeroInversion

BASE_NAMES = ("x", "y", "z")


class Var(NamedTuple):
    """An indeterminate of K: a base variable (kind 0) or a jet (kind 1).

    The tuple layout doubles as the canonical variable order: base variables
    by index, then jets by name and multi-index.
    """

    kind: int
    index: int
    name: str
    jet: Tuple[int, ...]
    deps: Tuple[bool, ...]


def base_var(index: int) -> Var:
    if index < 1:
        raise ValueError("base variables are numbered from 1")
    return Var(0, index, "", (), ())


def jet_var(name: str, jet: Iterable[int], deps: Iterable[bool]) -> Var:
    jet = tuple(int(j) for j in jet)
    deps = tuple(bool(d) for d in deps)
    if len(jet) != len(deps):
        raise ValueError("jet multi-index and dependency mask differ in length")
    if any(j < 0 for j in jet):
        raise ValueError("negative derivative order")
    return Var(1, 0, name, jet, deps)


def base_name(index: int) -> str:
    return BASE_NAMES[index - 1] if index <= len(BASE_NAMES) else f"x{index}"


def var_name(v: Var) -> str:
    if v.kind == 0:
        return base_name(v.index)
    suffix = "".join(base_name(i + 1) * k for i, k in enumerate(v.jet))
    return f"{v.name}_{suffix}" if suffix else v.name


# A monomial is a tuple of (Var, exponent) pairs sorted by Var.
Monomial = Tuple[Tuple[Var, int], ...]
Terms = Dict[Monomial, mpq]

_ZERO = mpq(0)
_ONE_MONO: Monomial = ()


@lru_cache(maxsize=1 << 16)
def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    return (_mono_degree(m), m)


def _derive_var(v: Var, i: int) -> Optional[Var]:
    """d_i v as a variable, or None when the derivative is a constant."""
    if v.kind != 1 or i > len(v.jet) or not v.deps[i - 1]:
        return None
    jet = list(v.jet)
    jet[i - 1] += 1
    return v._replace(jet=tuple(jet))


class DiffPolynomial:
    """Sparse polynomial over Q in base variables and jets.

    ``terms`` maps monomials to nonzero rationals and must not be mutated.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Terms] = None):
        self.terms = terms if terms is not None else {}
        self._hash = None

    @classmethod
    def constant(cls, c) -> "DiffPolynomial":
        c = mpq(c)
        return cls({_ONE_MONO: c} if c else {})

    @classmethod
    def variable(cls, v: Var) -> "DiffPolynomial":
        return cls({((v, 1),): mpq(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(_ONE_MONO) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ONE_MONO in self.terms)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def leading(self) -> Tuple[Monomial, mpq]:
        m = max(self.terms, key=_mono_key)
        return m, self.terms[m]

    def __add__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        return DiffPolynomial(_padd(self.terms, other.terms, 1))

    def __sub__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        return DiffPolynomial(_padd(self.terms, other.terms, -1))

    def __neg__(self) -> "DiffPolynomial":
        return DiffPolynomial({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "DiffPolynomial") -> "DiffPolynomial":
        return DiffPolynomial(_pmul(self.terms, other.terms))

    def scale(self, c) -> "DiffPolynomial":
        return DiffPolynomial(_pscale(self.terms, mpq(c)))

    def derive(self, i: int) -> "DiffPolynomial":
        return DiffPolynomial(_pderive(self.terms, i))

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"DiffPolynomial({_format_poly(self.terms)!r})"

    def __str__(self) -> str:
        return _format_poly(self.terms)


def _padd(p: Terms, q: Terms, sign: int) -> Terms:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, _ZERO) + (c if sign > 0 else -c)
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pscale(p: Terms, c: mpq) -> Terms:
    if not c:
        return {}
    return {m: a * c for m, a in p.items()}


def _pmul(p: Terms, q: Terms) -> Terms:
    if not p or not q:
        return {}
    if len(p) > len(q):
        p, q = q, p
    out: Terms = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            s = out.get(m, _ZERO) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _pderive(p: Terms, i: int) -> Terms:
    out: Terms = {}
    for m, c in p.items():
        for pos, (v, e) in enumerate(m):
            if v.kind == 0:
                if v.index != i:
                    continue
                dv = None
            else:
                dv = _derive_var(v, i)
                if dv is None:
                    continue
            rest = m[:pos] + (((v, e - 1),) if e > 1 else ()) + m[pos + 1:]
            if dv is not None:
                rest = _mono_mul(rest, ((dv, 1),))
            s = out.get(rest, _ZERO) + c * e
            if s:
                out[rest] = s
            else:
                out.pop(rest, None)
    return out


# -- gcd bridge ------------------------------------------------------------

_RINGS: Dict[int, PolyRing] = {}


def _ring(k: int) -> PolyRing:
    r = _RINGS.get(k)
    if r is None:
        r = _RINGS[k] = PolyRing([f"_v{i}" for i in range(k)], QQ, lex)
    return r


def _cofactors(p: Terms, q: Terms) -> Tuple[Terms, Terms, Terms]:
    """Return (g, p/g, q/g) with g a gcd of p and q (p, q nonzero)."""
    one = {_ONE_MONO: mpq(1)}
    pv = {v for m in p for v, _ in m}
    qv = {v for m in q for v, _ in m}
    common = pv & qv
    if not common:
        return one, p, q
    vs = sorted(pv | qv)
    pos = {v: i for i, v in enumerate(vs)}
    ring = _ring(len(vs))

    def to_ring(t: Terms):
        d = {}
        for m, c in t.items():
            e = [0] * len(vs)
            for v, x in m:
                e[pos[v]] = x
            d[tuple(e)] = c
        return ring.from_dict(d)

    def from_ring(r) -> Terms:
        out = {}
        for e, c in r.items():
            out[tuple((vs[i], x) for i, x in enumerate(e) if x)] = mpq(c)
        return out

    g, a, b = to_ring(p).cofactors(to_ring(q))
    return from_ring(g), from_ring(a), from_ring(b)


def _normalize(num: Terms, den: Terms) -> Tuple[Terms, Terms]:
    """Scale so the denominator's leading coefficient is 1."""
    lc = den[max(den, key=_mono_key)]
    if lc == 1:
        return num, den
    inv = 1 / lc
    return _pscale(num, inv), _pscale(den, inv)


def _cancel(num: Terms, den: Terms) -> Tuple[Terms, Terms]:
    if not den:
        raise ZeroInversion("zero denominator")
    if not num:
        return {}, {_ONE_MONO: mpq(1)}
    if len(den) == 1 and _ONE_MONO in den:
        return _normalize(num, den)
    _, num, den = _cofactors(num, den)
    return _normalize(num, den)


Coercible = Union["FieldElement", int, Fraction, mpq]


class FieldElement:
    """An element of K stored as a canonical reduced fraction."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num=0, den=1):
        num_t = _as_terms(num)
        den_t = _as_terms(den)
        if not den_t:
            raise ZeroInversion("zero denominator")
        self._num, self._den = _cancel(num_t, den_t)
        self._hash = None

    @classmethod
    def _raw(cls, num: Terms, den: Terms) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._num = num
        obj._den = den
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Coercible) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, DiffPolynomial):
            return cls._raw(value.terms, dict(_ONE_TERMS))
        if isinstance(value, (int, Fraction)) or type(value).__name__ == "mpq":
            c = mpq(value)
            return cls._raw({_ONE_MONO: c} if c else {}, dict(_ONE_TERMS))
        raise TypeError(f"cannot coerce {type(value).__name__} to FieldElement")

    @classmethod
    def from_var(cls, v: Var) -> "FieldElement":
        return cls._raw({((v, 1),): mpq(1)}, dict(_ONE_TERMS))

    @property
    def numerator(self) -> DiffPolynomial:
        return DiffPolynomial(self._num)

    @property
    def denominator(self) -> DiffPolynomial:
        return DiffPolynomial(self._den)

    def is_zero(self) -> bool:
        return not self._num

    def is_polynomial(self) -> bool:
        return _is_one(self._den)

    def is_rational(self) -> bool:
        """True when the element is a constant in Q."""
        return _is_one(self._den) and (not self._num or (len(self._num) == 1 and _ONE_MONO in self._num))

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        c = self._num.get(_ONE_MONO, _ZERO)
        return Fraction(int(c.numerator), int(c.denominator))

    def variables(self) -> set:
        return {v for t in (self._num, self._den) for m in t for v, _ in m}

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: Coercible) -> "FieldElement":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other: Coercible) -> "FieldElement":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(self, other, -1)

    def __rsub__(self, other: Coercible) -> "FieldElement":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(other, self, -1)

    def __neg__(self) -> "FieldElement":
        return FieldElement._raw({m: -c for m, c in self._num.items()}, self._den)

    def __mul__(self, other: Coercible) -> "FieldElement":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: Coercible) -> "FieldElement":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _mul(self, other.invert())

    def __rtruediv__(self, other: Coercible) -> "FieldElement":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _mul(other, self.invert())

    def __pow__(self, k: int) -> "FieldElement":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.invert()
        result = ONE
        for _ in range(abs(k)):
            result = result * base
        return result

    def invert(self) -> "FieldElement":
        if not self._num:
            raise ZeroInversion("cannot invert zero")
        num, den = _normalize(self._den, self._num)
        return FieldElement._raw(num, den)

    def derive(self, i: int) -> "FieldElement":
        """Partial derivative along the i-th base variable (1-based)."""
        dnum = _pderive(self._num, i)
        if _is_one(self._den):
            return FieldElement._raw(dnum, self._den)
        dden = _pderive(self._den, i)
        if not dden:
            return FieldElement._raw(*_cancel(dnum, self._den))
        num = _padd(_pmul(dnum, self._den), _pmul(self._num, dden), -1)
        return FieldElement._raw(*_cancel(num, _pmul(self._den, self._den)))

    def derive_multi(self, index: Iterable[int]) -> "FieldElement":
        out = self
        for i, k in enumerate(index, start=1):
            for _ in range(k):
                out = out.derive(i)
        return out

    # comparison / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._num.items()), frozenset(self._den.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._num)

    def __repr__(self) -> str:
        return f"FieldElement({str(self)!r})"

    def __str__(self) -> str:
        num = _format_poly(self._num)
        if _is_one(self._den):
            return num
        den = _format_poly(self._den)
        if len(self._den) > 1 or any(ch in den for ch in "*/"):
            den = f"({den})"
        if len(self._num) > 1 or "/" in num:
            num = f"({num})"
        return f"{num}/{den}"

    def term_count(self) -> int:
        return len(self._num)


_ONE_TERMS: Terms = {_ONE_MONO: mpq(1)}


def _is_one(t: Terms) -> bool:
    return len(t) == 1 and t.get(_ONE_MONO) == 1


def _as_terms(value) -> Terms:
    if isinstance(value, DiffPolynomial):
        return value.terms
    if isinstance(value, FieldElement):
        if not _is_one(value._den):
            raise TypeError("expected a polynomial, got a fraction")
        return value._num
    c = mpq(value)
    return {_ONE_MONO: c} if c else {}


def _coerce_or_none(value) -> Optional[FieldElement]:
    try:
        return FieldElement.coerce(value)
    except TypeError:
        return None


def _add(a: FieldElement, b: FieldElement, sign: int) -> FieldElement:
    if not b._num:
        return a
    if not a._num:
        return b if sign > 0 else -b
    if _is_one(a._den) and _is_one(b._den):
        return FieldElement._raw(_padd(a._num, b._num, sign), a._den)
    if a._den == b._den:
        return FieldElement._raw(*_cancel(_padd(a._num, b._num, sign), a._den))
    if _is_one(b._den):
        return FieldElement._raw(_padd(a._num, _pmul(b._num, a._den), sign), a._den)
    if _is_one(a._den):
        return FieldElement._raw(_padd(_pmul(a._num, b._den), b._num, sign), b._den)
    g, bd, dd = _cofactors(a._den, b._den)
    num = _padd(_pmul(a._num, dd), _pmul(b._num, bd), sign)
    den = _pmul(a._den, dd)
    if _is_one(g):
        # gcd(b, d) = 1 already makes the sum reduced
        return FieldElement._raw(*_normalize(num, den)) if num else ZERO
    return FieldElement._raw(*_cancel(num, den))


def _mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if not a._num or not b._num:
        return ZERO
    an, ad, bn, bd = a._num, a._den, b._num, b._den
    if _is_one(ad) and _is_one(bd):
        return FieldElement._raw(_pmul(an, bn), ad)
    if not _is_one(bd):
        _, an, bd = _cofactors(an, bd)
    if not _is_one(ad):
        _, bn, ad = _cofactors(bn, ad)
    return FieldElement._raw(*_normalize(_pmul(an, bn), _pmul(ad, bd)))


ZERO = FieldElement._raw({}, dict(_ONE_TERMS))
ONE = FieldElement._raw(dict(_ONE_TERMS), dict(_ONE_TERMS))


def _format_rational(c: mpq) -> str:
    return str(int(c.numerator)) if c.denominator == 1 else f"{int(c.numerator)}/{int(c.denominator)}"


def _format_mono(m: Monomial) -> str:
    parts = []
    for v, e in m:
        name = var_name(v)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _format_poly(t: Terms) -> str:
    if not t:
        return "0"
    pieces = []
    for m in sorted(t, key=_mono_key, reverse=True):
        c = t[m]
        neg = c < 0
        a = -c if neg else c
        mono = _format_mono(m)
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


# -- module-level operations ---------------------------------------------


def add(a: Coercible, b: Coercible) -> FieldElement:
    return FieldElement.coerce(a) + FieldElement.coerce(b)


def mul(a: Coercible, b: Coercible) -> FieldElement:
    return FieldElement.coerce(a) * FieldElement.coerce(b)


def invert(a: Coercible) -> FieldElement:
    return FieldElement.coerce(a).invert()


def derive(a: Coercible, v: int) -> FieldElement:
    return FieldElement.coerce(a).derive(v)


def is_zero(a: Coercible) -> bool:
    return FieldElement.coerce(a).is_zero()


class Session:
    """Ambient dimension plus the table of declared function symbols.

    Function symbols carry a dependency mask; derivatives along variables
    outside the mask vanish.
    """

    def __init__(self, n: int = 2, functions: Optional[Dict[str, Iterable]] = None, auto_declare: bool = False):
        if n < 1:
            raise ValueError("dimension must be positive")
        self.n = n
        # parsers declare unknown identifiers as depending on every variable
        self.auto_declare = auto_declare
        self.functions: Dict[str, Tuple[bool, ...]] = {}
        for name, deps in (functions or {}).items():
            self.declare(name, deps)

    def declare(self, name: str, deps=None) -> FieldElement:
        """Declare ``name`` depending on ``deps`` (indices, names, or None for all)."""
        if not name.isidentifier() or "_" in name:
            raise ValueError(f"invalid function symbol name {name!r}")
        if name in BASE_NAMES[: self.n]:
            raise ValueError(f"{name!r} is a base variable")
        mask = self._mask(deps)
        old = self.functions.get(name)
        if old is not None and old != mask:
            raise ValueError(f"{name!r} already declared with a different dependency mask")
        self.functions[name] = mask
        return self.function(name)

    def _mask(self, deps) -> Tuple[bool, ...]:
        if deps is None:
            return (True,) * self.n
        if isinstance(deps, str):
            deps = [d for d in deps.replace(",", " ").split()] if ("," in deps or " " in deps) else list(deps)
        mask = [False] * self.n
        for d in deps:
            if isinstance(d, bool):
                raise TypeError("dependency masks are given as variables, not booleans")
            idx = d if isinstance(d, int) else self.var_index(d)
            if not 1 <= idx <= self.n:
                raise ValueError(f"variable index {idx} outside dimension {self.n}")
            mask[idx - 1] = True
        return tuple(mask)

    def var_index(self, name: str) -> int:
        for i in range(1, self.n + 1):
            if base_name(i) == name:
                return i
        raise ValueError(f"unknown base variable {name!r} in dimension {self.n}")

    def var(self, index_or_name) -> FieldElement:
        idx = index_or_name if isinstance(index_or_name, int) else self.var_index(index_or_name)
        if not 1 <= idx <= self.n:
            raise ValueError(f"variable index {idx} outside dimension {self.n}")
        return FieldElement.from_var(base_var(idx))

    def vars(self) -> Tuple[FieldElement, ...]:
        return tuple(self.var(i) for i in range(1, self.n + 1))

    def function(self, name: str, jet: Optional[Iterable[int]] = None) -> FieldElement:
        mask = self.functions[name]
        jet = tuple(jet) if jet is not None else (0,) * self.n
        if len(jet) != self.n:
            raise ValueError("jet multi-index has the wrong length")
        if any(k and not m for k, m in zip(jet, mask)):
            return ZERO
        return FieldElement.from_var(jet_var(name, jet, mask))

    def functions_declared(self, *names: str, deps=None) -> Tuple[FieldElement, ...]:
        return tuple(self.declare(name, deps) for name in names)
