"""Linear partial differential operators: the ring K[D].

An :class:`Lpdo` is a sparse map from multi-indices J to coefficients a_J,
representing sum a_J D^J with the coefficient written on the left.
"""

from __future__ import annotations

from math import comb, inf
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import ZeroGauge, ZeroOperator
from .field import ONE, ZERO, FieldElement
from .symbols import MultiIndex, SymbolPoly, _format_term

NEG_INF = -inf


def _sub_indices(j: MultiIndex):
    """All I <= J componentwise, with the multinomial weight prod C(j_k, i_k)."""
    out = [((), 1)]
    for jk in j:
        out = [(i + (ik,), w * comb(jk, ik)) for i, w in out for ik in range(jk + 1)]
    return out


class Lpdo:
    __slots__ = ("n", "coeffs")

    def __init__(self, coeffs: Mapping[MultiIndex, object], n: int):
        clean: Dict[MultiIndex, FieldElement] = {}
        for idx, c in coeffs.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != n or any(i < 0 for i in idx):
                raise ValueError(f"bad multi-index {idx} for dimension {n}")
            c = FieldElement.coerce(c)
            if c:
                clean[idx] = c
        self.n = n
        self.coeffs = clean

    @classmethod
    def _raw(cls, coeffs: Dict[MultiIndex, FieldElement], n: int) -> "Lpdo":
        obj = cls.__new__(cls)
        obj.n = n
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, n: int) -> "Lpdo":
        return cls._raw({}, n)

    @classmethod
    def scalar(cls, c, n: int) -> "Lpdo":
        c = FieldElement.coerce(c)
        return cls._raw({(0,) * n: c} if c else {}, n)

    @classmethod
    def d(cls, i: int, n: int, power: int = 1) -> "Lpdo":
        """The operator D_i^power."""
        idx = [0] * n
        idx[i - 1] = power
        return cls._raw({tuple(idx): ONE}, n)

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> Union[int, float]:
        return order(self)

    def coeff(self, idx: MultiIndex) -> FieldElement:
        return self.coeffs.get(tuple(idx), ZERO)

    def terms(self) -> list:
        """(multi-index, coefficient) pairs, graded-lex descending."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def _check(self, other: "Lpdo") -> None:
        if self.n != other.n:
            raise ValueError("operators live in different dimensions")

    def __add__(self, other) -> "Lpdo":
        if not isinstance(other, Lpdo):
            other = Lpdo.scalar(other, self.n)
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "Lpdo":
        if not isinstance(other, Lpdo):
            other = Lpdo.scalar(other, self.n)
        return subtract(self, other)

    def __rsub__(self, other) -> "Lpdo":
        return Lpdo.scalar(other, self.n) - self

    def __neg__(self) -> "Lpdo":
        return Lpdo._raw({k: -v for k, v in self.coeffs.items()}, self.n)

    def __mul__(self, other) -> "Lpdo":
        """Composition; plain coefficients act as order-0 operators."""
        if not isinstance(other, Lpdo):
            other = Lpdo.scalar(other, self.n)
        return compose(self, other)

    def __rmul__(self, other) -> "Lpdo":
        return compose(Lpdo.scalar(other, self.n), self)

    def __pow__(self, k: int) -> "Lpdo":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Lpdo.scalar(ONE, self.n)
        for _ in range(k):
            out = compose(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lpdo):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"Lpdo({str(self)!r}, n={self.n})"

    def __str__(self) -> str:
        return format_operator(self)


def d_name(i: int) -> str:
    return ("Dx", "Dy", "Dz")[i - 1] if i <= 3 else f"D{i}"


def format_operator(L: Lpdo) -> str:
    if L.is_zero():
        return "0"
    pieces = []
    for idx, c in L.terms():
        mono = "*".join(d_name(i + 1) if k == 1 else f"{d_name(i + 1)}^{k}" for i, k in enumerate(idx) if k)
        pieces.append(_format_term(c, mono, first=not pieces))
    return "".join(pieces)


def order(L: Lpdo) -> Union[int, float]:
    """Highest |J| among stored terms; -inf for the zero operator."""
    if not L.coeffs:
        return NEG_INF
    return max(sum(idx) for idx in L.coeffs)


def component(L: Lpdo, i: int) -> Lpdo:
    if i < 0:
        raise ValueError("component index must be nonnegative")
    return Lpdo._raw({k: v for k, v in L.coeffs.items() if sum(k) == i}, L.n)


def truncate_below(L: Lpdo, i: int) -> Lpdo:
    """Keep only the components of order >= i."""
    return Lpdo._raw({k: v for k, v in L.coeffs.items() if sum(k) >= i}, L.n)


def add(a: Lpdo, b: Lpdo) -> Lpdo:
    a._check(b)
    out = dict(a.coeffs)
    for k, v in b.coeffs.items():
        s = out[k] + v if k in out else v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return Lpdo._raw(out, a.n)


def subtract(a: Lpdo, b: Lpdo) -> Lpdo:
    return add(a, -b)


def compose(a: Lpdo, b: Lpdo) -> Lpdo:
    """The product a o b, expanding D^J o c by the higher Leibniz rule."""
    a._check(b)
    n = a.n
    out: Dict[MultiIndex, FieldElement] = {}
    derivs: Dict[Tuple[MultiIndex, MultiIndex], FieldElement] = {}

    def deriv(kidx: MultiIndex, m: MultiIndex) -> FieldElement:
        key = (kidx, m)
        v = derivs.get(key)
        if v is None:
            if not any(m):
                v = b.coeffs[kidx]
            else:
                # one step down from a cached lower derivative
                pos = next(p for p, e in enumerate(m) if e)
                lower = m[:pos] + (m[pos] - 1,) + m[pos + 1:]
                v = deriv(kidx, lower).derive(pos + 1)
            derivs[key] = v
        return v

    for j, aj in a.coeffs.items():
        subs = _sub_indices(j)
        for kidx in b.coeffs:
            for i, w in subs:
                m = tuple(jj - ii for jj, ii in zip(j, i))
                bk = deriv(kidx, m)
                if not bk:
                    continue
                term = aj * bk
                if w != 1:
                    term = term * w
                target = tuple(x + y for x, y in zip(i, kidx))
                s = out[target] + term if target in out else term
                if s:
                    out[target] = s
                else:
                    out.pop(target, None)
    return Lpdo._raw(out, n)


def compose_all(ops: Iterable[Lpdo], n: int) -> Lpdo:
    out = None
    for op in ops:
        out = op if out is None else compose(out, op)
    return out if out is not None else Lpdo.scalar(ONE, n)


def symbol(L: Lpdo) -> SymbolPoly:
    if L.is_zero():
        raise ZeroOperator("the zero operator has no symbol")
    d = order(L)
    return SymbolPoly({k: v for k, v in L.coeffs.items() if sum(k) == d}, L.n, d)


def component_symbol(L: Lpdo, i: int) -> SymbolPoly:
    """The i-th homogeneous component read as a symbol polynomial (zero allowed)."""
    return SymbolPoly({k: v for k, v in L.coeffs.items() if sum(k) == i}, L.n, i)


def from_symbol(s: SymbolPoly) -> Lpdo:
    """The hat operator: substitute D_i for X_i."""
    return Lpdo._raw(dict(s.coeffs), s.n)


def gauge(L: Lpdo, g) -> Lpdo:
    """g^{-1} o L o g."""
    g = FieldElement.coerce(g)
    if g.is_zero():
        raise ZeroGauge("gauge transformation by zero")
    return compose(Lpdo.scalar(g.invert(), L.n), compose(L, Lpdo.scalar(g, L.n)))
