"""Text syntax for coefficients, operators, symbols and factorization types.

Grammar (shared by all three readings)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | factor
    factor := atom ('^' uint)?
    atom   := uint | name | '(' expr ')'

Names resolve to base variables (x, y, z), declared function symbols and
their jets (``a_x``, ``a_xxy``), derivations (``Dx``, ``Dy``, ``D1``, ...)
or symbol variables (``X``, ``Y``, ``X1``, ...), depending on what is being
parsed.  In operator expressions ``*`` is composition, so ``Dx*a`` means
a*Dx + a_x.  Symbol expressions additionally accept juxtaposition, as in
``YX + YY`` or ``2X``.
"""

from __future__ import annotations

import re
from typing import Dict, List, NamedTuple, Optional

from .errors import ParseError, UndeclaredSymbol
from .field import BASE_NAMES, ONE, ZERO, FieldElement, Session
from .operators import Lpdo, order
from .symbols import FactorizationType, MultiIndex, SymbolPoly

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z]+)?)|(?P<op>[-+*/^()])"
)
_DVAR = re.compile(r"^D(x|y|z|\d+)$")
_XVAR = re.compile(r"^(?:X(\d+)|[XYZ]+)$")


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for k, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


# AST nodes: (kind, token, *children)


class _Parser:
    def __init__(self, text: str, implicit_mul: bool = False):
        self.tokens = tokenize(text)
        self.i = 0
        self.implicit_mul = implicit_mul

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text or t.kind == "end":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {text!r}, found {found}", t.line, t.column)
        return self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "end"

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance()
            node = ("add" if op.text == "+" else "sub", op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.text in ("*", "/"):
                self.advance()
                node = ("mul" if t.text == "*" else "div", t, node, self.unary())
            elif self.implicit_mul and (t.kind in ("num", "name") or t.text == "("):
                node = ("mul", t, node, self.factor())
            else:
                return node

    def unary(self):
        t = self.tok
        if t.kind == "op" and t.text in ("-", "+"):
            self.advance()
            inner = self.unary()
            return ("neg", t, inner) if t.text == "-" else inner
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.tok.text == "^" and self.tok.kind == "op":
            op = self.advance()
            t = self.tok
            if t.kind != "num":
                raise ParseError("exponent must be a nonnegative integer", t.line, t.column)
            self.advance()
            node = ("pow", op, node, int(t.text))
        return node

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return ("num", t, int(t.text))
        if t.kind == "name":
            self.advance()
            return ("name", t, t.text)
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {found}", t.line, t.column)


def _err(tok: Token, message: str, cls=ParseError):
    return cls(message, tok.line, tok.column)


def _resolve_coefficient(name: str, tok: Token, session: Session) -> FieldElement:
    n = session.n
    if name in BASE_NAMES[:n]:
        return session.var(name)
    base, _, suffix = name.partition("_")
    if base not in session.functions:
        if not session.auto_declare:
            raise _err(tok, f"undeclared symbol {base!r}", UndeclaredSymbol)
        try:
            session.declare(base)
        except ValueError as exc:
            raise _err(tok, str(exc)) from None
    jet = [0] * n
    for ch in suffix:
        if ch not in BASE_NAMES[:n]:
            raise _err(tok, f"jet suffix {suffix!r} names a variable outside dimension {n}")
        jet[BASE_NAMES.index(ch)] += 1
    return session.function(base, jet)


def _dvar_index(name: str, tok: Token, n: int) -> Optional[int]:
    m = _DVAR.match(name)
    if not m:
        return None
    g = m.group(1)
    idx = "xyz".index(g) + 1 if g in "xyz" else int(g)
    if not 1 <= idx <= n:
        raise _err(tok, f"derivation {name} does not exist in dimension {n}")
    return idx


def _is_symbol_var(name: str) -> bool:
    return bool(_XVAR.match(name))


def _eval_operator(node, session: Session) -> Lpdo:
    n = session.n
    kind, tok = node[0], node[1]
    if kind == "num":
        return Lpdo.scalar(node[2], n)
    if kind == "name":
        name = node[2]
        idx = _dvar_index(name, tok, n)
        if idx is not None:
            return Lpdo.d(idx, n)
        if _is_symbol_var(name):
            raise _err(tok, f"symbol variable {name} is not allowed in an operator expression")
        return Lpdo.scalar(_resolve_coefficient(name, tok, session), n)
    if kind == "neg":
        return -_eval_operator(node[2], session)
    if kind == "pow":
        return _eval_operator(node[2], session) ** node[3]
    left = _eval_operator(node[2], session)
    right = _eval_operator(node[3], session)
    if kind == "add":
        return left + right
    if kind == "sub":
        return left - right
    if kind == "mul":
        return left * right
    if order(left) > 0 or order(right) > 0:
        raise _err(tok, "division is only allowed between coefficients")
    if right.is_zero():
        raise _err(tok, "division by zero")
    return Lpdo.scalar(left.coeff((0,) * n) / right.coeff((0,) * n), n)


# Symbol expressions evaluate to non-homogeneous commutative polynomials
# {multi-index: coefficient}; homogeneity is checked at the end.
_CPoly = Dict[MultiIndex, FieldElement]


def _cmul(a: _CPoly, b: _CPoly) -> _CPoly:
    out: _CPoly = {}
    for i, ca in a.items():
        for j, cb in b.items():
            k = tuple(x + y for x, y in zip(i, j))
            out[k] = out.get(k, ZERO) + ca * cb
    return {k: v for k, v in out.items() if v}


def _cadd(a: _CPoly, b: _CPoly, sign: int = 1) -> _CPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + (v if sign > 0 else -v)
    return {k: v for k, v in out.items() if v}


def _symbol_atom(name: str, tok: Token, n: int) -> _CPoly:
    zero = (0,) * n
    m = re.match(r"^X(\d+)$", name)
    letters = [int(m.group(1))] if m else ["XYZ".index(ch) + 1 for ch in name]
    out: _CPoly = {zero: ONE}
    for idx in letters:
        if not 1 <= idx <= n:
            raise _err(tok, f"symbol variable {name} does not exist in dimension {n}")
        e = [0] * n
        e[idx - 1] = 1
        out = _cmul(out, {tuple(e): ONE})
    return out


def _eval_symbol(node, session: Session) -> _CPoly:
    n = session.n
    zero = (0,) * n
    kind, tok = node[0], node[1]
    if kind == "num":
        return {zero: FieldElement.coerce(node[2])} if node[2] else {}
    if kind == "name":
        name = node[2]
        if _is_symbol_var(name):
            return _symbol_atom(name, tok, n)
        if _DVAR.match(name):
            raise _err(tok, f"derivation {name} is not allowed in a symbol expression")
        c = _resolve_coefficient(name, tok, session)
        return {zero: c} if c else {}
    if kind == "neg":
        return {k: -v for k, v in _eval_symbol(node[2], session).items()}
    if kind == "pow":
        base = _eval_symbol(node[2], session)
        out: _CPoly = {zero: ONE}
        for _ in range(node[3]):
            out = _cmul(out, base)
        return out
    left = _eval_symbol(node[2], session)
    right = _eval_symbol(node[3], session)
    if kind == "add":
        return _cadd(left, right)
    if kind == "sub":
        return _cadd(left, right, -1)
    if kind == "mul":
        return _cmul(left, right)
    if set(right) != {zero}:
        raise _err(tok, "symbols may only be divided by coefficients")
    inv = right[zero].invert()
    return {k: v * inv for k, v in left.items()}


def _parse_whole(text: str, implicit_mul: bool = False):
    p = _Parser(text, implicit_mul)
    node = p.expr()
    if not p.at_end():
        t = p.tok
        raise ParseError(f"unexpected {t.text!r}", t.line, t.column)
    return node


def parse_operator(text: str, session: Session) -> Lpdo:
    return _eval_operator(_parse_whole(text), session)


def parse_field(text: str, session: Session) -> FieldElement:
    node = _parse_whole(text)
    op = _eval_operator(node, session)
    if order(op) > 0:
        raise ParseError("expected a coefficient, found a differential operator", node[1].line, node[1].column)
    return op.coeff((0,) * session.n)


def _to_symbol(poly: _CPoly, n: int, tok: Token) -> SymbolPoly:
    try:
        return SymbolPoly(poly, n)
    except ValueError as exc:
        raise _err(tok, str(exc)) from None


def parse_symbol(text: str, session: Session) -> SymbolPoly:
    node = _parse_whole(text, implicit_mul=True)
    return _to_symbol(_eval_symbol(node, session), session.n, node[1])


def parse_type(text: str, session: Session) -> FactorizationType:
    """Parse ``(S_1)(S_2)...(S_k)``."""
    p = _Parser(text, implicit_mul=True)
    factors = []
    while not p.at_end():
        open_tok = p.expect("(")
        node = p.expr()
        p.expect(")")
        factors.append(_to_symbol(_eval_symbol(node, session), session.n, open_tok))
    if not factors:
        t = p.tok
        raise ParseError("empty factorization type", t.line, t.column)
    return FactorizationType(factors)
