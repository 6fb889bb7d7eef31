"""Order-by-order factorization descent and obstacles to factorization.

Given an operator L whose symbol is S_1 ... S_k, the descent starts from the
composition of the hat operators of the S_i and, for t = d-1, ..., 0, solves

    P_t = (Sym/S_1) A_1 + ... + (Sym/S_k) A_k,     deg A_i = t - d + d_i,

where P_t is the degree-t component of L minus the current composition.  When
the equation has no solution, the normal form of P_t modulo the span of the
right-hand side (leading monomials under graded lex with X > Y) is the
residual; it is recorded, subtracted from the working operator, and the
descent continues.  The residuals add up to an obstacle R with
L = F_1 o ... o F_k + R exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import (
    DegreeOutOfRange,
    InvalidPartialFactorization,
    InvalidType,
    SeedOrderTooHigh,
    SymbolMismatch,
    SymbolsNotCoprime,
    UnsupportedDimension,
)
from .field import ONE, ZERO, FieldElement
from .operators import (
    Lpdo,
    component_symbol,
    compose_all,
    from_symbol,
    order,
    symbol,
    truncate_below,
)
from .symbols import FactorizationType, MultiIndex, SymbolPoly, gcd2, monomials, pairwise_coprime

log = logging.getLogger(__name__)

NON_UNIQUE_RANGE = "NonUniqueRange"

Order = Union[int, float]
Vector = Dict[MultiIndex, FieldElement]


@dataclass(frozen=True)
class PartialFactorization:
    """Factors with ord(L - F_1 o ... o F_k) < order."""

    factors: Tuple[Lpdo, ...]
    order: int

    def __init__(self, factors: Sequence[Lpdo], order: int):
        object.__setattr__(self, "factors", tuple(factors))
        object.__setattr__(self, "order", int(order))

    def composition(self) -> Lpdo:
        return compose_all(self.factors, self.factors[0].n)


@dataclass(frozen=True)
class ObstacleResult:
    factors: Tuple[Lpdo, ...]
    obstacle: Lpdo
    obstacle_order: Order
    class_representative: Tuple[SymbolPoly, ...]
    warnings: Tuple[str, ...] = ()

    @property
    def factored(self) -> bool:
        return self.obstacle.is_zero()

    def composition(self) -> Lpdo:
        return compose_all(self.factors, self.obstacle.n)


class Decomposition(NamedTuple):
    solution: Tuple[SymbolPoly, ...]
    residual: SymbolPoly


@dataclass
class DecompositionSystem:
    """The linear system behind one descent step, in monomial coordinates.

    Columns are (factor position, monomial of A_i) pairs, factor by factor,
    each block graded-lex descending; rows are the degree-t monomials.
    """

    cofactors: Tuple[SymbolPoly, ...]
    unknown_degrees: Tuple[int, ...]
    t: int
    rows: List[MultiIndex]
    columns: List[Tuple[int, MultiIndex]]
    column_vectors: List[Vector]
    _basis: Optional[Dict[MultiIndex, Tuple[Vector, Vector]]] = field(default=None, repr=False)
    _free: Optional[List[int]] = field(default=None, repr=False)

    def matrix(self) -> List[List[FieldElement]]:
        return [[v.get(r, ZERO) for v in self.column_vectors] for r in self.rows]

    def _eliminate(self) -> None:
        basis: Dict[MultiIndex, Tuple[Vector, Vector]] = {}
        free: List[int] = []
        for col, vec in enumerate(self.column_vectors):
            rem, acc = self._reduce(vec, basis)
            if not rem:
                free.append(col)
                continue
            combo = {c: -v for c, v in acc.items()}
            combo[col] = combo.get(col, ZERO) + ONE
            lead = max(rem)
            inv = rem[lead].invert()
            basis[lead] = (
                {k: v * inv for k, v in rem.items()},
                {k: v * inv for k, v in combo.items() if v},
            )
        self._basis = basis
        self._free = free

    def _reduce(self, vec: Vector, basis) -> Tuple[Vector, Vector]:
        """Return (rem, acc) with vec = A.acc + rem and rem free of leading rows."""
        rem = {k: v for k, v in vec.items() if v}
        acc: Vector = {}
        for row in self.rows:
            c = rem.get(row)
            if c is None or row not in basis:
                continue
            bvec, bcombo = basis[row]
            for k, v in bvec.items():
                s = rem.get(k, ZERO) - c * v
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
            for k, v in bcombo.items():
                s = acc.get(k, ZERO) + c * v
                if s:
                    acc[k] = s
                else:
                    acc.pop(k, None)
        return rem, acc

    @property
    def free_columns(self) -> List[int]:
        if self._free is None:
            self._eliminate()
        return list(self._free)

    def kernel_dimension(self) -> int:
        return len(self.free_columns)

    def rank(self) -> int:
        return len(self.columns) - self.kernel_dimension()

    def solve(self, target: SymbolPoly) -> Tuple[Vector, Vector]:
        """Pivot solution (free unknowns zero) and normal-form residual."""
        if self._basis is None:
            self._eliminate()
        rem, acc = self._reduce(dict(target.coeffs), self._basis)
        return acc, rem


def decomposition_system(T: FactorizationType, t: int) -> DecompositionSystem:
    d = T.order
    n = T.n
    cofs = T.cofactors()
    degs = tuple(t - d + di for di in T.degrees)
    rows = monomials(n, t)
    columns: List[Tuple[int, MultiIndex]] = []
    vectors: List[Vector] = []
    for i, (cof, e) in enumerate(zip(cofs, degs)):
        for m in monomials(n, e):
            columns.append((i, m))
            vectors.append({tuple(a + b for a, b in zip(k, m)): c for k, c in cof.coeffs.items()})
    return DecompositionSystem(cofs, degs, t, rows, columns, vectors)


def _solve(P: SymbolPoly, T: FactorizationType, t: int) -> Tuple[Decomposition, int]:
    if t < 0 or t >= T.order:
        raise DegreeOutOfRange(f"degree {t} outside 0 <= t < {T.order}")
    if not P.is_zero() and P.degree != t:
        raise ValueError(f"target has degree {P.degree}, expected {t}")
    if P.n != T.n:
        raise ValueError("target and type live in different dimensions")
    system = decomposition_system(T, t)
    free = system.kernel_dimension()
    if free and len(T) >= 3:
        raise SymbolsNotCoprime(
            f"decomposition at degree {t} has a {free}-dimensional kernel; "
            "the factor symbols are not pairwise coprime"
        )
    acc, rem = system.solve(P)
    parts: List[Dict[MultiIndex, FieldElement]] = [{} for _ in T.factors]
    for col, c in acc.items():
        i, m = system.columns[col]
        parts[i][m] = c
    solution = tuple(
        SymbolPoly(part, T.n, e) if e >= 0 else SymbolPoly.zero(T.n, e)
        for part, e in zip(parts, system.unknown_degrees)
    )
    return Decomposition(solution, SymbolPoly(rem, T.n, t)), free


def solve_decomposition(P: SymbolPoly, T: FactorizationType, t: int) -> Decomposition:
    """Solve sum (Sym/S_i) A_i = P - residual with the canonical residual."""
    return _solve(P, T, t)[0]


def kernel_dimension(T: FactorizationType, t: int) -> int:
    if t < 0 or t >= T.order:
        raise DegreeOutOfRange(f"degree {t} outside 0 <= t < {T.order}")
    return decomposition_system(T, t).kernel_dimension()


# -- descent ---------------------------------------------------------------


def _check_type(L: Lpdo, T: FactorizationType) -> None:
    if T.n != L.n:
        raise InvalidType(f"type has dimension {T.n}, operator has dimension {L.n}")
    if any(deg == 0 for deg in T.degrees):
        raise InvalidType("degree-0 factors are not allowed in a factorization type")
    if L.is_zero() or symbol(L) != T.symbol():
        raise SymbolMismatch(f"symbol of L is not the product {T}")


def _extend(L: Lpdo, pf: PartialFactorization, T: FactorizationType):
    d = T.order
    t = pf.order
    if len(pf.factors) != len(T):
        raise InvalidPartialFactorization("partial factorization and type differ in length")
    if not 1 <= t <= d:
        raise InvalidPartialFactorization(f"cannot extend a partial factorization of order {t}")
    for F, S in zip(pf.factors, T.factors):
        if F.is_zero() or symbol(F) != S:
            raise InvalidPartialFactorization(f"factor symbol {symbol(F) if not F.is_zero() else 0} is not {S}")
    kept = [truncate_below(F, t - (d - di)) for F, di in zip(pf.factors, T.degrees)]
    delta = L - compose_all(kept, L.n)
    if order(delta) >= t:
        raise InvalidPartialFactorization(f"ord(L - F_1 o ... o F_k) = {order(delta)} is not below {t}")
    P = component_symbol(delta, t - 1)
    (solution, residual), free = _solve(P, T, t - 1)
    factors = tuple(F + from_symbol(A) for F, A in zip(kept, solution))
    return PartialFactorization(factors, t - 1), residual, free


def extend(L: Lpdo, pf: PartialFactorization, T: FactorizationType) -> Tuple[PartialFactorization, SymbolPoly]:
    """Extend ``pf`` from order t to order t-1; the residual is zero on success.

    Components of the factors below the already determined range are
    discarded and recomputed.
    """
    new_pf, residual, _ = _extend(L, pf, T)
    return new_pf, residual


def _descend(L: Lpdo, T: FactorizationType, pf: PartialFactorization) -> ObstacleResult:
    work = L
    R = Lpdo.zero(L.n)
    reps: List[SymbolPoly] = []
    warnings: List[str] = []
    while pf.order > 0:
        pf, residual, free = _extend(work, pf, T)
        if free:
            warnings.append(
                f"{NON_UNIQUE_RANGE}: {free} free coordinate(s) set to zero at order {pf.order}"
            )
        if reps or not residual.is_zero():
            reps.append(residual)
        if not residual.is_zero():
            r = from_symbol(residual)
            R = R + r
            work = work - r
    log.debug("descent finished with obstacle order %s", order(R))
    return ObstacleResult(pf.factors, R, order(R), tuple(reps), tuple(warnings))


def factor(L: Lpdo, T: FactorizationType) -> ObstacleResult:
    """Factor L along type T, or return the obstacle with the factors reached."""
    _check_type(L, T)
    if T.n == 2 and len(T) >= 3 and not pairwise_coprime(T):
        raise SymbolsNotCoprime(f"type {T} is not pairwise coprime")
    if T.n == 2 and len(T) == 2 and not pairwise_coprime(T):
        return factor_two_noncoprime(L, T)
    seed = PartialFactorization([from_symbol(S) for S in T.factors], T.order)
    return _descend(L, T, seed)


def factor_two_noncoprime(
    L: Lpdo,
    T: FactorizationType,
    seed: Optional[PartialFactorization] = None,
    allow_nonunique: bool = False,
) -> ObstacleResult:
    """Two-factor descent when gcd(S_1, S_2) = S_0 may be nontrivial.

    Below order d - deg S_0 every extension step is unique.  Above it the
    caller supplies the components in ``seed``; without a seed the descent
    starts at the bare symbols, zeroes the free coordinates, and reports a
    NonUniqueRange warning.
    """
    if len(T) != 2:
        raise InvalidType("factor_two_noncoprime handles exactly two factors")
    _check_type(L, T)
    if T.n != 2:
        raise UnsupportedDimension("the gcd of symbol factors is decided for n = 2 only")
    d = T.order
    d0 = gcd2(*T.factors).degree
    if seed is None:
        seed = PartialFactorization([from_symbol(S) for S in T.factors], d)
    elif seed.order > d - d0 and not allow_nonunique:
        raise SeedOrderTooHigh(
            f"seed has order {seed.order} but extensions are unique only from order {d - d0}"
        )
    if seed.order == 0:
        delta = L - seed.composition()
        if not delta.is_zero():
            raise InvalidPartialFactorization("an order-0 seed must be an exact factorization")
        return ObstacleResult(seed.factors, delta, order(delta), ())
    return _descend(L, T, seed)


def obstacle_class(L: Lpdo, T: FactorizationType) -> SymbolPoly:
    """Canonical representative of the obstacle class; zero when L factors."""
    result = factor(L, T)
    if result.class_representative:
        return result.class_representative[0]
    return SymbolPoly.zero(L.n, 0)


# -- counting --------------------------------------------------------------


def codimension(n: int, d: int, degrees: Sequence[int]) -> int:
    """Codimension of the factorable operators of a given type among all with that symbol."""
    if sum(degrees) != d:
        raise ValueError(f"degrees {list(degrees)} do not sum to {d}")
    return comb(n + d - 1, n) - sum(comb(n + di - 1, n) for di in degrees)


def monomial_count(n: int, t: int) -> int:
    return comb(n + t - 1, n - 1) if t >= 0 else 0


def counts_for_degrees(n: int, degrees: Sequence[int], t: int) -> Tuple[int, int]:
    d = sum(degrees)
    if not 0 <= t < d:
        raise DegreeOutOfRange(f"degree {t} outside 0 <= t < {d}")
    return monomial_count(n, t), sum(monomial_count(n, t - d + di) for di in degrees)


def system_counts(T: FactorizationType, t: int) -> Tuple[int, int]:
    """(number of equations, number of unknowns) of the degree-t step."""
    return counts_for_degrees(T.n, T.degrees, t)
