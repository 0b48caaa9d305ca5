"""Classification predicates: dominance, Verma irreducibility, linkage,
Drinfeld polynomials and separation of columns."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from flint import fmpq, fmpq_poly

from .bases import decompose_standard
from .errors import ConsistencyError, NotColumnStrict, NotDominant, ShapeMismatch
from .pyramid import (
    RowTabloid,
    Tableau,
    column_strict_representative,
    entry_gt,
    format_entry,
    is_column_strict,
)

__all__ = [
    "is_finite_dimensional",
    "verma_is_irreducible",
    "linkage_iii",
    "linkage_reach",
    "DrinfeldData",
    "drinfeld_data",
    "sets_separated",
    "sets_separated_as_printed",
    "is_separated",
    "standard_is_irreducible",
    "two_row_factorization",
]


def _tabloid(obj: RowTabloid | Tableau) -> RowTabloid:
    return obj.row_class() if isinstance(obj, Tableau) else obj


def is_finite_dimensional(obj: RowTabloid | Tableau) -> bool:
    """Dominance: some row arrangement is column-strict."""
    return column_strict_representative(_tabloid(obj)) is not None


def verma_is_irreducible(obj: RowTabloid | Tableau) -> bool:
    """No entry on a higher row exceeds an entry on a lower row."""
    rows = _tabloid(obj).rows
    for i, upper in enumerate(rows):
        for lower in rows[i + 1 :]:
            if any(entry_gt(a, b) for a in upper for b in lower):
                return False
    return True


# ---------------------------------------------------------------------------
# linkage via the monomial identity


def _add(mono: dict, key, e: int) -> None:
    value = mono.get(key, 0) + e
    if value:
        mono[key] = value
    else:
        mono.pop(key, None)


def _chains(a: int, i: int, n: int, floor: int, step: int) -> list[tuple]:
    """Raw monomials ``y_{i,v_i} prod_{k>i} y_{k,v_k} / y_{k,v_{k-1}}`` over chains
    ``floor <= v_i <= ... <= v_n = a`` moving in multiples of ``step``
    (values are integers scaled by the common denominator)."""
    out = []

    def extend(k: int, values: dict) -> None:
        if k < i:
            mono: dict = {}
            _add(mono, (i, values[i]), 1)
            for t in range(i + 1, n + 1):
                _add(mono, (t, values[t]), 1)
                _add(mono, (t, values[t - 1]), -1)
            out.append(tuple(mono.items()))
            return
        upper = values[k + 1]
        for value in range(upper, floor - 1, -step):
            values[k] = value
            extend(k - 1, values)

    if a >= floor:
        values = {n: a}
        extend(n - 1, values)
    return out


def _scale(tabloid: RowTabloid) -> int:
    scale = 1
    for x in tabloid.entries():
        scale = math.lcm(scale, x.denominator)
    return scale


@lru_cache(maxsize=None)
def _reach(tabloid: RowTabloid, scale: int) -> frozenset:
    n = tabloid.pyramid.n
    floors: dict = {}
    for x in tabloid.entries():
        v = int(x * scale)
        floors[v % scale] = min(floors.get(v % scale, v), v)
    states = {()}
    for i, row in enumerate(tabloid.rows, start=1):
        for x in row:
            v = int(x * scale)
            factors = _chains(v, i, n, floors[v % scale], scale)
            nxt = set()
            for state in states:
                for factor in factors:
                    mono = dict(state)
                    for key, e in factor:
                        _add(mono, key, e)
                    nxt.add(tuple(sorted(mono.items())))
            states = nxt
    return frozenset(states)


def linkage_reach(tabloid: RowTabloid) -> frozenset:
    """Every raw monomial obtainable as the left side of the linkage identity for
    ``tabloid``, as sorted ``((row, value), exponent)`` pairs with exact values.

    Each chain value is bounded below by the smallest entry of its coset: at
    every level, the least value appearing would otherwise carry a net positive
    exponent that no target entry can absorb.
    """
    scale = _scale(tabloid)
    return frozenset(
        tuple(((i, Fraction(v, scale)), e) for (i, v), e in state)
        for state in _reach(tabloid, scale)
    )


def _top_raw(tabloid: RowTabloid, scale: int) -> tuple:
    mono: dict = {}
    for i, row in enumerate(tabloid.rows, start=1):
        for b in row:
            _add(mono, (i, int(b * scale)), 1)
    return tuple(sorted(mono.items()))


def linkage_iii(first: RowTabloid | Tableau, second: RowTabloid | Tableau) -> bool:
    """Whether some lowering tuple for ``first`` produces the top monomial of ``second``."""
    first, second = _tabloid(first), _tabloid(second)
    if first.pyramid != second.pyramid:
        raise ShapeMismatch("tabloids live on different pyramids")
    if first.content_key != second.content_key:
        return False
    scale = _scale(first)
    return _top_raw(second, scale) in _reach(first, scale)


# ---------------------------------------------------------------------------
# Drinfeld polynomials


def _poly_from_roots(shifts: Counter) -> fmpq_poly:
    poly = fmpq_poly([1])
    for x, mult in sorted(shifts.items()):
        for _ in range(mult):
            poly *= fmpq_poly([fmpq(x.numerator, x.denominator), 1])
    return poly


def _shift_var(poly: fmpq_poly, by: int) -> fmpq_poly:
    """``poly(u + by)``."""
    out = fmpq_poly([0])
    lin = fmpq_poly([by, 1])
    power = fmpq_poly([1])
    for c in poly.coeffs():
        out += power * c
        power *= lin
    return out


@dataclass(frozen=True)
class DrinfeldData:
    """``P[i]``, ``Q[i]`` as multisets of shifts ``x`` meaning factors ``(u + x)``."""

    P: tuple[tuple[tuple[Fraction, int], ...], ...]
    Q: tuple[tuple[tuple[Fraction, int], ...], ...]
    d: tuple[int, ...]

    def P_poly(self, i: int) -> fmpq_poly:
        return _poly_from_roots(Counter(dict(self.P[i - 1])))

    def Q_poly(self, i: int) -> fmpq_poly:
        return _poly_from_roots(Counter(dict(self.Q[i - 1])))

    def to_dict(self) -> dict:
        def coeffs(poly: fmpq_poly) -> list[str]:
            return [str(c) for c in poly.coeffs()]

        return {
            "P": [coeffs(self.P_poly(i)) for i in range(1, len(self.P) + 1)],
            "Q": [coeffs(self.Q_poly(i)) for i in range(1, len(self.Q) + 1)],
            "P_roots": [[[format_entry(-x), m] for x, m in row] for row in self.P],
            "Q_roots": [[[format_entry(-x), m] for x, m in row] for row in self.Q],
            "d": list(self.d),
        }


def _row_numerator(row: Sequence[Fraction], i: int) -> fmpq_poly:
    return _poly_from_roots(Counter(a + i - 1 for a in row))


def drinfeld_data(obj: RowTabloid | Tableau, representative: Tableau | None = None) -> DrinfeldData:
    """Monic coprime ``P_i``, ``Q_i`` with ``A_i/A_{i+1} = P_i(u)/P_i(u-1) * u^{d_i}/Q_i(u)``,
    where ``A_i(u) = prod_j (1 + (a_{ij} + i - 1)/u)``.  The identity is checked
    exactly before returning."""
    tabloid = _tabloid(obj)
    pyramid = tabloid.pyramid
    rep = representative
    if rep is None:
        rep = obj if isinstance(obj, Tableau) and is_column_strict(obj) else column_strict_representative(tabloid)
    if rep is None or not is_column_strict(rep) or rep.row_class() != tabloid:
        raise NotDominant("no column-strict representative")
    n = pyramid.n
    columns = rep.columns()
    p_parts, q_parts, degrees = [], [], []
    for i in range(1, n):
        p_roots: Counter = Counter()
        q_roots: Counter = Counter()
        for col in columns:
            h = len(col)
            top_row = n - h + 1
            if top_row > i + 1:
                continue
            lower = col[i + 1 - top_row]
            if top_row <= i:
                upper = col[i - top_row]
                a_shift, b_shift = upper + i - 1, lower + i
                for k in range(1, int(a_shift - b_shift) + 1):
                    p_roots[b_shift + k] += 1
            else:
                q_roots[lower + i] += 1
        # make coprime: move a common factor of Q down by one
        while True:
            common = [x for x in p_roots if p_roots[x] and q_roots[x]]
            if not common:
                break
            x = min(common)
            p_roots[x] -= 1
            q_roots[x] -= 1
            q_roots[x - 1] += 1
            p_roots = +p_roots
            q_roots = +q_roots
        degree = pyramid.p[i] - pyramid.p[i - 1]
        p_parts.append(tuple(sorted(p_roots.items())))
        q_parts.append(tuple(sorted(q_roots.items())))
        degrees.append(degree)
    data = DrinfeldData(tuple(p_parts), tuple(q_parts), tuple(degrees))
    if not verify_drinfeld(tabloid, data):
        raise ConsistencyError("Drinfeld identity failed")
    return data


def verify_drinfeld(tabloid: RowTabloid, data: DrinfeldData) -> bool:
    """Cross-multiplied identity
    ``num_i * u^{p_{i+1}} * P(u-1) * Q(u) == num_{i+1} * u^{p_i} * P(u) * u^{d_i}``."""
    pyramid = tabloid.pyramid
    u = fmpq_poly([0, 1])
    for i in range(1, pyramid.n):
        num_i = _row_numerator(tabloid.rows[i - 1], i)
        num_next = _row_numerator(tabloid.rows[i], i + 1)
        P = data.P_poly(i)
        Q = data.Q_poly(i)
        if Q.degree() != data.d[i - 1]:
            return False
        if P.gcd(Q).degree() > 0:
            return False
        lhs = num_i * u ** pyramid.p[i] * _shift_var(P, -1) * Q
        rhs = num_next * u ** pyramid.p[i - 1] * P * u ** data.d[i - 1]
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# separation and standard modules


def _lt(x: Fraction, y: Fraction) -> bool:
    return entry_gt(y, x)


def _alternating(only_left, only_right) -> bool:
    for a, c in itertools.product(only_left, repeat=2):
        for b, d in itertools.product(only_right, repeat=2):
            if _lt(a, b) and _lt(b, c) and _lt(c, d):
                return True
            if _lt(b, a) and _lt(c, b) and _lt(d, c):
                return True
    return False


def sets_separated(first: Sequence[Fraction], second: Sequence[Fraction]) -> bool:
    """Separation of two column sets (left column first).

    Unequal sizes: no element private to the smaller set lies strictly between
    two elements private to the larger one.  Equal sizes: no alternating
    four-element chain.
    """
    left, right = set(first), set(second)
    only_left, only_right = left - right, right - left
    if len(left) == len(right):
        return not _alternating(only_left, only_right)
    small, large = (only_left, only_right) if len(left) < len(right) else (only_right, only_left)
    return not any(_lt(b, a) and _lt(a, d) for a in small for b in large for d in large)


def sets_separated_as_printed(first: Sequence[Fraction], second: Sequence[Fraction]) -> bool:
    """The unequal-size cases with the roles of the two sets exchanged (two
    elements of the smaller set around one of the larger).  Kept only to
    document the discrepancy; it disagrees with the decomposition numbers."""
    left, right = set(first), set(second)
    only_left, only_right = left - right, right - left
    if len(left) == len(right):
        return not _alternating(only_left, only_right)
    small, large = (only_left, only_right) if len(left) < len(right) else (only_right, only_left)
    return not any(_lt(a, b) and _lt(b, c) for a in small for c in small for b in large)


def is_separated(tableau: Tableau) -> bool:
    if not is_column_strict(tableau):
        raise NotColumnStrict("separation is defined for column-strict tableaux")
    columns = tableau.columns()
    return all(
        sets_separated(columns[i], columns[j])
        for i in range(len(columns))
        for j in range(i + 1, len(columns))
    )


def standard_is_irreducible(tableau: Tableau) -> bool:
    """``V(A)`` is irreducible when its dual canonical expansion is a single term ``1``."""
    if not is_column_strict(tableau):
        raise NotColumnStrict("standard modules need column-strict tableaux")
    decomposition = decompose_standard(tableau)
    return len(decomposition) == 1 and next(iter(decomposition.values())) == 1


def two_row_factorization(tabloid: RowTabloid) -> tuple[list[tuple[Fraction, Fraction]], list[Fraction]]:
    """Greedy reindexing of a two-row class: repeatedly pair the row-one and
    row-two entries with the smallest positive integer difference.

    Returns the paired columns and the leftover row-two entries; the
    irreducible module is the tensor product of the corresponding column
    modules, so its dimension is the product of the pair differences.
    """
    if tabloid.pyramid.n != 2:
        raise ShapeMismatch("two-row factorization needs n = 2")
    tops = list(tabloid.rows[0])
    bottoms = list(tabloid.rows[1])
    pairs = []
    while tops:
        best = None
        for a in tops:
            for b in bottoms:
                if entry_gt(a, b) and (best is None or a - b < best[0] - best[1]):
                    best = (a, b)
        if best is None:
            best = (tops[0], bottoms[0])
        tops.remove(best[0])
        bottoms.remove(best[1])
        pairs.append(best)
    return pairs, bottoms
