"""Shared enumeration helpers and independent oracles for the test suite.

The oracles here deliberately avoid the library's own search routines so that
they can serve as a second route for cross-checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import prod

import pytest
from flint import fmpq, fmpq_poly

from wchar.pyramid import Pyramid, RowTabloid, Tableau

# Result lines of the acceptance suite, collected for the terminal summary.
ACCEPTANCE_KEY = pytest.StashKey[list]()


def compositions(total: int):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def all_pyramids(max_boxes: int) -> list[Pyramid]:
    """Every pyramid with at most ``max_boxes`` boxes and ``n = max(q)``."""
    out = []
    for total in range(1, max_boxes + 1):
        for q in compositions(total):
            for k in range(len(q) + 1):
                rising = all(q[i] <= q[i + 1] for i in range(k - 1))
                falling = all(q[i] >= q[i + 1] for i in range(k, len(q) - 1))
                if rising and falling:
                    out.append(Pyramid.new(q, k, max(q)))
    return out


def partitions(total: int, largest: int | None = None):
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest or total), 0, -1):
        for rest in partitions(total - first, first):
            yield (first,) + rest


def pyramid_for_row_lengths(row_lengths, left: bool = False) -> Pyramid:
    """A justified pyramid whose sorted row lengths are ``row_lengths`` (right-justified by default)."""
    p = tuple(sorted(row_lengths))
    heights = [sum(1 for x in p if x >= c) for c in range(1, p[-1] + 1)]
    if left:
        return Pyramid.new(tuple(heights), 0, len(p))
    return Pyramid.new(tuple(reversed(heights)), None, len(p))


def two_row_shapes(max_boxes: int) -> list[tuple[int, ...]]:
    """Column heights of every two-row pyramid (height-2 block flanked by height-1 columns)."""
    shapes = []
    for total in range(1, max_boxes + 1):
        for doubles in range(total // 2 + 1):
            singles = total - 2 * doubles
            for left in range(singles + 1):
                if doubles == 0 and left > 0:
                    continue
                shapes.append((1,) * left + (2,) * doubles + (1,) * (singles - left))
    return shapes


# ---------------------------------------------------------------------------
# independent oracles


def _strictly_above(upper: Fraction, lower: Fraction) -> bool:
    diff = upper - lower
    return diff.denominator == 1 and diff > 0


def brute_force_column_strict(tabloid: RowTabloid) -> bool:
    """Try every ordering of every row and test the columns directly."""
    pyramid = tabloid.pyramid
    per_row = [set(itertools.permutations(row)) for row in tabloid.rows]
    for choice in itertools.product(*per_row):
        columns = Tableau.from_rows(pyramid, choice).columns()
        if all(
            _strictly_above(col[t], col[t + 1]) for col in columns for t in range(len(col) - 1)
        ):
            return True
    return False


@lru_cache(maxsize=None)
def gelfand_tsetlin_count(top: tuple[int, ...]) -> int:
    """Number of integer interlacing patterns with the given (weakly decreasing) top row."""
    if len(top) <= 1:
        return 1
    ranges = [range(top[j + 1], top[j] + 1) for j in range(len(top) - 1)]
    return sum(gelfand_tsetlin_count(row) for row in itertools.product(*ranges))


def column_highest_weight(entries) -> tuple[int, ...]:
    """Shift column entries (top to bottom) to a gl_m highest weight."""
    return tuple(int(a) + t for t, a in enumerate(entries))


def triangular_solve(rows: dict, diagonal_values: dict) -> dict:
    """Solve ``value[B] = sum_C rows[B][C] * x[C]`` for ``x`` when ``rows`` is unitriangular."""
    solved: dict = {}
    pending = set(rows)
    while pending:
        progress = False
        for key in list(pending):
            others = [c for c in rows[key] if c != key]
            if all(c in solved for c in others):
                if rows[key].get(key) != 1:
                    raise ValueError("decomposition row without unit diagonal")
                solved[key] = diagonal_values[key] - sum(rows[key][c] * solved[c] for c in others)
                pending.discard(key)
                progress = True
        if not progress:
            raise ValueError("decomposition matrix is not triangular")
    return solved


def two_row_dimension(tableau: Tableau) -> int:
    """Dimension of the tensor product of column modules: each height-2 column contributes a-b."""
    return prod(int(c[0] - c[1]) if len(c) == 2 else 1 for c in tableau.columns())


def _shifted_row_polynomial(row, i: int) -> fmpq_poly:
    poly = fmpq_poly([1])
    for a in row:
        poly *= fmpq_poly([fmpq(a.numerator, a.denominator) + i - 1, 1])
    return poly


def drinfeld_identity_holds(tabloid: RowTabloid, data) -> bool:
    """Rebuild both sides of the cross-multiplied ratio identity independently.

    With ``A_i(u) = prod_j (u + a_ij + i - 1)`` the identity reads
    ``A_i(u) P_i(u-1) Q_i(u) = A_{i+1}(u) P_i(u)``; we also require monic
    polynomials, ``deg Q_i = d_i`` and coprime ``P_i, Q_i``.
    """
    shift_down = fmpq_poly([-1, 1])
    for i in range(1, tabloid.pyramid.n):
        P, Q = data.P_poly(i), data.Q_poly(i)
        upper = _shifted_row_polynomial(tabloid.rows[i - 1], i)
        lower = _shifted_row_polynomial(tabloid.rows[i], i + 1)
        if P.coeffs()[-1] != 1 or Q.coeffs()[-1] != 1:
            return False
        if Q.degree() != data.d[i - 1] or P.gcd(Q).degree() != 0:
            return False
        if upper * P(shift_down) * Q != lower * P:
            return False
    return True
