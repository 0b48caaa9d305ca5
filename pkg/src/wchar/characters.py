"""Gelfand-Tsetlin characters as Laurent polynomials in the variables ``y_{i,a}``.

``x_{i,a}`` abbreviates ``y_{i,a+1} / y_{i,a}``.  Every ``y_{i,1-i}`` is set
equal to ``1`` so that the trivial highest weight has character ``1``.

Characters carry a grading by the number of lowering steps and a truncation
depth (``None`` for exact, finite characters).  Products convolve grades and
truncate at the smaller depth, so truncated Verma characters can be compared
honestly at a fixed depth.

>>> from wchar.pyramid import Pyramid, RowTabloid
>>> chi = verma_character(RowTabloid(Pyramid.new((2,), 1, 2), ((3,), (1,))), 1)
>>> sorted(str(m) for m in chi.terms())
['y[1,2] y[2,1] y[2,2]^-1 y[2,3]', 'y[1,3] y[2,1]']
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, Mapping, Sequence

from .errors import NotColumnStrict
from .pyramid import (
    Pyramid,
    RowTabloid,
    Tableau,
    as_entry,
    content,
    format_entry,
    is_column_strict,
    parse_entry,
)

__all__ = [
    "GTMonomial",
    "GTCharacter",
    "y_var",
    "x_var",
    "verma_character",
    "verma_character_tabloids",
    "standard_character",
    "column_character",
    "multiply",
    "central_substitute",
    "verma_coefficient_bound",
]

Key = tuple[int, Fraction]


@dataclass(frozen=True)
class GTMonomial:
    """Laurent monomial ``prod y_{i,a}^{e}`` stored as sorted ``((i, a), e)`` pairs."""

    exponents: tuple[tuple[Key, int], ...] = ()

    @classmethod
    def from_map(cls, exps: Mapping[Key, int], normalize: bool = True) -> "GTMonomial":
        items = []
        for (i, a), e in exps.items():
            a = as_entry(a)
            if e == 0 or (normalize and a == 1 - i):
                continue
            items.append(((int(i), a), int(e)))
        items.sort()
        return cls(tuple(items))

    def as_map(self) -> dict[Key, int]:
        return dict(self.exponents)

    def __mul__(self, other: "GTMonomial") -> "GTMonomial":
        acc = Counter(self.as_map())
        for key, e in other.exponents:
            acc[key] += e
        return GTMonomial.from_map(acc)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for (i, a), e in self.exponents:
            base = f"y[{i},{format_entry(a)}]"
            parts.append(base if e == 1 else f"{base}^{e}")
        return " ".join(parts)

    def to_list(self) -> list:
        return [[i, format_entry(a), e] for (i, a), e in self.exponents]


def y_var(i: int, a) -> GTMonomial:
    return GTMonomial.from_map({(i, as_entry(a)): 1})


def x_var(i: int, a) -> GTMonomial:
    a = as_entry(a)
    return GTMonomial.from_map({(i, a + 1): 1, (i, a): -1})


def _monomial_mul_raw(left: dict, right: Mapping) -> dict:
    acc = dict(left)
    for key, e in right.items():
        acc[key] = acc.get(key, 0) + e
        if acc[key] == 0:
            del acc[key]
    return acc


class GTCharacter:
    """Graded integer combination of :class:`GTMonomial`; ``depth=None`` means exact."""

    def __init__(self, n: int, grades: Mapping[int, Mapping[GTMonomial, int]] | None = None,
                 depth: int | None = None) -> None:
        self.n = n
        self.depth = depth
        clean: dict[int, dict[GTMonomial, int]] = {}
        for g, terms in (grades or {}).items():
            if depth is not None and g > depth:
                continue
            kept = {m: c for m, c in terms.items() if c}
            if kept:
                clean[g] = kept
        self.grades = clean

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[GTMonomial, int]) -> "GTCharacter":
        return cls(n, {0: dict(terms)}, None)

    @classmethod
    def one(cls, n: int) -> "GTCharacter":
        return cls.from_terms(n, {GTMonomial(): 1})

    def terms(self, upto: int | None = None) -> Counter:
        acc: Counter = Counter()
        for g, terms in self.grades.items():
            if upto is None or g <= upto:
                acc.update(terms)
        return Counter({m: c for m, c in acc.items() if c})

    def truncate(self, depth: int) -> "GTCharacter":
        limit = depth if self.depth is None else min(depth, self.depth)
        return GTCharacter(self.n, self.grades, limit)

    def dimension(self) -> int:
        return sum(self.terms().values())

    def max_coefficient(self) -> int:
        return max(self.terms().values(), default=0)

    def agrees_with(self, other: "GTCharacter") -> bool:
        """Equality of the graded truncations at the smaller of the two depths."""
        if self.n != other.n:
            return False
        if self.depth is None and other.depth is None:
            return self.terms() == other.terms()
        depth = min(d for d in (self.depth, other.depth) if d is not None)
        for g in range(depth + 1):
            if self.grades.get(g, {}) != other.grades.get(g, {}):
                return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GTCharacter)
            and self.depth == other.depth
            and self.agrees_with(other)
        )

    def __mul__(self, other: "GTCharacter") -> "GTCharacter":
        return multiply(self, other)

    def __repr__(self) -> str:
        return f"GTCharacter(n={self.n}, depth={self.depth}, terms={len(self.terms())})"

    def to_list(self) -> list[dict]:
        rows = []
        for g, terms in self.grades.items():
            for m, c in terms.items():
                rows.append({"monomial": m.to_list(), "coeff": c, "grade": g})
        rows.sort(key=lambda r: (r["grade"], json.dumps(r["monomial"])))
        return rows

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "depth": self.depth, "terms": self.to_list()}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GTCharacter":
        data = json.loads(text)
        grades: dict[int, dict[GTMonomial, int]] = {}
        for row in data["terms"]:
            mono = GTMonomial.from_map({(i, parse_entry(a)): e for i, a, e in row["monomial"]})
            grades.setdefault(row.get("grade", 0), {})[mono] = row["coeff"]
        return cls(data["n"], grades, data["depth"])


def multiply(first: GTCharacter, second: GTCharacter) -> GTCharacter:
    if first.n != second.n:
        raise ValueError("characters for different n")
    depths = [d for d in (first.depth, second.depth) if d is not None]
    depth = min(depths) if depths else None
    out: dict[int, Counter] = {}
    for g1, t1 in first.grades.items():
        for g2, t2 in second.grades.items():
            g = g1 + g2
            if depth is not None and g > depth:
                continue
            acc = out.setdefault(g, Counter())
            for m1, c1 in t1.items():
                for m2, c2 in t2.items():
                    acc[m1 * m2] += c1 * c2
    return GTCharacter(first.n, out, depth)


# ---------------------------------------------------------------------------
# Verma characters


def _rows_of(obj: RowTabloid | Tableau) -> tuple[Pyramid, tuple[tuple[Fraction, ...], ...]]:
    if isinstance(obj, Tableau):
        return obj.pyramid, obj.rows()
    return obj.pyramid, obj.rows


def _compositions(total_max: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _compositions(total_max - first, parts - 1):
            yield (first,) + rest


def _entry_factor_tuples(i: int, a: Fraction, n: int, depth: int) -> list[tuple[int, dict]]:
    """Graded raw monomials contributed by one entry ``a`` on row ``i``."""
    out = []
    for c in _compositions(depth, n - i):
        # c[t] is the step for row k = i + 1 + t
        shifts = {}
        running = 0
        for k in range(n, i - 1, -1):
            shifts[k] = a - running
            if k > i:
                running += c[k - i - 1]
        mono: dict = {}
        mono = _monomial_mul_raw(mono, {(i, shifts[i]): 1})
        for k in range(i + 1, n + 1):
            mono = _monomial_mul_raw(mono, {(k, shifts[k]): 1})
            mono = _monomial_mul_raw(mono, {(k, shifts[k - 1]): -1})
        out.append((sum(c), mono))
    return out


def _entry_factor_tabloids(i: int, a: Fraction, n: int, depth: int) -> list[tuple[int, dict]]:
    """Same factor via rows of boxes with residues ``a-1, a-2, ...`` read from the right.

    The first few boxes (from the right) carry labels in ``i+1..n`` that weakly
    decrease; the infinite remainder carries ``i`` and telescopes to a single
    ``y`` variable.
    """
    out = []
    labels = list(range(n, i, -1))
    for used in range(depth + 1):
        for filling in itertools.combinations_with_replacement(labels, used):
            mono: dict = {}
            for pos, label in enumerate(filling):
                residue = a - 1 - pos
                mono = _monomial_mul_raw(mono, {(label, residue + 1): 1, (label, residue): -1})
            mono = _monomial_mul_raw(mono, {(i, a - used): 1})
            out.append((used, mono))
    return out


def _combine(pyramid: Pyramid, rows, depth: int, factor) -> GTCharacter:
    n = pyramid.n
    graded: dict[int, Counter] = {0: Counter({(): 1})}
    for i, row in enumerate(rows, start=1):
        for a in row:
            pieces = factor(i, as_entry(a), n, depth)
            nxt: dict[int, Counter] = {}
            for g, terms in graded.items():
                for g2, mono in pieces:
                    if g + g2 > depth:
                        continue
                    acc = nxt.setdefault(g + g2, Counter())
                    for key, c in terms.items():
                        merged = _monomial_mul_raw(dict(key), mono)
                        acc[tuple(sorted(merged.items()))] += c
            graded = nxt
    out = {
        g: _normalized(terms) for g, terms in graded.items()
    }
    return GTCharacter(n, out, depth)


def _normalized(terms: Mapping[tuple, int]) -> Counter:
    acc: Counter = Counter()
    for key, c in terms.items():
        acc[GTMonomial.from_map(dict(key))] += c
    return acc


def verma_character(tabloid: RowTabloid | Tableau, depth: int = 4) -> GTCharacter:
    """Sum over lowering tuples with total size at most ``depth``."""
    pyramid, rows = _rows_of(tabloid)
    return _combine(pyramid, rows, depth, _entry_factor_tuples)


def verma_character_tabloids(tabloid: RowTabloid | Tableau, depth: int = 4) -> GTCharacter:
    """Same character enumerated box by box over tabloid fillings."""
    pyramid, rows = _rows_of(tabloid)
    return _combine(pyramid, rows, depth, _entry_factor_tabloids)


def verma_coefficient_bound(pyramid: Pyramid) -> int:
    """``prod_{i<n} (p_1 + ... + p_i)!``."""
    bound, running = 1, 0
    for size in pyramid.p[:-1]:
        running += size
        bound *= factorial(running)
    return bound


# ---------------------------------------------------------------------------
# standard characters


def _semistandard(shape: Sequence[int], largest: int) -> Iterator[dict[tuple[int, int], int]]:
    """Fillings weakly increasing along rows, strictly down columns, entries ``1..largest``."""
    cells = [(r, s) for r, length in enumerate(shape) for s in range(length)]
    filling: dict[tuple[int, int], int] = {}

    def place(t: int) -> Iterator[dict]:
        if t == len(cells):
            yield dict(filling)
            return
        r, s = cells[t]
        low = 1
        if s > 0:
            low = max(low, filling[(r, s - 1)])
        if r > 0:
            low = max(low, filling[(r - 1, s)] + 1)
        for value in range(low, largest + 1):
            filling[(r, s)] = value
            yield from place(t + 1)
        filling.pop((r, s), None)

    yield from place(0)


def column_character(entries: Sequence, n: int) -> GTCharacter:
    """Character of one column with entries listed top to bottom."""
    entries = [as_entry(a) for a in entries]
    m = len(entries)
    for upper, lower in zip(entries, entries[1:]):
        diff = upper - lower
        if diff.denominator != 1 or diff <= 0:
            raise NotColumnStrict("column entries must strictly decrease by integers")
    c = entries[-1] + m - 1
    shape = [int(entries[t] + t - c) for t in range(m)]
    while shape and shape[-1] == 0:
        shape.pop()
    prefactor = {(n - m + t, c - t + 1): 1 for t in range(1, m + 1)}
    terms: Counter = Counter()
    for filling in _semistandard(shape, m):
        mono = dict(prefactor)
        for (r, s), t in filling.items():
            row = n - m + t
            residue = c + s - r
            mono = _monomial_mul_raw(mono, {(row, residue + 1): 1, (row, residue): -1})
        terms[GTMonomial.from_map(mono)] += 1
    return GTCharacter.from_terms(n, terms)


def standard_character(tableau: Tableau) -> GTCharacter:
    """Product over columns of the single-column characters."""
    if not is_column_strict(tableau):
        raise NotColumnStrict("standard characters need a column-strict tableau")
    n = tableau.pyramid.n
    chi = GTCharacter.one(n)
    for col in tableau.columns():
        chi = multiply(chi, column_character(col, n))
    return chi


# ---------------------------------------------------------------------------
# central character check


def central_substitute(chi: GTCharacter, obj: RowTabloid | Tableau) -> bool:
    """Substituting ``y_{i,a} -> (u+a)/(u+1-i)`` and clearing ``prod (u+1-i)^{p_i}``
    must give ``prod (u + a_{ij})`` for every monomial."""
    pyramid, _ = _rows_of(obj)
    target = Counter(content(obj))
    for mono in chi.terms():
        net: Counter = Counter()
        for (i, a), e in mono.exponents:
            net[a] += e
            net[Fraction(1 - i)] -= e
        for i, size in enumerate(pyramid.p, start=1):
            net[Fraction(1 - i)] += size
        if Counter({k: v for k, v in net.items() if v}) != target:
            return False
    return True
