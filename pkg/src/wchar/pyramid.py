"""Pyramids, tableaux, readings, Bruhat order and row insertion.

Entries are exact :class:`fractions.Fraction` values.  Two entries are
comparable only when they differ by an integer, and ``a >= b`` means
``a - b`` is a non-negative integer.

>>> pyr = Pyramid.new((3, 2, 2), k=0, n=3)
>>> tab = Tableau.from_rows(pyr, [[1], [0, 3, 2], [4, 3, 1]])
>>> [int(x) for x in column_reading(tab)]
[1, 0, 4, 3, 3, 2, 1]
>>> [int(x) for x in row_reading(tab.row_class())]
[1, 0, 2, 3, 1, 3, 4]
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    HeightTooSmall,
    InvalidPyramid,
    LengthMismatch,
    NotColumnStrict,
    NotStandard,
    RangeRequired,
    ShapeMismatch,
)

__all__ = [
    "Pyramid",
    "Tableau",
    "RowTabloid",
    "as_entry",
    "entry_ge",
    "entry_gt",
    "same_coset",
    "coset_key",
    "entry_sort_key",
    "column_reading",
    "row_reading",
    "content",
    "is_column_strict",
    "bruhat_leq",
    "bruhat_down_set",
    "row_insert",
    "is_standard",
    "rectify",
    "parallel_equiv",
    "is_dominant",
    "column_strict_representative",
    "ground_state",
    "enumerate_tableaux",
    "format_entry",
    "parse_entry",
]


# ---------------------------------------------------------------------------
# entries


def as_entry(value) -> Fraction:
    """Coerce ints, fractions or ``"p/q"`` strings to an exact entry."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point entries are not exact")
    return Fraction(value)


def parse_entry(text: str) -> Fraction:
    return Fraction(text)


def format_entry(value: Fraction) -> str:
    value = as_entry(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def same_coset(a: Fraction, b: Fraction) -> bool:
    return (a - b).denominator == 1


def entry_ge(a: Fraction, b: Fraction) -> bool:
    diff = a - b
    return diff.denominator == 1 and diff >= 0


def entry_gt(a: Fraction, b: Fraction) -> bool:
    diff = a - b
    return diff.denominator == 1 and diff > 0


def coset_key(a: Fraction) -> Fraction:
    """Canonical representative of ``a`` modulo the integers, in ``[0, 1)``."""
    return a - math.floor(a)


def entry_sort_key(a: Fraction) -> tuple[Fraction, Fraction]:
    return (coset_key(a), a)


# ---------------------------------------------------------------------------
# pyramids


@dataclass(frozen=True)
class Pyramid:
    """Column heights ``q`` with split index ``k`` drawn in ``n`` rows.

    Rows are numbered ``1..n`` from the top; column ``c`` occupies the bottom
    ``q[c-1]`` rows.  Boxes are numbered down columns, left to right.
    """

    q: tuple[int, ...]
    k: int
    n: int
    p: tuple[int, ...] = field(init=False, compare=False)
    sigma: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    S: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    boxes: tuple[tuple[int, int], ...] = field(init=False, compare=False, repr=False)
    column_boxes: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    row_boxes: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        q = tuple(int(h) for h in self.q)
        object.__setattr__(self, "q", q)
        l = len(q)
        if l == 0 or any(h <= 0 for h in q):
            raise InvalidPyramid(f"column heights must be positive: {q}")
        if not 0 <= self.k <= l:
            raise InvalidPyramid(f"split index {self.k} outside 0..{l}")
        left, right = q[: self.k], q[self.k :]
        if any(x > y for x, y in zip(left, left[1:])):
            raise InvalidPyramid(f"columns 1..{self.k} must weakly increase: {q}")
        if any(x < y for x, y in zip(right, right[1:])):
            raise InvalidPyramid(f"columns {self.k + 1}..{l} must weakly decrease: {q}")
        if self.n < max(q):
            raise HeightTooSmall(f"n={self.n} is below the tallest column {max(q)}")
        n = self.n

        def shift(i: int, j: int) -> int:
            if i >= j:
                return sum(1 for c in range(self.k) if i > n - q[c] >= j)
            return sum(1 for c in range(self.k, l) if i <= n - q[c] < j)

        sigma = tuple(tuple(shift(i, j) for j in range(1, n + 1)) for i in range(1, n + 1))
        p = tuple(l - sigma[n - 1][i - 1] - sigma[i - 1][n - 1] for i in range(1, n + 1))
        big_s = tuple(
            tuple(sigma[i][j] + p[min(i, j)] for j in range(n)) for i in range(n)
        )
        boxes: list[tuple[int, int]] = []
        column_boxes = []
        for c, h in enumerate(q, start=1):
            column_boxes.append(tuple(range(len(boxes), len(boxes) + h)))
            boxes.extend((row, c) for row in range(n - h + 1, n + 1))
        row_boxes = tuple(
            tuple(b for b, (row, _) in enumerate(boxes) if row == i) for i in range(1, n + 1)
        )
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "S", big_s)
        object.__setattr__(self, "boxes", tuple(boxes))
        object.__setattr__(self, "column_boxes", tuple(column_boxes))
        object.__setattr__(self, "row_boxes", row_boxes)

    @classmethod
    def new(cls, q: Sequence[int], k: int | None = None, n: int | None = None) -> "Pyramid":
        """Build a pyramid; ``k`` defaults to the length of the weakly increasing
        prefix of ``q`` and ``n`` to the tallest column."""
        q = tuple(int(h) for h in q)
        if not q:
            raise InvalidPyramid("empty pyramid")
        if k is None:
            k = 1
            while k < len(q) and q[k] >= q[k - 1]:
                k += 1
        if n is None:
            n = max(q)
        return cls(q, k, n)

    @property
    def l(self) -> int:
        return len(self.q)

    @property
    def N(self) -> int:
        return sum(self.q)

    def box(self, index: int) -> tuple[int, int]:
        """Row and column of the box with 1-based ``index``."""
        return self.boxes[index - 1]

    def shift(self, i: int, j: int) -> int:
        return self.sigma[i - 1][j - 1]

    def column_rows(self, c: int) -> range:
        return range(self.n - self.q[c - 1] + 1, self.n + 1)

    def row_columns(self, i: int) -> tuple[int, ...]:
        return tuple(self.boxes[b][1] for b in self.row_boxes[i - 1])

    def to_dict(self) -> dict:
        return {"q": list(self.q), "k": self.k, "n": self.n}


# ---------------------------------------------------------------------------
# tableaux


def _entries(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_entry(v) for v in values)


@dataclass(frozen=True)
class Tableau:
    """A filling of every box; ``entries[b]`` belongs to box ``b + 1``."""

    pyramid: Pyramid
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        entries = _entries(self.entries)
        if len(entries) != self.pyramid.N:
            raise LengthMismatch(f"expected {self.pyramid.N} entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, pyramid: Pyramid, rows: Sequence[Sequence]) -> "Tableau":
        """Rows top to bottom, each listed left to right."""
        if len(rows) != pyramid.n:
            raise ShapeMismatch(f"expected {pyramid.n} rows, got {len(rows)}")
        entries: list[Fraction | None] = [None] * pyramid.N
        for i, row in enumerate(rows):
            boxes = pyramid.row_boxes[i]
            if len(row) != len(boxes):
                raise ShapeMismatch(f"row {i + 1} needs {len(boxes)} entries, got {len(row)}")
            for b, value in zip(boxes, row):
                entries[b] = as_entry(value)
        return cls(pyramid, tuple(entries))  # type: ignore[arg-type]

    @classmethod
    def from_columns(cls, pyramid: Pyramid, columns: Sequence[Sequence]) -> "Tableau":
        """Columns left to right, each listed top to bottom."""
        if len(columns) != pyramid.l:
            raise ShapeMismatch(f"expected {pyramid.l} columns, got {len(columns)}")
        flat: list = []
        for c, col in enumerate(columns):
            if len(col) != pyramid.q[c]:
                raise ShapeMismatch(f"column {c + 1} needs {pyramid.q[c]} entries")
            flat.extend(col)
        return cls(pyramid, _entries(flat))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[b] for b in self.pyramid.row_boxes[i - 1])

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(self.row(i) for i in range(1, self.pyramid.n + 1))

    def column(self, c: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[b] for b in self.pyramid.column_boxes[c - 1])

    def columns(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(self.column(c) for c in range(1, self.pyramid.l + 1))

    def row_class(self) -> "RowTabloid":
        return RowTabloid(self.pyramid, self.rows())

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_dict(self) -> dict:
        data = self.pyramid.to_dict()
        data["rows"] = [[format_entry(x) for x in row] for row in self.rows()]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Tableau":
        pyramid = Pyramid(tuple(data["q"]), int(data["k"]), int(data["n"]))
        return cls.from_rows(pyramid, [[parse_entry(str(x)) for x in row] for row in data["rows"]])

    @classmethod
    def from_json(cls, text: str) -> "Tableau":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class RowTabloid:
    """A tableau up to permutations within rows; rows are kept canonically sorted."""

    pyramid: Pyramid
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(sorted(_entries(r), key=entry_sort_key)) for r in self.rows)
        if len(rows) != self.pyramid.n:
            raise ShapeMismatch(f"expected {self.pyramid.n} rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != self.pyramid.p[i]:
                raise ShapeMismatch(
                    f"row {i + 1} needs {self.pyramid.p[i]} entries, got {len(row)}"
                )
        object.__setattr__(self, "rows", rows)

    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for row in self.rows for x in row)

    @cached_property
    def content_key(self) -> tuple[Fraction, ...]:
        """Sorted entries; equal exactly when contents are equal."""
        return tuple(sorted(self.entries()))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries())

    def representative(self) -> Tableau:
        """The tableau whose rows are the canonical sorted rows."""
        return Tableau.from_rows(self.pyramid, self.rows)

    def to_dict(self) -> dict:
        data = self.pyramid.to_dict()
        data["rows"] = [[format_entry(x) for x in row] for row in self.rows]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RowTabloid":
        pyramid = Pyramid(tuple(data["q"]), int(data["k"]), int(data["n"]))
        return cls(pyramid, tuple(tuple(parse_entry(str(x)) for x in row) for row in data["rows"]))

    @classmethod
    def from_json(cls, text: str) -> "RowTabloid":
        return cls.from_dict(json.loads(text))


def ground_state(pyramid: Pyramid) -> Tableau:
    """Every entry on row ``i`` equals ``1 - i``."""
    return Tableau.from_rows(
        pyramid, [[1 - i] * pyramid.p[i - 1] for i in range(1, pyramid.n + 1)]
    )


# ---------------------------------------------------------------------------
# readings and content


def column_reading(tableau: Tableau) -> tuple[Fraction, ...]:
    """Entries down each column, leftmost column first (box order)."""
    return tableau.entries


def row_reading(tabloid: RowTabloid) -> tuple[Fraction, ...]:
    return tabloid.entries()


def content(obj: Tableau | RowTabloid) -> Counter:
    if isinstance(obj, Tableau):
        return Counter(obj.entries)
    return Counter(obj.entries())


def is_column_strict(tableau: Tableau) -> bool:
    return all(
        entry_gt(upper, lower)
        for col in tableau.columns()
        for upper, lower in zip(col, col[1:])
    )


# ---------------------------------------------------------------------------
# Bruhat order on row classes


def _scale_of(tabloids: Iterable[RowTabloid]) -> int:
    scale = 1
    for tab in tabloids:
        for x in tab.entries():
            scale = math.lcm(scale, x.denominator)
    return scale


def _encode(tabloid: RowTabloid, scale: int) -> tuple[tuple[int, ...], ...]:
    """Rows as sorted tuples of integers ``scale * entry`` (canonical order is
    by residue mod ``scale``, then value)."""
    return tuple(
        tuple(sorted((int(x * scale) for x in row), key=lambda v: (v % scale, v)))
        for row in tabloid.rows
    )


def _decode(code, pyramid: Pyramid, scale: int) -> RowTabloid:
    return RowTabloid(pyramid, tuple(tuple(Fraction(v, scale) for v in row) for row in code))


def _encoded_down_moves(code, scale: int):
    n = len(code)
    for i in range(n):
        upper_row = code[i]
        for j in range(i + 1, n):
            lower_row = code[j]
            for x in set(upper_row):
                for y in set(lower_row):
                    if x > y and (x - y) % scale == 0:
                        upper = list(upper_row)
                        upper.remove(x)
                        upper.append(y)
                        lower = list(lower_row)
                        lower.remove(y)
                        lower.append(x)
                        key = lambda v: (v % scale, v)
                        new = list(code)
                        new[i] = tuple(sorted(upper, key=key))
                        new[j] = tuple(sorted(lower, key=key))
                        yield tuple(new)


def _encoded_down_set(code, scale: int) -> set:
    seen = {code}
    queue = deque([code])
    while queue:
        for nxt in _encoded_down_moves(queue.popleft(), scale):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def bruhat_down_set(tabloid: RowTabloid) -> frozenset[RowTabloid]:
    """All row classes ``B`` with ``B <= tabloid`` (breadth-first search over swaps)."""
    scale = _scale_of([tabloid])
    codes = _encoded_down_set(_encode(tabloid, scale), scale)
    return frozenset(_decode(c, tabloid.pyramid, scale) for c in codes)


def bruhat_leq(lower: RowTabloid, upper: RowTabloid) -> bool:
    """True when ``lower <= upper`` in the Bruhat order on row classes."""
    if lower.pyramid != upper.pyramid:
        raise ShapeMismatch("tabloids live on different pyramids")
    if lower == upper:
        return True
    if content(lower) != content(upper):
        return False
    scale = _scale_of([lower, upper])
    target = _encode(lower, scale)
    start = _encode(upper, scale)
    seen = {start}
    queue = deque([start])
    while queue:
        for nxt in _encoded_down_moves(queue.popleft(), scale):
            if nxt == target:
                return True
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


# ---------------------------------------------------------------------------
# row insertion, standardness, rectification


def row_insert(word: Sequence, pyramid: Pyramid) -> RowTabloid | None:
    """Bumping insertion into the bottom row; ``None`` when some row overflows."""
    word = _entries(word)
    if len(word) != pyramid.N:
        raise LengthMismatch(f"word of length {len(word)} for a pyramid with {pyramid.N} boxes")
    n = pyramid.n
    rows: list[list[Fraction]] = [[] for _ in range(n)]
    for letter in word:
        value = letter
        r = n - 1
        while True:
            if r < 0:
                return None
            row = rows[r]
            bigger = [idx for idx, b in enumerate(row) if entry_gt(b, value)]
            if not bigger:
                row.append(value)
                if len(row) > pyramid.p[r]:
                    return None
                break
            idx = min(bigger, key=lambda t: row[t])
            row[idx], value = value, row[idx]
            r -= 1
    return RowTabloid(pyramid, tuple(tuple(r) for r in rows))


def is_standard(tableau: Tableau) -> bool:
    return is_column_strict(tableau) and row_insert(column_reading(tableau), tableau.pyramid) is not None


def rectify(tableau: Tableau) -> RowTabloid:
    """The rectification ``R(A)`` of a standard tableau."""
    if not is_column_strict(tableau):
        raise NotStandard("tableau is not column-strict")
    result = row_insert(column_reading(tableau), tableau.pyramid)
    if result is None:
        raise NotStandard("column reading is not admissible")
    return result


def _column_signature(tableau: Tableau) -> dict:
    groups: dict = {}
    for col in tableau.columns():
        groups.setdefault((len(col), coset_key(col[0])), []).append(col)
    return groups


def parallel_equiv(first: Tableau, second: Tableau) -> bool:
    """Equal-height columns may be shuffled as long as same-coset columns keep their order."""
    if first.pyramid != second.pyramid:
        raise ShapeMismatch("tableaux live on different pyramids")
    for tab in (first, second):
        if not is_column_strict(tab):
            raise NotColumnStrict("parallel equivalence needs column-strict tableaux")
    return _column_signature(first) == _column_signature(second)


# ---------------------------------------------------------------------------
# dominance


def _strict_matching(upper: Sequence[Fraction], lower: Sequence[Fraction]) -> list[int] | None:
    """Injective assignment ``upper[t] > lower[match[t]]`` found by backtracking,
    solved independently inside each coset."""
    match: list[int] = [-1] * len(upper)
    by_coset: dict = {}
    for t, x in enumerate(upper):
        by_coset.setdefault(coset_key(x), ([], []))[0].append(t)
    for s, y in enumerate(lower):
        by_coset.setdefault(coset_key(y), ([], []))[1].append(s)
    for tops, bottoms in by_coset.values():
        if len(tops) > len(bottoms):
            return None
        # most constrained (smallest) top entries first
        tops = sorted(tops, key=lambda t: upper[t])
        used = [False] * len(bottoms)

        def search(pos: int) -> bool:
            if pos == len(tops):
                return True
            x = upper[tops[pos]]
            tried = set()
            for slot, s in enumerate(bottoms):
                y = lower[s]
                if used[slot] or y in tried or not entry_gt(x, y):
                    continue
                tried.add(y)
                used[slot] = True
                match[tops[pos]] = s
                if search(pos + 1):
                    return True
                used[slot] = False
            return False

        if not search(0):
            return None
    return match


def column_strict_representative(tabloid: RowTabloid) -> Tableau | None:
    """A column-strict tableau in the row class, or ``None`` if none exists."""
    pyramid = tabloid.pyramid
    rows = tabloid.rows
    placed: list[dict[int, Fraction]] = [dict() for _ in range(pyramid.n)]
    first = next(i for i in range(pyramid.n) if pyramid.p[i] > 0)
    for col, value in zip(pyramid.row_columns(first + 1), rows[first]):
        placed[first][col] = value
    for i in range(first, pyramid.n - 1):
        upper_cols = list(placed[i])
        upper_vals = [placed[i][c] for c in upper_cols]
        match = _strict_matching(upper_vals, rows[i + 1])
        if match is None:
            return None
        taken = set(match)
        for c, s in zip(upper_cols, match):
            placed[i + 1][c] = rows[i + 1][s]
        spare = iter(v for s, v in enumerate(rows[i + 1]) if s not in taken)
        for c in pyramid.row_columns(i + 2):
            if c not in placed[i + 1]:
                placed[i + 1][c] = next(spare)
    return Tableau.from_rows(
        pyramid,
        [[placed[i][c] for c in pyramid.row_columns(i + 1)] for i in range(pyramid.n)],
    )


def is_dominant(tabloid: RowTabloid) -> bool:
    return column_strict_representative(tabloid) is not None


# ---------------------------------------------------------------------------
# enumeration


def _entry_values(entry_range) -> tuple[int, ...]:
    if entry_range is None:
        raise RangeRequired("enumeration needs a finite range of integer entries")
    if isinstance(entry_range, range):
        values = tuple(entry_range)
    elif isinstance(entry_range, tuple) and len(entry_range) == 2 and all(
        isinstance(v, int) for v in entry_range
    ):
        values = tuple(range(entry_range[0], entry_range[1] + 1))
    else:
        values = tuple(sorted(set(int(v) for v in entry_range)))
    if not values:
        raise RangeRequired("entry range is empty")
    return values


def _row_classes(pyramid: Pyramid, values: tuple[int, ...]) -> Iterator[RowTabloid]:
    choices = [
        list(itertools.combinations_with_replacement(values, size)) for size in pyramid.p
    ]
    for rows in itertools.product(*choices):
        yield RowTabloid(pyramid, rows)


def _column_strict(pyramid: Pyramid, values: tuple[int, ...]) -> Iterator[Tableau]:
    descending = tuple(sorted(values, reverse=True))
    choices = [list(itertools.combinations(descending, h)) for h in pyramid.q]
    for cols in itertools.product(*choices):
        yield Tableau.from_columns(pyramid, cols)


def enumerate_tableaux(
    pyramid: Pyramid,
    entry_range,
    kind: str,
    content_filter: Counter | dict | None = None,
) -> Iterator[Tableau | RowTabloid]:
    """Exhaustive duplicate-free stream of ``Row0``, ``Col0``, ``Std0`` or ``Dom0``
    objects with integer entries drawn from ``entry_range``."""
    values = _entry_values(entry_range)
    wanted = None
    if content_filter is not None:
        wanted = Counter({as_entry(k): v for k, v in dict(content_filter).items() if v})
    kind = kind.lower()
    if kind in ("row0", "dom0"):
        stream: Iterator = _row_classes(pyramid, values)
        if kind == "dom0":
            stream = (t for t in stream if is_dominant(t))
    elif kind in ("col0", "std0"):
        stream = _column_strict(pyramid, values)
        if kind == "std0":
            stream = (t for t in stream if is_standard(t))
    else:
        raise ValueError(f"unknown tableau kind {kind!r}")
    for item in stream:
        if wanted is None or content(item) == wanted:
            yield item
