"""Permutations, Bruhat order and Kazhdan-Lusztig polynomials.

Permutations are tuples in one-line notation on ``1..N``.  Products are
composition of functions, ``(x * y)(k) = x(y(k))``, which matches the right
place-permutation action ``(alpha . w)_k = alpha_{w(k)}``.

>>> kl_poly((1, 2, 3), (3, 2, 1))
(1,)
>>> d_of_weight((1, 0))
(2, 1)
"""

from __future__ import annotations

import os
import threading
from functools import lru_cache
from typing import Sequence

from .errors import LengthMismatch, NotAPermutation, SizeLimit

__all__ = [
    "MAX_N",
    "Permutation",
    "identity",
    "longest_element",
    "compose",
    "inverse",
    "length",
    "bruhat_leq_perm",
    "d_of_weight",
    "kl_poly",
    "kl_value_at_one",
    "r_poly",
    "kl_poly_via_r",
    "max_orbit",
]

MAX_N = 8

Permutation = tuple[int, ...]
Poly = tuple[int, ...]


def max_orbit() -> int:
    """Orbit cap read from ``WCHAR_MAX_ORBIT`` (default ``7! = 5040``)."""
    return int(os.environ.get("WCHAR_MAX_ORBIT", "5040"))


def _check_size(size: int) -> None:
    if size > MAX_N:
        raise SizeLimit(f"symmetric groups are limited to N <= {MAX_N}, got {size}")


def _checked_pair(x: Sequence[int], y: Sequence[int]) -> tuple[Permutation, Permutation]:
    x, y = tuple(x), tuple(y)
    if len(x) != len(y):
        raise LengthMismatch("permutations of different sizes")
    for w in (x, y):
        if sorted(w) != list(range(1, len(w) + 1)):
            raise NotAPermutation(f"{w} is not a permutation of 1..{len(w)}")
    return x, y


def identity(size: int) -> Permutation:
    return tuple(range(1, size + 1))


def longest_element(size: int) -> Permutation:
    return tuple(range(size, 0, -1))


def compose(x: Permutation, y: Permutation) -> Permutation:
    x, y = _checked_pair(x, y)
    return tuple(x[v - 1] for v in y)


def inverse(x: Permutation) -> Permutation:
    out = [0] * len(x)
    for pos, v in enumerate(x, start=1):
        out[v - 1] = pos
    return tuple(out)


def length(x: Sequence[int]) -> int:
    """Inversion count (works for any integer sequence)."""
    return sum(1 for i in range(len(x)) for j in range(i + 1, len(x)) if x[i] > x[j])


def bruhat_leq_perm(x: Permutation, y: Permutation) -> bool:
    """Tableau criterion: sorted prefixes of ``x`` are dominated by those of ``y``."""
    x, y = _checked_pair(x, y)
    for i in range(1, len(x)):
        for a, b in zip(sorted(x[:i]), sorted(y[:i])):
            if a > b:
                return False
    return True


def d_of_weight(alpha: Sequence[int]) -> Permutation:
    """Minimal-length ``w`` with ``alpha . w^{-1}`` weakly increasing: the stable rank."""
    order = sorted(range(len(alpha)), key=lambda t: (alpha[t], t))
    rank = [0] * len(alpha)
    for r, t in enumerate(order, start=1):
        rank[t] = r
    return tuple(rank)


# ---------------------------------------------------------------------------
# polynomial helpers on coefficient tuples


def _trim(coeffs: list[int]) -> Poly:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _add_into(acc: list[int], poly: Poly, scale: int = 1, shift: int = 0) -> None:
    need = len(poly) + shift
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for d, c in enumerate(poly):
        acc[d + shift] += scale * c


def _mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


# ---------------------------------------------------------------------------
# classical recursion, one Bruhat interval column at a time


def _left_mult(s: int, x: Permutation) -> Permutation:
    """``s_s * x``: swap the values ``s`` and ``s+1``."""
    return tuple(s + 1 if v == s else s if v == s + 1 else v for v in x)


def _left_descent(w: Permutation) -> int | None:
    """Smallest ``s`` with ``s_s w < w`` (value ``s+1`` left of ``s``)."""
    pos = inverse(w)
    for s in range(1, len(w)):
        if pos[s] < pos[s - 1]:
            return s
    return None


class _KLTable:
    def __init__(self) -> None:
        self._columns: dict[Permutation, dict[Permutation, Poly]] = {}
        self._mu_lists: dict[Permutation, list[tuple[Permutation, int]]] = {}
        self._lock = threading.Lock()

    def column(self, w: Permutation) -> dict[Permutation, Poly]:
        col = self._columns.get(w)
        if col is not None:
            return col
        with self._lock:
            return self._build(w)

    def _build(self, w: Permutation) -> dict[Permutation, Poly]:
        # iterative to avoid deep recursion: build the chain of needed columns
        pending = [w]
        while pending:
            top = pending[-1]
            if top in self._columns:
                pending.pop()
                continue
            s = _left_descent(top)
            if s is None:
                self._columns[top] = {top: (1,)}
                pending.pop()
                continue
            v = _left_mult(s, top)
            missing = [v] if v not in self._columns else []
            if not missing:
                missing = [z for z in self._mu_candidates(v, s) if z not in self._columns]
            if missing:
                pending.extend(missing)
                continue
            self._columns[top] = self._compute(top, s, v)
            pending.pop()
        return self._columns[w]

    def _mu_list(self, v: Permutation) -> list[tuple[Permutation, int]]:
        cached = self._mu_lists.get(v)
        if cached is None:
            lv = length(v)
            cached = []
            for z, poly in self._columns[v].items():
                gap = lv - length(z)
                if gap % 2 == 1:
                    top = (gap - 1) // 2
                    if len(poly) == top + 1 and poly[top] != 0:
                        cached.append((z, poly[top]))
            self._mu_lists[v] = cached
        return cached

    def _mu_candidates(self, v: Permutation, s: int) -> list[Permutation]:
        return [z for z, _ in self._mu_list(v) if _left_mult(s, z) != z and length(_left_mult(s, z)) < length(z)]

    def _compute(self, w: Permutation, s: int, v: Permutation) -> dict[Permutation, Poly]:
        col_v = self._columns[v]
        lw = length(w)
        terms = [
            (z, mu, self._columns[z])
            for z, mu in self._mu_list(v)
            if length(_left_mult(s, z)) < length(z)
        ]
        support = set(col_v)
        support.update(_left_mult(s, x) for x in col_v)
        out: dict[Permutation, Poly] = {}
        for x in support:
            sx = _left_mult(s, x)
            x_descends = length(sx) < length(x)
            acc: list[int] = []
            p_sx = col_v.get(sx, ())
            p_x = col_v.get(x, ())
            if x_descends:
                _add_into(acc, p_sx)
                _add_into(acc, p_x, shift=1)
            else:
                _add_into(acc, p_sx, shift=1)
                _add_into(acc, p_x)
            for z, mu, col_z in terms:
                p_xz = col_z.get(x)
                if p_xz:
                    _add_into(acc, p_xz, scale=-mu, shift=(lw - length(z)) // 2)
            poly = _trim(acc)
            if poly:
                out[x] = poly
        return out


_TABLE = _KLTable()


def kl_poly(x: Permutation, y: Permutation) -> Poly:
    """Coefficients of ``P_{x,y}(q)`` from the constant term up; ``()`` when ``x`` is not below ``y``."""
    x, y = _checked_pair(x, y)
    _check_size(len(y))
    return _TABLE.column(y).get(x, ())


def kl_value_at_one(x: Permutation, y: Permutation) -> int:
    return sum(kl_poly(x, y))


# ---------------------------------------------------------------------------
# independent oracle: R-polynomials and the inversion formula


@lru_cache(maxsize=None)
def r_poly(x: Permutation, y: Permutation) -> Poly:
    """``R_{x,y}(q)`` by the standard descent recursion."""
    if not bruhat_leq_perm(x, y):
        return ()
    if x == y:
        return (1,)
    s = _left_descent(y)
    sy = _left_mult(s, y)
    sx = _left_mult(s, x)
    if length(sx) < length(x):
        return r_poly(sx, sy)
    acc: list[int] = []
    _add_into(acc, _mul((-1, 1), r_poly(x, sy)))
    _add_into(acc, r_poly(sx, sy), shift=1)
    return _trim(acc)


def kl_poly_via_r(x: Permutation, w: Permutation) -> Poly:
    """``P_{x,w}`` from ``q^{l(w)-l(x)} P(q^{-1}) - P(q) = sum_{x<y<=w} R_{x,y} P_{y,w}``;
    the degree bound separates the two sides, so the low half of the right-hand
    side determines ``P``."""
    x, w = _checked_pair(x, w)
    _check_size(len(w))
    return _oracle_column(w).get(x, ())


@lru_cache(maxsize=None)
def _oracle_column(w: Permutation) -> dict[Permutation, Poly]:
    from itertools import permutations

    size = len(w)
    below = [x for x in permutations(range(1, size + 1)) if bruhat_leq_perm(x, w)]
    below.sort(key=length, reverse=True)
    result: dict[Permutation, Poly] = {}
    lw = length(w)
    for x in below:
        if x == w:
            result[x] = (1,)
            continue
        acc: list[int] = []
        lx = length(x)
        for y in below:
            if y != x and length(y) > lx and bruhat_leq_perm(x, y):
                _add_into(acc, _mul(r_poly(x, y), result[y]))
        gap = lw - lx
        low = [-c for c in acc[: (gap - 1) // 2 + 1]]
        result[x] = _trim(low)
    return result
