"""Explicit matrices for two-row standard modules of shifted Yangians.

A module is described by the coefficient matrices of the four generating
series ``D_1(u), D_2(u), E(u), F(u)`` up to a finite degree.  Single columns
come from the evaluation action of ``gl_2`` (height two) or ``gl_1`` (height
one); longer pyramids are assembled left to right with the comultiplication,
after twisting each factor to the triangular shift matrix the coproduct
expects.

Matrices are numpy arrays holding exact integers (``int64`` while a magnitude
bound guarantees no overflow, Python integers or ``Fraction`` otherwise).
Eigenvalue work is done exactly with python-flint.

>>> from wchar.pyramid import Pyramid, Tableau
>>> A = Tableau.from_columns(Pyramid.new((2, 1), 1, 2), [(2, 0), (1,)])
>>> module = standard_module(A)
>>> module.dim, verify_relations(module, 3).ok
(2, True)
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint
import numpy as np

from .characters import GTCharacter, GTMonomial
from .errors import (
    ConsistencyError,
    DegreeTooSmall,
    NoGenerator,
    NormalizationError,
    NotColumnStrict,
    ShiftMismatch,
    UnsupportedHeight,
)
from .pyramid import Pyramid, RowTabloid, Tableau, as_entry, is_column_strict

__all__ = [
    "SeriesAction",
    "RelationReport",
    "column_action",
    "retwist",
    "tensor_action",
    "standard_module",
    "verify_relations",
    "highest_weight_vectors",
    "gt_character",
    "is_irreducible",
    "DEFAULT_DEGREE",
]

DEFAULT_DEGREE = 6
FAMILIES = ("D1", "D2", "E", "F")

# products whose entries could exceed this switch to Python integers
_SAFE = 1 << 52


# ---------------------------------------------------------------------------
# exact matrix arithmetic


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _as_object(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def _bound(matrices) -> int | None:
    """Largest entry size over int64 matrices, ``None`` if any holds Python objects."""
    best = 0
    for a in matrices:
        if a is None:
            continue
        if a.dtype == object:
            return None
        best = max(best, _maxabs(a))
    return best


def _harmonize(matrices: list, safe: bool) -> list:
    """Keep int64 when ``safe``; otherwise move everything to Python objects."""
    if safe:
        return matrices
    return [None if a is None else _as_object(a) for a in matrices]


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(rows, cols)


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        if _maxabs(a) * _maxabs(b) * max(a.shape[1], 1) < _SAFE:
            return a @ b
    return np.dot(_as_object(a), _as_object(b))


def _add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _SAFE:
        return a + b
    return _as_object(a) + _as_object(b)


def _plus(a, b):
    """Addition of matrices already known not to overflow."""
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _neg(a):
    return None if a is None else -a


def _scalar_matrix(values: Sequence, integral: bool) -> np.ndarray:
    if integral:
        return np.diag(np.array([int(v) for v in values], dtype=np.int64))
    out = np.zeros((len(values), len(values)), dtype=object)
    out[:] = Fraction(0)
    for t, v in enumerate(values):
        out[t, t] = Fraction(v)
    return out


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(int(v))


def _identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.int64)


# ---------------------------------------------------------------------------
# truncated series of matrices; index r holds the u^{-r} coefficient, None = 0

Series = list


def _convolve(x: Series, y: Series, degree: int, product) -> Series:
    """Truncated Cauchy product of two matrix series under ``product``."""
    x = x[: degree + 1]
    y = y[: degree + 1]
    bx, by = _bound(x), _bound(y)
    inner = next((a.shape[1] for a in x if a is not None), 1)
    safe = bx is not None and by is not None and (degree + 1) * bx * by * inner < _SAFE
    x = _harmonize(x, safe)
    y = _harmonize(y, safe)
    out: Series = [None] * (degree + 1)
    for s, a in enumerate(x):
        if a is None:
            continue
        for t in range(min(len(y), degree + 1 - s)):
            b = y[t]
            if b is not None:
                out[s + t] = _plus(out[s + t], product(a, b))
    return out


def _series_mul(x: Series, y: Series, degree: int) -> Series:
    return _convolve(x, y, degree, np.dot)


def _series_kron(x: Series, y: Series, degree: int) -> Series:
    return _convolve(x, y, degree, _kron)


def _series_inv(x: Series, degree: int) -> Series:
    """Inverse of a series with identity constant term."""
    out: Series = [None] * (degree + 1)
    out[0] = x[0]
    for r in range(1, degree + 1):
        acc = None
        for t in range(1, r + 1):
            if t < len(x) and x[t] is not None and out[r - t] is not None:
                acc = _add(acc, _mm(x[t], out[r - t]))
        out[r] = _neg(acc)
    return out


def _series_scale(x: Series, sign: int) -> Series:
    return x if sign == 1 else [_neg(a) for a in x]


def _series_add(x: Series, y: Series) -> Series:
    return [_add(a, b) for a, b in zip(x, y)]


# ---------------------------------------------------------------------------
# module data


@dataclass
class SeriesAction:
    """Coefficient matrices of ``D_1, D_2, E, F`` through ``degree``.

    ``shift`` is ``(s_{1,2}, s_{2,1})``; ``E[r]`` is only meaningful for
    ``r > s_{1,2}`` and ``F[r]`` for ``r > s_{2,1}``.  ``p`` holds the row
    lengths, and ``top`` lists the highest weight entries by row when known.
    """

    dim: int
    shift: tuple[int, int]
    p: tuple[int, int]
    degree: int
    series: dict[str, Series]
    top: tuple[tuple[Fraction, ...], tuple[Fraction, ...]] = ((), ())
    pyramid: Pyramid | None = field(default=None, compare=False)

    def matrix(self, family: str, r: int) -> np.ndarray:
        if r > self.degree:
            raise DegreeTooSmall(f"{family}^({r}) beyond stored degree {self.degree}")
        if family == "E" and r <= self.shift[0] or family == "F" and r <= self.shift[1]:
            raise NoGenerator(f"{family}^({r}) is not a generator for shift {self.shift}")
        a = self.series[family][r]
        return np.zeros((self.dim, self.dim), dtype=np.int64) if a is None else a

    def truncated(self, degree: int) -> "SeriesAction":
        if degree > self.degree:
            raise DegreeTooSmall(f"requested degree {degree} exceeds {self.degree}")
        return SeriesAction(self.dim, self.shift, self.p, degree,
                            {f: s[: degree + 1] for f, s in self.series.items()}, self.top, self.pyramid)


def _check_top(module: SeriesAction) -> None:
    """``D_i(u) v_+ = prod_j (1 + (a_{i,j}+i-1)/u) v_+`` and ``E(u) v_+ = 0``."""
    for i, (family, row) in enumerate((("D1", module.top[0]), ("D2", module.top[1])), start=1):
        expected = _expand_product([a + i - 1 for a in row], module.degree)
        for r in range(1, module.degree + 1):
            column = module.matrix(family, r)[:, 0]
            target = [expected[r]] + [0] * (module.dim - 1)
            if [_frac(v) for v in column] != target:
                raise NormalizationError(
                    f"{family}^({r}) v_+ does not match the highest weight {module.top}")
    for r in range(module.shift[0] + 1, module.degree + 1):
        if np.any(module.matrix("E", r)[:, 0]):
            raise NormalizationError(f"E^({r}) does not kill v_+")


def _expand_product(roots: Sequence, degree: int, multiplicities: Sequence[int] | None = None) -> list[Fraction]:
    """Coefficients of ``prod (1 + x/u)^m`` in ``u^{-1}`` up to ``degree``."""
    coeffs = [Fraction(1)] + [Fraction(0)] * degree
    mults = multiplicities or [1] * len(roots)
    for x, m in zip(roots, mults):
        x = Fraction(x)
        for _ in range(abs(m)):
            if m > 0:
                for r in range(degree, 0, -1):
                    coeffs[r] += x * coeffs[r - 1]
            else:
                for r in range(1, degree + 1):
                    coeffs[r] -= x * coeffs[r - 1]
    return coeffs


# ---------------------------------------------------------------------------
# single columns


def column_action(entries: Sequence, degree: int = 2 * DEFAULT_DEGREE + 4) -> SeriesAction:
    """Action on one column, entries listed top to bottom.

    Height two with entries ``a > b`` gives the ``gl_2`` module with highest
    weight ``(a, b+1)`` realised on ``f^{(r)} v_+`` for ``0 <= r < a-b``.
    Height one with entry ``b`` gives the one-dimensional module with
    ``D_2(u) = 1 + (b+1)/u``.
    """
    entries = [as_entry(a) for a in entries]
    if len(entries) == 2:
        a, b = entries
        diff = a - b
        if diff.denominator != 1 or diff <= 0:
            raise NotColumnStrict(f"column ({a}, {b}) is not column-strict")
        dim = int(diff)
        integral = a.denominator == 1
        e11 = _scalar_matrix([a - r for r in range(dim)], integral)
        e22 = _scalar_matrix([b + 1 + r for r in range(dim)], integral)
        e21 = np.zeros((dim, dim), dtype=np.int64)
        e12 = np.zeros((dim, dim), dtype=np.int64)
        for r in range(dim - 1):
            e21[r + 1, r] = r + 1
            e12[r, r + 1] = dim - r - 1
        ident = _identity(dim)
        D1: Series = [ident, e11] + [None] * (degree - 1)
        E: Series = [None] * (degree + 1)
        F: Series = [None] * (degree + 1)
        D2: Series = [ident, e22] + [None] * (degree - 1)
        power = ident  # (-e11)^k
        for k in range(degree):
            if k + 1 <= degree:
                E[k + 1] = _mm(power, e12)
                F[k + 1] = _mm(e21, power)
            if k + 2 <= degree:
                D2[k + 2] = -_mm(_mm(e21, power), e12)
            power = -_mm(power, e11)
        series = {"D1": D1[: degree + 1], "D2": D2[: degree + 1], "E": E, "F": F}
        module = SeriesAction(dim, (0, 0), (1, 1), degree, series, ((a,), (b,)))
    elif len(entries) == 1:
        (b,) = entries
        one = np.ones((1, 1), dtype=np.int64)
        weight = np.array([[int(b + 1)]], dtype=np.int64) if b.denominator == 1 else \
            np.array([[Fraction(b + 1)]], dtype=object)
        series = {
            "D1": [one] + [None] * degree,
            "D2": [one, weight] + [None] * (degree - 1),
            "E": [None] * (degree + 1),
            "F": [None] * (degree + 1),
        }
        module = SeriesAction(1, (0, 1), (0, 1), degree, series, ((), (b,)))
    else:
        raise UnsupportedHeight("the two-row engine handles columns of height 1 or 2")
    _check_top(module)
    return module


# ---------------------------------------------------------------------------
# twisting and tensor products


def retwist(module: SeriesAction, s12: int, s21: int) -> SeriesAction:
    """Transport the action to another shift matrix with the same ``s12 + s21``.

    ``E^{(r)}`` of the new algebra acts as ``(-1)^d E^{(r-d)}`` of the old
    one where ``d`` is the change in ``s12``; likewise for ``F``.
    """
    old12, old21 = module.shift
    if s12 + s21 != old12 + old21 or min(s12, s21) < 0:
        raise ShiftMismatch(f"cannot twist shift {module.shift} to {(s12, s21)}")
    d12, d21 = s12 - old12, s21 - old21
    if d12 == 0:
        return module
    silent = all(a is None for f in ("E", "F") for a in module.series[f])
    degree = module.degree if silent else module.degree - abs(d12)
    series = {"D1": module.series["D1"][: degree + 1], "D2": module.series["D2"][: degree + 1]}
    for family, new, d in (("E", s12, d12), ("F", s21, d21)):
        old = module.series[family]
        sign = -1 if d % 2 else 1
        out: Series = [None] * (degree + 1)
        for r in range(new + 1, degree + 1):
            a = old[r - d] if r - d < len(old) else None
            out[r] = None if a is None else (a if sign == 1 else -a)
        series[family] = out
    return SeriesAction(module.dim, (s12, s21), module.p, degree, series, module.top, module.pyramid)


def tensor_action(left: SeriesAction, right: SeriesAction, degree: int | None = None) -> SeriesAction:
    """Comultiplication of the two-row shifted Yangian applied to ``left (x) right``.

    ``left`` is twisted to a lower triangular shift and ``right`` to an upper
    triangular one; the result has shift ``(s(right), s(left))`` where ``s``
    is the total shift of a factor.
    """
    t1 = sum(left.shift)
    t2 = sum(right.shift)
    lo = retwist(left, 0, t1)
    hi = retwist(right, t2, 0)
    R = min(lo.degree, hi.degree) if degree is None else degree
    if R > min(lo.degree, hi.degree):
        raise DegreeTooSmall(f"factors only known through degree {min(lo.degree, hi.degree)}")
    D1a, D2a, Ea, Fa = (lo.series[f][: R + 1] for f in FAMILIES)
    D1b, D2b, Eb, Fb = (hi.series[f][: R + 1] for f in FAMILIES)
    ident_a = [_identity(lo.dim)] + [None] * R
    ident_b = [_identity(hi.dim)] + [None] * R

    # powers E_a(u)^k and F_b(u)^k; both series start in degree >= 1
    E_pow = [ident_a]
    F_pow = [ident_b]
    for _ in range(R):
        E_pow.append(_series_mul(E_pow[-1], Ea, R))
        F_pow.append(_series_mul(F_pow[-1], Fb, R))
    Dt_a = _series_scale(_series_inv(D1a, R), -1)
    Dt_b = _series_scale(_series_inv(D1b, R), -1)

    D1 = _series_add(
        _series_kron(D1a, D1b, R),
        _series_kron(_series_mul(D1a, Ea, R), _series_mul(Fb, D1b, R), R),
    )
    D2 = _series_kron(D2a, D2b, R)
    for k in range(1, R // 2 + 1):
        term = _series_kron(_series_mul(D2a, E_pow[k], R), _series_mul(F_pow[k], D2b, R), R)
        D2 = _series_add(D2, _series_scale(term, (-1) ** k))
    E = _series_kron(ident_a, Eb, R)
    F = _series_kron(Fa, ident_b, R)
    if any(a is not None for a in Ea) or any(b is not None for b in Fb):
        tail_b = _series_mul(Dt_b, D2b, R)  # D~_1 F^{k-1} D_2 on the right factor
        head_a = _series_mul(D2a, Dt_a, R)  # D_2 E^{k-1} D~_1 on the left factor
        for k in range(1, R + 1):
            right_part = tail_b if k == 1 else _series_mul(_series_mul(Dt_b, F_pow[k - 1], R), D2b, R)
            E = _series_add(E, _series_scale(_series_kron(E_pow[k], right_part, R), (-1) ** k))
            left_part = head_a if k == 1 else _series_mul(_series_mul(D2a, E_pow[k - 1], R), Dt_a, R)
            F = _series_add(F, _series_scale(_series_kron(left_part, F_pow[k], R), (-1) ** k))
    for r in range(min(t2, R) + 1):
        E[r] = None
    for r in range(min(t1, R) + 1):
        F[r] = None
    series = {"D1": D1, "D2": D2, "E": E, "F": F}
    top = tuple(tuple(x) + tuple(y) for x, y in zip(left.top, right.top))
    p = (left.p[0] + right.p[0], left.p[1] + right.p[1])
    return SeriesAction(left.dim * right.dim, (t2, t1), p, R, series, top)


@lru_cache(maxsize=4096)
def _chain(columns: tuple[tuple[Fraction, ...], ...], degree: int) -> SeriesAction:
    if len(columns) == 1:
        return column_action(columns[0], degree)
    return tensor_action(_chain(columns[:-1], degree), column_action(columns[-1], degree))


def _twist_loss(heights: Sequence[int], final_s12: int) -> int:
    """Degrees of ``E``/``F`` lost to twisting while assembling the columns.

    Height-one columns carry no ``E`` or ``F`` and twist for free; otherwise
    a twist moving ``s_{1,2}`` by ``d`` costs ``|d|`` degrees.
    """
    s12, silent = 0, heights[0] == 1
    loss = 0
    for h in heights[1:]:
        if not silent:
            loss += s12
        s12 = 1 if h == 1 else 0
        silent = silent and h == 1
    if not silent:
        loss += abs(final_s12 - s12)
    return loss


def standard_module(tableau: Tableau, degree: int = DEFAULT_DEGREE) -> SeriesAction:
    """``V(A)`` for a two-row column-strict tableau, valid through ``2*degree - 1``
    (or further when the shift matrix demands it).

    The columns are multiplied left to right and the result is twisted to
    the shift matrix of the tableau's pyramid.
    """
    pyramid = tableau.pyramid
    if pyramid.n != 2:
        raise UnsupportedHeight("the matrix engine covers two-row pyramids only")
    if not is_column_strict(tableau):
        raise NotColumnStrict("standard modules need a column-strict tableau")
    # the lowest E and F generators sit just above the shift
    target = max(2 * degree - 1, pyramid.shift(1, 2) + 2, pyramid.shift(2, 1) + 2)
    columns = tuple(tuple(col) for col in tableau.columns())
    internal = target + _twist_loss([len(col) for col in columns], pyramid.shift(1, 2))
    module = _chain(columns, internal)
    module = retwist(module, pyramid.shift(1, 2), pyramid.shift(2, 1))
    if module.degree < target:
        raise DegreeTooSmall(f"only degree {module.degree} available, {target} needed")
    module = module.truncated(target)
    module.pyramid = pyramid
    _check_top(module)
    return module


# ---------------------------------------------------------------------------
# relations


@dataclass
class RelationReport:
    degree: int
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"degree": self.degree, "checked": self.checked, "ok": self.ok,
                "violations": list(self.violations)}


def verify_relations(module: SeriesAction, degree: int = DEFAULT_DEGREE) -> RelationReport:
    """Check every defining relation with superscripts at most ``degree``.

    Right hand sides reach degree ``2*degree - 1``, so the module must be
    stored at least that far.  Also checks ``D_1^{(r)} = 0`` for ``r > p_1``.
    """
    need = 2 * degree - 1
    if module.degree < need:
        raise DegreeTooSmall(f"relations to degree {degree} need series through {need}")
    report = RelationReport(degree)
    s12, s21 = module.shift
    dim = module.dim
    zero = np.zeros((dim, dim), dtype=np.int64)
    table: dict[tuple[str, int], np.ndarray] = {}
    for family in ("D1", "D2"):
        table[(family, 0)] = _identity(dim)
    inverse = _series_inv(module.series["D1"], need)
    for r in range(1, need + 1):
        for family in ("D1", "D2"):
            table[(family, r)] = module.matrix(family, r)
        if r > s12:
            table[("E", r)] = module.matrix("E", r)
        if r > s21:
            table[("F", r)] = module.matrix("F", r)
    for r in range(need + 1):
        table[("Dt", r)] = zero if inverse[r] is None else -inverse[r]
    keys = list(table)
    bound = _bound(table.values())
    safe = bound is not None and bound * bound * dim * (4 * need + 4) < _SAFE
    table = dict(zip(keys, _harmonize(list(table.values()), safe)))

    def M(family: str, r: int) -> np.ndarray:
        return table[(family, r)]

    def comm(a, b):
        return np.dot(a, b) - np.dot(b, a)

    def check(label: str, lhs, rhs) -> None:
        report.checked += 1
        if not np.array_equal(lhs, rhs):
            report.violations.append(label)

    fams = ("D1", "D2")
    for r in range(1, degree + 1):
        for s in range(1, degree + 1):
            for i, fi in enumerate(fams, start=1):
                for j, fj in enumerate(fams, start=1):
                    if (i, r) < (j, s):
                        check(f"[D{i}^({r}), D{j}^({s})] = 0", comm(M(fi, r), M(fj, s)), zero)
    for r in range(s12 + 1, degree + 1):
        for s in range(s21 + 1, degree + 1):
            rhs = sum((np.dot(M("Dt", t), M("D2", r + s - 1 - t)) for t in range(r + s)), zero)
            check(f"[E^({r}), F^({s})]", comm(M("E", r), M("F", s)), rhs)
    for i, fi in enumerate(fams, start=1):
        sign = 1 if i == 1 else -1
        for r in range(1, degree + 1):
            for s in range(s12 + 1, degree + 1):
                rhs = sum((np.dot(M(fi, t), M("E", r + s - 1 - t)) for t in range(r)), zero)
                check(f"[D{i}^({r}), E^({s})]", comm(M(fi, r), M("E", s)), sign * rhs)
            for s in range(s21 + 1, degree + 1):
                rhs = sum((np.dot(M("F", r + s - 1 - t), M(fi, t)) for t in range(r)), zero)
                check(f"[D{i}^({r}), F^({s})]", comm(M(fi, r), M("F", s)), -sign * rhs)
    for r in range(s12 + 1, degree):
        for s in range(s12 + 1, degree):
            lhs = comm(M("E", r), M("E", s + 1)) - comm(M("E", r + 1), M("E", s))
            rhs = np.dot(M("E", r), M("E", s)) + np.dot(M("E", s), M("E", r))
            check(f"E relation ({r}, {s})", lhs, rhs)
    for r in range(s21 + 1, degree):
        for s in range(s21 + 1, degree):
            lhs = comm(M("F", r + 1), M("F", s)) - comm(M("F", r), M("F", s + 1))
            rhs = np.dot(M("F", r), M("F", s)) + np.dot(M("F", s), M("F", r))
            check(f"F relation ({r}, {s})", lhs, rhs)
    for r in range(module.p[0] + 1, module.degree + 1):
        check(f"D1^({r}) = 0", module.matrix("D1", r), zero)
    return report


# ---------------------------------------------------------------------------
# exact linear algebra through flint


def _to_fmpq(a: np.ndarray) -> flint.fmpq_mat:
    rows, cols = a.shape
    flat = []
    for v in a.flat:
        flat.append(flint.fmpq(v.numerator, v.denominator) if isinstance(v, Fraction) else int(v))
    return flint.fmpq_mat(rows, cols, flat)


def _nullspace(m: flint.fmpq_mat) -> flint.fmpq_mat:
    """Columns spanning the kernel of ``m`` (possibly zero columns)."""
    rows, cols = m.nrows(), m.ncols()
    if rows == 0:
        return flint.fmpq_mat(cols, cols, [int(i == j) for i in range(cols) for j in range(cols)])
    num, _den = m.numer_denom()
    basis, keep = num.nullspace()
    out = flint.fmpq_mat(cols, keep)
    for j in range(keep):
        for i in range(cols):
            out[i, j] = basis[i, j]
    return out


def _column_space(vectors: flint.fmpq_mat) -> flint.fmpq_mat:
    """Independent columns spanning the column space."""
    if vectors.ncols() == 0:
        return vectors
    reduced, rank = vectors.transpose().rref()
    out = flint.fmpq_mat(vectors.nrows(), rank)
    for j in range(rank):
        for i in range(vectors.nrows()):
            out[i, j] = reduced[j, i]
    return out


def _hstack(a: flint.fmpq_mat, b: flint.fmpq_mat) -> flint.fmpq_mat:
    out = flint.fmpq_mat(a.nrows(), a.ncols() + b.ncols())
    for i in range(a.nrows()):
        for j in range(a.ncols()):
            out[i, j] = a[i, j]
        for j in range(b.ncols()):
            out[i, a.ncols() + j] = b[i, j]
    return out


def _vstack(blocks: list[flint.fmpq_mat]) -> flint.fmpq_mat:
    rows = sum(b.nrows() for b in blocks)
    cols = blocks[0].ncols()
    out = flint.fmpq_mat(rows, cols)
    offset = 0
    for b in blocks:
        for i in range(b.nrows()):
            for j in range(cols):
                out[offset + i, j] = b[i, j]
        offset += b.nrows()
    return out


def _rank(m: flint.fmpq_mat) -> int:
    return m.rref()[1] if m.nrows() and m.ncols() else 0


def _restrict(op: flint.fmpq_mat, basis: flint.fmpq_mat) -> flint.fmpq_mat:
    """Matrix of ``op`` on the invariant subspace spanned by the columns of ``basis``."""
    image = op * basis
    reduced, rank = basis.transpose().rref()
    pivots = []
    for row in range(rank):
        col = next(c for c in range(reduced.ncols()) if reduced[row, c] != 0)
        pivots.append(col)
    square = flint.fmpq_mat(rank, rank)
    rhs = flint.fmpq_mat(rank, basis.ncols())
    for a, i in enumerate(pivots):
        for j in range(rank):
            square[a, j] = basis[i, j]
        for j in range(basis.ncols()):
            rhs[a, j] = image[i, j]
    restricted = square.solve(rhs)
    if basis * restricted != image:
        raise ConsistencyError("subspace is not invariant under the operator")
    return restricted


def _linear_roots(poly: flint.fmpq_poly) -> list[Fraction]:
    _, factors = poly.factor()
    roots: list[Fraction] = []
    for f, m in factors:
        if f.degree() != 1:
            raise ConsistencyError(f"factor {f} is not linear over Q")
        root = -f[0] / f[1]
        roots.extend([Fraction(int(root.p), int(root.q))] * m)
    return roots


def _split(op: flint.fmpq_mat, basis: flint.fmpq_mat) -> list[tuple[Fraction, flint.fmpq_mat]]:
    """Generalized eigenspaces of ``op`` inside the span of ``basis``."""
    if basis.ncols() == 1:
        image = op * basis
        pivot = next(i for i in range(basis.nrows()) if basis[i, 0] != 0)
        value = image[pivot, 0] / basis[pivot, 0]
        return [(Fraction(int(value.p), int(value.q)), basis)]
    local = _restrict(op, basis)
    counts = Counter(_linear_roots(local.charpoly()))
    d = local.nrows()
    out = []
    for value, mult in sorted(counts.items()):
        shifted = local - flint.fmpq_mat(d, d, [flint.fmpq(value.numerator, value.denominator) * int(i == j)
                                               for i in range(d) for j in range(d)])
        power = shifted
        for _ in range(mult - 1):
            power = power * shifted
        out.append((value, basis * _nullspace(power)))
    return out


def _weight_blocks(module: SeriesAction) -> dict[tuple, list[int]]:
    d1 = module.matrix("D1", 1)
    d2 = module.matrix("D2", 1)
    for m in (d1, d2):
        if np.any(m - np.diag(np.diag(m))):
            raise ConsistencyError("degree one D-matrices are expected to be diagonal")
    blocks: dict[tuple, list[int]] = {}
    for t in range(module.dim):
        blocks.setdefault((_frac(d1[t, t]), _frac(d2[t, t])), []).append(t)
    return blocks


def _coordinate_basis(dim: int, indices: list[int]) -> flint.fmpq_mat:
    out = flint.fmpq_mat(dim, len(indices))
    for j, i in enumerate(indices):
        out[i, j] = 1
    return out


def _gt_spaces(module: SeriesAction):
    """Joint generalized eigenspaces of ``D_1^{(r)}``, ``1 <= r <= p_1``.

    Yields ``(eigenvalues, basis)`` with eigenvalues listed by degree.
    """
    p1 = module.p[0]
    ops = [_to_fmpq(module.matrix("D1", r)) for r in range(2, p1 + 1)]
    for (w1, _w2), indices in sorted(_weight_blocks(module).items()):
        pieces = [((w1,) if p1 else (), _coordinate_basis(module.dim, indices))]
        for op in ops:
            pieces = [(vals + (v,), sub) for vals, basis in pieces for v, sub in _split(op, basis)]
        yield from pieces


def _roots_from_coefficients(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Negated roots of ``u^m + c_1 u^{m-1} + ... + c_m``."""
    if not coeffs:
        return []
    poly = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in reversed(list(coeffs))] + [1])
    return sorted(-x for x in _linear_roots(poly))


def _single_value(op: np.ndarray, basis: flint.fmpq_mat, label: str) -> Fraction:
    values = _split(_to_fmpq(op), basis)
    if len(values) != 1:
        raise ConsistencyError(f"{label} has several eigenvalues on one GT subspace")
    return values[0][0]


def gt_character(module: SeriesAction) -> GTCharacter:
    """Gelfand-Tsetlin character from the joint generalized eigenspaces of the ``D_i^{(r)}``.

    Each space is cut out by ``D_1^{(1)}, ..., D_1^{(p_1)}``.  The ``D_2``
    series on it is pinned by the central series ``D_1(u) D_2(u-1)``, whose
    value is read off ``v_+``; the prediction is checked against every stored
    coefficient of ``D_2`` before the monomial is recorded.
    """
    p1, p2 = module.p
    top1 = _roots_from_coefficients([_frac(module.matrix("D1", r)[0, 0]) for r in range(1, p1 + 1)])
    top2 = _roots_from_coefficients([_frac(module.matrix("D2", r)[0, 0]) for r in range(1, p2 + 1)])
    terms: Counter = Counter()
    for values, basis in _gt_spaces(module):
        roots1 = _roots_from_coefficients(values)
        signed: Counter = Counter()
        for x in top1:
            signed[x + 1] += 1
        for x in top2:
            signed[x] += 1
        for x in roots1:
            signed[x + 1] -= 1
        roots2 = [x for x in signed if signed[x]]
        expected = _expand_product(roots2, module.degree, [signed[x] for x in roots2])
        for r in range(1, module.degree + 1):
            seen = _single_value(module.matrix("D2", r), basis, f"D2^({r})")
            if seen != expected[r]:
                raise ConsistencyError(f"D2^({r}) eigenvalue {seen} differs from the central prediction {expected[r]}")
        exps: Counter = Counter()
        for x in roots1:
            exps[(1, x)] += 1
        for x in roots2:
            exps[(2, x - 1)] += signed[x]
        terms[GTMonomial.from_map(exps)] += basis.ncols()
    return GTCharacter.from_terms(2, terms)


# ---------------------------------------------------------------------------
# highest weight vectors and irreducibility


def _e_kernel(module: SeriesAction) -> flint.fmpq_mat:
    """Joint kernel of every ``E^{(r)}``.

    The kernel of the stored ``E`` matrices equals the kernel of all of them
    once it is stable under ``D_1^{(2)}``, because
    ``E^{(s+1)} = [D_1^{(2)}, E^{(s)}] - D_1^{(1)} E^{(s)}``.
    """
    s12 = module.shift[0]
    stack = [_to_fmpq(module.matrix("E", r)) for r in range(s12 + 1, module.degree + 1)]
    if not stack:
        raise DegreeTooSmall("no E generators stored")
    kernel = _nullspace(_vstack(stack))
    if kernel.ncols():
        image = _to_fmpq(module.matrix("D1", 2) if module.degree >= 2 else np.zeros((module.dim,) * 2, dtype=np.int64)) * kernel
        if _rank(_hstack(kernel, image)) != kernel.ncols():
            raise DegreeTooSmall("stored E matrices do not yet determine the highest weight space")
    return kernel


def _cyclic_span(module: SeriesAction, start: flint.fmpq_mat) -> int:
    """Dimension of the submodule generated by the columns of ``start``.

    Closure under ``D_1^{(1)}, D_1^{(2)}``, the lowest ``E`` and the lowest
    ``F`` suffices: the remaining coefficients are produced from these by
    commutators.
    """
    s12, s21 = module.shift
    gens = [module.matrix("D1", 1), module.matrix("E", s12 + 1), module.matrix("F", s21 + 1)]
    if module.degree >= 2:
        gens.append(module.matrix("D1", 2))
    gens = [_to_fmpq(g) for g in gens if np.any(g)]
    span = _column_space(start)
    frontier = span
    while frontier.ncols():
        images = [g * frontier for g in gens]
        grown = _column_space(_hstack(span, _hstack_all(images, span.nrows())))
        if grown.ncols() == span.ncols():
            break
        frontier = grown
        span = grown
    return span.ncols()


def _hstack_all(blocks: list[flint.fmpq_mat], rows: int) -> flint.fmpq_mat:
    out = flint.fmpq_mat(rows, 0)
    for b in blocks:
        out = _hstack(out, b)
    return out


def highest_weight_vectors(module: SeriesAction) -> list[tuple[list[Fraction], RowTabloid | tuple]]:
    """Joint ``D``-eigenvectors killed by every ``E^{(r)}``, with their types.

    A type is a :class:`RowTabloid` when the module records its pyramid and
    a pair of entry tuples otherwise.
    """
    kernel = _e_kernel(module)
    if kernel.ncols() == 0:
        return []
    p1, p2 = module.p
    out = []
    for values, space in _kernel_pieces(module, kernel):
        eigen = space
        for r in range(1, module.degree + 1):
            for family in ("D1", "D2"):
                op = _to_fmpq(module.matrix(family, r))
                value = values[(family, r)]
                d = module.dim
                shifted = op - flint.fmpq_mat(d, d, [flint.fmpq(value.numerator, value.denominator) * int(i == j)
                                                     for i in range(d) for j in range(d)])
                eigen = eigen * _nullspace(shifted * eigen)
        rows = (
            tuple(sorted(_roots_from_coefficients([values[("D1", r)] for r in range(1, p1 + 1)]))),
            tuple(sorted(x - 1 for x in _roots_from_coefficients([values[("D2", r)] for r in range(1, p2 + 1)]))),
        )
        for r in range(p2 + 1, module.degree + 1):
            if values[("D2", r)] != _expand_product([x + 1 for x in rows[1]], module.degree)[r]:
                raise ConsistencyError("highest weight series is not polynomial of degree p_2")
        label = RowTabloid(module.pyramid, rows) if module.pyramid is not None else rows
        for j in range(eigen.ncols()):
            out.append(([Fraction(int(eigen[i, j].p), int(eigen[i, j].q)) for i in range(eigen.nrows())], label))
    return out


def _kernel_pieces(module: SeriesAction, kernel: flint.fmpq_mat):
    pieces = [({}, kernel)]
    for r in range(1, module.degree + 1):
        for family in ("D1", "D2"):
            op = _to_fmpq(module.matrix(family, r))
            pieces = [({**vals, (family, r): v}, sub) for vals, basis in pieces for v, sub in _split(op, basis)]
    return pieces


def is_irreducible(module: SeriesAction) -> bool:
    """True when ``v_+`` generates the module and spans the highest weight space.

    Any nonzero submodule contains a vector killed by every ``E^{(r)}``
    (take a vector of extremal weight), so a one-dimensional highest weight
    space spanned by a cyclic ``v_+`` leaves no room for a proper submodule.
    """
    if _e_kernel(module).ncols() != 1:
        return False
    return _cyclic_span(module, _coordinate_basis(module.dim, [0])) == module.dim
