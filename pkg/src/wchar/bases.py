"""Monomial and dual canonical bases of tensor, symmetric and exterior spaces.

Vectors are sparse integer combinations.  A :class:`TensorVector` is keyed by
integer sequences (the monomials ``M_alpha``); a :class:`SymVector` is keyed
by integral row classes (the monomials ``M_A`` of the symmetric quotient).

The dual canonical basis is defined at ``q = 1`` by

    M_alpha = sum_beta P_{d(alpha) w0, d(beta) w0}(1) L_beta

with ``beta`` running over rearrangements of ``alpha``.

>>> expand_M_in_L((1, 0)) == {(1, 0): 1, (0, 1): 1}
True
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import kl
from .errors import IntegralOnly, LengthMismatch, NotColumnStrict, SizeLimit
from .pyramid import (
    Pyramid,
    RowTabloid,
    Tableau,
    column_reading,
    enumerate_tableaux,
    is_column_strict,
    rectify,
    row_reading,
)

__all__ = [
    "TensorVector",
    "SymVector",
    "orbit",
    "expand_M_in_L",
    "expand_L_in_M",
    "dual_canonical",
    "tensor_to_L",
    "project_to_S",
    "sym_monomial_in_L",
    "sym_to_L",
    "sym_dual_canonical",
    "wedge_N",
    "wedge_K",
    "v_map",
    "decompose_standard",
    "decompose_standard_kl",
    "chevalley_e",
    "chevalley_f",
    "row_orbit",
]

Weight = tuple[int, ...]


# ---------------------------------------------------------------------------
# sparse vectors


@dataclass(frozen=True)
class _Sparse:
    terms: Mapping[Hashable, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", {k: v for k, v in dict(self.terms).items() if v})

    def _make(self, terms):
        return type(self)(terms)

    def __add__(self, other):
        acc = Counter(self.terms)
        for k, v in other.terms.items():
            acc[k] += v
        return self._make(acc)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, scalar: int):
        return self._make({k: scalar * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, key) -> int:
        return self.terms.get(key, 0)

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()


class TensorVector(_Sparse):
    """Integer combination of tensor monomials ``M_alpha``."""

    @classmethod
    def monomial(cls, alpha: Sequence[int]) -> "TensorVector":
        return cls({tuple(int(a) for a in alpha): 1})

    def map_keys(self, fn: Callable[[Weight], Hashable | None]) -> "TensorVector":
        acc: Counter = Counter()
        for k, v in self.terms.items():
            new = fn(k)
            if new is not None:
                acc[new] += v
        return TensorVector(acc)


class SymVector(_Sparse):
    """Integer combination of symmetric monomials ``M_A`` (keys are row classes)."""

    @classmethod
    def monomial(cls, tabloid: RowTabloid) -> "SymVector":
        return cls({tabloid: 1})


def _as_weight(alpha: Iterable) -> Weight:
    out = []
    for a in alpha:
        if getattr(a, "denominator", 1) != 1:
            raise IntegralOnly("basis computations need integral weights")
        out.append(int(a))
    return tuple(out)


# ---------------------------------------------------------------------------
# orbits and the transition matrix


def _check_orbit(size: int, orbit_size: int) -> None:
    if size > kl.MAX_N:
        raise SizeLimit(f"weights of length {size} exceed N <= {kl.MAX_N}")
    if orbit_size > kl.max_orbit():
        raise SizeLimit(f"orbit of size {orbit_size} exceeds WCHAR_MAX_ORBIT={kl.max_orbit()}")


@lru_cache(maxsize=None)
def orbit(alpha: Weight) -> tuple[Weight, ...]:
    """Distinct rearrangements of ``alpha`` in lexicographic order."""
    alpha = tuple(sorted(_as_weight(alpha)))
    count = _multinomial(alpha)
    _check_orbit(len(alpha), count)
    return tuple(sorted(set(itertools.permutations(alpha))))


def _multinomial(alpha: Sequence[int]) -> int:
    from math import factorial

    total = factorial(len(alpha))
    for m in Counter(alpha).values():
        total //= factorial(m)
    return total


@lru_cache(maxsize=None)
def _top_element(beta: Weight) -> kl.Permutation:
    """``d(beta) w0``."""
    return kl.compose(kl.d_of_weight(beta), kl.longest_element(len(beta)))


def expand_M_in_L(alpha: Sequence[int]) -> dict[Weight, int]:
    """Coefficients ``P_{d(alpha)w0, d(beta)w0}(1)`` of ``M_alpha`` in the ``L`` basis."""
    alpha = _as_weight(alpha)
    x = _top_element(alpha)
    out = {}
    for beta in orbit(alpha):
        value = kl.kl_value_at_one(x, _top_element(beta))
        if value:
            out[beta] = value
    return out


@lru_cache(maxsize=None)
def _orbit_dual_canonical(sorted_alpha: Weight) -> dict[Weight, TensorVector]:
    members = sorted(orbit(sorted_alpha), key=lambda b: -kl.length(_top_element(b)))
    result: dict[Weight, TensorVector] = {}
    # M_beta = L_beta + (terms L_gamma with longer d(gamma)w0): solve longest first
    for beta in members:
        acc = Counter({beta: 1})
        for gamma, coeff in expand_M_in_L(beta).items():
            if gamma == beta:
                continue
            for key, val in result[gamma].items():
                acc[key] -= coeff * val
        result[beta] = TensorVector(acc)
    return result


def dual_canonical(alpha: Sequence[int]) -> TensorVector:
    """``L_alpha`` written in monomials."""
    alpha = _as_weight(alpha)
    return _orbit_dual_canonical(tuple(sorted(alpha)))[alpha]


def expand_L_in_M(alpha: Sequence[int]) -> dict[Weight, int]:
    return dict(dual_canonical(alpha).items())


def tensor_to_L(vector: TensorVector) -> dict[Weight, int]:
    """Coordinates of a tensor in the dual canonical basis."""
    acc: Counter = Counter()
    for alpha, coeff in vector.items():
        for beta, value in expand_M_in_L(alpha).items():
            acc[beta] += coeff * value
    return {k: v for k, v in acc.items() if v}


# ---------------------------------------------------------------------------
# symmetric quotient


def _split(word: Sequence[int], sizes: Sequence[int]) -> list[tuple[int, ...]]:
    out, start = [], 0
    for size in sizes:
        out.append(tuple(word[start : start + size]))
        start += size
    return out


def project_to_S(vector: TensorVector, pyramid: Pyramid) -> SymVector:
    """Canonical quotient: sort each block of sizes ``p_1..p_n``."""
    acc: Counter = Counter()
    for beta, coeff in vector.items():
        if len(beta) != pyramid.N:
            raise LengthMismatch(f"monomial of length {len(beta)} on {pyramid.N} boxes")
        acc[RowTabloid(pyramid, tuple(_split(beta, pyramid.p)))] += coeff
    return SymVector(acc)


def _row_word(tabloid: RowTabloid) -> Weight:
    return _as_weight(row_reading(tabloid))


def row_orbit(tabloid: RowTabloid) -> list[RowTabloid]:
    """Integral row classes with the same content on the same pyramid."""
    word = _row_word(tabloid)
    seen = {}
    for beta in orbit(tuple(sorted(word))):
        key = RowTabloid(tabloid.pyramid, tuple(_split(beta, tabloid.pyramid.p)))
        seen[key] = None
    return list(seen)


def sym_monomial_in_L(tabloid: RowTabloid) -> dict[RowTabloid, int]:
    """``M_A = sum_B P_{d(rho A)w0, d(rho B)w0}(1) L_B`` over row classes ``B``."""
    x = _top_element(_row_word(tabloid))
    out = {}
    for other in row_orbit(tabloid):
        value = kl.kl_value_at_one(x, _top_element(_row_word(other)))
        if value:
            out[other] = value
    return out


def sym_to_L(vector: SymVector) -> dict[RowTabloid, int]:
    acc: Counter = Counter()
    for tabloid, coeff in vector.items():
        for other, value in sym_monomial_in_L(tabloid).items():
            acc[other] += coeff * value
    return {k: v for k, v in acc.items() if v}


def sym_dual_canonical(tabloid: RowTabloid) -> SymVector:
    """``L_A``: image of ``L_{rho(A)}`` under the canonical quotient."""
    return project_to_S(dual_canonical(_row_word(tabloid)), tabloid.pyramid)


# ---------------------------------------------------------------------------
# exterior side and the map V


def _column_strict_integral(tableau: Tableau) -> None:
    if not tableau.is_integral():
        raise IntegralOnly("basis computations need integral tableaux")
    if not is_column_strict(tableau):
        raise NotColumnStrict("tableau has a column that is not strictly decreasing")


def _perm_sign(perm: Sequence[int]) -> int:
    return -1 if kl.length(perm) % 2 else 1


def _column_rearrangements(tableau: Tableau):
    """Yield ``(sign, reading)`` for every within-column permutation of ``tableau``."""
    columns = [_as_weight(col) for col in tableau.columns()]
    per_column = [
        [(_perm_sign(perm), tuple(col[t] for t in perm)) for perm in itertools.permutations(range(len(col)))]
        for col in columns
    ]
    for choice in itertools.product(*per_column):
        sign = 1
        word: list[int] = []
        for s, col in choice:
            sign *= s
            word.extend(col)
        yield sign, tuple(word)


def wedge_N(tableau: Tableau) -> TensorVector:
    """Signed sum of ``M_{gamma(B)}`` over within-column rearrangements ``B``."""
    _column_strict_integral(tableau)
    acc: Counter = Counter()
    for sign, word in _column_rearrangements(tableau):
        acc[word] += sign
    return TensorVector(acc)


def wedge_K(tableau: Tableau) -> TensorVector:
    """``K_A = L_{gamma(A)}`` in monomials."""
    _column_strict_integral(tableau)
    return dual_canonical(_as_weight(column_reading(tableau)))


def v_map(vector: TensorVector, pyramid: Pyramid) -> SymVector:
    """Read each key as a column reading of ``pyramid`` and pass to its row class."""
    acc: Counter = Counter()
    for beta, coeff in vector.items():
        if len(beta) != pyramid.N:
            raise LengthMismatch(f"monomial of length {len(beta)} on {pyramid.N} boxes")
        acc[Tableau(pyramid, beta).row_class()] += coeff
    return SymVector(acc)


def decompose_standard(tableau: Tableau) -> dict[RowTabloid, int]:
    """Coordinates of ``V(N_A)`` in the dual canonical basis of the symmetric quotient."""
    return sym_to_L(v_map(wedge_N(tableau), tableau.pyramid))


def decompose_standard_kl(tableau: Tableau) -> dict[RowTabloid, int]:
    """Second route: alternating sums of KL values indexed by standard tableaux of the
    same content, labelled by their rectifications."""
    _column_strict_integral(tableau)
    pyramid = tableau.pyramid
    word = _as_weight(column_reading(tableau))
    values = sorted(set(word))
    rearrangements = [
        (sign, _top_element(w)) for sign, w in _column_rearrangements(tableau)
    ]
    out = {}
    wanted = Counter(word)
    for other in enumerate_tableaux(pyramid, values, "std0", wanted):
        y = _top_element(_as_weight(column_reading(other)))
        total = sum(sign * kl.kl_value_at_one(x, y) for sign, x in rearrangements)
        if total:
            out[rectify(other)] = total
    return out


# ---------------------------------------------------------------------------
# Chevalley generators on monomials


def _raise_tensor(vector: TensorVector, source: int, target: int) -> TensorVector:
    acc: Counter = Counter()
    for alpha, coeff in vector.items():
        for j, a in enumerate(alpha):
            if a == source:
                acc[alpha[:j] + (target,) + alpha[j + 1 :]] += coeff
    return TensorVector(acc)


def _raise_sym(vector: SymVector, source: int, target: int) -> SymVector:
    acc: Counter = Counter()
    for tabloid, coeff in vector.items():
        rows = tabloid.rows
        for r, row in enumerate(rows):
            mult = sum(1 for a in row if a == source)
            if not mult:
                continue
            new_row = list(row)
            new_row.remove(source)
            new_row.append(target)
            new_rows = rows[:r] + (tuple(new_row),) + rows[r + 1 :]
            acc[RowTabloid(tabloid.pyramid, new_rows)] += mult * coeff
    return SymVector(acc)


def chevalley_f(vector, i: int):
    """``f_i`` replaces one entry ``i`` by ``i+1`` (summed over positions)."""
    if isinstance(vector, SymVector):
        return _raise_sym(vector, i, i + 1)
    return _raise_tensor(vector, i, i + 1)


def chevalley_e(vector, i: int):
    """``e_i`` replaces one entry ``i+1`` by ``i``."""
    if isinstance(vector, SymVector):
        return _raise_sym(vector, i + 1, i)
    return _raise_tensor(vector, i + 1, i)
