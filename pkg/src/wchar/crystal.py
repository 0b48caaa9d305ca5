"""Kashiwara operators on integer sequences and on integral tableaux.

The signature rule marks ``+`` where an entry equals ``i`` and ``-`` where it
equals ``i+1``; adjacent ``- +`` pairs (ignoring zeros) cancel.

>>> signature((1, 0), 0).reduced
('0', '0')
>>> signature((0, 1), 0).reduced
('+', '-')
>>> f_tilde((0, 0), 0)
(0, 1)
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceeded, IntegralOnly
from .pyramid import RowTabloid, Tableau, column_reading, row_reading

__all__ = [
    "Signature",
    "signature",
    "e_tilde",
    "f_tilde",
    "eps",
    "phi",
    "e_tilde_tableau",
    "f_tilde_tableau",
    "CrystalGraph",
    "crystal_graph",
]

Weight = tuple[int, ...]


@dataclass(frozen=True)
class Signature:
    raw: tuple[str, ...]
    reduced: tuple[str, ...]

    @property
    def minus_positions(self) -> list[int]:
        return [j for j, s in enumerate(self.reduced) if s == "-"]

    @property
    def plus_positions(self) -> list[int]:
        return [j for j, s in enumerate(self.reduced) if s == "+"]


def signature(alpha: Sequence[int], i: int) -> Signature:
    raw = tuple("+" if a == i else "-" if a == i + 1 else "0" for a in alpha)
    reduced = list(raw)
    pending_minus: list[int] = []
    for j, sign in enumerate(raw):
        if sign == "-":
            pending_minus.append(j)
        elif sign == "+" and pending_minus:
            reduced[pending_minus.pop()] = "0"
            reduced[j] = "0"
    return Signature(raw, tuple(reduced))


def _check_integral(alpha: Iterable) -> Weight:
    out = []
    for a in alpha:
        if getattr(a, "denominator", 1) != 1:
            raise IntegralOnly("crystal operators need integral entries")
        out.append(int(a))
    return tuple(out)


def e_tilde(alpha: Sequence[int], i: int) -> Weight | None:
    """Lower the leftmost surviving ``-`` from ``i+1`` to ``i``."""
    alpha = _check_integral(alpha)
    minus = signature(alpha, i).minus_positions
    if not minus:
        return None
    j = minus[0]
    return alpha[:j] + (alpha[j] - 1,) + alpha[j + 1 :]


def f_tilde(alpha: Sequence[int], i: int) -> Weight | None:
    """Raise the rightmost surviving ``+`` from ``i`` to ``i+1``."""
    alpha = _check_integral(alpha)
    plus = signature(alpha, i).plus_positions
    if not plus:
        return None
    j = plus[-1]
    return alpha[:j] + (alpha[j] + 1,) + alpha[j + 1 :]


def eps(alpha: Sequence[int], i: int) -> int:
    return len(signature(_check_integral(alpha), i).minus_positions)


def phi(alpha: Sequence[int], i: int) -> int:
    return len(signature(_check_integral(alpha), i).plus_positions)


# ---------------------------------------------------------------------------
# tableaux: rows through the row reading, tableaux through the column reading


def _apply(obj: Tableau | RowTabloid, i: int, op) -> Tableau | RowTabloid | None:
    if isinstance(obj, RowTabloid):
        word = op(_check_integral(row_reading(obj)), i)
        if word is None:
            return None
        rows, start = [], 0
        for size in obj.pyramid.p:
            rows.append(word[start : start + size])
            start += size
        result = RowTabloid(obj.pyramid, tuple(rows))
        if row_reading(result) != tuple(word):
            raise RuntimeError("row classes failed to form a subcrystal")
        return result
    word = op(_check_integral(column_reading(obj)), i)
    if word is None:
        return None
    return Tableau(obj.pyramid, word)


def e_tilde_tableau(obj: Tableau | RowTabloid, i: int):
    return _apply(obj, i, e_tilde)


def f_tilde_tableau(obj: Tableau | RowTabloid, i: int):
    return _apply(obj, i, f_tilde)


# ---------------------------------------------------------------------------
# graphs


@dataclass
class CrystalGraph:
    nodes: list
    edges: list[tuple[int, int, int]]  # (source index, target index, label)

    def to_dot(self) -> str:
        ids = [
            "n" + hashlib.sha256(node.to_json().encode()).hexdigest()[:16] for node in self.nodes
        ]
        lines = ["digraph crystal {"]
        for ident, node in zip(ids, self.nodes):
            label = node.to_json().replace('"', '\\"')
            lines.append(f'  {ident} [label="{label}"];')
        for src, dst, label in self.edges:
            lines.append(f'  {ids[src]} -> {ids[dst]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _reading(obj) -> tuple:
    word = row_reading(obj) if isinstance(obj, RowTabloid) else column_reading(obj)
    return tuple(word)


def crystal_graph(
    seeds: Iterable[Tableau | RowTabloid],
    i_range: Iterable[int],
    budget: int = 10_000,
    directions: str = "both",
) -> CrystalGraph:
    """Closure of ``seeds`` under the chosen operators, with ``f``-arrows recorded.

    ``directions`` is ``"f"``, ``"e"`` or ``"both"``.  Raises
    :class:`BudgetExceeded` when more than ``budget`` nodes are reached.
    """
    labels = list(i_range)
    seen = set()
    queue = deque()
    for seed in seeds:
        if seed not in seen:
            seen.add(seed)
            queue.append(seed)
    arrows = set()
    while queue:
        node = queue.popleft()
        for i in labels:
            steps = []
            if directions in ("f", "both"):
                steps.append((node, f_tilde_tableau(node, i), True))
            if directions in ("e", "both"):
                steps.append((e_tilde_tableau(node, i), node, False))
            for src, dst, forward in steps:
                other = dst if forward else src
                if other is None:
                    continue
                arrows.add((src, dst, i))
                if other not in seen:
                    seen.add(other)
                    if len(seen) > budget:
                        raise BudgetExceeded(f"crystal graph exceeds {budget} nodes")
                    queue.append(other)
    nodes = sorted(seen, key=_reading)
    index = {node: t for t, node in enumerate(nodes)}
    edges = sorted(
        (index[src], index[dst], i) for src, dst, i in arrows if src in index and dst in index
    )
    return CrystalGraph(nodes, edges)
