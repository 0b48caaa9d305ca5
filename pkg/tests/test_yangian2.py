from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import two_row_dimension, two_row_shapes
from wchar.bases import decompose_standard
from wchar.characters import standard_character
from wchar.classify import is_separated, two_row_factorization
from wchar.errors import ShiftMismatch, UnsupportedHeight
from wchar.pyramid import (
    Pyramid,
    Tableau,
    enumerate_tableaux,
    ground_state,
)
from wchar.yangian2 import (
    column_action,
    gt_character,
    highest_weight_vectors,
    is_irreducible,
    retwist,
    standard_module,
    tensor_action,
    verify_relations,
)

TWO_ONE = Pyramid.new((2, 1), None, 2)


class TestColumns:
    def test_height_two_column(self):
        module = column_action((3, 1))
        assert module.dim == 2 and module.shift == (0, 0)
        assert module.top == ((Fraction(3),), (Fraction(1),))
        for r in range(1, module.degree + 1):
            top_image = module.matrix("E", r)[:, 0]
            assert not np.any(top_image)
        assert verify_relations(module, 5).ok

    def test_height_one_column(self):
        module = column_action((4,))
        assert module.dim == 1 and module.shift == (0, 1) and module.p == (0, 1)
        assert module.top == ((), (Fraction(4),))

    def test_fractional_entries(self):
        module = column_action((Fraction(7, 2), Fraction(1, 2)))
        assert module.dim == 3
        assert verify_relations(module, 4).ok

    def test_taller_columns_rejected(self):
        with pytest.raises(UnsupportedHeight):
            column_action((3, 2, 1))
        with pytest.raises(UnsupportedHeight):
            standard_module(Tableau.from_columns(Pyramid.new((3,), 1, 3), [(3, 2, 1)]))


class TestTensorProducts:
    def test_dimension_is_multiplicative(self):
        left, right = column_action((3, 0)), column_action((2, 1))
        assert tensor_action(left, right, 6).dim == 3

    def test_retwist_keeps_relations(self):
        module = tensor_action(column_action((4, 1)), column_action((2,)), 10)
        s12, s21 = module.shift
        assert s12 + s21 == 1
        moved = retwist(module, s21, s12)
        assert moved.shift == (s21, s12)
        assert verify_relations(moved, 4).ok
        with pytest.raises(ShiftMismatch):
            retwist(module, s12 + 1, s21)

    def test_reducible_standard_module(self):
        tab = Tableau.from_columns(TWO_ONE, [(2, 0), (1,)])
        module = standard_module(tab)
        assert module.dim == 2
        assert not is_separated(tab) and not is_irreducible(module)
        types = {tabloid for _, tabloid in highest_weight_vectors(module)}
        assert types == set(decompose_standard(tab))

    def test_trivial_module(self):
        a0 = ground_state(TWO_ONE)
        module = standard_module(a0)
        found = highest_weight_vectors(module)
        assert module.dim == 1 and is_irreducible(module)
        assert [tabloid for _, tabloid in found] == [a0.row_class()]

    def test_top_vector_type_is_row_class(self):
        tab = Tableau.from_columns(Pyramid.new((1, 2, 1), 2, 2), [(0,), (3, 1), (2,)])
        module = standard_module(tab, 4)
        types = [tabloid for _, tabloid in highest_weight_vectors(module)]
        assert tab.row_class() in types


@pytest.mark.parametrize("q", [(2, 1), (1, 2), (2, 2), (1, 2, 1)])
def test_factorized_modules_are_irreducible_with_one_top_vector(q):
    pyr = Pyramid.new(q, None, 2)
    for tab in enumerate_tableaux(pyr, range(0, 3), "dom0"):
        pairs, rest = two_row_factorization(tab)
        doubles, singles = iter(pairs), iter(rest)
        columns = [next(doubles) if h == 2 else (next(singles),) for h in q]
        module = standard_module(Tableau.from_columns(pyr, columns), 3)
        assert is_irreducible(module)
        assert [t for _, t in highest_weight_vectors(module)] == [tab]


@pytest.mark.parametrize("q", [q for q in two_row_shapes(4) if 2 in q])
def test_standard_modules_in_small_window(q):
    pyr = Pyramid.new(q, None, 2)
    for tab in enumerate_tableaux(pyr, range(0, 3), "col0"):
        module = standard_module(tab, 4)
        assert module.dim == two_row_dimension(tab)
        assert verify_relations(module, 4).ok
        assert gt_character(module) == standard_character(tab)
        assert is_irreducible(module) == is_separated(tab)


column_strict_pairs = st.tuples(st.integers(-2, 4), st.integers(1, 4)).map(lambda t: (t[0], t[0] - t[1]))


@settings(max_examples=25, deadline=None)
@given(column_strict_pairs, column_strict_pairs, st.integers(-2, 4))
def test_random_two_row_modules(first, second, single):
    pyr = Pyramid.new((2, 2, 1), None, 2)
    tab = Tableau.from_columns(pyr, [first, second, (single,)])
    module = standard_module(tab, 4)
    assert verify_relations(module, 4).ok
    assert gt_character(module) == standard_character(tab)
    assert is_irreducible(module) == is_separated(tab)
    assert tab.row_class() in {t for _, t in highest_weight_vectors(module)}
