import itertools
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import column_highest_weight, gelfand_tsetlin_count
from wchar.characters import (
    GTCharacter,
    GTMonomial,
    central_substitute,
    column_character,
    multiply,
    standard_character,
    verma_character,
    verma_character_tabloids,
    verma_coefficient_bound,
    x_var,
    y_var,
)
from wchar.errors import NotColumnStrict
from wchar.pyramid import Pyramid, RowTabloid, Tableau, enumerate_tableaux


def top_monomial(tabloid: RowTabloid) -> GTMonomial:
    out = GTMonomial()
    for i, row in enumerate(tabloid.rows, start=1):
        for a in row:
            out = out * y_var(i, a)
    return out


class TestVerma:
    def test_one_row_is_a_single_monomial(self):
        tabloid = RowTabloid(Pyramid.new((1, 1, 1), 0, 1), ((Fraction(1, 2), 4, -3),))
        chi = verma_character(tabloid, 4)
        assert chi.terms() == {top_monomial(tabloid): 1}

    @pytest.mark.parametrize("a,b", [(3, 1), (Fraction(5, 2), Fraction(-1, 3)), (7, 7)])
    def test_first_correction_for_two_rows(self, a, b):
        tabloid = RowTabloid(Pyramid.new((2,), 1, 2), ((a,), (b,)))
        chi = verma_character(tabloid, 1)
        lowered = y_var(1, a - 1) * y_var(2, a) * GTMonomial.from_map({(2, a - 1): -1}) * y_var(2, b)
        expected = {top_monomial(tabloid): 1}
        expected[lowered] = expected.get(lowered, 0) + 1
        assert chi.terms() == expected

    def test_coefficient_bound_value(self):
        pyr = Pyramid.new((3, 2, 1), None, 3)
        assert pyr.p == (1, 2, 3)
        assert verma_coefficient_bound(pyr) == factorial(1) * factorial(1 + 2)

    def test_top_monomial_has_unit_coefficient(self):
        pyr = Pyramid.new((2, 2, 1), None, 2)
        for tabloid in enumerate_tableaux(pyr, range(0, 3), "row0"):
            assert verma_character(tabloid, 2).terms()[top_monomial(tabloid)] == 1


class TestStandard:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_natural_representation(self, n):
        pyr = Pyramid.new((n,), 1, n)
        entries = [1] + [-i for i in range(1, n)]
        chi = standard_character(Tableau.from_columns(pyr, [entries]))
        expected = GTCharacter.from_terms(n, {x_var(i, 0): 1 for i in range(1, n + 1)})
        assert chi == expected

    @pytest.mark.parametrize("b", [0, 3, Fraction(-5, 2)])
    def test_height_one_column(self, b):
        chi = column_character([b], 2)
        assert chi.terms() == {y_var(2, b): 1}

    @pytest.mark.parametrize("height", [1, 2, 3])
    def test_column_dimension_matches_pattern_count(self, height):
        pyr = Pyramid.new((height,), 1, height)
        for column in itertools.combinations(range(3, -3, -1), height):
            chi = standard_character(Tableau.from_columns(pyr, [column]))
            assert chi.dimension() == gelfand_tsetlin_count(column_highest_weight(column))

    def test_rejects_non_strict_column(self):
        with pytest.raises(NotColumnStrict):
            standard_character(Tableau.from_columns(Pyramid.new((2,), 1, 2), [[0, 1]]))

    def test_product_over_columns(self):
        pyr = Pyramid.new((1, 2, 1), 2, 2)
        tab = Tableau.from_columns(pyr, [[1], [3, 0], [2]])
        expected = GTCharacter.one(2)
        for col in tab.columns():
            expected = expected * column_character(col, 2)
        assert standard_character(tab) == expected

    @pytest.mark.parametrize("q", [(2, 1), (1, 2, 1), (2, 2), (1, 3, 2)])
    def test_central_substitution_on_standard_characters(self, q):
        pyr = Pyramid.new(q, None, max(q))
        for tab in list(enumerate_tableaux(pyr, range(0, 4), "col0"))[:40]:
            assert central_substitute(standard_character(tab), tab)


def test_trivial_character_is_unit():
    pyr = Pyramid.new((2, 1), None, 2)
    tabloid = RowTabloid(pyr, ((1,), (0, 2)))
    chi = verma_character(tabloid, 3)
    assert multiply(chi, GTCharacter.one(2)) == chi


tabloid_rows = st.sampled_from([(1, 2), (2, 1), (1, 1, 1), (1, 1, 2), (2, 2), (1, 3), (1, 2, 3)])
entries = st.one_of(st.integers(-2, 3).map(Fraction), st.sampled_from([Fraction(1, 2), Fraction(-3, 2)]))


@st.composite
def tabloids(draw):
    row_lengths = draw(tabloid_rows)
    q = tuple(sum(1 for x in row_lengths if x >= c) for c in range(max(row_lengths), 0, -1))
    pyr = Pyramid.new(q, None, len(row_lengths))
    rows = tuple(tuple(draw(st.lists(entries, min_size=s, max_size=s))) for s in pyr.p)
    return RowTabloid(pyr, rows)


@settings(max_examples=40, deadline=None)
@given(tabloids(), st.integers(0, 3))
def test_tuple_and_tabloid_formulas_agree(tabloid, depth):
    chi = verma_character(tabloid, depth)
    assert chi == verma_character_tabloids(tabloid, depth)
    assert central_substitute(chi, tabloid)
    assert chi.max_coefficient() <= verma_coefficient_bound(tabloid.pyramid)


@settings(max_examples=30, deadline=None)
@given(tabloids())
def test_verma_character_factorizes_over_columns(tabloid):
    pyr = tabloid.pyramid
    product = GTCharacter.one(pyr.n)
    for col in tabloid.representative().columns():
        sub = Pyramid.new((len(col),), 1, pyr.n)
        product = product * verma_character(Tableau.from_columns(sub, [col]).row_class(), 3)
    assert verma_character(tabloid, 3).agrees_with(product)


@settings(max_examples=40, deadline=None)
@given(tabloids())
def test_json_round_trip(tabloid):
    chi = verma_character(tabloid, 2)
    assert GTCharacter.from_json(chi.to_json()) == chi
