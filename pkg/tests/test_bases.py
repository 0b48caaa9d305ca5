import itertools
from collections import Counter

import pytest
from flint import fmpq_mat
from hypothesis import given, settings
from hypothesis import strategies as st

from support import all_pyramids, triangular_solve, two_row_dimension
from wchar.bases import (
    SymVector,
    TensorVector,
    chevalley_e,
    chevalley_f,
    decompose_standard,
    decompose_standard_kl,
    dual_canonical,
    expand_L_in_M,
    expand_M_in_L,
    orbit,
    project_to_S,
    sym_dual_canonical,
    sym_monomial_in_L,
    sym_to_L,
    tensor_to_L,
    v_map,
    wedge_K,
    wedge_N,
)
from wchar.classify import is_separated, two_row_factorization
from wchar.crystal import e_tilde, eps
from wchar.errors import NotColumnStrict, SizeLimit
from wchar.pyramid import (
    Pyramid,
    Tableau,
    content,
    enumerate_tableaux,
    ground_state,
    is_standard,
    rectify,
    row_reading,
)
from wchar.yangian2 import is_irreducible, standard_module


class TestTensorLevel:
    def test_two_box_expansions(self):
        assert expand_M_in_L((1, 0)) == {(1, 0): 1, (0, 1): 1}
        assert expand_M_in_L((0, 1)) == {(0, 1): 1}
        assert expand_L_in_M((1, 0)) == {(1, 0): 1, (0, 1): -1}

    def test_weakly_increasing_weight_is_its_own_dual_canonical(self):
        for alpha in [(0, 0, 1), (-1, 2, 2, 5), (3,)]:
            assert expand_M_in_L(alpha) == {alpha: 1}
            assert dual_canonical(alpha) == TensorVector.monomial(alpha)

    def test_orbit_size_limit(self):
        with pytest.raises(SizeLimit):
            expand_M_in_L(tuple(range(9)))

    @pytest.mark.parametrize("alpha", [(2, 1, 0), (1, 0, 1, 0), (2, 0, 1, 0), (1, 2, 0, 1)])
    def test_transition_matrices_are_inverse(self, alpha):
        for beta in orbit(alpha):
            composed = Counter()
            for gamma, c in expand_M_in_L(beta).items():
                for delta, d in expand_L_in_M(gamma).items():
                    composed[delta] += c * d
            assert {k: v for k, v in composed.items() if v} == {beta: 1}

    def test_m_to_l_coefficients_are_natural(self):
        for alpha in orbit((0, 1, 1, 2, 3)):
            assert all(v > 0 for v in expand_M_in_L(alpha).values())

    def test_leading_term_law(self):
        for size in range(1, 5):
            for alpha in itertools.product(range(-1, 3), repeat=size):
                for i in range(-1, 2):
                    image = tensor_to_L(chevalley_e(dual_canonical(alpha), i))
                    top = eps(alpha, i)
                    lead = e_tilde(alpha, i)
                    if top:
                        assert image.get(lead) == top
                    for beta in image:
                        if beta != lead:
                            assert eps(beta, i) < top - 1


class TestChevalley:
    def test_f_replaces_each_matching_entry(self):
        vec = chevalley_f(TensorVector.monomial((0, 1, 0)), 0)
        assert vec == TensorVector({(1, 1, 0): 1, (0, 1, 1): 1})

    def test_e_without_target_entries_is_zero(self):
        assert not chevalley_e(TensorVector.monomial((0, 0, 3)), 0)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(-2, 1))
    def test_well_defined_on_symmetric_quotient(self, word, i):
        pyr = Pyramid.new((2, 1), None, 2)
        vec = TensorVector.monomial(tuple(word))
        for op in (chevalley_e, chevalley_f):
            assert project_to_S(op(vec, i), pyr) == op(project_to_S(vec, pyr), i)


class TestSymmetricLevel:
    def test_projection_of_row_reading(self):
        pyr = Pyramid.new((3, 2, 2), 0, 3)
        tabloid = Tableau.from_rows(pyr, [[1], [0, 3, 2], [4, 3, 1]]).row_class()
        reading = tuple(int(x) for x in row_reading(tabloid))
        assert project_to_S(TensorVector.monomial(reading), pyr) == SymVector.monomial(tabloid)

    @pytest.mark.parametrize("pyr", [p for p in all_pyramids(4) if p.n > 1], ids=lambda p: f"{p.q}-{p.k}")
    def test_monomial_inversion(self, pyr):
        for tabloid in enumerate_tableaux(pyr, range(-1, 2), "row0"):
            total = SymVector({})
            for other, coeff in sym_monomial_in_L(tabloid).items():
                total = total + sym_dual_canonical(other) * coeff
            assert total == SymVector.monomial(tabloid)
            assert sym_to_L(SymVector.monomial(tabloid)) == sym_monomial_in_L(tabloid)


class TestWedges:
    def test_height_one_column(self):
        pyr = Pyramid.new((1,), 1, 1)
        tab = Tableau.from_columns(pyr, [[4]])
        assert wedge_N(tab) == TensorVector.monomial((4,))

    def test_two_box_column(self):
        pyr = Pyramid.new((2,), 1, 2)
        tab = Tableau.from_columns(pyr, [[1, 0]])
        assert wedge_N(tab) == TensorVector({(1, 0): 1, (0, 1): -1})

    def test_rejects_repeated_column_entry(self):
        pyr = Pyramid.new((2,), 1, 2)
        with pytest.raises(NotColumnStrict):
            wedge_N(Tableau.from_columns(pyr, [[0, 0]]))

    @pytest.mark.parametrize("pyr", [Pyramid.new((2, 1), None, 2), Pyramid.new((2, 2), 0, 2), Pyramid.new((1, 3), None, 3)])
    def test_wedges_are_alternating_in_columns(self, pyr):
        for tab in enumerate_tableaux(pyr, range(0, 4), "col0"):
            for vec in (wedge_N(tab), wedge_K(tab)):
                for c in range(pyr.l):
                    start = sum(pyr.q[:c])
                    for swap in range(start, start + pyr.q[c] - 1):

                        def swapped(key, at=swap):
                            key = list(key)
                            key[at], key[at + 1] = key[at + 1], key[at]
                            return tuple(key)

                        assert vec.map_keys(swapped) == vec * -1

    def test_ground_state_standard_monomial_is_one_dual_canonical_vector(self):
        for pyr in all_pyramids(4):
            a0 = ground_state(pyr)
            image = v_map(wedge_N(a0), pyr)
            assert image[a0.row_class()] == 1
            assert sym_to_L(image) == {a0.row_class(): 1}

    @pytest.mark.parametrize("pyr", all_pyramids(4), ids=lambda p: f"{p.q}-{p.k}")
    def test_wedge_k_maps_to_rectified_dual_canonical(self, pyr):
        for tab in enumerate_tableaux(pyr, range(-1, 2), "col0"):
            expected = {rectify(tab): 1} if is_standard(tab) else {}
            assert sym_to_L(v_map(wedge_K(tab), pyr)) == expected


class TestStandardMonomials:
    @pytest.mark.parametrize("pyr", [Pyramid.new((2, 1), None, 2), Pyramid.new((1, 2, 1), 2, 2), Pyramid.new((2, 2), 0, 2), Pyramid.new((1, 2), None, 2)])
    def test_standard_monomials_are_independent(self, pyr):
        by_content = {}
        for tab in enumerate_tableaux(pyr, range(0, 4), "std0"):
            by_content.setdefault(tuple(sorted(content(tab).items())), []).append(tab)
        for group in by_content.values():
            vectors = [v_map(wedge_N(tab), pyr) for tab in group]
            keys = sorted({k for v in vectors for k in v.keys()}, key=repr)
            matrix = fmpq_mat([[v[k] for k in keys] for v in vectors])
            assert matrix.rank() == len(group)

    @pytest.mark.parametrize("pyr", all_pyramids(4), ids=lambda p: f"{p.q}-{p.k}")
    def test_two_routes_for_decomposition_agree(self, pyr):
        for tab in enumerate_tableaux(pyr, range(0, 3), "col0"):
            numbers = decompose_standard(tab)
            assert numbers == decompose_standard_kl(tab)
            assert all(v > 0 for v in numbers.values())

    def test_ground_state_and_separated_rows(self):
        for pyr in all_pyramids(4):
            a0 = ground_state(pyr)
            assert decompose_standard(a0) == {rectify(a0): 1}
        pyr = Pyramid.new((2, 2), 0, 2)
        tab = Tableau.from_columns(pyr, [[1, 0], [5, 4]])
        assert is_standard(tab) and is_separated(tab)
        assert decompose_standard(tab) == {rectify(tab): 1}

    @pytest.mark.parametrize("q", [(1, 2), (2, 1)])
    def test_two_row_dimensions_match_module_construction(self, q):
        pyr = Pyramid.new(q, None, 2)
        window = range(0, 4)
        for tab in enumerate_tableaux(pyr, window, "std0"):
            group = list(enumerate_tableaux(pyr, window, "std0", content(tab)))
            rows = {rectify(b): decompose_standard(b) for b in group}
            dims = {rectify(b): two_row_dimension(b) for b in group}
            simple = triangular_solve(rows, dims)
            pairs, rest = two_row_factorization(rectify(tab))
            singles, doubles = iter(rest), iter(pairs)
            columns = [next(doubles) if h == 2 else (next(singles),) for h in pyr.q]
            module = standard_module(Tableau.from_columns(pyr, columns), 3)
            assert is_irreducible(module)
            assert module.dim == simple[rectify(tab)]
