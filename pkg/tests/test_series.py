import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import contour_sizes, expand
from strategies import finite_grammars
from treecontours.enumerator import grammar_depth
from treecontours.errors import InfiniteCoefficients
from treecontours.series import (
    IntSeries,
    lagrange_dary_coefficient,
    series_arith,
    series_pow,
    solve_dary_fixed_point,
    solve_grammar_system,
)
from treecontours.tree import TreeGrammar, dary_grammar


def S(*coeffs):
    return IntSeries(coeffs)


coeff_lists = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.integers(-10**6, 10**6), min_size=n, max_size=n)
)


class TestArithmetic:
    def test_square(self):
        assert series_arith(S(1, 1, 0), S(1, 1, 0), "mul") == S(1, 2, 1)

    def test_truncation(self):
        assert S(0, 1) * S(0, 1) == S(0, 0)

    def test_pow(self):
        x = S(0, 1, 1, 0, 0, 0, 0)
        assert series_pow(x, 3) == S(0, 0, 0, 1, 3, 3, 1)

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            S(1, 2) + S(1, 2, 3)
        with pytest.raises(ValueError):
            S(1, 2) * S(1, 2, 3)

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            series_arith(S(1), S(1), "div")

    def test_index_beyond_order(self):
        with pytest.raises(IndexError):
            S(1, 2)[2]

    def test_constructors(self):
        assert IntSeries.from_coeffs([1, 2, 3], 1) == S(1, 2)
        assert IntSeries.from_coeffs([1], 2) == S(1, 0, 0)
        assert IntSeries.monomial(5, 3) == IntSeries.zero(3)
        assert S(1, 2, 3).truncate(1) == S(1, 2)
        with pytest.raises(ValueError):
            S(1, 2).truncate(4)

    @given(st.data())
    def test_ring_laws(self, data):
        n = data.draw(st.integers(1, 8))
        lists = st.lists(st.integers(-1000, 1000), min_size=n, max_size=n)
        a, b, c = (IntSeries(tuple(data.draw(lists))) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert (a + b) * c == a * c + b * c
        assert a - a == IntSeries.zero(n - 1)
        assert -(-a) == a

    @given(coeff_lists, st.integers(1, 6))
    def test_pow_matches_repeated_mul(self, coeffs, e):
        a = IntSeries(tuple(coeffs))
        expected = a
        for _ in range(e - 1):
            expected = expected * a
        assert a**e == expected


class TestDary:
    def test_binary(self):
        assert solve_dary_fixed_point(2, 5).coeffs == (0, 0, 1, 2, 5, 14)

    def test_ternary(self):
        assert solve_dary_fixed_point(3, 5).coeffs == (0, 0, 0, 1, 0, 3)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_first_coefficient_vanishes(self, d):
        assert solve_dary_fixed_point(d, 3)[1] == 0

    @pytest.mark.parametrize("d", range(2, 7))
    def test_fixed_point_equation(self, d):
        f = solve_dary_fixed_point(d, 60)
        h = f + IntSeries.monomial(1, 60)
        assert f == h**d
        assert h == IntSeries.monomial(1, 60) + h**d

    @pytest.mark.parametrize("d", range(2, 7))
    def test_closed_form_matches_recurrence(self, d):
        f = solve_dary_fixed_point(d, 200)
        for n in range(1, 201):
            assert lagrange_dary_coefficient(d, n) == f[n] + (n == 1)

    def test_lagrange_examples(self):
        assert lagrange_dary_coefficient(2, 1) == 1
        assert lagrange_dary_coefficient(2, 5) == 14
        assert lagrange_dary_coefficient(3, 4) == 0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            solve_dary_fixed_point(1, 5)
        with pytest.raises(ValueError):
            lagrange_dary_coefficient(2, 0)

    def test_oracle_values(self):
        # only sizes whose interiors fit inside the candidate pool are complete
        binary = contour_sizes({"A": "AA"}, "A", 5, 4)
        assert {n: binary[n] for n in range(2, 6)} == {2: 1, 3: 2, 4: 5, 5: 14}
        ternary = contour_sizes({"A": "AAA"}, "A", 4, 2)
        assert {n: ternary.get(n, 0) for n in range(1, 6)} == {1: 0, 2: 0, 3: 1, 4: 0, 5: 3}


class TestGrammarSystem:
    def test_binary(self):
        f = solve_grammar_system(dary_grammar(2), 5)
        assert f["A"].coeffs == (0, 0, 1, 2, 5, 14)

    def test_root_with_three_binary_subtrees(self):
        g = TreeGrammar("R", {"R": ["A", "A", "A"], "A": ["A", "A"]})
        assert solve_grammar_system(g, 4)["R"].coeffs == (0, 0, 0, 1, 3)

    def test_zlike_raises(self):
        g = TreeGrammar("R", {"R": ["P", "P"], "P": ["P"]})
        with pytest.raises(InfiniteCoefficients) as info:
            solve_grammar_system(g, 4)
        assert "P" in info.value.cycle

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_matches_dary_solver(self, d):
        assert solve_grammar_system(dary_grammar(d), 80)["A"] == solve_dary_fixed_point(d, 80)

    def test_one_child_chain(self):
        g = TreeGrammar("A", {"A": ["S", "S"], "S": ["A"]})
        f = solve_grammar_system(g, 5)
        assert f["A"].coeffs == (0, 0, 4, 16, 80, 448)
        assert f["S"].coeffs == (0, 1, 4, 16, 80, 448)

    @given(finite_grammars(max_children=3))
    def test_matches_oracle(self, g):
        depth = grammar_depth(g, 3)
        parent, level, open_end = expand(g.classes, g.root, depth)
        assume(sum(1 for v in parent if level[v] < depth - 1) <= 16)
        found = contour_sizes(g.classes, g.root, depth, depth - 1)
        f = solve_grammar_system(g, 3)
        for n in range(1, 4):
            assert f[g.root][n] == found.get(n, 0), n
