import pytest

from zimrev.classic import (
    adjacency_graph,
    decide_classic,
    delete,
    divide_into_zimin_constrained,
    free_sets,
    is_reducible,
    zimin_formula,
    zimin_word,
)
from zimrev.formulas import EMPTY_FORMULA, FormulaR, parse, pattern
from zimrev.morphisms import apply_symbolic, pattern_is_factor_of_formula


class TestAdjacencyGraph:
    def test_xyx(self):
        g = adjacency_graph(parse("x y x"))
        assert g.edges == {("x", "y"), ("y", "x")}
        # x_left shares a component with y_right, and y_left with x_right
        assert g.left("x") == g.right("y")
        assert g.left("y") == g.right("x")
        assert g.left("x") != g.left("y")

    def test_xx_single_component(self):
        g = adjacency_graph(parse("x x"))
        assert g.edges == {("x", "x")}
        assert g.left("x") == g.right("x")

    def test_unit_fragments_have_no_edges(self):
        g = adjacency_graph(parse("x . y"))
        assert g.edges == set()

    def test_mirrored_rejected(self):
        with pytest.raises(ValueError):
            adjacency_graph(parse("x x~"))


class TestFreeSets:
    def test_xyx(self):
        assert set(free_sets(parse("x y x"))) == {frozenset({"x"}), frozenset({"y"})}

    def test_xx_has_none(self):
        assert free_sets(parse("x x")) == []

    def test_z3(self):
        z3 = FormulaR([zimin_word(3)])
        assert set(free_sets(z3)) == {
            frozenset({"x1"}),
            frozenset({"x2"}),
            frozenset({"x3"}),
            frozenset({"x2", "x3"}),
        }


class TestDelete:
    def test_examples(self):
        assert delete(parse("x y x"), frozenset({"y"})) == parse("x x")
        assert delete(parse("x y x"), frozenset({"x"})) == parse("y")
        z3 = FormulaR([zimin_word(3)])
        assert delete(z3, frozenset({"x1"})) == parse("x2 x3 x2")

    def test_not_free_rejected(self):
        with pytest.raises(ValueError):
            delete(parse("x x"), frozenset({"x"}))


class TestReducibility:
    def test_z3_chain(self):
        chain = is_reducible(FormulaR([zimin_word(3)]))
        assert chain is not None
        assert [sorted(s.deleted) for s in chain.steps] == [["x1"], ["x2"], ["x3"]]

    def test_xx_irreducible(self):
        assert is_reducible(parse("x x")) is None

    def test_empty_formula_trivially_reducible(self):
        chain = is_reducible(EMPTY_FORMULA)
        assert chain is not None and chain.steps == ()

    def test_greedy_dead_end_requires_backtracking(self):
        # deleting x3 first from Z3 leaves this irreducible residue
        assert is_reducible(parse("x1 x2 x1 x1 x2 x1")) is None

    def test_chain_steps_are_valid(self):
        chain = is_reducible(parse("y1 y2 y3 y1 y2"))
        assert chain is not None
        current = parse("y1 y2 y3 y1 y2")
        for step in chain.steps:
            assert step.formula == current
            current = delete(current, step.deleted)
        assert current == EMPTY_FORMULA


class TestZiminWords:
    def test_values(self):
        assert zimin_word(2) == pattern("x1 x2 x1")
        assert zimin_word(3) == pattern("x1 x2 x1 x3 x1 x2 x1")
        assert zimin_formula(0) == EMPTY_FORMULA

    def test_lengths(self):
        for n in range(1, 7):
            assert len(zimin_word(n)) == 2**n - 1

    def test_zimin_word_rejects_zero(self):
        with pytest.raises(ValueError):
            zimin_word(0)


class TestDecideClassic:
    def test_xyx_unavoidable(self):
        decision = decide_classic(parse("x y x"))
        assert decision.unavoidable
        assert decision.division is not None
        assert decision.reduction is not None

    def test_xx_avoidable(self):
        decision = decide_classic(parse("x x"))
        assert not decision.unavoidable
        assert decision.reduction is None

    def test_five_letter_example(self):
        decision = decide_classic(parse("y1 y2 y3 y1 y2"))
        assert decision.unavoidable
        img = {
            str(apply_symbolic(decision.division, frag))
            for frag in parse("y1 y2 y3 y1 y2")
        }
        assert all(
            pattern_is_factor_of_formula(apply_symbolic(decision.division, frag), zimin_formula(3))
            for frag in parse("y1 y2 y3 y1 y2")
        )

    def test_empty_formula_unavoidable(self):
        assert decide_classic(EMPTY_FORMULA).unavoidable

    def test_reducible_iff_unavoidable_small_universe(self):
        """Cross-check the two classic characterizations on every pattern of
        length <= 4 over two variables."""
        import itertools

        from zimrev.formulas import PatternR, Sym

        for length in range(1, 5):
            for combo in itertools.product(["x", "y"], repeat=length):
                phi = FormulaR([PatternR(tuple(Sym(v) for v in combo))])
                decision = decide_classic(phi)
                assert decision.unavoidable == (is_reducible(phi) is not None), str(phi)


class TestConstrainedDivision:
    def test_xyx_with_x_free(self):
        h = divide_into_zimin_constrained(parse("x y x"), frozenset({"x"}))
        assert h is not None
        assert str(h.assignment["x"]) == "x1"

    def test_z3_identity(self):
        z3 = FormulaR([zimin_word(3)])
        h = divide_into_zimin_constrained(z3, frozenset({"x1"}))
        assert h is not None
        assert str(h.assignment["x1"]) == "x1"
        img = apply_symbolic(h, zimin_word(3))
        assert pattern_is_factor_of_formula(img, zimin_formula(3))

    def test_xyx_with_y_free_reports_outcome(self):
        # with y pinned to x1, the image of x y x must look like u x1 u
        # inside Z2; no such u of length <= 3 exists, so the search reports
        # no division for this free set
        h = divide_into_zimin_constrained(parse("x y x"), frozenset({"y"}))
        assert h is None

    def test_non_free_set_rejected(self):
        with pytest.raises(ValueError):
            divide_into_zimin_constrained(parse("x x"), frozenset({"x"}))
