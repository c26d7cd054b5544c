import pytest

from drs import (
    App, Drs, Exists, Imp, Lam, Merge, Not, Pred, Var,
    alpha_equal, beta_reduce, free_vars, merge_boxes, show, substitute, to_fol,
)
from errors import NonTerminating


def p(name, *args):
    return Pred(name, tuple(Var(a) for a in args))


class TestSubstitution:
    def test_lambda_capture_is_avoided(self):
        term = substitute(Lam("y", App(Var("x"), Var("y"))), "x", Var("y"))
        assert free_vars(term) == {"y"}
        assert alpha_equal(term, Lam("z", App(Var("y"), Var("z"))))

    def test_box_referent_capture_is_avoided(self):
        box = Drs(("y",), (p("see", "x", "y"),))
        term = substitute(box, "x", Var("y"))
        assert free_vars(term) == {"y"}
        assert term.refs != ("y",)

    def test_bound_variable_untouched(self):
        term = Lam("x", Var("x"))
        assert substitute(term, "x", Var("z")) is term

    def test_box_binds_what_follows_it(self):
        seq = Merge(Drs(("e",), (p("walk", "e"),)), App(Var("r"), Var("e")))
        assert free_vars(seq) == {"r"}
        cond = Imp(Drs(("x",), (p("man", "x"),)), p("mortal", "x"))
        assert free_vars(cond) == set()


class TestMerge:
    def test_union(self):
        merged = merge_boxes(Drs(("x",), (p("man", "x"),)), Drs(("e",), (p("walk", "e"),)))
        assert merged == Drs(("x", "e"), (p("man", "x"), p("walk", "e")))

    def test_clashing_referents_are_renamed(self):
        merged = merge_boxes(Drs(("x",), (p("man", "x"),)), Drs(("x",), (p("dog", "x"),)))
        assert len(set(merged.refs)) == 2
        assert merged.conds[0] == p("man", "x")
        assert merged.conds[1] == p("dog", merged.refs[1])

    def test_reduction_merges_adjacent_boxes(self):
        term = Merge(Drs(("x",), (p("man", "x"),)), App(Lam("y", Drs((), (p("walk", "y"),))), Var("x")))
        assert beta_reduce(term) == Drs(("x",), (p("man", "x"), p("walk", "x")))


class TestReduction:
    def test_beta(self):
        assert beta_reduce(App(Lam("x", p("dog", "x")), Var("d"))) == p("dog", "d")

    def test_normal_order_discards_divergent_argument(self):
        omega = App(Lam("x", App(Var("x"), Var("x"))), Lam("x", App(Var("x"), Var("x"))))
        assert beta_reduce(App(Lam("y", Var("z")), omega)) == Var("z")

    def test_step_budget(self):
        omega = App(Lam("x", App(Var("x"), Var("x"))), Lam("x", App(Var("x"), Var("x"))))
        with pytest.raises(NonTerminating):
            beta_reduce(omega, max_steps=50)

    def test_alpha_equal(self):
        assert alpha_equal(Lam("x", Var("x")), Lam("y", Var("y")))
        assert not alpha_equal(Lam("x", Var("y")), Lam("y", Var("y")))
        assert alpha_equal(Drs(("a",), (p("man", "a"),)), Drs(("b",), (p("man", "b"),)))


class TestFirstOrder:
    def test_box(self):
        box = Drs(("x", "e"), (p("man", "x"), p("walk", "e")))
        assert show(to_fol(box)) == "∃x(∃e(man(x) ∧ walk(e)))"

    def test_conditional_box_quantifies_universally(self):
        cond = Imp(Drs(("x",), (p("man", "x"),)), Drs(("e",), (p("walk", "e"), p("Agent", "e", "x"))))
        assert show(to_fol(cond)) == "∀x(man(x) → ∃e(walk(e) ∧ Agent(e,x)))"

    def test_negation(self):
        term = Not(Exists("x", p("man", "x")))
        assert show(to_fol(term)) == "¬∃x(man(x))"


class TestNotation:
    def test_box_and_sequence(self):
        term = Lam("r", Merge(Drs(("e",), (p("walk", "e"),)), App(Var("r"), Var("e"))))
        assert show(term) == "λr.[e | walk(e)];r(e)"

    def test_redex_head_is_parenthesized(self):
        assert show(App(Lam("x", Var("x")), Var("y"))) == "(λx.x)(y)"
