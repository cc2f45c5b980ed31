import pytest
from hypothesis import given
from hypothesis import strategies as st

from splitkit.errors import ConfluenceError, MembershipError, PresentationError, WordError
from splitkit.folding import FoldedGraph
from splitkit.presentation import (
    IDENTITY,
    Automorphism,
    Membership,
    coset_canonical,
    enumerate_shortlex,
    format_word,
    free_group,
    free_reduce,
    generator_ball,
    intersection,
    invert_word,
    parse_word,
    substitute,
    subgroup,
    trivial_subgroup,
    whole_group,
    word_equals,
)
from splitkit.rewriting import rewriting_group

letters = st.sampled_from(["x", "x'", "y", "y'"])
words = st.lists(letters, max_size=12).map(tuple)


class TestWords:
    def test_parse_and_format(self):
        assert parse_word("x y' 1") == ("x", "y'")
        assert parse_word("") == IDENTITY
        assert format_word(IDENTITY) == "1"
        assert format_word(("x", "y'")) == "x y'"

    @pytest.mark.parametrize("text", ["x''", "'x", "x'y", "'"])
    def test_malformed_symbols(self, text):
        with pytest.raises(WordError):
            parse_word(text)

    def test_unknown_generator(self, f2):
        with pytest.raises(WordError):
            f2.parse("x z")

    @given(words)
    def test_word_times_inverse_is_identity(self, w):
        assert free_reduce(w + invert_word(w)) == IDENTITY

    @given(words, words)
    def test_reduction_is_idempotent(self, u, v):
        once = free_reduce(u + v)
        assert free_reduce(once) == once


class TestGroups:
    def test_duplicate_generators(self):
        with pytest.raises(PresentationError):
            free_group(["x", "x"])

    def test_free_word_problem(self, f2):
        assert word_equals(f2, ("x", "y", "y'"), ("x",))
        assert not word_equals(f2, ("x", "y"), ("y", "x"))

    def test_finite_word_problem(self, z4):
        assert z4.is_identity(("a",) * 4)
        assert z4.equals(("a'",), ("a", "a", "a"))
        assert z4.normal_word(("a", "a", "a")) == ("a'",)

    def test_shortlex_enumeration(self, f2, z4):
        labels = [w for _, w in enumerate_shortlex(f2, 2)]
        assert len(labels) == 17
        assert labels[0] == IDENTITY
        assert [len(w) for w in labels] == sorted(len(w) for w in labels)
        assert len(list(enumerate_shortlex(z4, 5))) == 4

    def test_rewriting_cyclic(self):
        z3 = rewriting_group(["a"], [("a", "a", "a")], name="Z3")
        assert z3.equals(("a", "a"), ("a'",))
        assert z3.normal_word(("a", "a")) == ("a'",)
        assert z3.is_identity(("a'", "a'", "a'"))

    def test_rewriting_commuting(self):
        z2 = rewriting_group(["x", "y"], [("x", "y", "x'", "y'")], name="Z2")
        assert z2.equals(("x", "y"), ("y", "x"))
        assert not z2.is_identity(("x", "y"))

    def test_non_confluent_rules_rejected(self):
        with pytest.raises(ConfluenceError):
            rewriting_group(["a", "b"], rules=[(("a", "b"), ("b",)), (("b", "a"), ("a",))], name="bad")


class TestSubgroups:
    def test_cyclic_membership(self, f2):
        h = subgroup(f2, [("x",)], "X")
        assert h.membership is Membership.CYCLIC
        assert h.contains(("x", "x", "x'", "x'", "x'"))
        assert not h.contains(("y",))

    def test_folded_membership(self, f2):
        h = subgroup(f2, [("x", "y"), ("y", "x")], "H")
        assert h.membership is Membership.FOLDED
        assert h.contains(("x", "y", "x'", "y'", "y'", "x'"))
        assert h.contains(("x", "y", "y", "x"))
        assert not h.contains(("x", "x"))

    def test_coset_keys(self, f2):
        h = subgroup(f2, [("x",)], "X")
        assert h.coset_key(("x", "y")) == h.coset_key(("y",))
        assert h.left_coset_key(("y", "x")) == h.left_coset_key(("y",))
        assert h.coset_key(("y", "x")) != h.coset_key(("y",))

    def test_coset_canonical(self, f2):
        h = subgroup(f2, [("x",)], "X")
        assert coset_canonical(f2, h, ("x", "x", "y")) == ("y",)

    def test_finite_subgroup(self, z4):
        h = subgroup(z4, [("a", "a")], "2Z4")
        assert h.membership is Membership.FINITE
        assert h.contains(("a'", "a'"))
        assert not h.contains(("a",))

    def test_trivial_and_whole(self, f2):
        assert trivial_subgroup(f2).contains(IDENTITY)
        assert not trivial_subgroup(f2).contains(("x",))
        assert whole_group(f2).contains(("x", "y'"))

    def test_intersection(self, f2):
        a = subgroup(f2, [("x",), ("y",)], "all")
        b = subgroup(f2, [("x",)], "X")
        both = intersection([a, b])
        assert both.contains(("x", "x"))
        assert not both.contains(("y",))

    def test_conjugate(self, f2):
        h = subgroup(f2, [("x",)], "X").conjugate(("y",))
        assert h.contains(("y", "x", "y'"))
        assert not h.contains(("x",))

    def test_generator_ball(self, f2):
        h = subgroup(f2, [("x",)], "X")
        assert set(generator_ball(h, 2)) == {(), ("x",), ("x'",), ("x", "x"), ("x'", "x'")}


class TestFoldedGraphs:
    SYMBOLS = ("x", "x'", "y", "y'")

    def test_basis_rewrites_members(self):
        graph = FoldedGraph([("x", "y"), ("y", "x")], self.SYMBOLS)
        basis = [loop for _, loop in graph.basis()]
        names = ["a", "b"]
        assert len(basis) == graph.rank == 2
        for word in [("x", "y", "y", "x"), ("x", "y", "x'", "y'", "y'", "x'"), ()]:
            rewritten = graph.express(word, names)
            assert substitute(rewritten, dict(zip(names, basis))) == free_reduce(word)
        with pytest.raises(MembershipError):
            graph.express(("x", "x"), names)

    def test_product_is_the_intersection(self, f2):
        first = FoldedGraph([("x", "x"), ("y",)], self.SYMBOLS)
        second = FoldedGraph([("x", "x", "x"), ("y",)], self.SYMBOLS)
        both = FoldedGraph.product([first, second])
        for _, word in enumerate_shortlex(f2, 6):
            assert both.contains(word) == (first.contains(word) and second.contains(word)), word
        assert both.contains(("x",) * 6)
        assert not both.contains(("x", "x"))

    def test_product_of_nothing(self):
        with pytest.raises(MembershipError):
            FoldedGraph.product([])


class TestAutomorphisms:
    @given(words)
    def test_inner_round_trip(self, w):
        phi = Automorphism.inner(["x", "y"], ("y", "x"))
        assert phi.apply_inverse(phi.apply(w)) == free_reduce(w)

    @given(words)
    def test_composition(self, w):
        swap = Automorphism({"x": ("y",), "y": ("x",)}, {"x": ("y",), "y": ("x",)})
        shear = Automorphism({"x": ("x", "y"), "y": ("y",)}, {"x": ("x", "y'"), "y": ("y",)})
        both = swap.then(shear)
        assert both.apply(w) == shear.apply(swap.apply(w))
        assert both.inverse().apply(both.apply(w)) == free_reduce(w)
