import pytest
from hypothesis import given
from hypothesis import strategies as st

from splitkit import suite
from splitkit.errors import SplittingError
from splitkit.presentation import IDENTITY, cyclic_table, finite_group, free_group, free_reduce, invert_word, word_equals
from splitkit.splitting import (
    HalfSpace,
    Side,
    SplittingCore,
    SplittingKind,
    Variant,
    conjugate_splitting,
    find_conjugator,
    splittings_equivalent,
    validate_splitting,
)

f3_words = st.lists(st.sampled_from(["x", "x'", "y", "y'", "z", "z'"]), max_size=10).map(tuple)
surface_words = st.lists(st.sampled_from(["a", "a'", "b", "b'", "c", "c'", "d", "d'"]), max_size=10).map(tuple)

F3_LEFT = suite.f3_left()
GENUS2 = suite.genus2_splitting()


class TestValidation:
    def test_edge_images_of_different_order(self):
        z4 = finite_group(["a"], cyclic_table(4, "a"), "Z4")
        with pytest.raises(SplittingError):
            SplittingCore(SplittingKind.HNN, {Side.A: z4}, ("h",), {"alpha1": [("a",)], "alpha2": [("a", "a")]}, stable_letter="t")

    def test_degenerate_amalgam(self):
        z2 = finite_group(["a"], cyclic_table(2, "a"), "Z2")
        z4 = finite_group(["b"], cyclic_table(4, "b"), "Z4")
        with pytest.raises(SplittingError):
            SplittingCore(SplittingKind.AMALGAM, {Side.A: z2, Side.B: z4}, ("h",), {"A": [("a",)], "B": [("b", "b")]})

    def test_shared_generator(self):
        with pytest.raises(SplittingError):
            SplittingCore(
                SplittingKind.AMALGAM,
                {Side.A: free_group(["x"]), Side.B: free_group(["x", "y"])},
                (),
                {"A": [], "B": []},
            )

    def test_hnn_needs_stable_letter(self):
        with pytest.raises(SplittingError):
            SplittingCore(SplittingKind.HNN, {Side.A: free_group(["u"])}, (), {"alpha1": [], "alpha2": []})

    def test_builtin_lookup(self):
        assert validate_splitting({"builtin": "z"}).kind is SplittingKind.HNN
        with pytest.raises(SplittingError):
            validate_splitting({"builtin": "no-such-splitting"})


class TestNormalForms:
    def test_amalgam_syllables(self, z4_amalgam):
        nf = z4_amalgam.normal_form(("a", "b", "a"))
        assert [syl.side for syl in nf.syllables] == [Side.A, Side.B, Side.A]
        assert [name for name, _ in nf.padded()] == ["a1", "b1", "a2", "b2", "h"]

    def test_amalgamated_subgroup(self, z4_amalgam):
        assert z4_amalgam.ambient.equals(("a", "a"), ("b", "b"))
        assert z4_amalgam.in_h(("a", "a"))
        assert not z4_amalgam.in_h(("a",))
        assert z4_amalgam.ambient.equals(("a", "b", "a", "a"), ("a", "b'"))

    def test_hnn_syllables(self, z_split):
        nf = z_split.normal_form(("t", "t"))
        assert [syl.sign for syl in nf.syllables] == [1, 1]
        assert z_split.normal_form(("t", "t'")).syllables == ()
        assert nf.to_dict()["kind"] == "hnn"

    def test_surface_relation(self, genus2):
        group = genus2.ambient
        assert group.equals(("a", "b", "a'", "b'"), ("d", "c", "d'", "c'"))
        assert not group.equals(("a", "b"), ("b", "a"))
        assert genus2.in_h(("d", "c", "d'", "c'"))

    def test_surface_relator_is_trivial(self, genus2):
        relator = ("a", "b", "a'", "b'", "c", "d", "c'", "d'")
        assert word_equals(genus2.ambient, relator, IDENTITY)
        assert word_equals(genus2.ambient, invert_word(relator), IDENTITY)
        assert not word_equals(genus2.ambient, relator[:4], IDENTITY)

    @given(f3_words)
    def test_normal_form_reassembles(self, w):
        s = F3_LEFT
        nf = s.normal_form(w)
        assert s.ambient.equals(s.pushforward(nf.word()), w)
        assert s.normal_form(free_reduce(w + ("y", "y'"))).key == nf.key


class TestStandardSets:
    def test_dihedral(self, dihedral):
        assert dihedral.in_x(("a",))
        assert dihedral.in_x(("a", "b"))
        assert not dihedral.in_x(("b",))
        assert not dihedral.in_x(IDENTITY)

    def test_z(self, z_split):
        assert z_split.in_x(("t",))
        assert z_split.in_x(("t", "t"))
        assert not z_split.in_x(("t'",))
        assert z_split.in_h(IDENTITY)

    def test_variants(self, f3_left):
        assert f3_left.standard_side(IDENTITY, Variant.X_UNION_H)
        assert not f3_left.standard_side(IDENTITY, Variant.X_STAR_MINUS_H)
        assert f3_left.standard_side(("y",), Variant.X_STAR)
        assert f3_left.standard_side(("x", "y"), Variant.X)
        assert Variant.X.complement is Variant.X_STAR
        assert Variant.X_STAR_MINUS_H.starred

    def test_slope_edge_groups(self, slope01, slope10):
        assert slope01.in_h(("x", "x"))
        assert not slope01.in_h(("y",))
        assert slope10.in_h(("y",))
        assert not slope10.in_h(("x",))

    @given(surface_words)
    def test_left_edge_invariance(self, w):
        h = ("a", "b", "a'", "b'")
        assert GENUS2.in_x(h + w) == GENUS2.in_x(w)
        assert GENUS2.in_x(invert_word(h) + w) == GENUS2.in_x(w)

    @given(f3_words, st.sampled_from([(), ("x",), ("y", "x'")]))
    def test_half_space_translate(self, w, g):
        hs = HalfSpace(F3_LEFT, g)
        assert hs.contains(w) == F3_LEFT.in_x(free_reduce(invert_word(g) + w))
        assert hs.complement().contains(w) != hs.contains(w)


class TestEquivalence:
    def test_reflexive(self, f3_left):
        assert splittings_equivalent(f3_left, f3_left, 3).is_true

    def test_different_slopes(self, slope01, slope10):
        verdict = splittings_equivalent(slope01, slope10, 3)
        assert verdict.is_false
        assert verdict.witness is not None

    def test_f3_pair_differs(self, f3_left, f3_right):
        assert splittings_equivalent(f3_left, f3_right, 3).is_false

    def test_conjugation_by_edge_element(self, slope01):
        assert splittings_equivalent(conjugate_splitting(slope01, ("x",)), slope01, 3).is_true

    def test_find_conjugator(self, slope01):
        target = conjugate_splitting(slope01, ("y",))
        found = find_conjugator(slope01, target, 3, 1)
        assert found is not None
        assert splittings_equivalent(conjugate_splitting(slope01, found), target, 3).is_true

    def test_different_groups(self, slope01, f3_left):
        with pytest.raises(SplittingError):
            splittings_equivalent(slope01, f3_left, 2)


def test_suite_splittings_are_proper(all_suite):
    assert len(all_suite) == 11
    for name, s in all_suite.items():
        assert s.in_h(IDENTITY), name
        assert not s.in_x(IDENTITY), name
        assert s.standard_side(IDENTITY, Variant.X_UNION_H), name
