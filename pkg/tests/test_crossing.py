from itertools import combinations_with_replacement, product

import pytest

from splitkit.bass_serre import minimal_subtree

from splitkit.crossing import (
    crosses,
    crosses_strongly,
    double_coset_reps,
    intersection_number,
    quadrant_verdicts,
    smallness_verdict,
    strong_intersection_number,
    two_sided_invariance_check,
)
from splitkit.presentation import enumerate_shortlex, subgroup, trivial_subgroup
from splitkit.splitting import HalfSpace, Variant, conjugate_splitting
from splitkit.surface_oracle import Slope, brute_force_crossing_count, slope_intersection, slope_splitting
from splitkit.verdict import VerdictState

SMALL_SLOPES = [Slope(0, 1), Slope(1, 0), Slope(1, 1), Slope(-1, 1), Slope(1, 2), Slope(2, 1), Slope(-1, 2)]


class TestDoubleCosets:
    def test_trivial_edge_groups(self, z_split):
        h = z_split.edge_subgroup()
        reps = double_coset_reps(h, h, 3)
        assert len(reps) == 7

    def test_cyclic_edge_groups(self, slope01):
        h = slope01.edge_subgroup()
        assert double_coset_reps(h, h, 1) == [(), ("y",), ("y'",)]


class TestSmallness:
    def test_empty_set_is_small(self, f2):
        verdict = smallness_verdict(lambda w: False, trivial_subgroup(f2), 4)
        assert verdict.is_true
        assert verdict.reason == "empty"

    def test_half_tree_is_not_small(self, f2):
        verdict = smallness_verdict(lambda w: bool(w) and w[0] == "x", trivial_subgroup(f2), 5)
        assert verdict.is_false

    def test_coset_of_edge_group_is_small(self, f2):
        x = subgroup(f2, [("x",)], "X")
        verdict = smallness_verdict(lambda w: set(w) <= {"x", "x'"}, x, 5)
        assert verdict.is_true


class TestCrossing:
    def test_translates_of_one_splitting_never_cross(self, z_split):
        assert crosses(HalfSpace(z_split, ("t",)), HalfSpace(z_split), 4).is_false

    def test_compatible_free_splittings(self, f3_left, f3_right):
        verdict = crosses(HalfSpace(f3_left), HalfSpace(f3_right), 4)
        assert verdict.is_false
        quadrants = quadrant_verdicts(HalfSpace(f3_left), HalfSpace(f3_right), 4)
        assert quadrants["U∩V*"].is_true

    def test_crossing_slopes(self, slope01, slope10):
        assert crosses(HalfSpace(slope01), HalfSpace(slope10), 6).is_true

    @pytest.mark.slow
    def test_crossing_slopes_strongly(self, slope01, slope10):
        assert crosses_strongly(HalfSpace(slope01), HalfSpace(slope10), 6).is_true
        assert crosses_strongly(HalfSpace(slope10), HalfSpace(slope01), 6).is_true


class TestCounts:
    def test_self_intersection_of_z(self, z_split):
        report = intersection_number(z_split, z_split, 6)
        assert report.count == 0
        assert report.exact
        assert report.resolved
        assert report.to_dict()["windows"]["growth_window"] == 3

    def test_self_intersection_of_dihedral(self, dihedral):
        report = intersection_number(dihedral, dihedral, 4, x_variant=Variant.X_STAR)
        assert report.count == 0

    def test_compatible_free_splittings(self, f3_left, f3_right):
        report = intersection_number(f3_left, f3_right, 1, probe_radius=4)
        assert report.count == 0

    @pytest.mark.slow
    def test_slopes_meet_once(self, slope01, slope10):
        report = intersection_number(slope01, slope10, 2, probe_radius=6)
        assert report.count == 1
        assert [c.rep for c in report.per_coset if c.verdict.is_true] == ["1"]
        assert strong_intersection_number(slope01, slope10, 2, probe_radius=6).count == 1

    def test_slope_self_intersection(self, slope01):
        report = intersection_number(slope01, slope01, 2, probe_radius=6)
        assert report.count == 0
        assert report.exact


class TestTwoSidedInvariance:
    def test_standard_set_is_two_sided(self, genus2):
        assert two_sided_invariance_check(genus2.in_x, genus2.edge_subgroup(), 4).is_true

    def test_slope_standard_set(self, f2, slope01):
        assert two_sided_invariance_check(slope01.in_x, subgroup(f2, [("x",)], "X"), 4).is_true

    def test_right_multiplication_escapes(self, f2):
        verdict = two_sided_invariance_check(lambda w: w[-1:] == ("y",), subgroup(f2, [("x",)], "X"), 3)
        assert verdict.is_false
        assert verdict.witness is not None


class TestCurveAndArc:
    @pytest.mark.slow
    def test_curve_crosses_arc_strongly_but_not_conversely(self, slope01, arc):
        curve, dual = HalfSpace(slope01), HalfSpace(arc)
        assert crosses(curve, dual, 6).state is VerdictState.CERTIFIED_TRUE
        assert crosses_strongly(curve, dual, 6).is_true
        assert crosses_strongly(dual, curve, 6).is_false

    def test_diagonals_act_on_two_edges(self):
        plus, minus = slope_splitting(Slope(1, 1)), slope_splitting(Slope(1, -1))
        quotient = minimal_subtree(plus, minus.edge_subgroup(), 4)
        assert quotient.edge_count == 2
        assert quotient.stable

    @pytest.mark.slow
    def test_diagonals_meet_twice(self):
        plus, minus = slope_splitting(Slope(1, 1)), slope_splitting(Slope(1, -1))
        assert intersection_number(plus, minus, 3, probe_radius=6).count == 2
        assert intersection_number(minus, plus, 3, probe_radius=6).count == 2


class TestCountInvariance:
    def test_symmetric_for_free_splittings(self, f3_left, f3_right):
        forward = intersection_number(f3_left, f3_right, 1, probe_radius=4)
        backward = intersection_number(f3_right, f3_left, 1, probe_radius=4)
        assert forward.count == backward.count == 0

    @pytest.mark.slow
    def test_symmetric_for_slopes(self, slope01, slope10, arc):
        for s, t in [(slope01, slope10), (slope01, arc)]:
            assert intersection_number(s, t, 2, probe_radius=6).count == intersection_number(t, s, 2, probe_radius=6).count

    @pytest.mark.slow
    def test_conjugation_invariance(self, slope01, slope10):
        conjugators = [g for _, g in enumerate_shortlex(slope01.ambient, 2)][1:11]
        assert len(conjugators) == 10
        for g in conjugators:
            moved = conjugate_splitting(slope01, g)
            assert intersection_number(moved, slope10, 3, probe_radius=6).count == 1, g

    @pytest.mark.slow
    def test_all_standard_set_variants_agree(self, slope01, slope10):
        for x_variant, y_variant in product(Variant, repeat=2):
            report = intersection_number(slope01, slope10, 2, probe_radius=6, x_variant=x_variant, y_variant=y_variant)
            assert report.count == 1, (x_variant, y_variant)

    @pytest.mark.slow
    @pytest.mark.parametrize("a, b", list(combinations_with_replacement(SMALL_SLOPES, 2)), ids=str)
    def test_slope_counts(self, a, b):
        s, t = slope_splitting(a), slope_splitting(b)
        expected = slope_intersection(a, b)
        assert intersection_number(s, t, 4, probe_radius=8).count == expected
        assert brute_force_crossing_count(s, t, 8, rep_radius=4) == expected
