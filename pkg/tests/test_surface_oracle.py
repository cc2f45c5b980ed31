import pytest
from hypothesis import given
from hypothesis import strategies as st
from math import gcd

from splitkit.errors import SplittingError
from splitkit.presentation import free_reduce
from splitkit.splitting import splittings_equivalent
from splitkit.surface_oracle import (
    Slope,
    brute_force_crossing_count,
    primitive_word,
    slope_automorphism,
    slope_intersection,
    slope_splitting,
)

slopes = (
    st.tuples(st.integers(-5, 5), st.integers(-5, 5))
    .filter(lambda pq: pq != (0, 0) and gcd(*pq) == 1)
    .map(lambda pq: Slope(*pq))
)
words = st.lists(st.sampled_from(["x", "x'", "y", "y'"]), max_size=8).map(tuple)


def exponent_sums(word):
    sums = {"x": 0, "y": 0}
    for letter in word:
        sums[letter[0]] += -1 if letter.endswith("'") else 1
    return sums["x"], sums["y"]


class TestSlopes:
    def test_normalization(self):
        assert Slope(-1, -1) == Slope(1, 1)
        assert Slope(-1, 0) == Slope(1, 0)
        assert str(Slope(2, -3)) == "-2/3"

    @pytest.mark.parametrize("p, q", [(0, 0), (2, 4), (3, 0)])
    def test_not_a_curve(self, p, q):
        with pytest.raises(SplittingError):
            Slope(p, q)

    def test_parse(self):
        assert Slope.parse("1/2") == Slope(1, 2)
        with pytest.raises(SplittingError):
            Slope.parse("half")

    def test_intersection_numbers(self):
        assert slope_intersection(Slope(0, 1), Slope(1, 0)) == 1
        assert slope_intersection(Slope(1, 2), Slope(1, 0)) == 2
        assert slope_intersection(Slope(2, 3), Slope(2, 3)) == 0


class TestPrimitiveWords:
    def test_named_curves(self):
        assert primitive_word(Slope(0, 1)) == ("x",)
        assert primitive_word(Slope(1, 0)) == ("y",)
        assert primitive_word(Slope(1, 1)) == ("x", "y")

    @given(slopes)
    def test_exponent_sums(self, sl):
        assert exponent_sums(primitive_word(sl)) == (sl.q, sl.p)

    @given(slopes, words)
    def test_automorphism_inverts(self, sl, w):
        phi = slope_automorphism(sl)
        assert phi.apply_inverse(phi.apply(w)) == free_reduce(w)


class TestSlopeSplittings:
    def test_edge_group_is_the_curve(self):
        s = slope_splitting(Slope(1, 1))
        assert s.edge_generator_words() == (("x", "y"),)
        assert s.in_h(("x", "y", "x", "y"))
        assert s.name == "slope(1/1)"

    def test_opposite_orientation_is_same_curve(self):
        assert splittings_equivalent(slope_splitting(Slope(1, 2)), slope_splitting(Slope(-1, -2)), 3).is_true

    def test_arc_splitting(self, arc):
        assert arc.in_h(())
        assert arc.in_x(("x",))
        assert not arc.in_x(("y",))


class TestBruteForce:
    def test_same_slope(self, slope01):
        assert brute_force_crossing_count(slope01, slope01, 4) == 0

    def test_compatible_free_splittings(self, f3_left, f3_right):
        assert brute_force_crossing_count(f3_left, f3_right, 4, rep_radius=1) == 0

    @pytest.mark.slow
    def test_crossing_slopes(self, slope01, slope10):
        assert brute_force_crossing_count(slope01, slope10, 7, rep_radius=2) == 1

