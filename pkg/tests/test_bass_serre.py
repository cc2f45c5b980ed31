import networkx as nx
import pytest

from splitkit import suite
from splitkit.bass_serre import TreeOrder, edge_order, local_tree, minimal_subtree, tree_distance, vertex_path
from splitkit.errors import TreeDepthError
from splitkit.presentation import enumerate_shortlex, subgroup
from splitkit.splitting import HalfSpace

# quadrants (in X, in g·X) that each relation between X and g·X leaves empty
EMPTY_QUADRANTS = {
    TreeOrder.EQUAL: {(True, False), (False, True)},
    TreeOrder.CONTAINED: {(True, False)},
    TreeOrder.CONTAINS: {(False, True)},
    TreeOrder.IN_COMPLEMENT: {(True, True)},
    TreeOrder.CONTAINS_COMPLEMENT: {(False, False)},
}


class TestGeodesics:
    def test_amalgam_distances(self, f3_left):
        assert tree_distance(f3_left, ("x",)) == 0
        assert tree_distance(f3_left, ("y",)) == 2
        assert tree_distance(f3_left, ("x", "y")) == 2
        assert tree_distance(f3_left, ("y", "x")) == 2

    def test_hnn_distances(self, z_split):
        assert tree_distance(z_split, ("t", "t", "t")) == 3
        assert tree_distance(z_split, ("t'",)) == 1
        assert vertex_path(z_split, ()) == []


class TestLocalTrees:
    def test_z_tree_is_a_line(self, z_split):
        local = local_tree(z_split, 2)
        assert local.edge_count == 5
        assert nx.is_tree(local.graph)
        assert max(d for _, d in local.graph.degree) == 2

    def test_dihedral_tree(self, dihedral):
        local = local_tree(dihedral, 1)
        assert local.edge_count == 3
        assert nx.is_tree(local.graph)

    def test_depth_limit(self, z_split):
        with pytest.raises(TreeDepthError):
            local_tree(z_split, 99)


class TestEdgeOrder:
    def test_equal(self, z_split):
        assert edge_order(z_split, ("t",), ("t",)) is TreeOrder.EQUAL

    def test_nested_translates(self, z_split):
        assert edge_order(z_split, (), ("t",)) is TreeOrder.CONTAINS
        assert edge_order(z_split, ("t",), ()) is TreeOrder.CONTAINED

    def test_opposite_edges(self, dihedral):
        assert edge_order(dihedral, (), ("a",)) in (TreeOrder.IN_COMPLEMENT, TreeOrder.CONTAINS_COMPLEMENT)

    def test_edge_group_translate(self, slope01):
        assert edge_order(slope01, (), ("x", "x")) is TreeOrder.EQUAL

    @pytest.mark.parametrize("name", sorted(suite.SUITE))
    def test_order_matches_membership(self, name):
        s = suite.SUITE[name]()
        ball = [w for _, w in enumerate_shortlex(s.ambient, 4)]
        for _, g in enumerate_shortlex(s.ambient, 1):
            relation = edge_order(s, (), g)
            assert relation in EMPTY_QUADRANTS
            translate = HalfSpace(s, g)
            seen = {(s.standard_side(w), translate.contains(w)) for w in ball}
            assert not seen & EMPTY_QUADRANTS[relation], (name, g, relation)


class TestMinimalSubtree:
    def test_crossing_curve_acts_on_one_edge(self, slope01, slope10):
        quotient = minimal_subtree(slope01, slope10.edge_subgroup(), 3)
        assert quotient.edge_count == 1
        assert quotient.stable
        assert quotient.verdict.is_true

    def test_elliptic_actor(self, f3_left):
        actor = subgroup(f3_left.ambient, [("x",)], "X")
        quotient = minimal_subtree(f3_left, actor, 2)
        assert quotient.edge_count == 0
        assert quotient.to_dict()["edges"] == 0

    def test_depth_must_be_positive(self, f3_left):
        with pytest.raises(TreeDepthError):
            minimal_subtree(f3_left, f3_left.edge_subgroup(), 0)
