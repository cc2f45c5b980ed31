from dataclasses import replace

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitkit.dunwoody import (
    AbstractTree,
    PosetWithInvolution,
    Translate,
    assemble_graph_of_groups,
    build_tree,
    collapse_edge,
    collapse_round_trip,
    order_from_paths,
    poset_from_halfspaces,
    translate_reps,
    validate_poset,
)
from splitkit.errors import AssemblyError, CrossingDetected, PosetConditionError
from splitkit.splitting import SplittingKind, conjugate_splitting, splittings_equivalent

prufer_sequences = st.integers(min_value=2, max_value=101).flatmap(
    lambda n: st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n - 2, max_size=n - 2)
)

EDGES = ["e", "E", "f", "F"]
BARS = {"e": "E", "E": "e", "f": "F", "F": "f"}


def tree_poset(graph: nx.Graph) -> tuple[AbstractTree, PosetWithInvolution]:
    tree = AbstractTree.from_graph(graph)
    return tree, PosetWithInvolution.from_relations(tree.elements, tree.involution, order_from_paths(tree))


class TestPosets:
    def test_closure(self):
        poset = PosetWithInvolution.from_relations(EDGES, BARS, [("e", "f"), ("F", "E")])
        assert poset.le("e", "e")
        assert poset.le("e", "f")
        assert not poset.le("f", "e")
        assert poset.strict_pairs() == [("e", "f"), ("F", "E")]

    def test_unknown_element(self):
        with pytest.raises(PosetConditionError) as info:
            PosetWithInvolution.from_relations(["e", "E"], {"e": "E", "E": "e"}, [("e", "g")])
        assert info.value.condition == 0

    def test_to_dict(self):
        poset = PosetWithInvolution.from_relations(EDGES, BARS, [("e", "f"), ("F", "E")])
        data = poset.to_dict()
        assert data["schema_version"] == 1
        assert data["order"] == [["e", "f"], ["F", "E"]]


class TestConditions:
    def test_fixed_point(self):
        with pytest.raises(PosetConditionError) as info:
            validate_poset(PosetWithInvolution.from_relations(["e"], {"e": "e"}, []))
        assert info.value.condition == 0

    def test_missing_reverse_relation(self):
        with pytest.raises(PosetConditionError) as info:
            validate_poset(PosetWithInvolution.from_relations(EDGES, BARS, [("e", "f")]))
        assert info.value.condition == 1

    def test_incomparable_pair(self):
        with pytest.raises(PosetConditionError) as info:
            validate_poset(PosetWithInvolution.from_relations(EDGES, BARS, []))
        assert info.value.condition == 3

    def test_below_both_orientations(self):
        order = [("e", "f"), ("e", "F"), ("F", "E"), ("f", "E")]
        with pytest.raises(PosetConditionError) as info:
            validate_poset(PosetWithInvolution.from_relations(EDGES, BARS, order))
        assert info.value.condition == 4

    def test_single_edge(self):
        poset = validate_poset(PosetWithInvolution.from_relations(["e", "E"], {"e": "E", "E": "e"}, []))
        tree = build_tree(poset)
        assert tree.graph.number_of_edges() == 1
        assert tree.head("e") == tree.tail("E")


class TestTrees:
    def test_path_order(self):
        tree, poset = tree_poset(nx.path_graph(3))
        assert poset.le("0>1", "1>2")
        assert poset.le("2>1", "1>0")
        assert not poset.le("0>1", "2>1")

    @settings(max_examples=100)
    @given(prufer_sequences)
    def test_round_trip(self, sequence):
        graph = nx.from_prufer_sequence(sequence)
        _, poset = tree_poset(graph)
        rebuilt = build_tree(validate_poset(poset))
        assert rebuilt.graph.number_of_edges() == graph.number_of_edges()
        assert nx.is_isomorphic(rebuilt.graph, graph)
        assert order_from_paths(rebuilt) == poset.order

    def test_star(self):
        _, poset = tree_poset(nx.star_graph(4))
        rebuilt = build_tree(validate_poset(poset))
        assert sorted(d for _, d in rebuilt.graph.degree) == [1, 1, 1, 1, 4]


class TestTranslates:
    def test_label_and_bar(self):
        e = Translate(0, ("y",), True)
        assert e.label == "0:y:-"
        assert e.bar() == Translate(0, ("y",), False)

    def test_reps_skip_edge_group(self, slope01):
        assert translate_reps(slope01, 1) == [(), ("y",), ("y'",)]

    def test_line_of_translates(self, z_split):
        poset = poset_from_halfspaces([z_split], 4, translate_radius=3)
        assert len(poset.elements) == 14
        tree = build_tree(poset)
        assert tree.graph.number_of_edges() == 7
        assert max(d for _, d in tree.graph.degree) == 2

    def test_dihedral_translates(self, dihedral):
        poset = poset_from_halfspaces([dihedral], 4, translate_radius=2)
        tree = build_tree(poset)
        assert nx.is_tree(tree.graph)
        assert tree.graph.number_of_edges() == len(translate_reps(dihedral, 2))

    @pytest.mark.slow
    def test_crossing_slopes_rejected(self, slope01, slope10):
        with pytest.raises(CrossingDetected) as info:
            poset_from_halfspaces([slope01, slope10], 6, translate_radius=1)
        assert info.value.splittings == (0, 1)


class TestGraphOfGroups:
    def test_z_is_one_loop(self, z_split):
        gog = assemble_graph_of_groups([z_split], 4, translate_radius=3, check_stability=False)
        assert len(gog.vertices) == 1
        assert len(gog.edges) == 1
        assert gog.edges[0].tail == gog.edges[0].head
        assert gog.to_dict()["stability"] is None

    def test_collapse_out_of_range(self, z_split):
        gog = assemble_graph_of_groups([z_split], 4, translate_radius=3, check_stability=False)
        with pytest.raises(AssemblyError):
            collapse_edge(gog, 1)

    def test_collapse_loop_is_hnn(self, z_split):
        gog = assemble_graph_of_groups([z_split], 4, translate_radius=3, check_stability=False)
        collapsed = collapse_edge(gog, 0)
        assert collapsed is not z_split
        assert collapsed.kind is SplittingKind.HNN
        assert collapsed.edge_generator_words() == ()
        assert collapse_round_trip(gog, 0, z_split, 4).is_true

    def test_collapse_reads_edge_words(self, z_split):
        gog = assemble_graph_of_groups([z_split], 4, translate_radius=3, check_stability=False)
        edge = gog.edges[0]
        # the stable element becomes t^2 or t^4, which no longer generates Z
        doubled = replace(edge, tail_word=edge.tail_word + ("t", "t", "t"))
        with pytest.raises(AssemblyError):
            collapse_edge(replace(gog, edges=(doubled,)), 0)

    @pytest.mark.parametrize("name", ["dihedral", "z4_amalgam"])
    def test_collapse_finite_vertex_groups(self, name, request):
        s = request.getfixturevalue(name)
        gog = assemble_graph_of_groups([s], 4, translate_radius=1, check_stability=False)
        collapsed = collapse_edge(gog, 0)
        assert collapsed.kind is SplittingKind.AMALGAM
        assert collapse_round_trip(gog, 0, s, 4).is_true

    def test_collapse_infinite_vertex_group_of_surface(self, genus2):
        gog = assemble_graph_of_groups([genus2], 4, translate_radius=1, check_stability=False)
        with pytest.raises(AssemblyError):
            collapse_edge(gog, 0)

    def test_slope_with_its_edge_conjugate(self, slope01):
        twin = conjugate_splitting(slope01, ("x",))
        gog = assemble_graph_of_groups([slope01, twin], 4, translate_radius=1, check_stability=False)
        assert len(gog.vertices) == 2
        assert len(gog.edges) == 2
        for e in gog.edges:
            assert e.group.contains(("x",))
            assert not e.group.contains(("y",))
        assert sum(v.group.contains(("y", "x", "y'")) for v in gog.vertices) == 1
        assert all(v.group.contains(("x",)) for v in gog.vertices)
        assert collapse_round_trip(gog, 0, slope01, 4).is_true
        assert collapse_round_trip(gog, 1, twin, 4).is_true

    def test_no_splittings(self):
        with pytest.raises(AssemblyError):
            assemble_graph_of_groups([], 4)

    @pytest.mark.slow
    def test_free_splittings_combine(self, f3_left, f3_right):
        gog = assemble_graph_of_groups([f3_left, f3_right], 4, translate_radius=1, check_stability=False)
        assert len(gog.vertices) == 3
        assert len(gog.edges) == 2
        homes = {g: [v.name for v in gog.vertices if v.group.contains((g,))] for g in ("x", "y", "z")}
        assert all(len(names) == 1 for names in homes.values())
        assert len({names[0] for names in homes.values()}) == 3
        assert splittings_equivalent(collapse_edge(gog, 0), f3_left, 3).is_true
        assert splittings_equivalent(collapse_edge(gog, 1), f3_right, 3).is_true
        assert collapse_round_trip(gog, 0, f3_left, 3).is_true
        vertex_generators = {v.name: v.generators for v in gog.vertices}
        assert all(gens for gens in vertex_generators.values())

    @pytest.mark.slow
    def test_free_splittings_stable(self, f3_left, f3_right):
        # the radius-10 ball of F3 exceeds the default vertex budget, so compare 4 with 6
        gog = assemble_graph_of_groups([f3_left, f3_right], 4, translate_radius=1)
        assert gog.stable is True
        assert gog.to_dict()["stability"] is True
