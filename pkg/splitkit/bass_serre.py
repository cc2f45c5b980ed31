"""
Neighbourhoods of Bass-Serre trees, exact nesting of translates, and
quotients of minimal invariant subtrees.

Tree vertices are cosets gA (and gB for amalgams); tree edges are cosets gH
of the edge group, written by a translator g so that the edge is g·e for the
base edge e. The base edge joins A to B (amalgam) or A to tA (HNN).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Optional, Sequence

import networkx as nx

from .config import settings
from .errors import MembershipError, TreeDepthError
from .presentation import (
    IDENTITY,
    SubgroupSpec,
    Word,
    format_word,
    free_reduce,
    invert_word,
)
from .splitting import Side, Splitting, SplittingKind
from .verdict import Verdict

logger = logging.getLogger(__name__)

TreeVertex = tuple[Side, Word]


class TreeOrder(str, Enum):
    """Relation between the half-spaces g1·X and g2·X of one splitting."""

    EQUAL = "equal"
    CONTAINED = "<="
    CONTAINS = ">="
    IN_COMPLEMENT = "<=*"
    CONTAINS_COMPLEMENT = ">=*"
    INCOMPARABLE = "incomparable-at-depth"


# =============================================================================
# Edges, vertices and geodesics
# =============================================================================

def edge_endpoints(s: Splitting, translator: Word) -> tuple[TreeVertex, TreeVertex]:
    """The two vertices of the edge translator·e, as (side, translator) pairs."""
    if s.kind is SplittingKind.AMALGAM:
        return (Side.A, translator), (Side.B, translator)
    return (Side.A, translator), (Side.A, free_reduce(translator + s.stable_word))


def vertex_id(s: Splitting, vertex: TreeVertex) -> Hashable:
    side, translator = vertex
    return s.vertex_key(translator, side)


def edge_id(s: Splitting, translator: Word) -> Hashable:
    return s.edge_key(translator)


def incident_edges(s: Splitting, vertex: TreeVertex, radius: Optional[int] = None) -> list[Word]:
    """Translators of the edges at a vertex, transversals truncated to `radius`."""
    radius = settings.transversal_radius if radius is None else radius
    side, translator = vertex
    core = s.core
    if s.kind is SplittingKind.AMALGAM:
        reps = core.embeddings[side].transversal(radius)
        return [free_reduce(translator + s.pushforward(rep)) for rep in reps]
    edges = [free_reduce(translator + s.pushforward(rep)) for rep in core.embeddings["alpha1"].transversal(radius)]
    back = invert_word(s.stable_word)
    edges += [
        free_reduce(translator + s.pushforward(rep) + back)
        for rep in core.embeddings["alpha2"].transversal(radius)
    ]
    return edges


def vertex_path(s: Splitting, g: Word) -> list[Word]:
    """Edge translators along the geodesic from the base vertex A to g·A."""
    nf = s.normal_form(g)
    path: list[Word] = []
    prefix: Word = IDENTITY
    if s.kind is SplittingKind.AMALGAM:
        syllables = nf.syllables
        for i, syl in enumerate(syllables):
            before = prefix
            prefix = free_reduce(prefix + s.pushforward(syl.rep))
            if i == 0 and syl.side is Side.B:
                path.append(before)
            if i < len(syllables) - 1 or syl.side is Side.B:
                path.append(prefix)
        return path
    t = s.core.stable_letter
    for syl in nf.syllables:
        with_rep = free_reduce(prefix + s.pushforward(syl.rep))
        prefix = free_reduce(with_rep + s.pushforward((t if syl.sign > 0 else f"{t}'",)))
        path.append(with_rep if syl.sign > 0 else prefix)
    return path


def tree_distance(s: Splitting, g: Word) -> int:
    """d(A, g·A) in the Bass-Serre tree."""
    return len(vertex_path(s, g))


def _axis_domain(s: Splitting, h: Word) -> list[Word]:
    """Edges of a fundamental domain of h on its axis; empty when h is elliptic."""
    first = vertex_path(s, h)
    length = tree_distance(s, free_reduce(h + h)) - len(first)
    if length <= 0:
        return []
    start = (len(first) - length) // 2
    return first[start:start + length]


# =============================================================================
# Local trees
# =============================================================================

@dataclass(frozen=True, eq=False)
class TreeLocal:
    """The edges within `depth` of the base edge.

    Nodes are labelled "A:<word>" / "B:<word>"; edges carry their translator
    and their distance from the base edge.
    """

    splitting: Splitting
    depth: int
    graph: nx.Graph
    edge_translators: dict[Hashable, Word] = field(default_factory=dict, repr=False)

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()


def local_tree(s: Splitting, depth: int) -> TreeLocal:
    """Breadth-first neighbourhood of the base edge.

    Raises:
        TreeDepthError: If depth exceeds settings.max_tree_depth.
    """
    if depth < 0 or depth > settings.max_tree_depth:
        raise TreeDepthError(f"Tree depth {depth} outside 0..{settings.max_tree_depth}")
    graph = nx.Graph()
    vertex_labels: dict[Hashable, str] = {}
    edge_translators: dict[Hashable, Word] = {}

    def label_for(vertex: TreeVertex) -> str:
        key = vertex_id(s, vertex)
        if key not in vertex_labels:
            side, translator = vertex
            vertex_labels[key] = f"{side.value}:{format_word(translator)}"
            graph.add_node(vertex_labels[key], side=side.value, translator=format_word(translator))
        return vertex_labels[key]

    frontier = [IDENTITY]
    edge_translators[edge_id(s, IDENTITY)] = IDENTITY
    expanded: set[Hashable] = set()
    for level in range(depth + 1):
        next_frontier: list[Word] = []
        for translator in frontier:
            tail, head = edge_endpoints(s, translator)
            graph.add_edge(label_for(tail), label_for(head), translator=format_word(translator), depth=level)
            if level == depth:
                continue
            for vertex in (tail, head):
                key = vertex_id(s, vertex)
                if key in expanded:
                    continue
                expanded.add(key)
                for nxt in incident_edges(s, vertex):
                    ekey = edge_id(s, nxt)
                    if ekey not in edge_translators:
                        edge_translators[ekey] = nxt
                        next_frontier.append(nxt)
        frontier = next_frontier
    logger.debug(f"Local tree of {s.name} at depth {depth}: {graph.number_of_edges()} edges")
    return TreeLocal(s, depth, graph, edge_translators)


# =============================================================================
# Nesting
# =============================================================================

def edge_order(s: Splitting, g1: Word, g2: Word) -> TreeOrder:
    """Exact relation between g1·X and g2·X read off from h = g1⁻¹·g2.

    h ∈ H gives equality; otherwise the pair (h ∈ X, h⁻¹ ∈ X) places the
    edge h·e on one side of e and e on one side of h·e, which fixes the
    tree order of the two oriented edges.
    """
    h = free_reduce(invert_word(g1) + g2)
    try:
        if s.in_h(h):
            return TreeOrder.EQUAL
        forward = s.in_x(h)
        backward = s.in_x(invert_word(h))
    except MembershipError as exc:
        logger.warning(f"Edge order undecided for {format_word(g1)}, {format_word(g2)}: {exc}")
        return TreeOrder.INCOMPARABLE
    if forward and not backward:
        return TreeOrder.CONTAINS
    if backward and not forward:
        return TreeOrder.CONTAINED
    if not forward:
        return TreeOrder.IN_COMPLEMENT
    return TreeOrder.CONTAINS_COMPLEMENT


# =============================================================================
# Minimal invariant subtrees
# =============================================================================

@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """Edge and vertex orbits of a minimal invariant subtree under an actor."""

    edges: tuple[Word, ...]
    vertices: tuple[TreeVertex, ...]
    graph: nx.MultiGraph
    depth: int
    stable: bool
    verdict: Verdict

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_dict(self) -> dict:
        return {
            "edges": self.edge_count,
            "edge_translators": [format_word(w) for w in self.edges],
            "vertices": [f"{side.value}:{format_word(w)}" for side, w in self.vertices],
            "depth": self.depth,
            "stabilized": self.stable,
            "verdict": self.verdict.to_dict(),
        }


def _actor_ball(actor: SubgroupSpec, depth: int) -> list[Word]:
    """Products of at most `depth` actor generators (and inverses), deduplicated."""
    group = actor.group
    steps = [g for gen in actor.generators for g in (gen, invert_word(gen))]
    seen = {group.key(IDENTITY): IDENTITY}
    layer = [IDENTITY]
    for _ in range(depth):
        nxt = []
        for word in layer:
            for step in steps:
                candidate = free_reduce(word + step)
                key = group.key(candidate)
                if key not in seen:
                    seen[key] = candidate
                    nxt.append(candidate)
        layer = nxt
    return sorted(seen.values(), key=group.shortlex_key)


def _orbit_reps(
    s: Splitting, items: Sequence, ball: Sequence[Word], key_of
) -> list:
    reps: list = []
    rep_keys: list[Hashable] = []
    for item in items:
        if any(key_of(a, item) in rep_keys for a in ball):
            continue
        reps.append(item)
        rep_keys.append(key_of(IDENTITY, item))
    return reps


def _quotient_at(s: Splitting, actor: SubgroupSpec, depth: int) -> tuple[list[Word], list[TreeVertex], list[Word]]:
    ball = _actor_ball(actor, depth)
    domain: list[Word] = []
    seen: set[Hashable] = set()
    for h in ball:
        for edge in _axis_domain(s, h):
            key = edge_id(s, edge)
            if key not in seen:
                seen.add(key)
                domain.append(edge)
    edges = _orbit_reps(s, domain, ball, lambda a, k: edge_id(s, free_reduce(a + k)))
    endpoints = [v for k in edges for v in edge_endpoints(s, k)]
    vertices = _orbit_reps(
        s, endpoints, ball, lambda a, v: vertex_id(s, (v[0], free_reduce(a + v[1])))
    )
    return edges, vertices, ball


def minimal_subtree(s_target: Splitting, actor: SubgroupSpec, depth: int) -> QuotientGraph:
    """Quotient by the actor of the union of axes of its hyperbolic elements.

    Axes are found for every element of the actor's word ball of the given
    depth; the edge count is certified only when it agrees at depth - 1.
    An actor without hyperbolic elements fixes a vertex and yields no edges.
    """
    if depth < 1:
        raise TreeDepthError("Minimal subtree needs depth >= 1")
    previous, _, _ = _quotient_at(s_target, actor, depth - 1)
    edges, vertices, ball = _quotient_at(s_target, actor, depth)
    stable = len(previous) == len(edges)

    graph = nx.MultiGraph()
    vertex_names: list[str] = []
    for side, w in vertices:
        name = f"{side.value}:{format_word(w)}"
        vertex_names.append(name)
        graph.add_node(name)

    def orbit_name(vertex: TreeVertex) -> str:
        for a in ball:
            moved = vertex_id(s_target, (vertex[0], free_reduce(a + vertex[1])))
            for name, rep in zip(vertex_names, vertices):
                if vertex_id(s_target, rep) == moved:
                    return name
        return f"{vertex[0].value}:{format_word(vertex[1])}"

    for k in edges:
        tail, head = edge_endpoints(s_target, k)
        graph.add_edge(orbit_name(tail), orbit_name(head), translator=format_word(k))

    if stable:
        verdict = Verdict.true(depth, reason=f"{len(edges)} edge orbits at depths {depth - 1} and {depth}")
    else:
        verdict = Verdict.unresolved(depth, f"edge orbits {len(previous)} -> {len(edges)}")
        logger.warning(f"Minimal subtree of {actor.name} on {s_target.name} not stable at depth {depth}")
    return QuotientGraph(tuple(edges), tuple(vertices), graph, depth, stable, verdict)
