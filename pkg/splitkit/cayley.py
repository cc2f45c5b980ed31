"""
Truncated Cayley graphs, quotient graphs H\\Γ, coboundaries and ends.

Graphs are networkx graphs whose nodes are canonical words; every node
carries a `depth` attribute (distance to the nearest centre) and every edge
a `generator` attribute naming the positive generator it is labelled by.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

import networkx as nx

from .config import settings
from .errors import InvariantError
from .presentation import (
    IDENTITY,
    GroupPresentation,
    SubgroupSpec,
    Word,
    enumerate_shortlex,
    format_word,
    free_reduce,
    invert_word,
)
from .verdict import Verdict

logger = logging.getLogger(__name__)

Indicator = Callable[[Word], bool]


@dataclass(frozen=True, eq=False)
class CayleyBall:
    """A finite piece of Γ (or of H\\Γ when `subgroup` is set)."""

    group: GroupPresentation
    radius: int
    graph: nx.Graph
    centers: tuple[Word, ...] = (IDENTITY,)
    subgroup: Optional[SubgroupSpec] = None
    keys: dict[Hashable, Word] = field(default_factory=dict, repr=False)

    @property
    def vertices(self) -> list[Word]:
        return list(self.graph.nodes)

    @property
    def edges(self) -> list[tuple[Word, Word]]:
        return list(self.graph.edges)

    def within(self, radius: int) -> nx.Graph:
        """Subgraph induced on nodes of depth <= radius."""
        nodes = [n for n, d in self.graph.nodes(data="depth") if d <= radius]
        return self.graph.subgraph(nodes)

    def node_for(self, word: Word) -> Optional[Word]:
        """Node representing the element (or coset) of `word`, if present."""
        if self.subgroup is not None:
            return self.keys.get(self.subgroup.coset_key(word))
        return self.keys.get(self.group.key(word))


@dataclass(frozen=True)
class EdgeCut:
    """Edges of a ball with exactly one endpoint in the indicated set."""

    edges: tuple[tuple[Word, Word], ...]

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class EndsEstimate:
    value: str
    certified_radius: Optional[int]
    counts: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "certified_radius": self.certified_radius,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
        }


def _add_edges(ball: CayleyBall, lookup: Callable[[Word], Optional[Word]]) -> None:
    group = ball.group
    for node in list(ball.graph.nodes):
        for gen in group.generators:
            target = lookup(node + (gen.name,))
            if target is not None and target != node:
                ball.graph.add_edge(node, target, generator=gen.name)


# =============================================================================
# Balls and regions
# =============================================================================

def ball(group: GroupPresentation, radius: int) -> CayleyBall:
    """All elements of length <= radius, as shortlex labels, with internal edges.

    Raises:
        BudgetExceeded: If the ball exceeds the configured vertex cap.
    """
    graph = nx.Graph()
    keys: dict[Hashable, Word] = {}
    for key, label in enumerate_shortlex(group, radius):
        keys[key] = label
        graph.add_node(label, depth=len(label))
    result = CayleyBall(group, radius, graph, keys=keys)
    _add_edges(result, lambda w: keys.get(group.key(w)))
    logger.debug(f"Ball of radius {radius} in {group.name}: {graph.number_of_nodes()} vertices")
    return result


def quotient_ball(group: GroupPresentation, sub: SubgroupSpec, radius: int) -> CayleyBall:
    """The right cosets Hw met by the radius ball, labelled by their shortlex-least word."""
    graph = nx.Graph()
    keys: dict[Hashable, Word] = {}
    for _, label in enumerate_shortlex(group, radius):
        coset = sub.coset_key(label)
        if coset not in keys:
            keys[coset] = label
            graph.add_node(label, depth=len(label))
    result = CayleyBall(group, radius, graph, subgroup=sub, keys=keys)
    _add_edges(result, lambda w: keys.get(sub.coset_key(w)))
    logger.debug(f"Quotient ball {sub.name}\\{group.name} radius {radius}: {graph.number_of_nodes()} cosets")
    return result


def region(group: GroupPresentation, centers: Sequence[Word], radius: int) -> CayleyBall:
    """Union of the radius balls around each centre; nodes are normal words."""
    labels = [label for _, label in enumerate_shortlex(group, radius)]
    graph = nx.Graph()
    keys: dict[Hashable, Word] = {}
    for center in centers:
        for label in labels:
            element = free_reduce(center + label)
            key = group.key(element)
            node = keys.get(key)
            if node is None:
                node = group.normal_word(element)
                keys[key] = node
                graph.add_node(node, depth=len(label))
            elif graph.nodes[node]["depth"] > len(label):
                graph.nodes[node]["depth"] = len(label)
    result = CayleyBall(group, radius, graph, tuple(centers), keys=keys)
    _add_edges(result, lambda w: keys.get(group.key(w)))
    return result


# =============================================================================
# Coboundaries
# =============================================================================

def coboundary(indicator: Indicator, cayley: CayleyBall) -> EdgeCut:
    """The edges of the ball joining the indicated set to its complement."""
    inside = {node: bool(indicator(node)) for node in cayley.graph.nodes}
    cut = []
    for u, v in cayley.graph.edges:
        if inside[u] != inside[v]:
            a, b = sorted((u, v), key=cayley.group.shortlex_key)
            cut.append((a, b))
    return EdgeCut(tuple(sorted(cut, key=lambda e: (cayley.group.shortlex_key(e[0]), cayley.group.shortlex_key(e[1])))))


def projected_coboundary(
    indicator: Indicator, cayley: CayleyBall, sub: SubgroupSpec, radius: Optional[int] = None
) -> set[tuple[Hashable, str]]:
    """Image in H\\Γ of the coboundary edges lying within `radius`.

    An edge u -g-> ug projects to (Hu, g).
    """
    graph = cayley.graph if radius is None else cayley.within(radius)
    group = cayley.group
    inside = {node: bool(indicator(node)) for node in graph.nodes}
    projected: set[tuple[Hashable, str]] = set()
    for u, v, gen in graph.edges(data="generator"):
        if inside[u] == inside[v]:
            continue
        tail = u if group.equals(u + (gen,), v) else v
        projected.add((sub.coset_key(tail), gen))
    return projected


def _check_invariant(group: GroupPresentation, sub: SubgroupSpec, indicator: Indicator, words: Iterable[Word]) -> None:
    steps = [g for gen in sub.generators for g in (gen, invert_word(gen))]
    for word in words:
        value = bool(indicator(word))
        for step in steps:
            moved = free_reduce(step + word)
            if bool(indicator(moved)) != value:
                raise InvariantError(
                    f"Indicator is not {sub.name}-invariant: {format_word(word)} vs {format_word(moved)}",
                    witness=format_word(word),
                )


def almost_invariance_verdict(
    group: GroupPresentation,
    sub: SubgroupSpec,
    indicator: Indicator,
    radius: int,
    window: Optional[int] = None,
) -> Verdict:
    """Cohen's criterion at finite radius: the projected coboundary must stop changing.

    Raises:
        InvariantError: If the indicator is not left H-invariant on the ball.
    """
    window = window or settings.growth_window
    cayley = ball(group, radius)
    _check_invariant(group, sub, indicator, [w for w in cayley.graph.nodes if len(w) < radius])
    radii = [r for r in range(radius - window + 1, radius + 1) if r >= 0]
    cuts = [projected_coboundary(indicator, cayley, sub, r) for r in radii]
    if len(cuts) == window and all(c == cuts[0] for c in cuts):
        return Verdict.true(radius, reason=f"projected coboundary fixed at {len(cuts[0])} edges")
    sizes = ", ".join(str(len(c)) for c in cuts)
    logger.debug(f"Projected coboundary still changing: {sizes}")
    return Verdict.unresolved(radius, f"projected coboundary sizes {sizes}")


# =============================================================================
# Ends
# =============================================================================

def _unbounded_components(cayley: CayleyBall, radius: int) -> int:
    graph = cayley.within(radius)
    core = radius // 2
    outer = graph.subgraph([n for n, d in graph.nodes(data="depth") if d > core])
    count = 0
    for component in nx.connected_components(outer):
        if any(graph.nodes[n]["depth"] == radius for n in component):
            count += 1
    return count


def _ends_value(count: int) -> str:
    return str(count) if count < 3 else "many"


def estimate_ends(
    group: GroupPresentation,
    sub: SubgroupSpec,
    radius: int,
    window: Optional[int] = None,
) -> EndsEstimate:
    """Count components of H\\Γ outside a half-radius core that reach the boundary sphere."""
    window = window or settings.ends_window
    cayley = quotient_ball(group, sub, radius)
    radii = [r for r in range(radius - window + 1, radius + 1) if r >= 1]
    counts = {r: _unbounded_components(cayley, r) for r in radii}
    values = [_ends_value(counts[r]) for r in radii]
    certified = radii[0] if len(radii) == window and len(set(values)) == 1 else None
    if certified is None:
        logger.warning(f"Ends of ({group.name}, {sub.name}) not stable up to radius {radius}: {counts}")
    return EndsEstimate(values[-1] if values else "0", certified, counts)
