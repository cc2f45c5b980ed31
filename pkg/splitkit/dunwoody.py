"""
Posets with involution, the trees they determine, and graphs of groups
assembled from pairwise compatible splittings.

An oriented tree edge e is read as running from head(ē) to head(e); e <= f
when some oriented path starts with e and ends with f.
"""

import concurrent.futures
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Optional, Sequence

import networkx as nx

from .bass_serre import TreeOrder, edge_order
from .config import settings
from .crossing import quadrant_regions, smallness_verdict
from .errors import (
    AssemblyError,
    CrossingDetected,
    InvariantError,
    MembershipError,
    PosetConditionError,
    SplittingError,
    UnresolvedError,
)
from .folding import FoldedGraph
from .presentation import (
    IDENTITY,
    FiniteEnumerationOracle,
    FiniteTable,
    GroupPresentation,
    Strategy,
    SubgroupSpec,
    Word,
    enumerate_shortlex,
    finite_group,
    format_word,
    free_group,
    free_reduce,
    intersection,
    invert_word,
    substitute,
)
from .splitting import (
    HalfSpace,
    Side,
    Splitting,
    SplittingCore,
    SplittingKind,
    Variant,
    attach,
    conjugate_splitting,
    find_conjugator,
    splitting_group,
    splittings_equivalent,
)
from .verdict import Verdict

logger = logging.getLogger(__name__)

Element = Hashable


# =============================================================================
# Posets with involution
# =============================================================================

@dataclass(frozen=True, eq=False)
class PosetWithInvolution:
    """A finite set with a reflexive, transitive relation and an involution.

    Attributes:
        elements: The elements in a fixed order.
        involution: e -> ē.
        order: All pairs (a, b) with a <= b.
    """

    elements: tuple[Element, ...]
    involution: dict[Element, Element]
    order: frozenset[tuple[Element, Element]]

    @classmethod
    def from_relations(
        cls, elements: Sequence[Element], involution: dict[Element, Element], pairs: Iterable[tuple[Element, Element]]
    ) -> "PosetWithInvolution":
        """Close the given pairs reflexively and transitively."""
        graph = nx.DiGraph()
        graph.add_nodes_from(elements)
        graph.add_edges_from(pairs)
        unknown = set(graph.nodes) - set(elements)
        if unknown:
            raise PosetConditionError(0, tuple(sorted(map(str, unknown))), "order mentions unknown elements")
        closure = nx.transitive_closure(graph, reflexive=True)
        return cls(tuple(elements), dict(involution), frozenset(closure.edges))

    @cached_property
    def index(self) -> dict[Element, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def up_bits(self) -> list[int]:
        """up_bits[i] has bit j set when elements[i] <= elements[j]."""
        bits = [0] * len(self.elements)
        for a, b in self.order:
            bits[self.index[a]] |= 1 << self.index[b]
        return bits

    def le(self, a: Element, b: Element) -> bool:
        return (a, b) in self.order

    def bar(self, a: Element) -> Element:
        return self.involution[a]

    def strict_pairs(self) -> list[tuple[Element, Element]]:
        pairs = [(a, b) for a, b in self.order if a != b]
        return sorted(pairs, key=lambda p: (self.index[p[0]], self.index[p[1]]))

    def to_dict(self) -> dict[str, Any]:
        names = {e: _name(e) for e in self.elements}
        return {
            "schema_version": 1,
            "elements": [names[e] for e in self.elements],
            "involution": {names[e]: names[self.involution[e]] for e in self.elements},
            "order": [[names[a], names[b]] for a, b in self.strict_pairs()],
        }


def _name(element: Element) -> str:
    return element.label if isinstance(element, Translate) else str(element)


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def validate_poset(poset: PosetWithInvolution) -> PosetWithInvolution:
    """Check the four tree-construction conditions (plus the order axioms).

    Raises:
        PosetConditionError: With the number of the first violated condition
            and the elements witnessing it.
    """
    elements = poset.elements
    bar = poset.involution
    for e in elements:
        if e not in bar or bar[e] not in bar:
            raise PosetConditionError(0, (_name(e),), f"{_name(e)} has no image under the involution")
        if bar[e] == e:
            raise PosetConditionError(0, (_name(e),), f"{_name(e)} is fixed by the involution")
        if bar[bar[e]] != e:
            raise PosetConditionError(0, (_name(e), _name(bar[e])), "the map is not an involution")
    for a, b in poset.strict_pairs():
        if poset.le(b, a):
            raise PosetConditionError(0, (_name(a), _name(b)), f"{_name(a)} <= {_name(b)} <= {_name(a)}")

    for a, b in poset.strict_pairs():
        if not poset.le(bar[b], bar[a]):
            raise PosetConditionError(
                1, (_name(a), _name(b)), f"{_name(a)} <= {_name(b)} but not {_name(bar[b])} <= {_name(bar[a])}"
            )

    # condition 2 (finite intervals) holds for every finite poset

    for i, e in enumerate(elements):
        for f in elements[i + 1:]:
            if not (poset.le(e, f) or poset.le(e, bar[f]) or poset.le(bar[e], f) or poset.le(bar[e], bar[f])):
                raise PosetConditionError(3, (_name(e), _name(f)), f"{_name(e)} and {_name(f)} are incomparable")

    for e in elements:
        for f in elements:
            if poset.le(e, f) and poset.le(e, bar[f]):
                raise PosetConditionError(
                    4, (_name(e), _name(f)), f"{_name(e)} lies below both {_name(f)} and {_name(bar[f])}"
                )
    return poset


# =============================================================================
# Trees
# =============================================================================

@dataclass(frozen=True, eq=False)
class AbstractTree:
    """A tree whose oriented edges are poset elements."""

    graph: nx.Graph
    heads: dict[Element, str]
    involution: dict[Element, Element]
    elements: tuple[Element, ...]

    def head(self, e: Element) -> str:
        return self.heads[e]

    def tail(self, e: Element) -> str:
        return self.heads[self.involution[e]]

    @classmethod
    def from_graph(cls, graph: nx.Graph) -> "AbstractTree":
        """Name the oriented edges of a plain tree "u>v" (running from u to v)."""
        heads: dict[Element, str] = {}
        involution: dict[Element, Element] = {}
        elements: list[Element] = []
        tree = nx.Graph()
        tree.add_nodes_from(str(n) for n in graph.nodes)
        for u, v in graph.edges:
            forward, backward = f"{u}>{v}", f"{v}>{u}"
            heads[forward], heads[backward] = str(v), str(u)
            involution[forward], involution[backward] = backward, forward
            elements += [forward, backward]
            tree.add_edge(str(u), str(v), element=forward)
        return cls(tree, heads, involution, tuple(elements))


def order_from_paths(tree: AbstractTree) -> frozenset[tuple[Element, Element]]:
    """All pairs (e, f) such that an oriented path starts with e and ends with f."""
    oriented = {(tree.tail(e), tree.head(e)): e for e in tree.elements}
    pairs = {(e, e) for e in tree.elements}
    for e in tree.elements:
        start, end = tree.tail(e), tree.head(e)
        visited = {start, end}
        frontier = [end]
        while frontier:
            x = frontier.pop()
            for y in tree.graph.neighbors(x):
                if y in visited:
                    continue
                visited.add(y)
                pairs.add((e, oriented[(x, y)]))
                frontier.append(y)
    return frozenset(pairs)


def build_tree(poset: PosetWithInvolution) -> AbstractTree:
    """The tree with edge set E whose path order is the order of E.

    Two oriented edges share a head exactly when one is followed immediately
    by the reverse of the other; the result is checked against the input.

    Raises:
        InvariantError: If the constructed graph is not a tree with the input order.
    """
    elements = poset.elements
    n = len(elements)
    index = poset.index
    strict = [mask & ~(1 << i) for i, mask in enumerate(poset.up_bits)]
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        beyond = 0
        for j in _bits(strict[i]):
            beyond |= strict[j]
        for j in _bits(strict[i] & ~beyond):
            a, b = find(i), find(index[poset.bar(elements[j])])
            if a != b:
                parent[max(a, b)] = min(a, b)

    roots = sorted({find(i) for i in range(n)})
    names = {root: f"v{k}" for k, root in enumerate(roots)}
    heads = {e: names[find(i)] for i, e in enumerate(elements)}
    graph = nx.Graph()
    graph.add_nodes_from(names.values())
    for i, e in enumerate(elements):
        partner = poset.bar(e)
        if i < index[partner]:
            graph.add_edge(heads[partner], heads[e], element=e)
    tree = AbstractTree(graph, heads, dict(poset.involution), elements)

    if n and (graph.number_of_edges() != n // 2 or not nx.is_tree(graph)):
        raise InvariantError("Constructed graph is not a tree", witness=f"{graph.number_of_edges()} edges")
    if order_from_paths(tree) != poset.order:
        raise InvariantError("Tree path order differs from the input order")
    logger.debug(f"Built tree with {graph.number_of_nodes()} vertices and {graph.number_of_edges()} edges")
    return tree


# =============================================================================
# Posets from half-spaces
# =============================================================================

@dataclass(frozen=True, order=True)
class Translate:
    """The half-space translator·X (or its complement) of the family-th splitting."""

    family: int
    translator: Word
    starred: bool = False

    @property
    def label(self) -> str:
        return f"{self.family}:{format_word(self.translator)}:{'-' if self.starred else '+'}"

    def bar(self) -> "Translate":
        return Translate(self.family, self.translator, not self.starred)


# pairs (U, V) with U <= V for each tree relation between g1·X and g2·X;
# 0 and 1 stand for g1 and g2, the flag for the complement
_NESTING: dict[TreeOrder, tuple[tuple[tuple[int, bool], tuple[int, bool]], ...]] = {
    TreeOrder.CONTAINED: (((0, False), (1, False)), ((1, True), (0, True))),
    TreeOrder.CONTAINS: (((1, False), (0, False)), ((0, True), (1, True))),
    TreeOrder.IN_COMPLEMENT: (((0, False), (1, True)), ((1, False), (0, True))),
    TreeOrder.CONTAINS_COMPLEMENT: (((1, True), (0, False)), ((0, True), (1, False))),
}


@dataclass(frozen=True)
class QuadrantCell:
    verdict: Verdict
    empty: bool


def translate_reps(s: Splitting, radius: int) -> list[Word]:
    """One translator per edge g·e with g in the radius ball, in shortlex order."""
    seen: set[Hashable] = set()
    reps: list[Word] = []
    for _, g in enumerate_shortlex(s.ambient, radius):
        key = s.edge_key(g)
        if key not in seen:
            seen.add(key)
            reps.append(g)
    return reps


def _cross_table(s_i: Splitting, s_j: Splitting, m: Word, r: int) -> dict[tuple[bool, bool], QuadrantCell]:
    """Quadrants X_i^(*) ∩ m·X_j^(*) keyed by (first starred, second starred)."""
    u = HalfSpace(s_i, IDENTITY, Variant.X)
    v = HalfSpace(s_j, m, Variant.X)
    cayley, u_map, v_map = quadrant_regions(u, v, r)
    k_sub = v.stabilizer()
    cells = {}
    for u_star, v_star in product((False, True), repeat=2):
        def test(w: Word, a: bool = u_star, b: bool = v_star) -> bool:
            return u_map[w] != a and v_map[w] != b

        verdict = smallness_verdict(test, k_sub, r, boundary=v_map.__getitem__, cayley=cayley)
        empty = not any(test(w) for w in cayley.graph.nodes)
        cells[(u_star, v_star)] = QuadrantCell(verdict, empty)
    return cells


def _below(cells: dict[tuple[bool, bool], QuadrantCell], key: tuple[bool, bool]) -> bool:
    """A quadrant witnesses an order relation if it is empty, or small and the only small one."""
    cell = cells[key]
    if not cell.verdict.is_true:
        return False
    return cell.empty or sum(c.verdict.is_true for c in cells.values()) == 1


def _kappa(e: Translate) -> int:
    return (-1 if e.starred else 1) * (e.family + 1)


def poset_from_halfspaces(
    splittings: Sequence[Splitting],
    r: int,
    translate_radius: Optional[int] = None,
    flips: Optional[Sequence[bool]] = None,
) -> PosetWithInvolution:
    """The nested family of translates of the standard sets of several splittings.

    Translates of one splitting are ordered by the tree order. Translates of
    different splittings are compared through their four quadrants at probe
    radius r: U <= V when U ∩ V* is empty, or small and the only small one.
    Almost equal translates of different splittings are ordered by family.

    Args:
        splittings: Splittings of one group.
        r: Probe radius for cross-family smallness.
        translate_radius: Translators are taken from this ball.
        flips: Per family, use X* in place of X.

    Raises:
        CrossingDetected: If two translates cross.
        UnresolvedError: If a quadrant cannot be certified at radius r.
        PosetConditionError: If the resulting family is not a valid poset.
    """
    if not splittings:
        raise AssemblyError("No splittings given")
    group = splittings[0].ambient
    for s in splittings[1:]:
        if s.ambient.generator_names != group.generator_names:
            raise AssemblyError(f"Splitting {s.name} is not a splitting of {group.name}")
    radius_t = settings.translate_radius if translate_radius is None else translate_radius
    flips = list(flips) if flips is not None else [False] * len(splittings)
    reps = [translate_reps(s, radius_t) for s in splittings]

    def element(i: int, g: Word, set_starred: bool) -> Translate:
        return Translate(i, g, set_starred != flips[i])

    elements = [Translate(i, g, st) for i in range(len(splittings)) for g in reps[i] for st in (False, True)]
    involution = {e: e.bar() for e in elements}
    pairs: set[tuple[Translate, Translate]] = set()

    for i, s in enumerate(splittings):
        for a, g1 in enumerate(reps[i]):
            for g2 in reps[i][a + 1:]:
                relation = edge_order(s, g1, g2)
                if relation not in _NESTING:
                    raise UnresolvedError(
                        f"Translates {format_word(g1)} and {format_word(g2)} of {s.name} are not comparable", r
                    )
                pair = (g1, g2)
                for (p, p_star), (q, q_star) in _NESTING[relation]:
                    pairs.add((element(i, pair[p], p_star), element(i, pair[q], q_star)))

    jobs: dict[tuple[int, int, Hashable], Word] = {}
    offsets: list[tuple[int, int, Word, Word, tuple[int, int, Hashable]]] = []
    for i in range(len(splittings)):
        for j in range(i + 1, len(splittings)):
            for g in reps[i]:
                for k in reps[j]:
                    m = free_reduce(invert_word(g) + k)
                    key = (i, j, group.key(m))
                    jobs.setdefault(key, m)
                    offsets.append((i, j, g, k, key))

    def run(key: tuple[int, int, Hashable]) -> dict[tuple[bool, bool], QuadrantCell]:
        return _cross_table(splittings[key[0]], splittings[key[1]], jobs[key], r)

    with concurrent.futures.ThreadPoolExecutor(max_workers=settings.threads) as executor:
        tables = dict(zip(jobs, executor.map(run, list(jobs))))

    for key, cells in tables.items():
        i, j, _ = key
        m = jobs[key]
        if any(not c.verdict.certified for c in cells.values()):
            raise UnresolvedError(
                f"Quadrants of {splittings[i].name} and {format_word(m)}·{splittings[j].name} unresolved at radius {r}", r
            )
        if not any(c.verdict.is_true for c in cells.values()):
            raise CrossingDetected(
                f"{splittings[i].name} and {format_word(m)}·{splittings[j].name} cross", format_word(m), (i, j)
            )

    for i, j, g, k, key in offsets:
        cells = tables[key]
        for a, b in product((False, True), repeat=2):
            u, v = element(i, g, a), element(j, k, b)
            up = _below(cells, (a, not b))
            down = _below(cells, (not a, b))
            if up and down:
                pairs.add((u, v) if _kappa(u) < _kappa(v) else (v, u))
            elif up:
                pairs.add((u, v))
            elif down:
                pairs.add((v, u))

    poset = PosetWithInvolution.from_relations(elements, involution, pairs)
    logger.info(f"Poset of {len(elements)} translates from {len(splittings)} splittings")
    return validate_poset(poset)


# =============================================================================
# Graphs of groups
# =============================================================================

@dataclass(frozen=True, eq=False)
class GogVertex:
    """A quotient vertex.

    `generators` generate the vertex group when they could be computed (one
    input, a free ambient group, or a finite intersection) and are None
    otherwise; only `group` is needed for membership.
    """

    name: str
    labels: tuple[str, ...]
    group: SubgroupSpec
    conjugators: dict[str, Word]
    generators: Optional[tuple[Word, ...]] = None


@dataclass(frozen=True, eq=False)
class GogEdge:
    """Edge i runs from tail_word·(tail vertex) to head_word·(head vertex) in the tree."""

    index: int
    tail: str
    head: str
    group: SubgroupSpec
    tail_word: Word
    head_word: Word
    source: str


@dataclass(frozen=True, eq=False)
class GraphOfGroups:
    vertices: tuple[GogVertex, ...]
    edges: tuple[GogEdge, ...]
    graph: nx.MultiGraph
    tree: AbstractTree
    radius: int
    stable: Optional[bool] = None
    flips: tuple[bool, ...] = field(default_factory=tuple)

    def vertex(self, name: str) -> GogVertex:
        for v in self.vertices:
            if v.name == name:
                return v
        raise AssemblyError(f"No vertex {name}")

    def signature(self) -> tuple:
        """Shape of the graph: vertex label classes and edge endpoints."""
        return (
            tuple(v.labels for v in self.vertices),
            tuple((e.index, self.vertex(e.tail).labels, self.vertex(e.head).labels) for e in self.edges),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "radius": self.radius,
            "stability": self.stable,
            "vertices": [
                {
                    "name": v.name,
                    "labels": list(v.labels),
                    "group": v.group.describe(),
                    "conjugators": {k: format_word(w) for k, w in sorted(v.conjugators.items())},
                    "generators": None if v.generators is None else [format_word(w) for w in v.generators],
                }
                for v in self.vertices
            ],
            "edges": [
                {
                    "index": e.index,
                    "tail": e.tail,
                    "head": e.head,
                    "group": e.group.describe(),
                    "tail_word": format_word(e.tail_word),
                    "head_word": format_word(e.head_word),
                    "splitting": e.source,
                }
                for e in self.edges
            ],
        }


def _label(family: int, starred: bool) -> str:
    return f"{family}{'-' if starred else '+'}"


class _OffsetUnion:
    """Union-find over vertex labels with offsets: v_label = offset · v_root."""

    def __init__(self, labels: Iterable[str]):
        self.parent: dict[str, tuple[str, Word]] = {label: (label, IDENTITY) for label in labels}

    def find(self, label: str) -> tuple[str, Word]:
        parent, offset = self.parent[label]
        if parent == label:
            return label, IDENTITY
        root, above = self.find(parent)
        total = free_reduce(offset + above)
        self.parent[label] = (root, total)
        return root, total

    def merge(self, a: str, b: str, c: Word) -> None:
        """Record v_a = c · v_b."""
        ra, ca = self.find(a)
        rb, cb = self.find(b)
        if ra == rb:
            return
        if rb < ra:
            self.parent[ra] = (rb, free_reduce(invert_word(ca) + c + cb))
        else:
            self.parent[rb] = (ra, free_reduce(invert_word(cb) + invert_word(c) + ca))


def _head_group(s: Splitting, set_starred: bool) -> SubgroupSpec:
    """Stabilizer of head(X) (or head(X*)) in the splitting's own tree."""
    if s.kind is SplittingKind.AMALGAM:
        return s.vertex_subgroup(Side.A if set_starred else Side.B)
    base = s.vertex_subgroup(Side.A)
    return base.conjugate(s.stable_word) if set_starred else base


def _intersection_generators(parts: Sequence[SubgroupSpec]) -> Optional[tuple[Word, ...]]:
    """Generators of the intersection, or None when no method applies."""
    if len(parts) == 1:
        return parts[0].generators
    if any(not p.generators for p in parts):
        return ()
    group = parts[0].group
    if group.strategy is Strategy.FREE:
        graph = FoldedGraph.product([FoldedGraph(p.generators, group.symbols) for p in parts])
        return tuple(loop for _, loop in graph.basis())
    for part in parts:
        try:
            oracle = FiniteEnumerationOracle(group, part.generators, limit=settings.collapse_table_limit)
        except MembershipError:
            continue
        return tuple(w for w in oracle.elements if w and all(p.contains(w) for p in parts))
    return None


def _vertex_group(
    tree: AbstractTree, vertex: str, splittings: Sequence[Splitting], flips: Sequence[bool], name: str
) -> tuple[SubgroupSpec, Optional[tuple[Word, ...]]]:
    distance = nx.single_source_shortest_path_length(tree.graph, vertex)
    parts: list[SubgroupSpec] = []
    for j, s in enumerate(splittings):
        nearest: Optional[tuple[int, int, Translate]] = None
        for order, (x, y, e) in enumerate(tree.graph.edges(data="element")):
            if e.family != j:
                continue
            near = x if distance[x] <= distance[y] else y
            toward = e if tree.head(e) == near else tree.involution[e]
            candidate = (min(distance[x], distance[y]), order, toward)
            if nearest is None or candidate[:2] < nearest[:2]:
                nearest = candidate
        if nearest is None:
            raise AssemblyError(f"No edge of family {j} in the tree")
        toward = nearest[2]
        parts.append(_head_group(s, toward.starred != flips[j]).conjugate(toward.translator))
    return intersection(parts, name), _intersection_generators(parts)


def _poset_with_repair(
    splittings: Sequence[Splitting], r: int, translate_radius: Optional[int]
) -> tuple[list[Splitting], list[bool], PosetWithInvolution]:
    count = len(splittings)
    try:
        return list(splittings), [False] * count, poset_from_halfspaces(splittings, r, translate_radius)
    except PosetConditionError as first:
        logger.warning(f"Mixed family is not a valid poset ({first}); searching for a conjugate repair")
        for _, k in enumerate_shortlex(splittings[0].ambient, settings.conjugator_radius):
            for j in range(1, count):
                for flip in (False, True):
                    if not k and not flip:
                        continue
                    trial = list(splittings)
                    trial[j] = conjugate_splitting(splittings[j], k)
                    flips = [False] * count
                    flips[j] = flip
                    try:
                        poset = poset_from_halfspaces(trial, r, translate_radius, flips)
                    except PosetConditionError:
                        continue
                    logger.info(f"Repaired family {j} with conjugator {format_word(k)} (flip={flip})")
                    return trial, flips, poset
        raise AssemblyError(f"No repair within radius {settings.conjugator_radius}: {first}")


def _assemble(splittings: Sequence[Splitting], r: int, translate_radius: Optional[int]) -> GraphOfGroups:
    used, flips, poset = _poset_with_repair(splittings, r, translate_radius)
    tree = build_tree(poset)

    labels = [_label(i, st) for i in range(len(used)) for st in (False, True)]
    union = _OffsetUnion(labels)
    at_vertex: dict[str, list[Translate]] = {}
    for e in poset.elements:
        at_vertex.setdefault(tree.head(e), []).append(e)
    for members in at_vertex.values():
        first = members[0]
        for other in members[1:]:
            union.merge(
                _label(first.family, first.starred),
                _label(other.family, other.starred),
                free_reduce(invert_word(first.translator) + other.translator),
            )

    classes: dict[str, list[str]] = {}
    for label in labels:
        classes.setdefault(union.find(label)[0], []).append(label)
    vertices: list[GogVertex] = []
    name_of: dict[str, str] = {}
    for k, root in enumerate(sorted(classes)):
        name = f"V{k}"
        family, starred = int(root[:-1]), root[-1] == "-"
        tree_vertex = tree.head(Translate(family, IDENTITY, starred))
        group, generators = _vertex_group(tree, tree_vertex, used, flips, name)
        conjugators = {label: union.find(label)[1] for label in classes[root]}
        vertices.append(GogVertex(name, tuple(classes[root]), group, conjugators, generators))
        for label in classes[root]:
            name_of[label] = name

    edges: list[GogEdge] = []
    for i, s in enumerate(used):
        tail_label, head_label = _label(i, True), _label(i, False)
        tail_word, head_word = union.find(tail_label)[1], union.find(head_label)[1]
        sub = s.edge_subgroup()
        for endpoint, word in ((name_of[tail_label], tail_word), (name_of[head_label], head_word)):
            vertex = next(v for v in vertices if v.name == endpoint)
            for h in sub.generators:
                moved = free_reduce(invert_word(word) + h + word)
                if not vertex.group.contains(moved):
                    raise AssemblyError(
                        f"Edge group of {s.name} does not embed in {endpoint}: {format_word(moved)}"
                    )
        edges.append(GogEdge(i, name_of[tail_label], name_of[head_label], sub, tail_word, head_word, s.name))

    graph = nx.MultiGraph()
    for v in vertices:
        graph.add_node(v.name, labels=",".join(v.labels))
    for e in edges:
        graph.add_edge(e.tail, e.head, key=e.index, splitting=e.source)
    logger.info(f"Graph of groups with {len(vertices)} vertices and {len(edges)} edges at radius {r}")
    return GraphOfGroups(tuple(vertices), tuple(edges), graph, tree, r, None, tuple(flips))


def assemble_graph_of_groups(
    splittings: Sequence[Splitting],
    r: int,
    translate_radius: Optional[int] = None,
    check_stability: bool = True,
) -> GraphOfGroups:
    """Graph of groups realizing pairwise compatible splittings simultaneously.

    The quotient of the tree of translates has one vertex per class of
    half-space heads; each vertex group is the intersection of the input
    vertex groups at that tree vertex. The shape is recomputed at r + 2 to
    report stability.

    Raises:
        CrossingDetected: If some pair of translates crosses.
        UnresolvedError: If the probe radius is too small.
        AssemblyError: If no nested family can be formed.
    """
    gog = _assemble(splittings, r, translate_radius)
    if not check_stability:
        return gog
    wider = _assemble(splittings, r + 2, translate_radius)
    stable = gog.signature() == wider.signature()
    if not stable:
        logger.warning(f"Graph of groups changed between radius {r} and {r + 2}")
    return GraphOfGroups(gog.vertices, gog.edges, gog.graph, gog.tree, r, stable, gog.flips)


# =============================================================================
# Collapsing to one-edge splittings
# =============================================================================

@dataclass(frozen=True, eq=False)
class _Side:
    """A subgroup of the ambient group presented over its own alphabet."""

    presentation: GroupPresentation
    words: dict[str, Word]
    express: Callable[[Word], Word]


def _component(gog: GraphOfGroups, skip: int, root: str, start: Word) -> tuple[dict[str, Word], list[Word]]:
    """Lift the component of `root` once edge `skip` is removed.

    positions[u]·(tree vertex of u) lie in one subtree; the stabilizer of
    that subtree is generated by the conjugated vertex groups plus one
    element per edge closing a cycle.
    """
    positions = {root: start}
    loops: list[Word] = []
    pending = [e for e in gog.edges if e.index != skip]
    changed = True
    while changed:
        changed = False
        for e in list(pending):
            if e.tail in positions and e.head in positions:
                reached = free_reduce(positions[e.tail] + invert_word(e.tail_word) + e.head_word)
                loops.append(free_reduce(reached + invert_word(positions[e.head])))
            elif e.tail in positions:
                positions[e.head] = free_reduce(positions[e.tail] + invert_word(e.tail_word) + e.head_word)
            elif e.head in positions:
                positions[e.tail] = free_reduce(positions[e.head] + invert_word(e.head_word) + e.tail_word)
            else:
                continue
            pending.remove(e)
            changed = True

    generators: list[Word] = []
    for name, p in positions.items():
        vertex = gog.vertex(name)
        if vertex.generators is None:
            raise AssemblyError(f"No generators known for the vertex group of {name}")
        generators += [free_reduce(p + g + invert_word(p)) for g in vertex.generators]
    return positions, generators + loops


def _present(ambient: GroupPresentation, generators: Sequence[Word], prefix: str) -> _Side:
    """Present the subgroup generated by `generators` as a free group or a finite table.

    Raises:
        AssemblyError: If the subgroup is infinite in a group that is not free.
    """
    gens = [g for g in generators if not ambient.is_identity(g)]
    if not gens:
        return _Side(free_group([], f"{prefix.upper()}1"), {}, lambda w: IDENTITY)
    if ambient.strategy is Strategy.FREE:
        graph = FoldedGraph(gens, ambient.symbols)
        basis = [loop for _, loop in graph.basis()]
        names = [f"{prefix}{k + 1}" for k in range(len(basis))]
        return _Side(free_group(names, prefix.upper()), dict(zip(names, basis)), lambda w: graph.express(w, names))
    try:
        oracle = FiniteEnumerationOracle(ambient, gens, limit=settings.collapse_table_limit)
    except MembershipError as exc:
        raise AssemblyError(f"Cannot present a vertex group of {ambient.name}: {exc}")
    index = {ambient.key(w): k for k, w in enumerate(oracle.elements)}
    product = tuple(tuple(index[ambient.key(a + b)] for b in oracle.elements) for a in oracle.elements)
    names = [f"{prefix}{k + 1}" for k in range(len(gens))]
    table = FiniteTable(
        tuple(format_word(w) for w in oracle.elements),
        0,
        product,
        {n: index[ambient.key(g)] for n, g in zip(names, gens)},
    )
    group = finite_group(names, table, prefix.upper())

    def express(word: Word) -> Word:
        k = index.get(ambient.key(word))
        if k is None:
            raise MembershipError(f"{format_word(word)} is not in the vertex group")
        return group.solver.labels[k]

    return _Side(group, dict(zip(names, gens)), express)


def _pullback(core: SplittingCore, ambient: GroupPresentation, from_core: dict[str, Word]) -> dict[str, Word]:
    """A core word for each ambient generator, found by shortlex search.

    Raises:
        AssemblyError: If some generator has no preimage within the search radius.
    """
    wanted = {ambient.key((g,)): g for g in ambient.generator_names}
    found: dict[str, Word] = {}
    for _, word in enumerate_shortlex(splitting_group(core), settings.collapse_search_radius):
        g = wanted.get(ambient.key(substitute(word, from_core)))
        if g is not None and g not in found:
            found[g] = word
            if len(found) == len(wanted):
                break
    missing = sorted(set(ambient.generator_names) - set(found))
    if missing:
        raise AssemblyError(f"No preimage of {missing} within radius {settings.collapse_search_radius}")
    return found


def collapse_edge(gog: GraphOfGroups, i: int) -> Splitting:
    """The splitting obtained by collapsing every edge except the i-th.

    Removing edge i leaves one component (an HNN extension over the edge
    group, with stable letter t) or two (an amalgam whose A side holds the
    tail). Vertex groups come from the conjugated vertex groups of the
    component and the cycles it closes.

    Raises:
        AssemblyError: If i is out of range, the edge no longer embeds, or a
            component group cannot be presented.
    """
    if not 0 <= i < len(gog.edges):
        raise AssemblyError(f"Edge index {i} out of range 0..{len(gog.edges) - 1}")
    edge = gog.edges[i]
    for endpoint, word in ((edge.tail, edge.tail_word), (edge.head, edge.head_word)):
        group = gog.vertex(endpoint).group
        for h in edge.group.generators:
            if not group.contains(free_reduce(invert_word(word) + h + word)):
                raise AssemblyError(f"Edge {i} does not embed in {endpoint}")

    ambient = edge.group.group
    hs = [h for h in edge.group.generators if not ambient.is_identity(h)]
    names = [f"h{k + 1}" for k in range(len(hs))]
    positions, head_gens = _component(gog, i, edge.head, edge.head_word)
    try:
        if edge.tail in positions:
            tau = free_reduce(edge.tail_word + invert_word(positions[edge.tail]))
            side = _present(ambient, head_gens, "a")
            images = {
                "alpha1": [side.express(h) for h in hs],
                "alpha2": [side.express(free_reduce(invert_word(tau) + h + tau)) for h in hs],
            }
            core = SplittingCore(SplittingKind.HNN, {Side.A: side.presentation}, names, images, stable_letter="t")
            from_core = {**side.words, "t": tau}
        else:
            _, tail_gens = _component(gog, i, edge.tail, edge.tail_word)
            a, b = _present(ambient, tail_gens, "a"), _present(ambient, head_gens, "b")
            images = {"A": [a.express(h) for h in hs], "B": [b.express(h) for h in hs]}
            core = SplittingCore(SplittingKind.AMALGAM, {Side.A: a.presentation, Side.B: b.presentation}, names, images)
            from_core = {**a.words, **b.words}
        splitting = attach(core, ambient, _pullback(core, ambient, from_core), from_core, name=f"{edge.source}/{i}")
    except (SplittingError, MembershipError) as exc:
        raise AssemblyError(f"Cannot collapse onto edge {i}: {exc}")
    logger.info(f"Collapsed onto edge {i}: {splitting.kind.value} over {len(hs)} edge generators")
    return splitting


def collapse_round_trip(gog: GraphOfGroups, i: int, original: Splitting, r: int) -> Verdict:
    """Compare the collapse onto edge i with the splitting that produced it.

    The witness is a conjugator when the two agree only up to conjugation.
    """
    collapsed = collapse_edge(gog, i)
    verdict = splittings_equivalent(collapsed, original, r)
    if verdict.is_true:
        return verdict
    c = find_conjugator(collapsed, original, r, settings.conjugator_radius)
    if c is None:
        logger.warning(f"Collapse onto edge {i} differs from {original.name}: {verdict.witness}")
        return verdict
    return Verdict.true(r, format_word(c), "equivalent after conjugation")
