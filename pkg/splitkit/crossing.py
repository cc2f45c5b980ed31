"""
Smallness, crossing and strong crossing of half-spaces, and the double-coset
counts built on them.

Smallness is decided at finite radius by watching how many cosets Kg a set
meets inside growing regions: a count that keeps growing certifies an
infinite projection, a count that has stopped (with the set staying a
bounded distance from the relevant coboundary) certifies a small one.
"""

import concurrent.futures
import logging
from typing import Callable, Hashable, Optional, Sequence

import networkx as nx

from .bass_serre import TreeOrder, edge_order
from .cayley import CayleyBall, Indicator, region
from .config import settings
from .presentation import (
    IDENTITY,
    Membership,
    SubgroupSpec,
    Word,
    enumerate_shortlex,
    format_word,
    free_reduce,
    generator_ball,
    invert_word,
)
from .splitting import HalfSpace, Splitting, Variant
from .verdict import CosetVerdict, CountReport, Verdict

logger = logging.getLogger(__name__)

QUADRANTS: dict[str, tuple[bool, bool]] = {
    "U∩V": (True, True),
    "U∩V*": (True, False),
    "U*∩V": (False, True),
    "U*∩V*": (False, False),
}


# =============================================================================
# Double cosets
# =============================================================================

def double_coset_reps(h_sub: SubgroupSpec, k_sub: SubgroupSpec, r: int) -> list[Word]:
    """Shortlex-least representatives of the double cosets KgH meeting the r-ball.

    A word is new unless its left coset gH equals k·g'H for an earlier
    representative g' and some k in the K-ball of radius 2r + slack.
    """
    group = h_sub.group
    if h_sub.membership is Membership.WHOLE or k_sub.membership is Membership.WHOLE:
        return [IDENTITY]
    k_ball = generator_ball(k_sub, 2 * r + settings.double_coset_slack)
    seen: set[Hashable] = set()
    reps: list[Word] = []
    for _, g in enumerate_shortlex(group, r):
        if h_sub.left_coset_key(g) in seen:
            continue
        reps.append(g)
        for k in k_ball:
            seen.add(h_sub.left_coset_key(free_reduce(k + g)))
    logger.debug(f"{len(reps)} double cosets {k_sub.name}·g·{h_sub.name} within radius {r}")
    return reps


# =============================================================================
# Smallness
# =============================================================================

def _boundary_points(graph: nx.Graph, indicator: Indicator) -> set[Word]:
    inside = {n: bool(indicator(n)) for n in graph.nodes}
    points: set[Word] = set()
    for u, v in graph.edges:
        if inside[u] != inside[v]:
            points.add(u)
            points.add(v)
    return points


def smallness_verdict(
    inside: Indicator,
    sub: SubgroupSpec,
    r: int,
    boundary: Optional[Indicator] = None,
    centers: Sequence[Word] = (IDENTITY,),
    cayley: Optional[CayleyBall] = None,
) -> Verdict:
    """Decide whether the set `inside` is small, i.e. meets finitely many cosets Kg.

    Args:
        inside: Membership of the set being tested.
        sub: The subgroup K whose right cosets the set is projected to.
        r: Outer region radius.
        boundary: Membership of the set V whose coboundary the points must
            stay close to for a positive answer.
        centers: Centres of the region.
        cayley: A prebuilt region to reuse.

    Returns:
        CertifiedFalse when the projection strictly grows over the growth
        window and ends at or above the threshold; CertifiedTrue when the
        projection and the distance to δV are both unchanged over the stable
        window; Unresolved otherwise.
    """
    cayley = cayley or region(sub.group, centers, r)
    growth = settings.growth_window
    stable = settings.stable_window
    radii = [rho for rho in range(r - max(growth, stable + 1) + 1, r + 1) if rho >= 0]
    counts: dict[int, int] = {}
    distances: dict[int, Optional[int]] = {}
    newest: Optional[Word] = None
    for rho in radii:
        graph = cayley.within(rho)
        points = [n for n in graph.nodes if inside(n)]
        cosets = {sub.coset_key(p) for p in points}
        if rho == r and points:
            newest = max(points, key=lambda p: graph.nodes[p]["depth"])
        counts[rho] = len(cosets)
        if boundary is None or not points:
            distances[rho] = 0
            continue
        sources = _boundary_points(graph, boundary)
        if not sources:
            distances[rho] = None
            continue
        lengths = nx.multi_source_dijkstra_path_length(graph, sources)
        farthest = max(lengths.get(p, -1) for p in points)
        distances[rho] = farthest if farthest >= 0 else None

    grow_radii = radii[-growth:]
    grow_counts = [counts[rho] for rho in grow_radii]
    if (
        len(grow_radii) == growth
        and all(a < b for a, b in zip(grow_counts, grow_counts[1:]))
        and grow_counts[-1] >= settings.growth_threshold
    ):
        return Verdict.false(r, format_word(newest) if newest else None, f"projection grows {grow_counts}")

    stable_radii = radii[-(stable + 1):]
    stable_counts = {counts[rho] for rho in stable_radii}
    stable_dist = {distances[rho] for rho in stable_radii}
    if len(stable_radii) == stable + 1 and len(stable_counts) == 1 and len(stable_dist) == 1 and None not in stable_dist:
        count = stable_counts.pop()
        reason = "empty" if count == 0 else f"{count} cosets within distance {stable_dist.pop()} of the boundary"
        return Verdict.true(r, reason=reason)
    return Verdict.unresolved(r, f"projection counts {[counts[rho] for rho in radii]}")


def _centers(*translators: Word) -> list[Word]:
    out: list[Word] = []
    for t in (IDENTITY,) + translators:
        t = free_reduce(t)
        if t not in out:
            out.append(t)
    return out


def quadrant_regions(u: HalfSpace, v: HalfSpace, r: int) -> tuple[CayleyBall, dict[Word, bool], dict[Word, bool]]:
    """The probe region around both translators with U and V membership of every node."""
    cayley = region(u.splitting.ambient, _centers(u.translator, v.translator), r)
    u_map = {n: u.contains(n) for n in cayley.graph.nodes}
    v_map = {n: v.contains(n) for n in cayley.graph.nodes}
    return cayley, u_map, v_map


def quadrant_verdicts(u: HalfSpace, v: HalfSpace, r: int) -> dict[str, Verdict]:
    """Smallness of U∩V, U∩V*, U*∩V and U*∩V*, projected to Stab(V)\\G."""
    cayley, u_map, v_map = quadrant_regions(u, v, r)
    k_sub = v.stabilizer()
    verdicts = {}
    for name, (u_side, v_side) in QUADRANTS.items():
        verdicts[name] = smallness_verdict(
            lambda w, a=u_side, b=v_side: u_map[w] == a and v_map[w] == b,
            k_sub, r, boundary=v_map.__getitem__, cayley=cayley,
        )
    return verdicts


# =============================================================================
# Crossing
# =============================================================================

def _same_family(x_hs: HalfSpace, y_hs: HalfSpace) -> bool:
    return x_hs.splitting is y_hs.splitting or x_hs.splitting.same_as(y_hs.splitting)


def crosses(x_hs: HalfSpace, y_hs: HalfSpace, r: int) -> Verdict:
    """Whether every quadrant of the pair is not small.

    Translates of one splitting's standard set are nested, and the tree
    order decides this exactly.
    """
    if _same_family(x_hs, y_hs):
        relation = edge_order(x_hs.splitting, x_hs.translator, y_hs.translator)
        if relation is not TreeOrder.INCOMPARABLE:
            return Verdict.false(r, reason=f"nested ({relation.value})")
    verdicts = quadrant_verdicts(x_hs, y_hs, r)
    small = [name for name, v in verdicts.items() if v.is_true]
    if small:
        return Verdict.false(r, small[0], f"{small[0]} is small")
    if all(v.is_false for v in verdicts.values()):
        return Verdict.true(r, reason="all four quadrants project to infinite sets")
    pending = [name for name, v in verdicts.items() if not v.certified]
    return Verdict.unresolved(r, f"unresolved quadrants {pending}")


def _coboundary_indicator(hs: HalfSpace) -> Indicator:
    symbols = hs.splitting.ambient.symbols

    def on_boundary(word: Word) -> bool:
        side = hs.contains(word)
        return any(hs.contains(free_reduce(word + (s,))) != side for s in symbols)

    return on_boundary


def crosses_strongly(a_hs: HalfSpace, b_hs: HalfSpace, r: int) -> Verdict:
    """Whether A crosses B strongly: δA∩B and δA∩B* both project to infinite sets in Stab(B)\\G."""
    crossing = crosses(a_hs, b_hs, r)
    if crossing.is_false:
        return Verdict.false(r, crossing.witness, f"no crossing: {crossing.reason}")
    group = a_hs.splitting.ambient
    cayley = region(group, _centers(a_hs.translator, b_hs.translator), r)
    k_sub = b_hs.stabilizer()
    on_a = _coboundary_indicator(a_hs)
    b_in = b_hs.contains
    sides = {
        "δA∩B": smallness_verdict(lambda w: on_a(w) and b_in(w), k_sub, r, cayley=cayley),
        "δA∩B*": smallness_verdict(lambda w: on_a(w) and not b_in(w), k_sub, r, cayley=cayley),
    }
    finite = [name for name, v in sides.items() if v.is_true]
    if finite:
        return Verdict.false(r, finite[0], f"{finite[0]} projects to a finite set")
    if all(v.is_false for v in sides.values()):
        return Verdict.true(r, reason="both sides of the coboundary project to infinite sets")
    return Verdict.unresolved(r, "coboundary projections unresolved")


# =============================================================================
# Counting
# =============================================================================

def _count(
    s: Splitting,
    t: Splitting,
    r: int,
    test: Callable[[HalfSpace, HalfSpace, int], Verdict],
    probe_radius: Optional[int],
    x_variant: Variant,
    y_variant: Variant,
    threads: Optional[int],
) -> CountReport:
    probe = probe_radius if probe_radius is not None else r
    reps = double_coset_reps(s.edge_subgroup(), t.edge_subgroup(), r)
    y_hs = HalfSpace(t, IDENTITY, y_variant)

    def evaluate(g: Word) -> Verdict:
        return test(HalfSpace(s, g, x_variant), y_hs, probe)

    workers = threads or settings.threads
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        verdicts = list(executor.map(evaluate, reps))

    per_coset = tuple(CosetVerdict(format_word(g), v) for g, v in zip(reps, verdicts))
    crossing = [g for g, v in zip(reps, verdicts) if v.is_true]
    window = [rho for rho in range(r - settings.growth_window + 1, r + 1) if rho >= 0]
    nested_sets = {frozenset(g for g in crossing if len(g) <= rho) for rho in window}
    saturated = len(window) == settings.growth_window and len(nested_sets) == 1
    certified = all(v.certified for v in verdicts)
    exact = certified and saturated
    if not certified:
        logger.warning(f"{sum(not v.certified for v in verdicts)} double cosets unresolved at probe radius {probe}")
    windows = {
        "growth_window": settings.growth_window,
        "stable_window": settings.stable_window,
        "growth_threshold": settings.growth_threshold,
        "probe_radius": probe,
    }
    logger.info(f"{len(crossing)} of {len(reps)} double cosets counted for ({s.name}, {t.name}) at radius {r}")
    return CountReport(len(crossing), per_coset, r, exact, windows)


def intersection_number(
    s: Splitting,
    t: Splitting,
    r: int,
    probe_radius: Optional[int] = None,
    x_variant: Variant = Variant.X,
    y_variant: Variant = Variant.X,
    threads: Optional[int] = None,
) -> CountReport:
    """Number of double cosets KgH with g·X crossing Y."""
    return _count(s, t, r, crosses, probe_radius, x_variant, y_variant, threads)


def strong_intersection_number(
    s: Splitting,
    t: Splitting,
    r: int,
    probe_radius: Optional[int] = None,
    x_variant: Variant = Variant.X,
    y_variant: Variant = Variant.X,
    threads: Optional[int] = None,
) -> CountReport:
    """Number of double cosets KgH with g·X crossing Y strongly."""
    return _count(s, t, r, crosses_strongly, probe_radius, x_variant, y_variant, threads)


def two_sided_invariance_check(indicator: Indicator, sub: SubgroupSpec, r: int) -> Verdict:
    """Check Y·H = Y on the radius-r ball (Y is assumed left H-invariant)."""
    group = sub.group
    h_ball = [h for h in generator_ball(sub, r) if h]
    for _, y in enumerate_shortlex(group, r):
        if not indicator(y):
            continue
        for h in h_ball:
            moved = free_reduce(y + h)
            if not indicator(moved):
                return Verdict.false(r, f"{format_word(y)} · {format_word(h)}", "right multiplication leaves Y")
            back = free_reduce(y + invert_word(h))
            if not indicator(back):
                return Verdict.false(r, f"{format_word(y)} · {format_word(invert_word(h))}", "right multiplication leaves Y")
    return Verdict.true(r, reason=f"Y·h ⊆ Y for {len(h_ball)} nontrivial h on the ball")
