"""
Slope splittings of the free group F(x, y) (the punctured torus) and a
naive crossing counter used as independent ground truth.

A slope (p, q) names the simple closed curve whose primitive word has
exponent sum p in y and q in x; (0, 1) is the curve x and (1, 0) the curve y.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Hashable, Optional

from .config import settings
from .errors import SplittingError
from .presentation import (
    IDENTITY,
    Automorphism,
    GroupPresentation,
    Word,
    format_word,
    free_group,
    free_reduce,
    invert_word,
    word_power,
)
from .splitting import Side, Splitting, SplittingCore, SplittingKind, attach

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Slope:
    """A coprime pair (p, q), normalized so that q > 0, or q = 0 and p = 1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if (self.p, self.q) == (0, 0):
            raise SplittingError("Slope 0/0 is not a curve")
        if gcd(self.p, self.q) != 1:
            raise SplittingError(f"Slope {self.p}/{self.q} is not primitive")
        if self.q < 0 or (self.q == 0 and self.p < 0):
            object.__setattr__(self, "p", -self.p)
            object.__setattr__(self, "q", -self.q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        """Read "p/q"."""
        try:
            p, q = text.split("/")
            return cls(int(p), int(q))
        except ValueError:
            raise SplittingError(f"Malformed slope {text!r}; expected p/q")

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@lru_cache(maxsize=1)
def torus_group() -> GroupPresentation:
    """π₁ of the punctured torus, F(x, y)."""
    return free_group(["x", "y"], "F2")


def slope_intersection(a: Slope, b: Slope) -> int:
    return abs(a.p * b.q - a.q * b.p)


# =============================================================================
# Automorphisms
# =============================================================================

def _transvection(target: str, other: str, power: int) -> Automorphism:
    """other -> target^power · other, target fixed."""
    forward = {target: (target,), other: free_reduce(word_power((target,), power) + (other,))}
    backward = {target: (target,), other: free_reduce(word_power((target,), -power) + (other,))}
    return Automorphism(forward, backward)


def _carry_x(a: int, b: int) -> Automorphism:
    """An automorphism sending x to a primitive word with exponent sums (a in x, b in y)."""
    if b == 0:
        images = {"x": word_power(("x",), a), "y": ("y",)}
        return Automorphism(images, dict(images))
    if a == 0:
        forward = {"x": word_power(("y",), b), "y": ("x",)}
        backward = {"x": ("y",), "y": word_power(("x",), b)}
        return Automorphism(forward, backward)
    if abs(a) >= abs(b):
        k, rest = divmod(a, b)
        return _carry_x(rest, b).then(_transvection("x", "y", k))
    k, rest = divmod(b, a)
    return _carry_x(a, rest).then(_transvection("y", "x", k))


def slope_automorphism(sl: Slope) -> Automorphism:
    """Carries the curve of slope 0/1 (the word x) to the curve of slope sl."""
    return _carry_x(sl.q, sl.p)


def primitive_word(sl: Slope) -> Word:
    return slope_automorphism(sl).apply(("x",))


# =============================================================================
# Splittings
# =============================================================================

@lru_cache(maxsize=1)
def _base_core() -> SplittingCore:
    vertex = free_group(["u", "v"], "A")
    return SplittingCore(
        SplittingKind.HNN,
        {Side.A: vertex},
        ("h",),
        {"alpha1": [("u",)], "alpha2": [("v",)]},
        stable_letter="s",
    )


def base_splitting() -> Splitting:
    """F(x, y) = F(u, v)*_⟨h⟩ with h -> u, h -> v and stable letter y."""
    return attach(
        _base_core(),
        torus_group(),
        to_core={"x": ("u",), "y": ("s",)},
        from_core={"u": ("x",), "v": ("y'", "x", "y"), "s": ("y",)},
        name="slope(0/1)",
    )


def slope_splitting(sl: Slope) -> Splitting:
    """The HNN splitting of F(x, y) over the cyclic group of the slope's primitive word."""
    base = base_splitting()
    if (sl.p, sl.q) == (0, 1):
        return base
    splitting = base.precompose(slope_automorphism(sl).inverse(), f"slope({sl})")
    logger.debug(f"Slope {sl} splits over ⟨{format_word(splitting.edge_generator_words()[0])}⟩")
    return splitting


def arc_splitting() -> Splitting:
    """F(x, y) = ⟨y⟩*_1 with stable letter x: the arc dual to the curve x."""
    core = SplittingCore(
        SplittingKind.HNN,
        {Side.A: free_group(["c"], "C")},
        (),
        {"alpha1": [], "alpha2": []},
        stable_letter="t",
    )
    return attach(core, torus_group(), {"x": ("t",), "y": ("c",)}, {"t": ("x",), "c": ("y",)}, name="arc")


# =============================================================================
# Brute-force crossing count
# =============================================================================

def _spheres(group: GroupPresentation, radius: int) -> list[list[Word]]:
    seen = {group.key(IDENTITY)}
    spheres = [[IDENTITY]]
    steps = [(s,) for s in group.symbols]
    for _ in range(radius):
        layer = []
        for word in spheres[-1]:
            for step in steps:
                candidate = free_reduce(word + step)
                key = group.key(candidate)
                if key not in seen:
                    seen.add(key)
                    layer.append(candidate)
        spheres.append(layer)
    return spheres


def _products(group: GroupPresentation, generators: tuple[Word, ...], length: int) -> list[Word]:
    found = {group.key(IDENTITY): IDENTITY}
    layer = [IDENTITY]
    for _ in range(length):
        nxt = []
        for word in layer:
            for gen in generators:
                for step in (gen, invert_word(gen)):
                    candidate = free_reduce(word + step)
                    key = group.key(candidate)
                    if key not in found:
                        found[key] = candidate
                        nxt.append(candidate)
        layer = nxt
    return list(found.values())


def brute_force_crossing_count(
    s: Splitting, t: Splitting, r: int, rep_radius: Optional[int] = None, threshold: Optional[int] = None
) -> int:
    """Count double cosets K·g·H whose translate g·X crosses Y, by exhaustion.

    X is the standard set of s (stabilizer H), Y that of t (stabilizer K).
    g·X crosses Y when each of the four quadrants, projected to K-cosets,
    has at least `threshold` cosets at radius r and grew at both of the last
    two radius increments. Candidates g are taken from the rep_radius ball
    and sorted into double cosets by testing k·g'·h = g directly.
    """
    group = s.ambient
    threshold = settings.growth_threshold if threshold is None else threshold
    rep_radius = max(1, r // 2) if rep_radius is None else rep_radius
    spheres = _spheres(group, r)
    words = [w for sphere in spheres for w in sphere]
    lengths = [n for n, sphere in enumerate(spheres) for _ in sphere]
    y_side = [t.in_x(w) for w in words]
    k_sub = t.edge_subgroup()
    k_coset = [k_sub.coset_key(w) for w in words]

    def crosses(g: Word) -> bool:
        inverse = invert_word(g)
        projections: dict[tuple[bool, bool], list[set[Hashable]]] = {
            (a, b): [set() for _ in range(r + 1)] for a in (False, True) for b in (False, True)
        }
        for w, n, in_y, coset in zip(words, lengths, y_side, k_coset):
            in_gx = s.in_x(free_reduce(inverse + w))
            projections[(in_gx, in_y)][n].add(coset)
        for by_length in projections.values():
            sizes = []
            seen: set[Hashable] = set()
            for layer in by_length:
                seen |= layer
                sizes.append(len(seen))
            if r < 2 or sizes[r] < threshold or not sizes[r - 2] < sizes[r - 1] < sizes[r]:
                return False
        return True

    h_words = _products(group, s.edge_generator_words(), r)
    k_words = _products(group, k_sub.generators, r)
    reps: list[Word] = []
    for sphere in spheres[: rep_radius + 1]:
        for g in sphere:
            if not crosses(g):
                continue
            target = group.key(g)
            if any(group.key(k + rep + h) == target for rep in reps for k in k_words for h in h_words):
                continue
            reps.append(g)
    logger.info(f"Brute force: {len(reps)} crossing double cosets of {s.name}, {t.name} at radius {r}")
    return len(reps)
