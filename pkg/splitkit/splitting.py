"""
Amalgam and HNN splittings, their normal forms and standard sets.

A splitting is built over its own alphabet (vertex-group generators plus,
for HNN extensions, the stable letter) and is tied to the ambient group G
by a pullback (ambient word -> splitting word) and a pushforward (the
inverse isomorphism). Conjugating a splitting or moving it by an
automorphism only changes these two maps.

Normal forms follow the usual conventions:
    amalgam  g = a1 b1 a2 ... an bn h   (ai in T_A, bi in T_B, h in H)
    HNN      g = a1 t^e1 a2 ... an t^en a(n+1)
with every transversal element a shortlex-least representative of its
left coset unless an explicit transversal is given. HNN extensions use
t⁻¹ α1(h) t = α2(h).
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Any, Hashable, Optional, Sequence

from .errors import MembershipError, SplittingError, WordError
from .presentation import (
    IDENTITY,
    Automorphism,
    GroupPresentation,
    Membership,
    Strategy,
    SubgroupSpec,
    Word,
    enumerate_shortlex,
    format_word,
    free_reduce,
    invert_word,
    inverse_symbol,
    base_name,
    substitute,
    word_power,
)
from .verdict import Verdict

logger = logging.getLogger(__name__)


class SplittingKind(str, Enum):
    AMALGAM = "amalgam"
    HNN = "hnn"


class Side(str, Enum):
    A = "A"
    B = "B"


class Variant(str, Enum):
    """The four standard sets attached to a splitting."""

    X = "X"
    X_UNION_H = "X+H"
    X_STAR = "X*"
    X_STAR_MINUS_H = "X*-H"

    @property
    def complement(self) -> "Variant":
        return {
            Variant.X: Variant.X_STAR,
            Variant.X_STAR: Variant.X,
            Variant.X_UNION_H: Variant.X_STAR_MINUS_H,
            Variant.X_STAR_MINUS_H: Variant.X_UNION_H,
        }[self]

    @property
    def starred(self) -> bool:
        return self in (Variant.X_STAR, Variant.X_STAR_MINUS_H)


# =============================================================================
# Edge embeddings
# =============================================================================

class EdgeEmbedding:
    """Inclusion of the abstract edge group H into a vertex group V.

    `decompose(v)` returns (rep, coords) with v = rep · image(coords), where
    rep is the transversal element of the left coset vH and coords is the
    canonical word for the H-part in the abstract edge generators.
    """

    def __init__(
        self,
        vertex: GroupPresentation,
        edge_generators: Sequence[str],
        images: Sequence[Word],
        label: str,
        transversal: Optional[Sequence[Word]] = None,
    ):
        if len(edge_generators) != len(images):
            raise SplittingError(f"{label}: {len(images)} images for {len(edge_generators)} edge generators")
        self.vertex = vertex
        self.label = label
        self.edge_generators = tuple(edge_generators)
        self.images = tuple(free_reduce(vertex.check_word(w)) for w in images)
        self.image_map = dict(zip(self.edge_generators, self.images))
        self.abstract_symbols = tuple(s for g in self.edge_generators for s in (g, f"{g}'"))
        nontrivial = [(g, w) for g, w in zip(self.edge_generators, self.images) if not vertex.is_identity(w)]

        if vertex.strategy is Strategy.FINITE_TABLE:
            self.mode = "finite"
            self._init_finite(transversal)
        elif not nontrivial:
            self.mode = "trivial"
            if transversal is not None:
                raise SplittingError(f"{label}: explicit transversals need a finite vertex group")
        elif vertex.strategy is Strategy.FREE and len(self.edge_generators) == 1:
            self.mode = "cyclic"
            if transversal is not None:
                raise SplittingError(f"{label}: explicit transversals need a finite vertex group")
            self.cyclic_generator = self.edge_generators[0]
            self.cyclic_image = self.images[0]
        else:
            raise SplittingError(
                f"{label}: unsupported edge group; free vertex groups need trivial or cyclic "
                f"edge groups and other infinite vertex groups need trivial ones"
            )

    # -- finite vertex groups -------------------------------------------------

    def _init_finite(self, transversal: Optional[Sequence[Word]]) -> None:
        solver = self.vertex.solver
        table = solver.table
        product = table.product
        image_index: dict[str, int] = {}
        for gen, image in zip(self.edge_generators, self.images):
            idx = solver.evaluate(image)
            image_index[gen] = idx
            image_index[f"{gen}'"] = table.inverse(idx)
        coords: dict[int, Word] = {table.identity: IDENTITY}
        queue = deque([table.identity])
        while queue:
            current = queue.popleft()
            for symbol in self.abstract_symbols:
                nxt = product[current][image_index[symbol]]
                if nxt not in coords:
                    coords[nxt] = coords[current] + (symbol,)
                    queue.append(nxt)
        self._image_index = image_index
        self._coords = coords
        members = frozenset(coords)
        self._members = members

        ordered = sorted(solver.labels, key=lambda i: self.vertex.shortlex_key(solver.labels[i]))
        coset_of: dict[int, frozenset] = {}
        for idx in ordered:
            coset_of[idx] = frozenset(product[idx][h] for h in members)
        cosets = set(coset_of.values())
        reps: dict[frozenset, int] = {}
        if transversal is None:
            for idx in ordered:
                reps.setdefault(coset_of[idx], idx)
        else:
            for word in transversal:
                idx = solver.evaluate(self.vertex.check_word(word))
                cos = coset_of[idx]
                if cos in reps:
                    raise SplittingError(
                        f"{self.label}: transversal has two representatives of one coset "
                        f"({format_word(solver.labels[reps[cos]])}, {format_word(word)})"
                    )
                reps[cos] = idx
            if table.identity not in reps.values():
                raise SplittingError(f"{self.label}: transversal must contain the identity")
            if set(reps) != cosets:
                raise SplittingError(f"{self.label}: transversal misses {len(cosets) - len(reps)} cosets")
        self._coset_of = coset_of
        self._reps = reps
        self._rep_words = {idx: self._word_for(idx, transversal) for idx in reps.values()}

    def _word_for(self, idx: int, transversal: Optional[Sequence[Word]]) -> Word:
        solver = self.vertex.solver
        if transversal is not None:
            for word in transversal:
                if solver.evaluate(word) == idx:
                    return free_reduce(word)
        return solver.labels[idx]

    # -- common interface -----------------------------------------------------

    def decompose(self, value: Word) -> tuple[Word, Word]:
        if self.mode == "trivial":
            return self.vertex.normal_word(value), IDENTITY
        if self.mode == "finite":
            solver = self.vertex.solver
            product = solver.table.product
            idx = solver.evaluate(value)
            rep_idx = self._reps[self._coset_of[idx]]
            h_idx = product[solver.table.inverse(rep_idx)][idx]
            rep = IDENTITY if rep_idx == solver.table.identity else self._rep_words[rep_idx]
            return rep, self._coords[h_idx]
        reduced = free_reduce(value)
        u = self.cyclic_image
        bound = 2 * (len(reduced) + len(u)) + 1
        best: Optional[Word] = None
        best_k = 0
        for k in range(-bound, bound + 1):
            candidate = free_reduce(reduced + word_power(u, k))
            if best is None or self.vertex.shortlex_key(candidate) < self.vertex.shortlex_key(best):
                best, best_k = candidate, k
        assert best is not None
        return best, word_power((self.cyclic_generator,), -best_k)

    def image(self, coords: Word) -> Word:
        if not coords:
            return IDENTITY
        return substitute(coords, self.image_map)

    def contains(self, value: Word) -> bool:
        if self.mode == "trivial":
            return self.vertex.is_identity(value)
        if self.mode == "finite":
            return self.vertex.solver.evaluate(value) in self._members
        return self.decompose(value)[0] == IDENTITY

    def coordinate_table(self) -> Optional[dict[Word, dict[str, Word]]]:
        """Cayley table of H in canonical coordinates; None when H is infinite."""
        if self.mode == "trivial":
            return {IDENTITY: {s: IDENTITY for s in self.abstract_symbols}}
        if self.mode == "finite":
            product = self.vertex.solver.table.product
            return {
                coords: {s: self._coords[product[h][self._image_index[s]]] for s in self.abstract_symbols}
                for h, coords in self._coords.items()
            }
        return None

    def index_is_one(self) -> bool:
        """True when H is the whole vertex group."""
        if self.mode == "trivial":
            return all(self.vertex.is_identity((g.name,)) for g in self.vertex.generators)
        if self.mode == "finite":
            return len(self._members) == len(self.vertex.solver.table.elements)
        if len(self.vertex.generators) != 1:
            return False
        return len(self.cyclic_image) == 1

    def transversal(self, radius: int) -> list[Word]:
        """Transversal elements of length <= radius (all of them when finite)."""
        if self.mode == "finite":
            identity = self.vertex.solver.table.identity
            reps = [IDENTITY if i == identity else w for i, w in self._rep_words.items()]
            return sorted(reps, key=self.vertex.shortlex_key)
        reps = []
        for _, label in enumerate_shortlex(self.vertex, radius):
            if self.decompose(label)[0] == label:
                reps.append(label)
        return reps


def _check_isomorphic(first: EdgeEmbedding, second: EdgeEmbedding, what: str) -> None:
    table_one, table_two = first.coordinate_table(), second.coordinate_table()
    if table_one is None and table_two is None:
        return
    if table_one != table_two:
        raise SplittingError(
            f"{what}: edge group images are not isomorphic "
            f"({first.label} has {len(table_one or {}) or 'infinitely many'} elements, "
            f"{second.label} has {len(table_two or {}) or 'infinitely many'})"
        )


# =============================================================================
# Normal forms
# =============================================================================

@dataclass(frozen=True)
class Syllable:
    side: Side
    rep: Word
    sign: int = 0


@dataclass(frozen=True)
class NormalForm:
    """The unique normal form of an element.

    Amalgams keep the syllables a1, b1, ... with trivial representatives
    omitted (a leading B syllable means a1 = 1) and the edge-group tail as
    both a vertex word and abstract coordinates. HNN extensions keep the
    pairs (ai, ei) and the final element of A.
    """

    kind: SplittingKind
    syllables: tuple[Syllable, ...]
    tail: Word
    tail_coords: Word = IDENTITY

    @property
    def key(self) -> Hashable:
        if self.kind is SplittingKind.AMALGAM:
            return self.syllables, self.tail_coords
        return self.syllables, self.tail

    def word(self, stable_letter: Optional[str] = None) -> Word:
        """Reassemble the element as a word in the splitting alphabet."""
        out: list[str] = []
        for syl in self.syllables:
            out.extend(syl.rep)
            if self.kind is SplittingKind.HNN:
                out.append(stable_letter if syl.sign > 0 else inverse_symbol(stable_letter))
        out.extend(self.tail)
        return free_reduce(tuple(out))

    def padded(self) -> list[tuple[str, Word]]:
        """Syllables in the a1, b1, ..., an, bn, h (or a1, e1, ..., a(n+1)) layout."""
        items: list[tuple[str, Word]] = []
        if self.kind is SplittingKind.AMALGAM:
            syllables = list(self.syllables)
            if syllables and syllables[0].side is Side.B:
                syllables.insert(0, Syllable(Side.A, IDENTITY))
            if syllables and syllables[-1].side is Side.A:
                syllables.append(Syllable(Side.B, IDENTITY))
            for i, syl in enumerate(syllables):
                index = i // 2 + 1
                items.append((f"{'a' if syl.side is Side.A else 'b'}{index}", syl.rep))
            items.append(("h", self.tail))
            return items
        for i, syl in enumerate(self.syllables, start=1):
            items.append((f"a{i}", syl.rep))
            items.append((f"e{i}", ("+1",) if syl.sign > 0 else ("-1",)))
        items.append((f"a{len(self.syllables) + 1}", self.tail))
        return items

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "syllables": [
                {"name": name, "value": " ".join(value) if name.startswith("e") else format_word(value)}
                for name, value in self.padded()
            ],
            "tail_coords": format_word(self.tail_coords),
        }


class SplittingCore:
    """A validated one-edge graph of groups over its own alphabet."""

    def __init__(
        self,
        kind: SplittingKind,
        vertices: dict[Side, GroupPresentation],
        edge_generators: Sequence[str],
        images: dict[str, Sequence[Word]],
        stable_letter: Optional[str] = None,
        transversals: Optional[dict[str, Sequence[Word]]] = None,
    ):
        self.kind = kind
        self.vertices = dict(vertices)
        self.edge_generators = tuple(edge_generators)
        self.stable_letter = stable_letter
        transversals = transversals or {}
        self.letter_side: dict[str, Side] = {}
        for side, group in self.vertices.items():
            for symbol in group.symbols:
                if symbol in self.letter_side:
                    raise SplittingError(f"Generator {base_name(symbol)} appears in two vertex groups")
                self.letter_side[symbol] = side
        if kind is SplittingKind.AMALGAM:
            if set(self.vertices) != {Side.A, Side.B}:
                raise SplittingError("An amalgam needs vertex groups A and B")
            if stable_letter is not None:
                raise SplittingError("Amalgams have no stable letter")
            self.embeddings = {
                side: EdgeEmbedding(
                    self.vertices[side], edge_generators, images[side.value], f"i_{side.value}",
                    transversals.get(side.value),
                )
                for side in (Side.A, Side.B)
            }
            _check_isomorphic(self.embeddings[Side.A], self.embeddings[Side.B], "amalgam")
            for side in (Side.A, Side.B):
                if self.embeddings[side].index_is_one():
                    raise SplittingError(
                        f"Degenerate splitting: edge group equals vertex group {side.value}"
                    )
        else:
            if set(self.vertices) != {Side.A}:
                raise SplittingError("An HNN extension needs exactly one vertex group A")
            if not stable_letter or "'" in stable_letter:
                raise SplittingError("An HNN extension needs a stable letter")
            if stable_letter in self.letter_side or f"{stable_letter}'" in self.letter_side:
                raise SplittingError(f"Stable letter {stable_letter} clashes with a vertex generator")
            vertex = self.vertices[Side.A]
            self.embeddings = {
                "alpha1": EdgeEmbedding(vertex, edge_generators, images["alpha1"], "alpha1", transversals.get("T1")),
                "alpha2": EdgeEmbedding(vertex, edge_generators, images["alpha2"], "alpha2", transversals.get("T2")),
            }
            _check_isomorphic(self.embeddings["alpha1"], self.embeddings["alpha2"], "HNN")
        self.alphabet: tuple[str, ...] = tuple(
            g.name for side in sorted(self.vertices) for g in self.vertices[side].generators
        ) + ((stable_letter,) if stable_letter else ())

    # -- normal forms ---------------------------------------------------------

    def _runs(self, word: Word) -> list[tuple[Side, Word]]:
        runs: list[tuple[Side, list[str]]] = []
        for letter in word:
            side = self.letter_side.get(letter)
            if side is None:
                raise WordError(f"Symbol {letter!r} is not in the splitting alphabet")
            if runs and runs[-1][0] is side:
                runs[-1][1].append(letter)
            else:
                runs.append((side, [letter]))
        return [(side, tuple(letters)) for side, letters in runs]

    def normal_form(self, word: Word) -> NormalForm:
        word = free_reduce(word)
        if self.kind is SplittingKind.AMALGAM:
            return self._amalgam_form(word)
        return self._hnn_form(word)

    def _amalgam_form(self, word: Word) -> NormalForm:
        stack: list[Syllable] = []
        carry: Word = IDENTITY
        for side, syllable in self._runs(word):
            emb = self.embeddings[side]
            if stack and stack[-1].side is side:
                top = stack.pop()
                value = top.rep + emb.image(carry) + syllable
            else:
                value = emb.image(carry) + syllable
            rep, carry = emb.decompose(value)
            if rep:
                stack.append(Syllable(side, rep))
        tail = self.vertices[Side.A].normal_word(self.embeddings[Side.A].image(carry))
        return NormalForm(SplittingKind.AMALGAM, tuple(stack), tail, carry)

    def _hnn_form(self, word: Word) -> NormalForm:
        t = self.stable_letter
        alpha1, alpha2 = self.embeddings["alpha1"], self.embeddings["alpha2"]
        stack: list[Syllable] = []
        carry: list[str] = []
        for letter in word:
            if letter == t or letter == f"{t}'":
                sign = 1 if letter == t else -1
                source, target = (alpha1, alpha2) if sign > 0 else (alpha2, alpha1)
                rep, coords = source.decompose(tuple(carry))
                if not rep and stack and stack[-1].sign == -sign:
                    previous = stack.pop()
                    carry = list(previous.rep + target.image(coords))
                else:
                    stack.append(Syllable(Side.A, rep, sign))
                    carry = list(target.image(coords))
            else:
                if self.letter_side.get(letter) is not Side.A:
                    raise WordError(f"Symbol {letter!r} is not in the splitting alphabet")
                carry.append(letter)
        tail = self.vertices[Side.A].normal_word(tuple(carry))
        return NormalForm(SplittingKind.HNN, tuple(stack), tail)

    # -- standard sets and cosets ---------------------------------------------

    def in_x(self, nf: NormalForm) -> bool:
        if not nf.syllables:
            return False
        first = nf.syllables[0]
        if self.kind is SplittingKind.AMALGAM:
            return first.side is Side.A
        return first.rep == IDENTITY and first.sign > 0

    def in_h(self, nf: NormalForm) -> bool:
        if nf.syllables:
            return False
        if self.kind is SplittingKind.AMALGAM:
            return True
        return self.embeddings["alpha1"].contains(nf.tail)

    def edge_key(self, nf: NormalForm) -> Hashable:
        """Key of the left coset gH, i.e. of the Bass-Serre edge g·e."""
        if self.kind is SplittingKind.AMALGAM:
            return nf.syllables
        return nf.syllables, self.embeddings["alpha1"].decompose(nf.tail)[0]

    def vertex_key(self, nf: NormalForm, side: Side) -> Hashable:
        """Key of the left coset gA (or gB), i.e. of the vertex g·v_side."""
        syllables = nf.syllables
        if self.kind is SplittingKind.AMALGAM:
            if syllables and syllables[-1].side is side:
                syllables = syllables[:-1]
            return side, syllables
        return Side.A, syllables

    def in_vertex(self, nf: NormalForm, side: Side) -> bool:
        if self.kind is SplittingKind.AMALGAM:
            return not nf.syllables or (len(nf.syllables) == 1 and nf.syllables[0].side is side)
        return not nf.syllables


class SplittingSolver:
    """Word problem of the group defined by a splitting core."""

    shortlex_normal = False

    def __init__(self, core: SplittingCore):
        self.core = core

    def key(self, word: Word) -> Hashable:
        return self.core.normal_form(word).key

    def normal_word(self, word: Word) -> Word:
        return self.core.normal_form(word).word(self.core.stable_letter)


def splitting_group(core: SplittingCore, name: str = "G") -> GroupPresentation:
    """The group presented by a splitting, with normal forms as its solver."""
    return GroupPresentation(core.alphabet, Strategy.SPLITTING, SplittingSolver(core), (), name)


# =============================================================================
# Splittings of an ambient group
# =============================================================================

class Splitting:
    """A splitting of an ambient group G.

    Attributes:
        core: The one-edge graph of groups over the splitting alphabet.
        ambient: The group G.
        to_core: Ambient generator -> splitting word (the pullback).
        from_core: Splitting generator -> ambient word (the pushforward).
    """

    def __init__(
        self,
        core: SplittingCore,
        ambient: GroupPresentation,
        to_core: dict[str, Word],
        from_core: dict[str, Word],
        name: str = "s",
    ):
        self.core = core
        self.ambient = ambient
        self.to_core = dict(to_core)
        self.from_core = dict(from_core)
        self.name = name
        self._nf_memo: dict[Word, NormalForm] = {}

    def __repr__(self) -> str:
        return f"Splitting({self.name!r}, {self.kind.value}, over {self.ambient.name})"

    @property
    def kind(self) -> SplittingKind:
        return self.core.kind

    def pullback(self, word: Word) -> Word:
        return substitute(self.ambient.check_word(word), self.to_core)

    def pushforward(self, word: Word) -> Word:
        return self.ambient.multiply(substitute(word, self.from_core))

    def normal_form(self, word: Word) -> NormalForm:
        reduced = free_reduce(word)
        cached = self._nf_memo.get(reduced)
        if cached is not None:
            return cached
        nf = self.core.normal_form(self.pullback(reduced))
        if len(self._nf_memo) > 200_000:
            self._nf_memo.clear()
        self._nf_memo[reduced] = nf
        return nf

    def in_x(self, word: Word) -> bool:
        return self.core.in_x(self.normal_form(word))

    def in_h(self, word: Word) -> bool:
        return self.core.in_h(self.normal_form(word))

    def standard_side(self, word: Word, variant: Variant = Variant.X) -> bool:
        nf = self.normal_form(word)
        inside_x = self.core.in_x(nf)
        if variant is Variant.X:
            return inside_x
        if variant is Variant.X_STAR:
            return not inside_x
        inside_h = self.core.in_h(nf)
        if variant is Variant.X_UNION_H:
            return inside_x or inside_h
        return not inside_x and not inside_h

    def edge_key(self, word: Word) -> Hashable:
        return self.core.edge_key(self.normal_form(word))

    def vertex_key(self, word: Word, side: Side = Side.A) -> Hashable:
        return self.core.vertex_key(self.normal_form(word), side)

    def in_vertex(self, word: Word, side: Side) -> bool:
        return self.core.in_vertex(self.normal_form(word), side)

    @property
    def stable_word(self) -> Word:
        """The stable letter as an ambient word (HNN only)."""
        if self.core.stable_letter is None:
            raise SplittingError("Amalgams have no stable letter")
        return self.pushforward((self.core.stable_letter,))

    def edge_generator_words(self) -> tuple[Word, ...]:
        """Generators of the edge group H as ambient words."""
        key = Side.A if self.kind is SplittingKind.AMALGAM else "alpha1"
        return tuple(
            w for w in (self.pushforward(img) for img in self.core.embeddings[key].images) if w
        )

    def vertex_generator_words(self, side: Side) -> tuple[Word, ...]:
        return tuple(self.pushforward((g.name,)) for g in self.core.vertices[side].generators)

    def edge_subgroup(self) -> SubgroupSpec:
        return SubgroupSpec(
            self.ambient, Membership.SPLITTING_EDGE, self.edge_generator_words(),
            SplittingEdgeOracle(self), f"H[{self.name}]",
        )

    def vertex_subgroup(self, side: Side) -> SubgroupSpec:
        return SubgroupSpec(
            self.ambient, Membership.SPLITTING_VERTEX, self.vertex_generator_words(side),
            SplittingVertexOracle(self, side), f"{side.value}[{self.name}]",
        )

    def precompose(self, psi: Automorphism, name: Optional[str] = None) -> "Splitting":
        """The splitting whose pullback is the old pullback after psi."""
        to_core = {g: substitute(psi.apply((g,)), self.to_core) for g in self.to_core}
        from_core = {c: self.ambient.multiply(psi.apply_inverse(w)) for c, w in self.from_core.items()}
        return Splitting(self.core, self.ambient, to_core, from_core, name or self.name)

    def same_as(self, other: "Splitting") -> bool:
        """Structurally identical (same core object and same maps)."""
        return (
            self.core is other.core
            and self.to_core == other.to_core
            and self.from_core == other.from_core
        )

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "edge_subgroup": [format_word(w) for w in self.edge_generator_words()],
            "alphabet": list(self.core.alphabet),
        }


class SplittingEdgeOracle:
    """Membership in H by the syllable criterion; cosets are tree edges."""

    def __init__(self, splitting: Splitting):
        self.splitting = splitting

    def contains(self, word: Word) -> bool:
        return self.splitting.in_h(word)

    def coset_key(self, word: Word) -> Hashable:
        return self.splitting.edge_key(invert_word(free_reduce(word)))

    def left_coset_key(self, word: Word) -> Hashable:
        return self.splitting.edge_key(word)

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None

    def canonical(self, word: Word) -> Optional[Word]:
        return None


class SplittingVertexOracle:
    def __init__(self, splitting: Splitting, side: Side):
        self.splitting = splitting
        self.side = side

    def contains(self, word: Word) -> bool:
        return self.splitting.in_vertex(word, self.side)

    def coset_key(self, word: Word) -> Hashable:
        return self.splitting.vertex_key(invert_word(free_reduce(word)), self.side)

    def left_coset_key(self, word: Word) -> Hashable:
        return self.splitting.vertex_key(word, self.side)

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None

    def canonical(self, word: Word) -> Optional[Word]:
        return None


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """A translate g·V of one of the four standard sets V of a splitting."""

    splitting: Splitting
    translator: Word = IDENTITY
    variant: Variant = Variant.X

    def contains(self, word: Word) -> bool:
        return half_space_membership(self, word)

    def complement(self) -> "HalfSpace":
        return HalfSpace(self.splitting, self.translator, self.variant.complement)

    def stabilizer(self) -> SubgroupSpec:
        return self.splitting.edge_subgroup().conjugate(self.translator)

    def label(self) -> str:
        return f"{format_word(self.translator)}·{self.variant.value}[{self.splitting.name}]"


# =============================================================================
# Construction and validation
# =============================================================================

def self_splitting(core: SplittingCore, name: str = "s", group_name: str = "G") -> Splitting:
    """A splitting of the group it defines, with identity maps."""
    group = splitting_group(core, group_name)
    identity = {g: (g,) for g in core.alphabet}
    return Splitting(core, group, identity, dict(identity), name)


def attach(
    core: SplittingCore,
    ambient: GroupPresentation,
    to_core: dict[str, Word],
    from_core: dict[str, Word],
    name: str = "s",
) -> Splitting:
    """Tie a core to an ambient group and verify the two maps are inverse isomorphisms.

    Raises:
        SplittingError: If the maps are incomplete or not mutually inverse.
    """
    missing = set(ambient.generator_names) - set(to_core)
    if missing:
        raise SplittingError(f"Pullback has no image for {sorted(missing)}")
    missing = set(core.alphabet) - set(from_core)
    if missing:
        raise SplittingError(f"Pushforward has no image for {sorted(missing)}")
    splitting = Splitting(core, ambient, to_core, from_core, name)
    for gen in ambient.generator_names:
        if not ambient.equals(splitting.pushforward(splitting.pullback((gen,))), (gen,)):
            raise SplittingError(f"Pushforward does not invert the pullback on {gen}")
    for gen in core.alphabet:
        round_trip = splitting.pullback(splitting.pushforward((gen,)))
        if core.normal_form(round_trip).key != core.normal_form((gen,)).key:
            raise SplittingError(f"Pullback does not invert the pushforward on {gen}")
    if core.kind is SplittingKind.AMALGAM:
        for img_a, img_b in zip(core.embeddings[Side.A].images, core.embeddings[Side.B].images):
            if not ambient.equals(splitting.pushforward(img_a), splitting.pushforward(img_b)):
                raise SplittingError("Pushforward does not respect the amalgamation")
    else:
        t = core.stable_letter
        for img_1, img_2 in zip(core.embeddings["alpha1"].images, core.embeddings["alpha2"].images):
            lhs = splitting.pushforward((f"{t}'",) + img_1 + (t,))
            if not ambient.equals(lhs, splitting.pushforward(img_2)):
                raise SplittingError("Pushforward does not respect t⁻¹ α1(h) t = α2(h)")
    return splitting


def validate_splitting(desc: Any) -> Splitting:
    """Build and validate a splitting from a description (file model or dict).

    Raises:
        SplittingError: Degenerate splitting, bad transversal, or
            non-isomorphic edge images.
    """
    from .loaders import build_splitting

    splitting = build_splitting(desc)
    logger.info(f"Validated {splitting.kind.value} splitting {splitting.name}")
    return splitting


def normal_form(s: Splitting, word: Word) -> NormalForm:
    return s.normal_form(word)


def standard_side(s: Splitting, word: Word, variant: Variant = Variant.X) -> bool:
    return s.standard_side(word, variant)


def half_space_membership(hs: HalfSpace, word: Word) -> bool:
    """w ∈ g·V  iff  g⁻¹·w ∈ V."""
    shifted = free_reduce(invert_word(hs.translator) + free_reduce(word))
    return hs.splitting.standard_side(shifted, hs.variant)


def conjugate_splitting(s: Splitting, g: Word) -> Splitting:
    """The splitting with membership(w) = membership(g⁻¹·w·g, s)."""
    g = free_reduce(s.ambient.check_word(g))
    if not g:
        return s
    psi = Automorphism.inner(s.ambient.generator_names, g)
    return s.precompose(psi, f"{s.name}^{format_word(g)}")


def _rows(s: Splitting, labels: Sequence[Word]) -> list[tuple[bool, ...]]:
    return [tuple(s.standard_side(label, variant) for variant in Variant) for label in labels]


def splittings_equivalent(s1: Splitting, s2: Splitting, r: int) -> Verdict:
    """Compare the four standard sets on the radius-r ball and the edge groups.

    The two families agree when some matching of the four sets of s1 with
    the four sets of s2 agrees on every ball element.

    Returns:
        CertifiedTrue when the families agree on the ball and the edge groups
        contain each other's generators; CertifiedFalse with the first
        distinguishing word otherwise.
    """
    if s1.ambient.generator_names != s2.ambient.generator_names:
        raise SplittingError("Splittings of different groups cannot be compared")
    labels = [label for _, label in enumerate_shortlex(s1.ambient, r)]
    try:
        rows1, rows2 = _rows(s1, labels), _rows(s2, labels)
        latest = -1
        for matching in permutations(range(len(Variant))):
            first = next(
                (i for i, (a, b) in enumerate(zip(rows1, rows2)) if any(a[j] != b[matching[j]] for j in range(len(a)))),
                None,
            )
            if first is None:
                break
            latest = max(latest, first)
        else:
            return Verdict.false(r, format_word(labels[latest]), "standard sets differ")
        for gen in s1.edge_generator_words():
            if not s2.in_h(gen):
                return Verdict.false(r, format_word(gen), "edge groups differ")
        for gen in s2.edge_generator_words():
            if not s1.in_h(gen):
                return Verdict.false(r, format_word(gen), "edge groups differ")
    except MembershipError as exc:
        return Verdict.unresolved(r, str(exc))
    return Verdict.true(r, reason="standard sets and edge groups agree")


def find_conjugator(s1: Splitting, s2: Splitting, r: int, search_radius: int) -> Optional[Word]:
    """Shortlex-least c within search_radius with s1^c equivalent to s2 on the r-ball."""
    for _, c in enumerate_shortlex(s1.ambient, search_radius):
        if splittings_equivalent(conjugate_splitting(s1, c), s2, r).is_true:
            return c
    return None
