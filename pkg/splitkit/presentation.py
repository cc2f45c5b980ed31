"""
Words, generators and word problems for the supported group classes.

A word is a tuple of symbols; a symbol is a generator name, with a trailing
apostrophe for its inverse ("a b' a" serializes the word a·b⁻¹·a). Every
group carries a solver that maps a word to a hashable key with
key(w1) == key(w2) exactly when w1 = w2 in the group.

Subgroups are SubgroupSpec values wrapping an oracle that answers
membership and produces coset keys for right cosets Hw and left cosets wH.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Iterator, Optional, Protocol, Sequence, Union

from .config import settings
from .errors import BudgetExceeded, MembershipError, PresentationError, WordError

logger = logging.getLogger(__name__)

Word = tuple[str, ...]
IDENTITY: Word = ()
IDENTITY_TOKEN = "1"


# =============================================================================
# Words
# =============================================================================

@dataclass(frozen=True)
class Generator:
    """A generator or its formal inverse."""

    name: str
    inverse: bool = False

    @property
    def symbol(self) -> str:
        return f"{self.name}'" if self.inverse else self.name

    def inverted(self) -> "Generator":
        return Generator(self.name, not self.inverse)

    @classmethod
    def from_symbol(cls, symbol: str) -> "Generator":
        if symbol.endswith("'"):
            return cls(symbol[:-1], True)
        return cls(symbol, False)


def inverse_symbol(symbol: str) -> str:
    return symbol[:-1] if symbol.endswith("'") else f"{symbol}'"


def base_name(symbol: str) -> str:
    return symbol[:-1] if symbol.endswith("'") else symbol


def parse_word(text: Union[str, Sequence[str]]) -> Word:
    """Parse "a b' a" (or an already split sequence) into a word.

    The empty string and the token "1" denote the identity.
    """
    tokens = text.split() if isinstance(text, str) else list(text)
    letters = []
    for token in tokens:
        if token == IDENTITY_TOKEN:
            continue
        if not token or token.strip("'") == "" or token.count("'") > 1 or (
            "'" in token and not token.endswith("'")
        ):
            raise WordError(f"Malformed symbol {token!r} in word {text!r}")
        letters.append(token)
    return tuple(letters)


def format_word(word: Word) -> str:
    return " ".join(word) if word else IDENTITY_TOKEN


def invert_word(word: Word) -> Word:
    return tuple(inverse_symbol(s) for s in reversed(word))


def free_reduce(word: Word, symbols: Optional[Iterable[str]] = None) -> Word:
    """Cancel adjacent letter-inverse pairs.

    Args:
        word: Word to reduce.
        symbols: Allowed symbols; when given, unknown symbols raise WordError.

    Returns:
        The freely reduced word.
    """
    allowed = set(symbols) if symbols is not None else None
    stack: list[str] = []
    for letter in word:
        if allowed is not None and letter not in allowed:
            raise WordError(f"Unknown generator symbol {letter!r}")
        if stack and stack[-1] == inverse_symbol(letter):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def word_power(word: Word, exponent: int) -> Word:
    if exponent >= 0:
        return word * exponent
    return invert_word(word) * (-exponent)


def substitute(word: Word, images: dict[str, Word]) -> Word:
    """Apply a generator substitution, inverting images for inverse letters."""
    out: list[str] = []
    for letter in word:
        image = images.get(base_name(letter))
        if image is None:
            raise WordError(f"No image for symbol {letter!r}")
        out.extend(invert_word(image) if letter.endswith("'") else image)
    return free_reduce(tuple(out))


# =============================================================================
# Word problem strategies
# =============================================================================

class Strategy(str, Enum):
    FREE = "free"
    FINITE_TABLE = "finite-table"
    REWRITING = "rewriting"
    SPLITTING = "splitting"


class WordProblem(Protocol):
    """Decides equality by mapping words to canonical keys."""

    shortlex_normal: bool

    def key(self, word: Word) -> Hashable: ...

    def normal_word(self, word: Word) -> Word: ...


class FreeSolver:
    shortlex_normal = True

    def key(self, word: Word) -> Hashable:
        return free_reduce(word)

    def normal_word(self, word: Word) -> Word:
        return free_reduce(word)


@dataclass(frozen=True)
class FiniteTable:
    """A complete multiplication table.

    Attributes:
        elements: Element names; index i names element i.
        identity: Index of the identity.
        product: product[i][j] is the index of element_i * element_j.
        generators: Generator name -> element index.
    """

    elements: tuple[str, ...]
    identity: int
    product: tuple[tuple[int, ...], ...]
    generators: dict[str, int] = field(hash=False)

    def inverse(self, index: int) -> int:
        for j, value in enumerate(self.product[index]):
            if value == self.identity:
                return j
        raise PresentationError(f"Element {self.elements[index]} has no inverse")


class FiniteSolver:
    """Word problem by table lookup; normal words are shortlex-least."""

    shortlex_normal = True

    def __init__(self, table: FiniteTable, symbols: Sequence[str]):
        self.table = table
        self._validate()
        self.letter_index: dict[str, int] = {}
        for name, index in table.generators.items():
            self.letter_index[name] = index
            self.letter_index[f"{name}'"] = table.inverse(index)
        self.labels = self._shortlex_labels(symbols)

    def _validate(self) -> None:
        table = self.table
        n = len(table.elements)
        if n == 0 or len(table.product) != n or any(len(row) != n for row in table.product):
            raise PresentationError("Multiplication table must be square and non-empty")
        if not 0 <= table.identity < n:
            raise PresentationError("Identity index out of range")
        for i in range(n):
            if table.product[table.identity][i] != i or table.product[i][table.identity] != i:
                raise PresentationError(f"{table.elements[i]} is not fixed by the identity")
            if any(not 0 <= v < n for v in table.product[i]):
                raise PresentationError("Table entry out of range")
            if sorted(table.product[i]) != list(range(n)):
                raise PresentationError(f"Row of {table.elements[i]} is not a permutation")
        p = table.product
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if p[p[i][j]][k] != p[i][p[j][k]]:
                        raise PresentationError(
                            f"Table is not associative at "
                            f"({table.elements[i]}, {table.elements[j]}, {table.elements[k]})"
                        )
        for name, index in table.generators.items():
            if not 0 <= index < n:
                raise PresentationError(f"Generator {name} maps outside the table")

    def _shortlex_labels(self, symbols: Sequence[str]) -> dict[int, Word]:
        labels: dict[int, Word] = {self.table.identity: IDENTITY}
        queue = deque([self.table.identity])
        while queue:
            current = queue.popleft()
            for symbol in symbols:
                nxt = self.table.product[current][self.letter_index[symbol]]
                if nxt not in labels:
                    labels[nxt] = labels[current] + (symbol,)
                    queue.append(nxt)
        if len(labels) != len(self.table.elements):
            raise PresentationError("Generators do not generate the whole table")
        return labels

    def evaluate(self, word: Word) -> int:
        current = self.table.identity
        for letter in word:
            try:
                current = self.table.product[current][self.letter_index[letter]]
            except KeyError:
                raise WordError(f"Unknown generator symbol {letter!r}")
        return current

    def key(self, word: Word) -> Hashable:
        return self.evaluate(word)

    def normal_word(self, word: Word) -> Word:
        return self.labels[self.evaluate(word)]


# =============================================================================
# Group presentations
# =============================================================================

class GroupPresentation:
    """A finitely generated group with a decidable word problem.

    Instances are immutable after construction apart from the key memo,
    which tolerates concurrent writers (last write wins on equal keys).
    """

    def __init__(
        self,
        generators: Sequence[str],
        strategy: Strategy,
        solver: WordProblem,
        relators: Sequence[Word] = (),
        name: str = "G",
    ):
        names = list(generators)
        if len(set(names)) != len(names):
            raise PresentationError(f"Duplicate generator names in {names}")
        for gen in names:
            if not gen or "'" in gen or " " in gen or gen == IDENTITY_TOKEN:
                raise PresentationError(f"Invalid generator name {gen!r}")
        self.name = name
        self.generators: tuple[Generator, ...] = tuple(Generator(n) for n in names)
        self.strategy = strategy
        self.solver = solver
        self.relators: tuple[Word, ...] = tuple(relators)
        self.symbols: tuple[str, ...] = tuple(
            s for n in names for s in (n, f"{n}'")
        )
        self.rank: dict[str, int] = {s: i for i, s in enumerate(self.symbols)}
        self.subgroups: dict[str, "SubgroupSpec"] = {}
        self._key_memo: dict[Word, Hashable] = {}

    def __repr__(self) -> str:
        return f"GroupPresentation({self.name!r}, {list(self.generator_names)}, {self.strategy.value})"

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def check_word(self, word: Word) -> Word:
        for letter in word:
            if letter not in self.rank:
                raise WordError(f"Unknown generator symbol {letter!r} for group {self.name}")
        return word

    def parse(self, text: Union[str, Sequence[str]]) -> Word:
        return self.check_word(parse_word(text))

    def key(self, word: Word) -> Hashable:
        reduced = free_reduce(self.check_word(word))
        cached = self._key_memo.get(reduced)
        if cached is not None:
            return cached
        value = self.solver.key(reduced)
        if len(self._key_memo) > 500_000:
            self._key_memo.clear()
        self._key_memo[reduced] = value
        return value

    def equals(self, first: Word, second: Word) -> bool:
        return self.key(first) == self.key(second)

    def is_identity(self, word: Word) -> bool:
        return self.key(word) == self.key(IDENTITY)

    def normal_word(self, word: Word) -> Word:
        return self.solver.normal_word(free_reduce(self.check_word(word)))

    def multiply(self, *words: Word) -> Word:
        out: list[str] = []
        for w in words:
            out.extend(w)
        return free_reduce(tuple(out))

    def shortlex_key(self, word: Word) -> tuple[int, tuple[int, ...]]:
        return (len(word), tuple(self.rank[s] for s in word))

    def add_subgroup(self, name: str, spec: "SubgroupSpec") -> None:
        self.subgroups[name] = spec


def free_group(generators: Sequence[str], name: str = "F") -> GroupPresentation:
    return GroupPresentation(generators, Strategy.FREE, FreeSolver(), (), name)


def finite_group(generators: Sequence[str], table: FiniteTable, name: str = "G") -> GroupPresentation:
    symbols = [s for g in generators for s in (g, f"{g}'")]
    missing = set(generators) - set(table.generators)
    if missing:
        raise PresentationError(f"Table has no element for generators {sorted(missing)}")
    return GroupPresentation(generators, Strategy.FINITE_TABLE, FiniteSolver(table, symbols), (), name)


def cyclic_table(order: int, generator: str) -> FiniteTable:
    """Multiplication table of Z/order with the given generator mapped to 1."""
    if order < 1:
        raise PresentationError("Cyclic group order must be positive")
    elements = tuple("1" if i == 0 else f"{generator}^{i}" for i in range(order))
    product = tuple(tuple((i + j) % order for j in range(order)) for i in range(order))
    return FiniteTable(elements, 0, product, {generator: 1 % order})


def word_equals(group: GroupPresentation, first: Word, second: Word) -> bool:
    """True iff the two words represent the same element of the group."""
    return group.equals(first, second)


def enumerate_shortlex(group: GroupPresentation, radius: int) -> Iterator[tuple[Hashable, Word]]:
    """Yield (key, shortlex-least word) for every element of length <= radius.

    Elements come out in shortlex order of their labels.
    """
    if radius < 0:
        return
    cap = settings.max_vertices
    seen = {group.key(IDENTITY)}
    layer: list[Word] = [IDENTITY]
    yield group.key(IDENTITY), IDENTITY
    for _ in range(radius):
        nxt: list[Word] = []
        for label in layer:
            for symbol in group.symbols:
                if label and label[-1] == inverse_symbol(symbol):
                    continue
                candidate = label + (symbol,)
                key = group.key(candidate)
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > cap:
                    raise BudgetExceeded(f"Ball enumeration exceeded {cap} vertices")
                nxt.append(candidate)
                yield key, candidate
        layer = nxt
        if not layer:
            break


def shortlex_form(group: GroupPresentation, word: Word) -> Word:
    """Shortlex-least word representing the same element as `word`."""
    if group.solver.shortlex_normal:
        return group.normal_word(word)
    target = group.key(word)
    for key, label in enumerate_shortlex(group, len(group.normal_word(word))):
        if key == target:
            return label
    raise PresentationError(f"No shortlex form found for {format_word(word)}")


# =============================================================================
# Automorphisms
# =============================================================================

@dataclass(frozen=True, eq=False)
class Automorphism:
    """An automorphism given by generator images and inverse images."""

    images: dict[str, Word]
    inverse_images: dict[str, Word]

    @classmethod
    def identity(cls, generators: Sequence[str]) -> "Automorphism":
        images = {g: (g,) for g in generators}
        return cls(images, dict(images))

    @classmethod
    def inner(cls, generators: Sequence[str], conjugator: Word) -> "Automorphism":
        """w -> c⁻¹ w c, with inverse w -> c w c⁻¹."""
        inv = invert_word(conjugator)
        forward = {g: free_reduce(inv + (g,) + conjugator) for g in generators}
        backward = {g: free_reduce(conjugator + (g,) + inv) for g in generators}
        return cls(forward, backward)

    def apply(self, word: Word) -> Word:
        return substitute(word, self.images)

    def apply_inverse(self, word: Word) -> Word:
        return substitute(word, self.inverse_images)

    def then(self, other: "Automorphism") -> "Automorphism":
        """The automorphism w -> other(self(w))."""
        forward = {g: other.apply(img) for g, img in self.images.items()}
        backward = {g: self.apply_inverse(img) for g, img in other.inverse_images.items()}
        return Automorphism(forward, backward)

    def inverse(self) -> "Automorphism":
        return Automorphism(dict(self.inverse_images), dict(self.images))


# =============================================================================
# Subgroups
# =============================================================================

class Membership(str, Enum):
    TRIVIAL = "trivial"
    WHOLE = "whole"
    CYCLIC = "cyclic-powers"
    FINITE = "finite-enumeration"
    FOLDED = "folded"
    SPLITTING_EDGE = "syllable-criterion-from-splitting"
    SPLITTING_VERTEX = "splitting-vertex"
    CONJUGATE = "conjugate"
    INTERSECTION = "intersection"


class SubgroupOracle(Protocol):
    """Membership and coset canonicalization for one subgroup H."""

    def contains(self, word: Word) -> bool: ...

    def coset_key(self, word: Word) -> Hashable:
        """Key of the right coset Hw."""
        ...

    def left_coset_key(self, word: Word) -> Hashable:
        """Key of the left coset wH."""
        ...

    def ball(self, radius: int) -> Optional[list[Word]]:
        """Elements of H of length <= radius, or None to filter the group ball."""
        ...

    def canonical(self, word: Word) -> Optional[Word]:
        """Shortlex-least word of Hw when cheaply available, else None."""
        ...


@dataclass(frozen=True, eq=False)
class SubgroupSpec:
    """A subgroup of `group` together with its membership oracle."""

    group: GroupPresentation
    membership: Membership
    generators: tuple[Word, ...]
    oracle: SubgroupOracle
    name: str = "H"

    def contains(self, word: Word) -> bool:
        return self.oracle.contains(word)

    def coset_key(self, word: Word) -> Hashable:
        return self.oracle.coset_key(word)

    def left_coset_key(self, word: Word) -> Hashable:
        return self.oracle.left_coset_key(word)

    def conjugate(self, conjugator: Word, name: Optional[str] = None) -> "SubgroupSpec":
        """The subgroup c·H·c⁻¹."""
        if not conjugator:
            return self
        label = name or f"{format_word(conjugator)}·{self.name}·{format_word(invert_word(conjugator))}"
        gens = tuple(
            free_reduce(conjugator + g + invert_word(conjugator)) for g in self.generators
        )
        return SubgroupSpec(
            self.group, Membership.CONJUGATE, gens, ConjugateOracle(self, conjugator), label
        )

    def describe(self) -> str:
        gens = ", ".join(format_word(g) for g in self.generators)
        return f"{self.name} = <{gens}> [{self.membership.value}]"


class TrivialOracle:
    def __init__(self, group: GroupPresentation):
        self.group = group

    def contains(self, word: Word) -> bool:
        return self.group.is_identity(word)

    def coset_key(self, word: Word) -> Hashable:
        return self.group.key(word)

    def left_coset_key(self, word: Word) -> Hashable:
        return self.group.key(word)

    def ball(self, radius: int) -> Optional[list[Word]]:
        return [IDENTITY]

    def canonical(self, word: Word) -> Optional[Word]:
        if self.group.solver.shortlex_normal:
            return self.group.normal_word(word)
        return None


class WholeOracle:
    def __init__(self, group: GroupPresentation):
        self.group = group

    def contains(self, word: Word) -> bool:
        self.group.check_word(word)
        return True

    def coset_key(self, word: Word) -> Hashable:
        return 0

    def left_coset_key(self, word: Word) -> Hashable:
        return 0

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None

    def canonical(self, word: Word) -> Optional[Word]:
        return IDENTITY


class FiniteEnumerationOracle:
    """A finite subgroup listed element by element.

    Coset keys are the frozensets of element keys in the coset, so they are
    exact in any group with a solver.
    """

    def __init__(self, group: GroupPresentation, generators: Sequence[Word], limit: int = 10_000):
        self.group = group
        elements: dict[Hashable, Word] = {group.key(IDENTITY): IDENTITY}
        queue = deque([IDENTITY])
        steps = [g for g in generators] + [invert_word(g) for g in generators]
        while queue:
            current = queue.popleft()
            for step in steps:
                candidate = group.multiply(current, step)
                key = group.key(candidate)
                if key not in elements:
                    if len(elements) >= limit:
                        raise MembershipError(
                            f"Subgroup generated by {[format_word(g) for g in generators]} "
                            f"has more than {limit} elements"
                        )
                    elements[key] = candidate
                    queue.append(candidate)
        self.elements: tuple[Word, ...] = tuple(elements.values())
        self.keys = frozenset(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, word: Word) -> bool:
        return self.group.key(word) in self.keys

    def coset_key(self, word: Word) -> Hashable:
        return frozenset(self.group.key(h + word) for h in self.elements)

    def left_coset_key(self, word: Word) -> Hashable:
        return frozenset(self.group.key(word + h) for h in self.elements)

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None

    def canonical(self, word: Word) -> Optional[Word]:
        return None


class CyclicPowersOracle:
    """Infinite cyclic subgroup <u> in a group that is not free.

    Membership searches powers u^k with |k| bounded by the word length plus
    a configured slack; this is exact when |u^k| grows at least linearly,
    which holds for every infinite cyclic subgroup used in the suite.
    """

    def __init__(self, group: GroupPresentation, generator: Word):
        self.group = group
        self.generator = free_reduce(generator)
        self.inverse = invert_word(self.generator)

    def _bound(self, word: Word) -> int:
        return len(word) + settings.power_search_slack

    def _powers(self, bound: int) -> Iterator[tuple[int, Word]]:
        yield 0, IDENTITY
        for k in range(1, bound + 1):
            yield k, word_power(self.generator, k)
            yield -k, word_power(self.generator, -k)

    def contains(self, word: Word) -> bool:
        target = self.group.key(word)
        return any(self.group.key(p) == target for _, p in self._powers(self._bound(word)))

    def _best(self, words: Iterable[Word]) -> Word:
        best: Optional[Word] = None
        best_rank = None
        for w in words:
            normal = shortlex_form(self.group, w)
            rank = self.group.shortlex_key(normal)
            if best_rank is None or rank < best_rank:
                best, best_rank = normal, rank
        assert best is not None
        return best

    def canonical(self, word: Word) -> Optional[Word]:
        return self._best(p + word for _, p in self._powers(self._bound(word)))

    def coset_key(self, word: Word) -> Hashable:
        return self.group.key(self.canonical(word))

    def left_coset_key(self, word: Word) -> Hashable:
        return self.group.key(self._best(word + p for _, p in self._powers(self._bound(word))))

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None


class ConjugateOracle:
    """Oracle for c·H·c⁻¹ built on an oracle for H."""

    def __init__(self, base: SubgroupSpec, conjugator: Word):
        self.base = base
        self.conjugator = conjugator
        self.inverse = invert_word(conjugator)

    def contains(self, word: Word) -> bool:
        return self.base.contains(free_reduce(self.inverse + word + self.conjugator))

    def coset_key(self, word: Word) -> Hashable:
        return self.base.coset_key(free_reduce(self.inverse + word))

    def left_coset_key(self, word: Word) -> Hashable:
        return self.base.left_coset_key(free_reduce(word + self.conjugator))

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None

    def canonical(self, word: Word) -> Optional[Word]:
        return None


class IntersectionOracle:
    """Oracle for H1 ∩ ... ∩ Hn; cosets are keyed by the tuple of factor cosets."""

    def __init__(self, parts: Sequence[SubgroupSpec]):
        if not parts:
            raise MembershipError("Intersection of no subgroups")
        self.parts = tuple(parts)

    def contains(self, word: Word) -> bool:
        return all(p.contains(word) for p in self.parts)

    def coset_key(self, word: Word) -> Hashable:
        return tuple(p.coset_key(word) for p in self.parts)

    def left_coset_key(self, word: Word) -> Hashable:
        return tuple(p.left_coset_key(word) for p in self.parts)

    def ball(self, radius: int) -> Optional[list[Word]]:
        return None

    def canonical(self, word: Word) -> Optional[Word]:
        return None


def trivial_subgroup(group: GroupPresentation, name: str = "1") -> SubgroupSpec:
    return SubgroupSpec(group, Membership.TRIVIAL, (), TrivialOracle(group), name)


def whole_group(group: GroupPresentation, name: Optional[str] = None) -> SubgroupSpec:
    gens = tuple((g.name,) for g in group.generators)
    return SubgroupSpec(group, Membership.WHOLE, gens, WholeOracle(group), name or group.name)


def intersection(parts: Sequence[SubgroupSpec], name: Optional[str] = None) -> SubgroupSpec:
    if len(parts) == 1:
        return parts[0]
    label = name or " ∩ ".join(p.name for p in parts)
    return SubgroupSpec(parts[0].group, Membership.INTERSECTION, (), IntersectionOracle(parts), label)


def subgroup(group: GroupPresentation, generators: Sequence[Word], name: str = "H") -> SubgroupSpec:
    """Build a SubgroupSpec, choosing the oracle from the group's strategy.

    Raises:
        MembershipError: If no supported membership class applies.
    """
    from .folding import FoldedOracle

    gens = tuple(free_reduce(group.check_word(g)) for g in generators)
    gens = tuple(g for g in gens if not group.is_identity(g))
    if not gens:
        return trivial_subgroup(group, name)
    if group.strategy is Strategy.FREE:
        kind = Membership.CYCLIC if len(gens) == 1 else Membership.FOLDED
        return SubgroupSpec(group, kind, gens, FoldedOracle(group, gens), name)
    if group.strategy is Strategy.FINITE_TABLE:
        return SubgroupSpec(group, Membership.FINITE, gens, FiniteEnumerationOracle(group, gens), name)
    if len(gens) == 1:
        order = element_order(group, gens[0])
        if order is not None:
            return SubgroupSpec(group, Membership.FINITE, gens, FiniteEnumerationOracle(group, gens), name)
        return SubgroupSpec(group, Membership.CYCLIC, gens, CyclicPowersOracle(group, gens[0]), name)
    try:
        oracle = FiniteEnumerationOracle(group, gens)
    except MembershipError:
        raise MembershipError(
            f"No membership oracle for a {len(gens)}-generator infinite subgroup "
            f"of a {group.strategy.value} group"
        )
    return SubgroupSpec(group, Membership.FINITE, gens, oracle, name)


def element_order(group: GroupPresentation, word: Word, limit: int = 64) -> Optional[int]:
    """Order of the element if it is at most `limit`, else None."""
    current = word
    for k in range(1, limit + 1):
        if group.is_identity(current):
            return k
        current = group.multiply(current, word)
    return None


def coset_canonical(group: GroupPresentation, sub: SubgroupSpec, word: Word) -> Word:
    """Shortlex-least word w' with H·w' = H·w.

    Raises:
        MembershipError: If the subgroup belongs to a different group.
    """
    if sub.group is not group:
        raise MembershipError(f"Subgroup {sub.name} is not a subgroup of {group.name}")
    word = free_reduce(group.check_word(word))
    fast = sub.oracle.canonical(word)
    if fast is not None:
        return fast
    target = sub.coset_key(word)
    for _, label in enumerate_shortlex(group, len(group.normal_word(word))):
        if sub.coset_key(label) == target:
            return label
    raise MembershipError(f"Coset of {format_word(word)} not found within its own length")


def subgroup_ball(group: GroupPresentation, sub: SubgroupSpec, radius: int) -> list[Word]:
    """Elements of H having a representative of length <= radius, in shortlex order."""
    if radius < 0:
        return []
    direct = sub.oracle.ball(radius)
    if direct is not None:
        return sorted(direct, key=group.shortlex_key)
    return [label for _, label in enumerate_shortlex(group, radius) if sub.contains(label)]


def generator_ball(sub: SubgroupSpec, radius: int) -> list[Word]:
    """Elements of H of length <= radius reachable as products of generators.

    Uses the oracle's own ball when it has one; otherwise multiplies out at
    most `radius` generators, which finds every short element of the cyclic
    and finite subgroups the suite uses.
    """
    group = sub.group
    direct = sub.oracle.ball(radius)
    if direct is not None:
        return sorted(direct, key=group.shortlex_key)
    if sub.membership is Membership.TRIVIAL:
        return [IDENTITY]
    if not sub.generators:
        return subgroup_ball(group, sub, radius)
    steps = [g for gen in sub.generators for g in (gen, invert_word(gen))]
    found: dict[Hashable, Word] = {group.key(IDENTITY): IDENTITY}
    layer = [IDENTITY]
    for _ in range(radius):
        nxt = []
        for word in layer:
            for step in steps:
                candidate = group.multiply(word, step)
                key = group.key(candidate)
                if key in found:
                    continue
                found[key] = candidate
                nxt.append(candidate)
        layer = nxt
        if not layer:
            break
    short = []
    for word in found.values():
        normal = group.normal_word(word)
        best = normal if len(normal) <= len(word) else word
        if len(best) <= radius:
            short.append(best)
    return sorted(short, key=group.shortlex_key)
