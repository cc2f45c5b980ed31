"""
Shortlex rewriting systems for groups.

Words are encoded as strings with one character per symbol, ordered like
the presentation's symbols, so that string comparison is the letter order
and `str.replace` performs a rewrite.

Completion follows the usual Knuth-Bendix loop: orient every equation so it
decreases in shortlex order, inter-reduce the rules, then resolve critical
pairs until none remain or the iteration limit is hit.
"""

import logging
from typing import Hashable, Iterable, Optional, Sequence

from .config import settings
from .errors import ConfluenceError, WordError
from .presentation import (
    GroupPresentation,
    Strategy,
    Word,
    invert_word,
)

logger = logging.getLogger(__name__)

Rule = tuple[str, str]


def _shortlex_ordered(first: str, second: str) -> Rule:
    if (len(first), first) > (len(second), second):
        return first, second
    return second, first


class RewritingSystem:
    """A finite set of shortlex-decreasing rules over a symbol alphabet."""

    shortlex_normal = True

    def __init__(self, symbols: Sequence[str], rules: Iterable[tuple[Word, Word]]):
        self.symbols = tuple(symbols)
        self._encode = {s: chr(0x100 + i) for i, s in enumerate(self.symbols)}
        self._decode = {c: s for s, c in self._encode.items()}
        rule_set: set[Rule] = set()
        for lhs, rhs in rules:
            left, right = self.encode(lhs), self.encode(rhs)
            if left != right:
                rule_set.add(_shortlex_ordered(left, right))
        rule_set |= self._cancellation_rules()
        self.rules: list[Rule] = sorted(rule_set, key=lambda r: (len(r[0]), r[0]))

    def _cancellation_rules(self) -> set[Rule]:
        rules = set()
        for i in range(0, len(self.symbols), 2):
            a, b = self._encode[self.symbols[i]], self._encode[self.symbols[i + 1]]
            rules.add((a + b, ""))
            rules.add((b + a, ""))
        return rules

    def encode(self, word: Word) -> str:
        try:
            return "".join(self._encode[s] for s in word)
        except KeyError as exc:
            raise WordError(f"Unknown generator symbol {exc.args[0]!r}")

    def decode(self, text: str) -> Word:
        return tuple(self._decode[c] for c in text)

    def _reduce_text(self, text: str, rules: Optional[list[Rule]] = None) -> str:
        active = self.rules if rules is None else rules
        while True:
            before = text
            for left, right in active:
                if left in text:
                    text = text.replace(left, right)
            if text == before:
                return text

    def reduce(self, word: Word) -> Word:
        return self.decode(self._reduce_text(self.encode(word)))

    def key(self, word: Word) -> Hashable:
        return self._reduce_text(self.encode(word))

    def normal_word(self, word: Word) -> Word:
        return self.reduce(word)

    def critical_pairs(self, overlap_bound: int) -> list[Rule]:
        """Unresolved critical pairs among overlaps of length <= overlap_bound."""
        unresolved: list[Rule] = []
        for left1, right1 in self.rules:
            for left2, right2 in self.rules:
                # suffix of left1 overlapping a prefix of left2
                for k in range(1, min(len(left1), len(left2))):
                    if len(left1) + len(left2) - k > overlap_bound:
                        continue
                    if left1[-k:] != left2[:k]:
                        continue
                    first = self._reduce_text(right1 + left2[k:])
                    second = self._reduce_text(left1[:-k] + right2)
                    if first != second:
                        unresolved.append(_shortlex_ordered(first, second))
                # left2 strictly inside left1
                if len(left2) < len(left1) and len(left1) <= overlap_bound:
                    start = left1.find(left2)
                    while start != -1:
                        first = self._reduce_text(right1)
                        second = self._reduce_text(
                            left1[:start] + right2 + left1[start + len(left2):]
                        )
                        if first != second:
                            unresolved.append(_shortlex_ordered(first, second))
                        start = left1.find(left2, start + 1)
        return unresolved

    def check_confluence(self, overlap_bound: Optional[int] = None) -> None:
        """Raise ConfluenceError unless every bounded critical pair resolves."""
        bound = overlap_bound if overlap_bound is not None else settings.confluence_overlap_bound
        pairs = self.critical_pairs(bound)
        if pairs:
            left, right = pairs[0]
            raise ConfluenceError(
                f"Rewriting system is not confluent: "
                f"{' '.join(self.decode(left)) or '1'} vs {' '.join(self.decode(right)) or '1'}"
            )

    def _interreduce(self) -> None:
        rules = set(self.rules)
        changed = True
        while changed:
            changed = False
            for rule in sorted(rules, key=lambda r: (len(r[0]), r[0])):
                if rule not in rules:
                    continue
                left, right = rule
                others = [r for r in rules if r != rule]
                new_left = self._reduce_text(left, others)
                if new_left != left:
                    rules.discard(rule)
                    new_right = self._reduce_text(right, others)
                    if new_left != new_right:
                        rules.add(_shortlex_ordered(new_left, new_right))
                    changed = True
                    continue
                new_right = self._reduce_text(right, list(rules))
                if new_right != right:
                    rules.discard(rule)
                    rules.add((left, new_right))
                    changed = True
        self.rules = sorted(rules, key=lambda r: (len(r[0]), r[0]))

    @classmethod
    def complete(
        cls,
        symbols: Sequence[str],
        relators: Iterable[Word],
        iteration_limit: Optional[int] = None,
        overlap_bound: Optional[int] = None,
    ) -> "RewritingSystem":
        """Knuth-Bendix completion of the relators r = 1.

        Raises:
            ConfluenceError: If completion does not finish within the limit.
        """
        limit = iteration_limit if iteration_limit is not None else settings.completion_iteration_limit
        bound = overlap_bound if overlap_bound is not None else settings.confluence_overlap_bound
        system = cls(symbols, [(r, ()) for r in relators])
        for iteration in range(1, limit + 1):
            system._interreduce()
            pairs = system.critical_pairs(bound)
            if not pairs:
                logger.debug(f"Completion finished after {iteration} rounds with {len(system.rules)} rules")
                return system
            system.rules = sorted(set(system.rules) | set(pairs), key=lambda r: (len(r[0]), r[0]))
        raise ConfluenceError(f"Knuth-Bendix completion did not finish after {limit} rounds")


def rewriting_group(
    generators: Sequence[str],
    relators: Sequence[Word] = (),
    rules: Optional[Sequence[tuple[Word, Word]]] = None,
    name: str = "G",
) -> GroupPresentation:
    """A group whose word problem is solved by a confluent rewriting system.

    Explicit rules are checked for confluence; otherwise the relators are
    completed. Each relator must hold under the resulting rules.

    Raises:
        ConfluenceError: If the rules are not confluent up to the bound.
    """
    symbols = [s for g in generators for s in (g, f"{g}'")]
    if rules is not None:
        system = RewritingSystem(symbols, rules)
        system.check_confluence()
    else:
        system = RewritingSystem.complete(symbols, relators)
    for relator in relators:
        if system.reduce(relator) or system.reduce(invert_word(relator)):
            raise ConfluenceError(f"Relator {' '.join(relator)} does not reduce to the identity")
    logger.info(f"Rewriting system for {name} ready with {len(system.rules)} rules")
    return GroupPresentation(generators, Strategy.REWRITING, system, relators, name)
