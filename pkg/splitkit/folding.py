"""Folded (Stallings) graphs for finitely generated subgroups of free groups."""

import logging
from collections import deque
from typing import Hashable, Optional, Sequence

from .errors import MembershipError
from .presentation import (
    IDENTITY,
    GroupPresentation,
    Word,
    free_reduce,
    invert_word,
    inverse_symbol,
)

logger = logging.getLogger(__name__)


class FoldedGraph:
    """Core graph of a subgroup H of a free group, based at vertex 0.

    Reading a reduced word from the base as far as the graph allows
    identifies the right coset Hw: the vertex reached plus the unread
    suffix.
    """

    def __init__(self, generators: Sequence[Word], symbols: Sequence[str]):
        self.symbols = tuple(symbols)
        edges: list[tuple[int, str, int]] = []
        count = 1
        for gen in generators:
            word = free_reduce(gen)
            if not word:
                continue
            current = 0
            for i, letter in enumerate(word):
                if i == len(word) - 1:
                    target = 0
                else:
                    target = count
                    count += 1
                edges.append((current, letter, target))
                current = target
        self.adjacency = self._fold(edges, count)
        self.paths = self._shortlex_paths()
        logger.debug(f"Folded graph with {len(self.adjacency)} vertices for {len(generators)} generators")

    @staticmethod
    def _fold(edges: list[tuple[int, str, int]], count: int) -> dict[int, dict[str, int]]:
        parent = list(range(count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                # keep the base vertex as a root
                if rb == 0:
                    ra, rb = rb, ra
                parent[rb] = ra

        changed = True
        while changed:
            changed = False
            seen: dict[tuple[int, str], int] = {}
            for u, letter, v in edges:
                u, v = find(u), find(v)
                for a, sym, b in ((u, letter, v), (v, inverse_symbol(letter), u)):
                    slot = (a, sym)
                    if slot in seen and find(seen[slot]) != find(b):
                        union(seen[slot], b)
                        changed = True
                    else:
                        seen.setdefault(slot, b)

        adjacency: dict[int, dict[str, int]] = {find(0): {}}
        for u, letter, v in edges:
            u, v = find(u), find(v)
            adjacency.setdefault(u, {})[letter] = v
            adjacency.setdefault(v, {})[inverse_symbol(letter)] = u
        return adjacency

    def _shortlex_paths(self) -> dict[int, Word]:
        paths: dict[int, Word] = {0: IDENTITY}
        queue = deque([0])
        while queue:
            vertex = queue.popleft()
            for symbol in self.symbols:
                nxt = self.adjacency.get(vertex, {}).get(symbol)
                if nxt is not None and nxt not in paths:
                    paths[nxt] = paths[vertex] + (symbol,)
                    queue.append(nxt)
        return paths

    def read(self, word: Word) -> tuple[int, int]:
        """Follow a reduced word from the base; return (vertex, letters consumed)."""
        vertex = 0
        for i, letter in enumerate(word):
            nxt = self.adjacency.get(vertex, {}).get(letter)
            if nxt is None:
                return vertex, i
            vertex = nxt
        return vertex, len(word)

    def contains(self, word: Word) -> bool:
        reduced = free_reduce(word)
        vertex, consumed = self.read(reduced)
        return consumed == len(reduced) and vertex == 0

    def coset_key(self, word: Word) -> Hashable:
        reduced = free_reduce(word)
        vertex, consumed = self.read(reduced)
        return vertex, reduced[consumed:]

    def canonical(self, word: Word) -> Word:
        reduced = free_reduce(word)
        vertex, consumed = self.read(reduced)
        return free_reduce(self.paths[vertex] + reduced[consumed:])

    def closed_paths(self, radius: int) -> list[Word]:
        """Reduced words of length <= radius labelling loops at the base."""
        found: list[Word] = []
        stack: list[tuple[int, Word]] = [(0, IDENTITY)]
        while stack:
            vertex, word = stack.pop()
            if vertex == 0:
                found.append(word)
            if len(word) == radius:
                continue
            for symbol, nxt in self.adjacency.get(vertex, {}).items():
                if word and word[-1] == inverse_symbol(symbol):
                    continue
                stack.append((nxt, word + (symbol,)))
        return found

    @property
    def rank(self) -> int:
        edge_count = sum(len(out) for out in self.adjacency.values()) // 2
        return edge_count - len(self.adjacency) + 1

    @classmethod
    def product(cls, graphs: Sequence["FoldedGraph"]) -> "FoldedGraph":
        """The folded graph of the intersection of the graphs' subgroups.

        Vertices are tuples of vertices, one per graph, reachable from the
        tuple of base vertices; the base tuple becomes vertex 0.
        """
        if not graphs:
            raise MembershipError("Intersection of no subgroups")
        symbols = graphs[0].symbols
        start = tuple(0 for _ in graphs)
        number: dict[tuple[int, ...], int] = {start: 0}
        adjacency: dict[int, dict[str, int]] = {0: {}}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for symbol in symbols:
                targets = [g.adjacency.get(v, {}).get(symbol) for g, v in zip(graphs, node)]
                if any(t is None for t in targets):
                    continue
                nxt = tuple(targets)
                if nxt not in number:
                    number[nxt] = len(number)
                    adjacency[number[nxt]] = {}
                    queue.append(nxt)
                adjacency[number[node]][symbol] = number[nxt]
        graph = cls.__new__(cls)
        graph.symbols = symbols
        graph.adjacency = adjacency
        graph.paths = graph._shortlex_paths()
        logger.debug(f"Product of {len(graphs)} folded graphs has {len(adjacency)} vertices")
        return graph

    def _tree_slots(self) -> set[tuple[int, str]]:
        slots: set[tuple[int, str]] = set()
        ends = {path: vertex for vertex, path in self.paths.items()}
        for vertex, path in self.paths.items():
            if not path:
                continue
            parent = ends[path[:-1]]
            slots.add((parent, path[-1]))
            slots.add((vertex, inverse_symbol(path[-1])))
        return slots

    def basis(self) -> list[tuple[tuple[int, str], Word]]:
        """A free basis of H: one loop per edge outside the shortlex spanning tree.

        Returns ((vertex, positive symbol), loop word) pairs in shortlex order of
        the edges.
        """
        tree = self._tree_slots()
        out: list[tuple[tuple[int, str], Word]] = []
        for vertex in sorted(self.paths, key=lambda v: (len(self.paths[v]), self.paths[v])):
            for symbol in self.symbols:
                if symbol.endswith("'") or (vertex, symbol) in tree:
                    continue
                target = self.adjacency.get(vertex, {}).get(symbol)
                if target is None:
                    continue
                loop = free_reduce(self.paths[vertex] + (symbol,) + invert_word(self.paths[target]))
                out.append(((vertex, symbol), loop))
        return out

    def express(self, word: Word, names: Sequence[str]) -> Word:
        """Rewrite an element of H as a word in `names`, one name per basis loop.

        Raises:
            MembershipError: If the word is not in H.
        """
        tree = self._tree_slots()
        slot_name = {slot: name for (slot, _), name in zip(self.basis(), names)}
        reduced = free_reduce(word)
        vertex = 0
        out: list[str] = []
        for letter in reduced:
            nxt = self.adjacency.get(vertex, {}).get(letter)
            if nxt is None:
                raise MembershipError(f"Word {reduced} leaves the folded graph")
            if (vertex, letter) not in tree:
                if letter.endswith("'"):
                    out.append(f"{slot_name[(nxt, inverse_symbol(letter))]}'")
                else:
                    out.append(slot_name[(vertex, letter)])
            vertex = nxt
        if vertex != 0:
            raise MembershipError(f"Word {reduced} does not close up at the base")
        return tuple(out)


class FoldedOracle:
    """Subgroup oracle for free groups backed by a FoldedGraph."""

    def __init__(self, group: GroupPresentation, generators: Sequence[Word]):
        self.group = group
        self.graph = FoldedGraph(generators, group.symbols)

    def contains(self, word: Word) -> bool:
        return self.graph.contains(self.group.check_word(word))

    def coset_key(self, word: Word) -> Hashable:
        return self.graph.coset_key(word)

    def left_coset_key(self, word: Word) -> Hashable:
        return self.graph.coset_key(invert_word(free_reduce(word)))

    def ball(self, radius: int) -> Optional[list[Word]]:
        return self.graph.closed_paths(radius)

    def canonical(self, word: Word) -> Optional[Word]:
        return self.graph.canonical(word)
