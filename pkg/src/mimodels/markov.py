"""Bidirected graphs and simplicial complexes as sources of statements."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .closure import SplitClosedIdeal, StatementSet, closure
from .partitions import ParseError, Partition, as_mask, elements_of, mask_of


@dataclass(frozen=True)
class BidirectedGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {u}-{v} outside 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def parse(cls, text: str, n: int) -> "BidirectedGraph":
        """``"1-2,2-3"``; an empty string is the edgeless graph."""
        edges = []
        for chunk in filter(None, (c.strip() for c in text.split(","))):
            m = re.fullmatch(r"(\d+)\s*-\s*(\d+)", chunk)
            if not m:
                raise ParseError(f"malformed edge {chunk!r}")
            u, v = int(m.group(1)), int(m.group(2))
            if u == v or not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"bad edge {chunk!r} for n={n}")
            edges.append((u, v))
        return cls(n, frozenset(edges))

    @classmethod
    def complete(cls, n: int) -> "BidirectedGraph":
        return cls(n, frozenset(combinations(range(1, n + 1), 2)))

    def neighbours(self, v: int) -> int:
        m = 0
        for a, b in self.edges:
            if a == v:
                m |= 1 << (b - 1)
            elif b == v:
                m |= 1 << (a - 1)
        return m

    def complement(self) -> "BidirectedGraph":
        every = set(combinations(range(1, self.n + 1), 2))
        return BidirectedGraph(self.n, frozenset(every - self.edges))

    def is_connected_set(self, mask: int) -> bool:
        if not mask:
            return False
        low = mask & -mask
        reached = low
        frontier = low
        while frontier:
            nxt = 0
            for v in elements_of(frontier):
                nxt |= self.neighbours(v)
            nxt &= mask & ~reached
            reached |= nxt
            frontier = nxt
        return reached == mask

    def __str__(self) -> str:
        return ",".join(f"{u}-{v}" for u, v in sorted(self.edges))


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward closed family of nonempty faces; vertices are always faces."""

    n: int
    faces: frozenset[frozenset[int]]

    def __post_init__(self):
        closed = {frozenset([v]) for v in range(1, self.n + 1)}
        for f in self.faces:
            f = frozenset(f)
            if any(not 1 <= v <= self.n for v in f):
                raise ValueError(f"face {sorted(f)} outside 1..{self.n}")
            for k in range(1, len(f) + 1):
                closed.update(frozenset(c) for c in combinations(sorted(f), k))
        object.__setattr__(self, "faces", frozenset(closed))

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(n, frozenset(frozenset(f) for f in faces))

    @classmethod
    def parse(cls, text: str, n: int) -> "SimplicialComplex":
        """Maximal faces such as ``"12,13,23"`` or ``"{1,2},{10,11}"``."""
        faces = []
        for chunk in re.findall(r"\{[^}]*\}|[^,{}]+", text):
            chunk = chunk.strip()
            if not chunk:
                continue
            if chunk.startswith("{"):
                vals = [int(x) for x in chunk.strip("{}").split(",") if x.strip()]
            elif chunk.isdigit():
                vals = [int(c) for c in chunk]
            else:
                raise ParseError(f"malformed face {chunk!r}")
            if any(not 1 <= v <= n for v in vals):
                raise ParseError(f"face {chunk!r} has a vertex outside 1..{n}")
            faces.append(vals)
        return cls.from_faces(n, faces)

    def nontrivial_faces(self) -> list[frozenset[int]]:
        """Faces with at least two vertices, smallest first."""
        return sorted((f for f in self.faces if len(f) >= 2), key=lambda f: (len(f), sorted(f)))

    def maximal_faces(self) -> list[frozenset[int]]:
        return sorted((f for f in self.faces if not any(f < g for g in self.faces)),
                      key=lambda f: (len(f), sorted(f)))

    def __str__(self) -> str:
        return ",".join("".join(map(str, sorted(f))) for f in self.maximal_faces())


def spouse(G: BidirectedGraph, A) -> frozenset[int]:
    """``A`` together with every vertex adjacent to it."""
    m = as_mask(A)
    out = m
    for v in elements_of(m):
        out |= G.neighbours(v)
    return frozenset(elements_of(out))


def connected_sets(G: BidirectedGraph) -> list[int]:
    return [m for m in range(1, 1 << G.n) if G.is_connected_set(m)]


def graph_statements(G: BidirectedGraph) -> StatementSet:
    """Connected set Markov statements ``C | V \\ Sp(C)``."""
    full = (1 << G.n) - 1
    out = set()
    for c in connected_sets(G):
        rest = full & ~mask_of(spouse(G, c))
        if rest:
            out.add(Partition(G.n, (c, rest)))
    return StatementSet(G.n, frozenset(out))


def graph_ideal(G: BidirectedGraph) -> SplitClosedIdeal:
    return closure(graph_statements(G))


def simplicial_statements(S: SimplicialComplex) -> StatementSet:
    """Complete independence of the vertices of each face with two or more vertices."""
    out = {Partition.from_blocks(S.n, [[v] for v in f]) for f in S.faces if len(f) >= 2}
    return StatementSet(S.n, frozenset(out))


def simplicial_ideal(S: SimplicialComplex) -> SplitClosedIdeal:
    return closure(simplicial_statements(S))


def sigma_of_graph(G: BidirectedGraph) -> SimplicialComplex:
    """Vertex sets that contain no edge of ``G``."""
    faces = []
    for m in range(1, 1 << G.n):
        if not any(m >> (u - 1) & 1 and m >> (v - 1) & 1 for u, v in G.edges):
            faces.append(elements_of(m))
    return SimplicialComplex.from_faces(G.n, faces)


def complement_is_cliques(G: BidirectedGraph) -> bool:
    """Whether the complement is a disjoint union of complete graphs.

    Same as ``G`` being complete multipartite: non-adjacency is transitive.
    """
    H = G.complement()
    for v in range(1, G.n + 1):
        nb = H.neighbours(v)
        for w in elements_of(nb):
            if (H.neighbours(w) | 1 << (w - 1)) != (nb | 1 << (v - 1)):
                return False
    return True


def models_coincide(G: BidirectedGraph) -> bool:
    """Exact comparison of the graphical model with the model of its complex."""
    return graph_ideal(G) == simplicial_ideal(sigma_of_graph(G))


def all_graphs(n: int):
    pairs = list(combinations(range(1, n + 1), 2))
    for bits in range(1 << len(pairs)):
        yield BidirectedGraph(n, frozenset(p for k, p in enumerate(pairs) if bits >> k & 1))


def all_complexes(n: int):
    """Every complex on [n], identified by its faces of size two or more."""
    cands = [frozenset(c) for k in range(2, n + 1) for c in combinations(range(1, n + 1), k)]
    for bits in range(1 << len(cands)):
        chosen = {f for k, f in enumerate(cands) if bits >> k & 1}
        if all(frozenset(sub) in chosen
               for f in chosen if len(f) > 2
               for sub in combinations(sorted(f), len(f) - 1)):
            yield SimplicialComplex(n, frozenset(chosen))
