"""Splitting, split closure of statement sets, and the membership test."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .partitions import (
    ParseError,
    Partition,
    as_mask,
    enumerate_partitions,
    format_partition,
    leq,
    parse,
    popcount,
)


@dataclass(frozen=True)
class StatementSet:
    """A set of marginal independence statements over [n].

    Every statement needs at least two blocks; one-block input is refused
    rather than silently dropped.
    """

    n: int
    statements: frozenset[Partition]

    def __post_init__(self):
        for s in self.statements:
            if s.n != self.n:
                raise ValueError(f"statement {s} is over n={s.n}, expected {self.n}")
            if len(s.blocks) < 2:
                raise ValueError(f"statement {s} has fewer than two blocks")

    @classmethod
    def of(cls, n: int, statements: Iterable[Partition]) -> "StatementSet":
        return cls(n, frozenset(statements))

    @classmethod
    def parse(cls, text: str, n: int) -> "StatementSet":
        """Comma-separated statements, e.g. ``"1|23,2|3"``."""
        out = []
        for chunk in _split_statements(text):
            pi = parse(chunk, n)
            if len(pi.blocks) < 2:
                raise ParseError(f"statement {chunk!r} needs at least two blocks")
            out.append(pi)
        return cls(n, frozenset(out))

    def sorted(self) -> list[Partition]:
        return sorted(self.statements, key=Partition.sort_key)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.statements)

    def __str__(self) -> str:
        return ",".join(format_partition(p) for p in self.sorted())

    def to_json(self) -> dict:
        return {"n": self.n, "statements": [list(map(list, p.as_sets())) for p in self.sorted()]}

    @classmethod
    def from_json(cls, data: dict) -> "StatementSet":
        n = int(data["n"])
        return cls(n, frozenset(Partition.from_blocks(n, s) for s in data["statements"]))


def _split_statements(text: str) -> list[str]:
    # commas inside {..} belong to the bracket form
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [c for c in (s.strip() for s in out) if c]


@dataclass(frozen=True)
class SplitClosedIdeal:
    """A downward closed, split closed subset of the statement poset."""

    n: int
    elements: frozenset[Partition]

    def __contains__(self, pi: Partition) -> bool:
        return pi in self.elements

    def __iter__(self) -> Iterator[Partition]:
        return iter(sorted(self.elements, key=Partition.sort_key))

    def __len__(self) -> int:
        return len(self.elements)

    def maximal_generators(self) -> StatementSet:
        return maximal_generators(self)

    def __str__(self) -> str:
        return "{" + ", ".join(format_partition(p) for p in self) + "}"


def _statements(C) -> tuple[Partition, ...]:
    if isinstance(C, (StatementSet, SplitClosedIdeal)):
        items = C.statements if isinstance(C, StatementSet) else C.elements
    else:
        items = C
    return tuple(sorted(items, key=Partition.sort_key))


def splits(tau: Partition, pi: Partition) -> Optional[int]:
    """Index of the block of ``pi`` equal to ``tau_1 ∪ tau_2``, or None."""
    if len(tau.blocks) != 2:
        raise ValueError(f"splits() needs a two-block partition, got {tau}")
    g = tau.ground
    for i, b in enumerate(pi.blocks):
        if b == g:
            return i
    return None


def split_by(pi: Partition, gamma: Partition) -> Partition:
    """Replace each block of ``pi`` lying inside ``|gamma|`` by its pieces under ``gamma``."""
    g = gamma.ground
    out = []
    changed = False
    for b in pi.blocks:
        if b & ~g == 0:
            pieces = [b & c for c in gamma.blocks if b & c]
            if len(pieces) > 1:
                changed = True
            out.extend(pieces)
        else:
            out.append(b)
    if not changed:
        return pi
    return Partition(pi.n, tuple(out))


def _fixpoint(seed: Partition, statements: tuple[Partition, ...]) -> Partition:
    cur = seed
    while True:
        nxt = cur
        for s in statements:
            nxt = split_by(nxt, s)
        if nxt == cur:
            return cur
        cur = nxt


def fixpoint_split(seed: Partition, C) -> Partition:
    """Apply the statements of ``C`` in canonical order until nothing changes."""
    return _fixpoint(seed, _statements(C))


def max_element_for(D, C) -> Partition:
    """Largest element of the closure of ``C`` with ground set ``D``.

    May come back as the one-block partition ``D`` when no statement splits it.
    """
    n = C.n if isinstance(C, (StatementSet, SplitClosedIdeal)) else None
    stmts = _statements(C)
    if n is None:
        if not stmts:
            raise ValueError("cannot infer n from an empty statement list; pass a StatementSet")
        n = stmts[0].n
    d = as_mask(D)
    if not d:
        raise ValueError("ground set must be nonempty")
    return _fixpoint(Partition(n, (d,)), stmts)


def member(sigma: Partition, C) -> bool:
    """Decide whether ``sigma`` lies in the split closure of ``C``."""
    stmts = _statements(C)
    g = sigma.ground
    if not any(g & ~p.ground == 0 for p in stmts):
        return False
    top = _fixpoint(Partition(sigma.n, (g,)), stmts)
    return leq(sigma, top)


@lru_cache(maxsize=None)
def _by_ground(n: int) -> dict[int, tuple[Partition, ...]]:
    out: dict[int, list[Partition]] = {}
    for p in enumerate_partitions(n, 2):
        out.setdefault(p.ground, []).append(p)
    return {k: tuple(v) for k, v in out.items()}


@lru_cache(maxsize=200_000)
def _below_same_ground(top: Partition) -> frozenset[Partition]:
    cands = _by_ground(top.n).get(top.ground, ())
    return frozenset(p for p in cands if leq(p, top))


def closure(C, n: Optional[int] = None) -> SplitClosedIdeal:
    """The smallest split closed order ideal containing ``C``.

    Runs the membership test ground set by ground set, so each fixpoint is
    computed once per ground set instead of once per candidate.
    """
    if n is None:
        if isinstance(C, (StatementSet, SplitClosedIdeal)):
            n = C.n
        else:
            raise ValueError("n is required for a bare statement list")
    stmts = _statements(C)
    grounds = [p.ground for p in stmts]
    elems: set[Partition] = set()
    for g in _by_ground(n):
        if not any(g & ~h == 0 for h in grounds):
            continue
        top = _fixpoint(Partition(n, (g,)), stmts)
        if len(top.blocks) >= 2:
            elems |= _below_same_ground(top)
    return SplitClosedIdeal(n, frozenset(elems))


def _lower_covers(pi: Partition) -> Iterator[Partition]:
    blocks = pi.blocks
    if len(blocks) == 1 and popcount(blocks[0]) == 1:
        yield Partition(pi.n, ())
        return
    for i, b in enumerate(blocks):
        if popcount(b) >= 2:
            bit = b
            while bit:
                low = bit & -bit
                bit &= bit - 1
                yield Partition(pi.n, blocks[:i] + (b & ~low,) + blocks[i + 1 :])
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            merged = tuple(x for k, x in enumerate(blocks) if k not in (i, j)) + (blocks[i] | blocks[j],)
            yield Partition(pi.n, merged)


@lru_cache(maxsize=None)
def down_set(pi: Partition) -> frozenset[Partition]:
    """Everything below ``pi`` with at least two blocks, found by walking lower covers."""
    seen = {pi}
    stack = [pi]
    while stack:
        cur = stack.pop()
        for low in _lower_covers(cur):
            if low not in seen:
                seen.add(low)
                stack.append(low)
    return frozenset(p for p in seen if len(p.blocks) >= 2)


def _split_pair(pi: Partition, tau: Partition) -> Optional[Partition]:
    i = splits(tau, pi)
    if i is None:
        return None
    return Partition(pi.n, pi.blocks[:i] + tau.blocks + pi.blocks[i + 1 :])


def closure_bruteforce(C, n: Optional[int] = None) -> SplitClosedIdeal:
    """Saturate under "everything below" and two-block splittings until stable."""
    if n is None:
        n = C.n
    current: set[Partition] = set()
    for s in _statements(C):
        current |= down_set(s)
    while True:
        added: set[Partition] = set()
        two = [t for t in current if len(t.blocks) == 2]
        for p in current:
            for t in two:
                q = _split_pair(p, t)
                if q is not None and q not in current:
                    added |= down_set(q)
        added -= current
        if not added:
            return SplitClosedIdeal(n, frozenset(current))
        current |= added


def maximal_generators(I: SplitClosedIdeal) -> StatementSet:
    elems = list(I.elements)
    tops = [p for p in elems if not any(p != q and leq(p, q) for q in elems)]
    return StatementSet(I.n, frozenset(tops))
