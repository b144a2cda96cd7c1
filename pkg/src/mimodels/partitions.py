"""Partial set partitions of [n] and the poset they form.

Blocks are stored as integer bitmasks over [n] (bit ``v - 1`` set for
element ``v``), so containment and disjointness are single bit operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Sequence

MAX_N = 64


class ParseError(ValueError):
    """Malformed partition or statement text."""


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for v in elements:
        m |= 1 << (v - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def as_mask(ground) -> int:
    """Accept a bitmask (int) or an iterable of 1-based elements."""
    if isinstance(ground, int):
        return ground
    return mask_of(ground)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _low_bit(mask: int) -> int:
    return mask & -mask


@dataclass(frozen=True)
class Partition:
    """A partial set partition of [n], kept in canonical form.

    ``blocks`` holds nonempty, pairwise disjoint bitmasks sorted by their
    minimum element. Two partitions compare equal iff they have the same
    set of blocks.
    """

    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}, got {self.n}")
        full = (1 << self.n) - 1
        seen = 0
        for b in self.blocks:
            if b <= 0:
                raise ValueError("empty block")
            if b & ~full:
                raise ValueError(f"block {set(elements_of(b))} not inside [{self.n}]")
            if b & seen:
                raise ValueError(f"overlapping blocks at {set(elements_of(b & seen))}")
            seen |= b
        canon = tuple(sorted(self.blocks, key=_low_bit))
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        return cls(n, tuple(mask_of(b) for b in blocks))

    @classmethod
    def one_block(cls, n: int, ground) -> "Partition":
        m = as_mask(ground)
        return cls(n, (m,) if m else ())

    @property
    def ground(self) -> int:
        g = 0
        for b in self.blocks:
            g |= b
        return g

    @property
    def ground_set(self) -> frozenset[int]:
        return frozenset(elements_of(self.ground))

    def __len__(self) -> int:
        return len(self.blocks)

    def as_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(elements_of(b) for b in self.blocks)

    def sort_key(self) -> tuple:
        return (rank(self), self.as_sets())

    def __str__(self) -> str:
        return format_partition(self)

    def __repr__(self) -> str:
        return f"Partition({format_partition(self)!r}, n={self.n})"


EMPTY_SYMBOL = "∅"
_COMPACT = re.compile(r"^[1-9]+(\|[1-9]+)*$")
_BRACKET_BLOCK = re.compile(r"^\{\s*\d+(\s*,\s*\d+)*\s*\}$")


def parse(text: str, n: int) -> Partition:
    """Read ``"1|23"`` (single digits) or ``"{1}|{2,3}"`` into a partition.

    Whitespace is ignored in the compact form, so ``"1 | 2 3"`` also works.
    An empty string (or ``∅``) is the empty partition.
    """
    s = text.strip()
    if s in ("", EMPTY_SYMBOL):
        return Partition(n, ())
    if "{" in s:
        raw_blocks = [b.strip() for b in s.split("|")]
        blocks = []
        for rb in raw_blocks:
            if not _BRACKET_BLOCK.match(rb):
                raise ParseError(f"malformed block {rb!r} in {text!r}")
            blocks.append([int(x) for x in rb.strip("{} ").split(",")])
    else:
        compact = re.sub(r"\s+", "", s)
        if not _COMPACT.match(compact):
            bad = [b for b in compact.split("|") if not re.fullmatch(r"[1-9]+", b)]
            where = repr(bad[0]) if bad else repr(compact)
            raise ParseError(f"malformed block {where} in {text!r}")
        blocks = [[int(ch) for ch in b] for b in compact.split("|")]
    seen: set[int] = set()
    for b in blocks:
        label = "".join(map(str, b)) if n <= 9 else "{" + ",".join(map(str, b)) + "}"
        if len(set(b)) != len(b):
            raise ParseError(f"repeated element in block {label!r} of {text!r}")
        out = [v for v in b if not 1 <= v <= n]
        if out:
            raise ParseError(f"block {label!r} has index {out[0]} outside 1..{n}")
        if seen & set(b):
            raise ParseError(f"overlapping blocks: {label!r} reuses {sorted(seen & set(b))}")
        seen |= set(b)
    return Partition.from_blocks(n, blocks)


def format_partition(pi: Partition) -> str:
    if not pi.blocks:
        return EMPTY_SYMBOL
    parts = pi.as_sets()
    if pi.n <= 9:
        return "|".join("".join(map(str, b)) for b in parts)
    return "|".join("{" + ",".join(map(str, b)) + "}" for b in parts)


def format_ground(mask: int, n: int) -> str:
    els = elements_of(mask)
    if not els:
        return EMPTY_SYMBOL
    if n <= 9:
        return "".join(map(str, els))
    return "{" + ",".join(map(str, els)) + "}"


def restrict(pi: Partition, ground: int) -> Partition:
    """``pi ∩ S`` with empty intersections dropped."""
    return Partition(pi.n, tuple(b & ground for b in pi.blocks if b & ground))


def leq(tau: Partition, pi: Partition) -> bool:
    """True iff ``tau <= pi`` in the poset of partial set partitions."""
    g = tau.ground
    if g & ~pi.ground:
        return False
    for b in pi.blocks:
        piece = b & g
        if piece and not any(piece & ~t == 0 for t in tau.blocks):
            return False
    return True


def rank(pi: Partition) -> int:
    if not pi.blocks:
        return 0
    return popcount(pi.ground) + len(pi.blocks) - 1


def covers(pi: Partition, tau: Partition) -> bool:
    """True iff ``pi`` covers ``tau``: one element added to a block, or one block split."""
    if pi.n != tau.n:
        return False
    gp, gt = pi.ground, tau.ground
    if gt & ~gp:
        return False
    extra = gp & ~gt
    if extra:
        if popcount(extra) != 1:
            return False
        if not tau.blocks:
            return pi.blocks == (extra,)
        if len(pi.blocks) != len(tau.blocks):
            return False
        stripped = tuple(b & ~extra for b in pi.blocks)
        return 0 not in stripped and set(stripped) == set(tau.blocks)
    if len(pi.blocks) != len(tau.blocks) + 1:
        return False
    mine, theirs = set(pi.blocks), set(tau.blocks)
    gone = theirs - mine
    new = mine - theirs
    if len(gone) != 1 or len(new) != 2:
        return False
    a, b = new
    return a | b == next(iter(gone))


def meet_same_support(pi: Partition, mu: Partition) -> Partition:
    """Common refinement of two partitions of the same ground set."""
    if pi.ground != mu.ground:
        raise ValueError(f"support mismatch: {pi} vs {mu}")
    return Partition(pi.n, tuple(a & b for a in pi.blocks for b in mu.blocks if a & b))


def set_partitions(mask: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of the bitmask ``mask`` as tuples of block masks."""
    if not mask:
        yield ()
        return
    low = _low_bit(mask)
    rest = mask & ~low
    # the block containing the lowest element is low | sub for every sub ⊆ rest
    sub = rest
    while True:
        for tail in set_partitions(rest & ~sub):
            yield (low | sub,) + tail
        if sub == 0:
            break
        sub = (sub - 1) & rest


@lru_cache(maxsize=None)
def _enumerate_cached(n: int, min_blocks: int) -> tuple[Partition, ...]:
    out = []
    for ground in range(1 << n):
        for blocks in set_partitions(ground):
            if len(blocks) >= min_blocks:
                out.append(Partition(n, blocks))
    out.sort(key=Partition.sort_key)
    return tuple(out)


def enumerate_partitions(n: int, min_blocks: int = 0) -> tuple[Partition, ...]:
    """Every partial set partition of [n] with at least ``min_blocks`` blocks.

    Ordered by rank, then lexicographically by the sorted block tuples.
    ``min_blocks=2`` gives the statements poset.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _enumerate_cached(n, min_blocks)


def relabel_mask(mask: int, sigma: Sequence[int]) -> int:
    out = 0
    v = 0
    while mask:
        if mask & 1:
            out |= 1 << (sigma[v] - 1)
        mask >>= 1
        v += 1
    return out


def relabel(pi: Partition, sigma: Sequence[int]) -> Partition:
    """Apply the permutation ``sigma`` (``sigma[i-1]`` is the image of ``i``)."""
    if sorted(sigma) != list(range(1, pi.n + 1)):
        raise ValueError(f"not a permutation of 1..{pi.n}: {sigma}")
    return Partition(pi.n, tuple(relabel_mask(b, sigma) for b in pi.blocks))


def compose(tau: Sequence[int], sigma: Sequence[int]) -> tuple[int, ...]:
    """``tau ∘ sigma``: first sigma, then tau."""
    return tuple(tau[s - 1] for s in sigma)


def all_permutations(n: int) -> Iterator[tuple[int, ...]]:
    return permutations(range(1, n + 1))
