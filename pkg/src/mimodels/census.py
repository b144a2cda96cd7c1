"""Exhaustive enumeration of models on small n.

Ideals are handled internally as bitmasks over the fixed enumeration of
statements, which makes relabeling and deduplication cheap.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Optional

from .closure import SplitClosedIdeal, StatementSet, closure, maximal_generators
from .markov import all_complexes, all_graphs, graph_ideal, simplicial_ideal
from .parametrization import param_matrix
from .partitions import Partition, enumerate_partitions, leq, relabel
from .tensors import StateShape
from .toric import projective_dimension, toric_degree

CLASSES = ("general", "graphical", "simplicial", "both")


class CensusRangeError(ValueError):
    pass


@dataclass(frozen=True)
class _Universe:
    n: int
    elements: tuple[Partition, ...]
    index: dict
    strictly_above: tuple[int, ...]
    perms: tuple[tuple[int, ...], ...]

    def to_mask(self, parts: Iterable[Partition]) -> int:
        m = 0
        for p in parts:
            m |= 1 << self.index[p]
        return m

    def to_parts(self, mask: int) -> list[Partition]:
        out = []
        k = 0
        while mask:
            if mask & 1:
                out.append(self.elements[k])
            mask >>= 1
            k += 1
        return out

    def maximal(self, mask: int) -> int:
        out = 0
        m, k = mask, 0
        while m:
            if m & 1 and not (self.strictly_above[k] & mask):
                out |= 1 << k
            m >>= 1
            k += 1
        return out

    def close(self, mask: int) -> int:
        gens = self.to_parts(self.maximal(mask))
        return self.to_mask(closure(gens, self.n).elements)

    def permute(self, mask: int, perm: tuple[int, ...]) -> int:
        out = 0
        k = 0
        while mask:
            if mask & 1:
                out |= 1 << perm[k]
            mask >>= 1
            k += 1
        return out

    def canonical(self, mask: int) -> int:
        """Smallest bitmask in the orbit of ``mask``; the orbit representative."""
        return min(self.permute(mask, p) for p in self.perms)

    def ideal(self, mask: int) -> SplitClosedIdeal:
        return SplitClosedIdeal(self.n, frozenset(self.to_parts(mask)))


@lru_cache(maxsize=None)
def universe(n: int) -> _Universe:
    elems = enumerate_partitions(n, 2)
    index = {p: k for k, p in enumerate(elems)}
    above = []
    for p in elems:
        m = 0
        for k, q in enumerate(elems):
            if q != p and leq(p, q):
                m |= 1 << k
        above.append(m)
    perms = []
    for sigma in permutations(range(1, n + 1)):
        perms.append(tuple(index[relabel(p, sigma)] for p in elems))
    return _Universe(n, elems, index, tuple(above), tuple(perms))


def _guard(n: int, allow_large: bool) -> None:
    if n < 1:
        raise CensusRangeError("n must be positive")
    if n > 5 or (n == 5 and not allow_large):
        raise CensusRangeError(f"census supports n <= 4 (n = 5 only with allow_large); got n = {n}")


def closed_ideal_masks(n: int, allow_large: bool = False) -> list[int]:
    """Every split closed ideal as a bitmask, in lectic order (next-closure)."""
    _guard(n, allow_large)
    U = universe(n)
    m = len(U.elements)
    full = (1 << m) - 1
    A = U.close(0)
    out = [A]
    while A != full:
        for i in range(m - 1, -1, -1):
            bit = 1 << i
            if A & bit:
                continue
            low = bit - 1  # elements before i
            B = U.close((A & low) | bit)
            if B & low == A & low:
                A = B
                out.append(A)
                break
        else:  # pragma: no cover - next-closure always advances before reaching full
            break
    return out


def enumerate_closed_ideals(n: int, allow_large: bool = False) -> list[SplitClosedIdeal]:
    U = universe(n)
    return [U.ideal(m) for m in closed_ideal_masks(n, allow_large)]


def _masks_of(n: int, ideals: Iterable[SplitClosedIdeal]) -> set[int]:
    U = universe(n)
    return {U.to_mask(I.elements) for I in ideals}


def orbit_count(ideals: Iterable[SplitClosedIdeal], n: Optional[int] = None) -> int:
    ideals = list(ideals)
    if not ideals:
        return 0
    n = ideals[0].n if n is None else n
    U = universe(n)
    return len({U.canonical(m) for m in _masks_of(n, ideals)})


def burnside_count(masks: Iterable[int], n: int) -> int:
    """Orbit count as the average number of fixed points over all relabelings."""
    U = universe(n)
    masks = set(masks)
    fixed = sum(sum(1 for m in masks if U.permute(m, p) == m) for p in U.perms)
    q, r = divmod(fixed, math.factorial(n))
    if r:
        raise ValueError("ideal family is not closed under relabeling")
    return q


@lru_cache(maxsize=None)
def graphical_masks(n: int) -> frozenset[int]:
    _guard(n, False)
    U = universe(n)
    return frozenset(U.to_mask(graph_ideal(G).elements) for G in all_graphs(n))


@lru_cache(maxsize=None)
def graph_collisions(n: int) -> int:
    """Number of labeled graphs minus number of distinct graphical ideals."""
    return 2 ** (n * (n - 1) // 2) - len(graphical_masks(n))


@lru_cache(maxsize=None)
def simplicial_masks(n: int) -> frozenset[int]:
    _guard(n, False)
    U = universe(n)
    return frozenset(U.to_mask(simplicial_ideal(S).elements) for S in all_complexes(n))


@lru_cache(maxsize=None)
def general_masks(n: int, allow_large: bool = False) -> frozenset[int]:
    return frozenset(closed_ideal_masks(n, allow_large))


def class_masks(n: int, cls: str) -> frozenset[int]:
    if cls == "general":
        return general_masks(n)
    if cls == "graphical":
        return graphical_masks(n)
    if cls == "simplicial":
        return simplicial_masks(n)
    if cls == "both":
        return graphical_masks(n) & simplicial_masks(n)
    raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")


def class_census(n: int, cls: str) -> tuple[int, int]:
    """``(total, up to relabeling)`` for one model class."""
    masks = class_masks(n, cls)
    U = universe(n)
    return len(masks), len({U.canonical(m) for m in masks})


def table1(ns: Iterable[int] = (3, 4)) -> list[dict]:
    rows = []
    for cls in ("graphical", "simplicial", "both", "general"):
        row = {"class": cls}
        for n in ns:
            total, orbits = class_census(n, cls)
            row[f"total_n{n}"] = total
            row[f"orbits_n{n}"] = orbits
        rows.append(row)
    return rows


@dataclass(frozen=True)
class CensusRow:
    ideal: SplitClosedIdeal
    generators: StatementSet
    is_graphical: bool
    is_simplicial: bool
    degree: int
    dimension: int
    orbit_size: int

    def to_json(self) -> dict:
        return {
            "generators": str(self.generators) or "∅",
            "degree": self.degree,
            "dimension": self.dimension,
            "graphical": self.is_graphical,
            "simplicial": self.is_simplicial,
            "orbit_size": self.orbit_size,
        }


def _geometry_of(args) -> tuple[int, int]:
    ideal, shape = args
    A = param_matrix(ideal, shape)
    return toric_degree(A), projective_dimension(A)


def _generator_key(U: _Universe, mask: int) -> tuple:
    return tuple(sorted(p.as_sets() for p in U.to_parts(U.maximal(mask))))


def orbit_representatives(n: int, cls: str = "general") -> list[tuple[int, int]]:
    """``(representative mask, orbit size)`` per orbit.

    The representative is the member whose sorted generator list is
    lexicographically smallest, so rows read like ``1|2,3|4``.
    """
    U = universe(n)
    orbits: dict[int, set[int]] = {}
    for m in class_masks(n, cls):
        orbits.setdefault(U.canonical(m), set()).add(m)
    reps = [(min(members, key=lambda m: _generator_key(U, m)), len(members)) for members in orbits.values()]
    return sorted(reps, key=lambda r: _generator_key(U, r[0]))


def table2(n: int = 4, shape: Optional[StateShape] = None, cls: str = "general",
           jobs: int = 1) -> list[CensusRow]:
    """Degree, dimension and class flags for one representative per orbit.

    Rows are sorted by decreasing dimension, then degree, then generators.
    """
    shape = StateShape.binary(n) if shape is None else shape
    U = universe(n)
    reps = orbit_representatives(n, cls)
    ideals = [U.ideal(m) for m, _ in reps]
    work = [(I, shape) for I in ideals]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            geo = list(pool.map(_geometry_of, work))
    else:
        geo = [_geometry_of(w) for w in work]
    graphical = graphical_masks(n)
    simplicial = simplicial_masks(n)
    rows = []
    for (mask, size), I, (deg, dim) in zip(reps, ideals, geo):
        rows.append(CensusRow(
            ideal=I,
            generators=maximal_generators(I),
            is_graphical=mask in graphical,
            is_simplicial=mask in simplicial,
            degree=deg,
            dimension=dim,
            orbit_size=size,
        ))
    rows.sort(key=lambda r: (-r.dimension, r.degree, str(r.generators)))
    return rows


def find_row(rows: list[CensusRow], generators: StatementSet) -> CensusRow:
    """The row whose ideal is a relabeling of the closure of ``generators``."""
    n = generators.n
    U = universe(n)
    key = U.canonical(U.to_mask(closure(generators).elements))
    for r in rows:
        if U.canonical(U.to_mask(r.ideal.elements)) == key:
            return r
    raise KeyError(f"no census row for {generators}")
