"""Connected sets of an ideal and the polynomial equations of its model."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence

import numpy as np

from .closure import SplitClosedIdeal, StatementSet, _fixpoint, maximal_generators
from .partitions import Partition, as_mask, elements_of, popcount
from .tensors import IndexVector, StateShape, at, columns_in_order, index_label, restrict_index, support


def disconnected_sets(I: SplitClosedIdeal) -> set[frozenset[int]]:
    """Ground sets of the elements of ``I``."""
    return {p.ground_set for p in I.elements}


def disconnected_masks(I: SplitClosedIdeal) -> set[int]:
    return {p.ground for p in I.elements}


def connected_masks(I: SplitClosedIdeal) -> list[int]:
    """Nonempty connected sets, ordered by size then lexicographically."""
    bad = disconnected_masks(I)
    out = [m for m in range(1, 1 << I.n) if m not in bad]
    out.sort(key=lambda m: (popcount(m), elements_of(m)))
    return out


def max_connected_decomposition(D, I: SplitClosedIdeal) -> Partition:
    """Split ``D`` into its maximal connected pieces relative to ``I``."""
    d = as_mask(D)
    if not d:
        raise ValueError("ground set must be nonempty")
    gens = tuple(maximal_generators(I).sorted())
    return _fixpoint(Partition(I.n, (d,)), gens)


def decomposition_table(I: SplitClosedIdeal) -> dict[int, tuple[int, ...]]:
    """Maximal connected decomposition (as block masks) of every subset of [n].

    The empty set maps to ``()``.
    """
    gens = tuple(maximal_generators(I).sorted())
    table = {0: ()}
    for d in range(1, 1 << I.n):
        table[d] = _fixpoint(Partition(I.n, (d,)), gens).blocks
    return table


@dataclass(frozen=True)
class FactorEquation:
    """The binomial ``q_lead - prod(q_f for f in factors)``."""

    lead: IndexVector
    factors: tuple[IndexVector, ...]

    def to_text(self, shape: StateShape) -> str:
        rhs = "*".join(index_label(f, shape) for f in self.factors)
        return f"{index_label(self.lead, shape)} - {rhs}"

    def to_json(self) -> dict:
        return {"lead": list(self.lead), "factors": [list(f) for f in self.factors]}

    def evaluate(self, Q: np.ndarray):
        prod_ = 1
        for f in self.factors:
            prod_ *= at(Q, f)
        return at(Q, self.lead) - prod_


def maximal_equations(I: SplitClosedIdeal, shape: StateShape) -> list[FactorEquation]:
    """One factorization equation per index vector with disconnected support."""
    if shape.n != I.n:
        raise ValueError(f"shape has {shape.n} variables, ideal has n={I.n}")
    table = decomposition_table(I)
    bad = disconnected_masks(I)
    out = []
    for i in columns_in_order(shape):
        s = support(i, shape)
        if s not in bad:
            continue
        factors = tuple(restrict_index(i, b, shape) for b in table[s])
        out.append(FactorEquation(i, factors))
    return out


@dataclass(frozen=True)
class QuadBinomial:
    """``plus[0]*plus[1] - minus[0]*minus[1]``; entries are tensor coordinates.

    For probability coordinates a ``None`` entry in a coordinate stands for
    "+" (summed out).
    """

    plus: tuple[tuple, tuple]
    minus: tuple[tuple, tuple]

    def to_text(self, shape: Optional[StateShape] = None) -> str:
        def lab(c):
            if shape is not None and None not in c:
                return index_label(c, shape)
            return "p_" + "".join("+" if v is None else str(v) for v in c)

        return f"{lab(self.plus[0])}*{lab(self.plus[1])} - {lab(self.minus[0])}*{lab(self.minus[1])}"


def flattening_minors(M: Sequence[Sequence]) -> list[tuple[tuple, tuple, tuple, tuple]]:
    """All 2x2 minors ``(a, d, b, c)`` meaning ``a*d - b*c`` of a matrix of labels."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    out = []
    for r1, r2 in combinations(range(rows), 2):
        for c1, c2 in combinations(range(cols), 2):
            out.append((M[r1][c1], M[r2][c2], M[r1][c2], M[r2][c1]))
    return out


def _block_states(block: int, shape: StateShape) -> list[tuple[tuple[int, int], ...]]:
    vars_ = [v - 1 for v in elements_of(block)]
    return [tuple(zip(vars_, vals)) for vals in product(*(range(1, shape.r[v] + 1) for v in vars_))]


def _flattenings(pi: Partition, shape: StateShape, fill):
    """Yield one label matrix per bipartition of the blocks of ``pi``.

    Rows range over the joint states of the side holding the first block,
    columns over the other side, both in row-major order.
    """
    k = len(pi.blocks)
    states = [_block_states(b, shape) for b in pi.blocks]
    others = list(range(1, k))
    for size in range(0, k - 1):
        for extra in combinations(others, size):
            row_side = (0,) + extra
            col_side = tuple(j for j in range(k) if j not in row_side)
            row_states = [sum(c, ()) for c in product(*(states[j] for j in row_side))]
            col_states = [sum(c, ()) for c in product(*(states[j] for j in col_side))]
            M = []
            for rs in row_states:
                line = []
                for cs in col_states:
                    coord = list(fill)
                    for v, val in rs + cs:
                        coord[v] = val
                    line.append(tuple(coord))
                M.append(line)
            yield M


def _up_to_sign(a, d, b, c) -> frozenset:
    return frozenset([tuple(sorted((a, d), key=repr)), tuple(sorted((b, c), key=repr))])


def _collect(pi: Partition, shape: StateShape, fill) -> list[QuadBinomial]:
    if len(pi.blocks) < 2:
        raise ValueError(f"{pi} needs at least two blocks")
    if pi.n != shape.n:
        raise ValueError(f"shape has {shape.n} variables, partition has n={pi.n}")
    seen = set()
    out = []
    for M in _flattenings(pi, shape, fill):
        for a, d, b, c in flattening_minors(M):
            # the same binomial (up to sign) can come from several flattenings
            key = _up_to_sign(a, d, b, c)
            if key not in seen:
                seen.add(key)
                out.append(QuadBinomial((a, d), (b, c)))
    return out


def minor_equations(pi: Partition, shape: StateShape) -> list[QuadBinomial]:
    """2x2 minors of every flattening of the marginal cdf tensor ``Q_pi``.

    Variables outside ``|pi|`` are fixed at their top state.
    """
    return _collect(pi, shape, shape.r)


def minor_equations_prob(pi: Partition, shape: StateShape) -> list[QuadBinomial]:
    """Same minors on the probability tensor; variables outside ``|pi|`` are summed out."""
    return _collect(pi, shape, (None,) * shape.n)


def evaluate_quad(eq: QuadBinomial, T: np.ndarray):
    (a, d), (b, c) = eq.plus, eq.minus
    return _value(T, a) * _value(T, d) - _value(T, b) * _value(T, c)


def _value(T: np.ndarray, coord: tuple):
    if None not in coord:
        return at(T, coord)
    idx = tuple(slice(None) if v is None else v - 1 for v in coord)
    return np.sum(T[idx], dtype=object) if T[idx].size > 1 else T[idx].item()


def statement_set_equations(C: StatementSet | SplitClosedIdeal, shape: StateShape) -> list[QuadBinomial]:
    """Union of :func:`minor_equations` over a family of partitions, without repeats."""
    items = C.statements if isinstance(C, StatementSet) else C.elements
    seen = set()
    out = []
    for p in sorted(items, key=Partition.sort_key):
        for e in minor_equations(p, shape):
            key = _up_to_sign(*e.plus, *e.minus)
            if key not in seen:
                seen.add(key)
                out.append(e)
    return out
