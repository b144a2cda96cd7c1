"""State spaces, index vectors and the probability <-> cdf coordinate change.

Tensors are numpy object arrays holding ``Fraction`` entries. Index vectors
are 1-based tuples; state ``r_l`` of variable ``l`` doubles as the
marginalized "+" in cdf coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .partitions import elements_of, popcount

IndexVector = tuple[int, ...]


@dataclass(frozen=True)
class StateShape:
    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if not self.r:
            raise ValueError("shape needs at least one variable")
        bad = [x for x in self.r if x < 2]
        if bad:
            raise ValueError(f"every variable needs at least 2 states, got {self.r}")

    @classmethod
    def binary(cls, n: int) -> "StateShape":
        return cls((2,) * n)

    @classmethod
    def parse(cls, text: str) -> "StateShape":
        try:
            return cls(tuple(int(x) for x in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad state sizes {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def size(self) -> int:
        return int(np.prod(self.r))

    @property
    def is_binary(self) -> bool:
        return all(x == 2 for x in self.r)

    @property
    def top(self) -> IndexVector:
        return self.r

    def indices(self) -> Iterator[IndexVector]:
        """All index vectors in lexicographic order."""
        return product(*(range(1, x + 1) for x in self.r))

    def indices_with_support(self, mask: int) -> Iterator[IndexVector]:
        """Index vectors whose support is exactly ``mask``."""
        ranges = []
        for l, x in enumerate(self.r):
            ranges.append(range(1, x) if mask >> l & 1 else (x,))
        return product(*ranges)

    def __str__(self) -> str:
        return ",".join(map(str, self.r))


def support(i: Sequence[int], shape: StateShape) -> int:
    """Bitmask of the variables whose state is below the maximum."""
    m = 0
    for l, (v, x) in enumerate(zip(i, shape.r)):
        if v != x:
            m |= 1 << l
    return m


def restrict_index(i: Sequence[int], mask: int, shape: StateShape) -> IndexVector:
    """Keep ``i`` on ``mask``, send every other coordinate to its maximum."""
    return tuple(v if mask >> l & 1 else x for l, (v, x) in enumerate(zip(i, shape.r)))


def index_label(i: Sequence[int], shape: StateShape) -> str:
    """``q_134`` style labels for binary shapes, full indices otherwise."""
    if shape.is_binary:
        s = support(i, shape)
        if not s:
            return "q"
        els = elements_of(s)
        if shape.n <= 9:
            return "q_" + "".join(map(str, els))
        return "q_{" + ",".join(map(str, els)) + "}"
    if max(shape.r) <= 9:
        return "q_" + "".join(map(str, i))
    return "q_{" + ",".join(map(str, i)) + "}"


def parse_index_label(label: str, shape: StateShape) -> IndexVector:
    """Inverse of :func:`index_label`."""
    s = label.strip()
    if shape.is_binary:
        if s == "q":
            return shape.top
        if not s.startswith("q_"):
            raise ValueError(f"unknown column label {label!r}")
        body = s[2:]
        if body.startswith("{"):
            els = [int(x) for x in body.strip("{}").split(",")]
        else:
            els = [int(c) for c in body]
        if any(not 1 <= v <= shape.n for v in els):
            raise ValueError(f"unknown column label {label!r}")
        return tuple(1 if (l + 1) in els else 2 for l in range(shape.n))
    if not s.startswith("q_"):
        raise ValueError(f"unknown column label {label!r}")
    body = s[2:]
    if body.startswith("{"):
        vals = tuple(int(x) for x in body.strip("{}").split(","))
    else:
        vals = tuple(int(c) for c in body)
    if len(vals) != shape.n or any(not 1 <= v <= x for v, x in zip(vals, shape.r)):
        raise ValueError(f"unknown column label {label!r}")
    return vals


def columns_in_order(shape: StateShape) -> list[IndexVector]:
    """Index vectors sorted by support size, then support, then index."""

    def key(i):
        s = support(i, shape)
        return (popcount(s), elements_of(s), i)

    return sorted(shape.indices(), key=key)


def zeros(shape: StateShape) -> np.ndarray:
    arr = np.empty(shape.r, dtype=object)
    arr.fill(Fraction(0))
    return arr


def tensor_from(values, shape: StateShape) -> np.ndarray:
    arr = np.empty(shape.r, dtype=object)
    flat = [Fraction(v) for v in np.asarray(values, dtype=object).ravel()]
    if len(flat) != shape.size:
        raise ValueError("value count does not match shape")
    for k, v in enumerate(flat):
        arr.flat[k] = v
    return arr


def at(T: np.ndarray, i: Sequence[int]):
    return T[tuple(v - 1 for v in i)]


def prob_to_cdf(P: np.ndarray) -> np.ndarray:
    """``q_i = sum_{j <= i} p_j`` under the componentwise order."""
    Q = np.array(P, dtype=object)
    for axis in range(Q.ndim):
        Q = np.cumsum(Q, axis=axis, dtype=object)
    return Q


def cdf_to_prob(Q: np.ndarray) -> np.ndarray:
    """Mobius inversion on the product of chains.

    The Mobius function of a chain is 1 on the diagonal and -1 one step
    down, so inversion is a first difference along every axis.
    """
    P = np.array(Q, dtype=object)
    for axis in range(P.ndim):
        lead = np.take(P, [0], axis=axis)
        P = np.concatenate([lead, np.diff(P, axis=axis)], axis=axis)
    return P


def is_distribution(P: np.ndarray) -> bool:
    flat = list(P.ravel())
    return all(p >= 0 for p in flat) and sum(flat) == 1
