"""Dimension and degree of the projective toric variety of a parametrization.

The degree is the normalized volume of the convex hull of the matrix
columns, measured in the lattice the columns generate. Volumes come from a
placing triangulation in exact integer arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .parametrization import ParamMatrix

Vector = tuple[int, ...]


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(map(int, row)) for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def lattice_basis(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-echelon basis of the integer lattice spanned by ``vectors``."""
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return []
    width = len(rows[0])
    basis = []
    col = 0
    while rows and col < width:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        # Euclid on the column until one row keeps a nonzero entry
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                red = [x - q * y for x, y in zip(r, piv)]
                if red[col] != 0:
                    nxt.append(red)
                elif any(red):
                    rows.append(red)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = [r for r in rows if r[col] == 0 and any(r)]
        col += 1
    return basis


def lattice_coordinates(v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int]:
    """Coordinates of ``v`` in an echelon basis; raises if ``v`` is not in the lattice."""
    rem = list(map(int, v))
    coords = []
    for b in basis:
        col = next(k for k, x in enumerate(b) if x != 0)
        q, r = divmod(rem[col], b[col])
        if r:
            raise ValueError("vector is not in the lattice")
        coords.append(q)
        rem = [x - q * y for x, y in zip(rem, b)]
    if any(rem):
        raise ValueError("vector is not in the lattice")
    return coords


def integer_rank(M: Sequence[Sequence[int]]) -> int:
    return len(lattice_basis([list(r) for r in M]))


@dataclass(frozen=True)
class LatticePolytope:
    points: tuple[Vector, ...]

    @classmethod
    def from_points(cls, pts) -> "LatticePolytope":
        seen = {}
        for p in pts:
            seen.setdefault(tuple(int(x) for x in p), None)
        if len({len(p) for p in seen}) > 1:
            raise ValueError("points have different lengths")
        return cls(tuple(seen))

    @classmethod
    def of_matrix(cls, A: ParamMatrix) -> "LatticePolytope":
        """Columns of ``A`` with the constant ``t`` row dropped."""
        return cls.from_points(A.matrix[1:, :].T.tolist())

    def affine_coordinates(self) -> tuple[int, list[list[int]]]:
        """Dimension and coordinates of every point in the affine lattice they span.

        The first point is the origin; the lattice generated by the
        differences becomes ``Z^d``.
        """
        p0 = self.points[0]
        diffs = [[a - b for a, b in zip(p, p0)] for p in self.points]
        basis = lattice_basis(diffs)
        return len(basis), [lattice_coordinates(d, basis) for d in diffs]

    @property
    def dimension(self) -> int:
        return self.affine_coordinates()[0]

    def normalized_volume(self, order: Optional[Sequence[int]] = None) -> int:
        if len(self.points) == 1:
            return 1
        d, coords = self.affine_coordinates()
        if d == 0:
            return 1
        seq = list(range(len(coords))) if order is None else list(order)
        simplices = placing_triangulation([coords[k] for k in seq])
        return sum(abs(_simplex_det([coords[seq[k]] for k in s])) for s in simplices)


def _simplex_det(verts: Sequence[Sequence[int]]) -> int:
    base = verts[0]
    return det_int([[a - b for a, b in zip(v, base)] for v in verts[1:]])


def _orientation(facet: Sequence[Sequence[int]], x: Sequence[int]) -> int:
    d = _simplex_det(list(facet) + [x])
    return (d > 0) - (d < 0)


def placing_triangulation(points: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Triangulate full-dimensional integer points inserted in the given order.

    The first affinely independent ``d + 1`` points (greedily, in order)
    form the starting simplex. Each later point is joined to every boundary
    facet it sees strictly from outside.
    """
    pts = [list(p) for p in points]
    d = len(pts[0])
    start: list[int] = [0]
    for k in range(1, len(pts)):
        trial = start + [k]
        diffs = [[a - b for a, b in zip(pts[j], pts[start[0]])] for j in trial[1:]]
        if integer_rank(diffs) == len(trial) - 1:
            start = trial
        if len(start) == d + 1:
            break
    if len(start) != d + 1:
        raise ValueError("points are not full-dimensional")
    simplices = [tuple(start)]
    for k in range(len(pts)):
        if k in start:
            continue
        count: dict[tuple[int, ...], list] = {}
        for s in simplices:
            for drop in range(d + 1):
                facet = tuple(sorted(s[:drop] + s[drop + 1 :]))
                count.setdefault(facet, []).append(s[drop])
        new = []
        for facet, opposite in count.items():
            if len(opposite) != 1:
                continue
            fpts = [pts[j] for j in facet]
            side_in = _orientation(fpts, pts[opposite[0]])
            side_new = _orientation(fpts, pts[k])
            if side_new != 0 and side_new == -side_in:
                new.append(facet + (k,))
        simplices.extend(new)
    return simplices


def projective_dimension(A: ParamMatrix) -> int:
    return integer_rank(A.matrix.tolist()) - 1


def toric_degree(A: ParamMatrix, shuffle_seed: Optional[int] = None) -> int:
    """Normalized lattice volume of the column polytope of ``A``.

    ``shuffle_seed`` randomizes the insertion order; the value does not
    depend on it.
    """
    poly = LatticePolytope.of_matrix(A)
    order = None
    if shuffle_seed is not None:
        order = list(range(len(poly.points)))
        random.Random(shuffle_seed).shuffle(order)
    return poly.normalized_volume(order)


def geometry(A: ParamMatrix) -> dict:
    return {
        "dimension": projective_dimension(A),
        "degree": toric_degree(A),
        "num_columns": int(A.matrix.shape[1]),
        "num_rows": int(A.matrix.shape[0]),
    }
