"""Monomial parametrization of a model in cdf coordinates.

Rows of the parametrization matrix are the parameters ``t`` and
``theta^(C)_l`` (``C`` connected, ``l`` a state vector on ``C`` below the
top); columns are index vectors. Column ``i`` holds a 1 for ``t`` and for
each maximal connected piece of ``supp(i)``.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .closure import SplitClosedIdeal
from .equations import (
    connected_masks,
    decomposition_table,
    evaluate_quad,
    maximal_equations,
    minor_equations,
)
from .partitions import Partition, elements_of, enumerate_partitions, leq
from .tensors import (
    IndexVector,
    StateShape,
    cdf_to_prob,
    columns_in_order,
    index_label,
    is_distribution,
    parse_index_label,
    support,
)

RowKey = tuple  # ("t",) or (connected mask, state tuple on that set)


def _row_label(key: RowKey, shape: StateShape) -> str:
    if key == ("t",):
        return "t"
    mask, states = key
    els = elements_of(mask)
    name = "".join(map(str, els)) if shape.n <= 9 else ",".join(map(str, els))
    if shape.is_binary:
        return f"theta^({name})"
    sub = "".join(map(str, states)) if max(shape.r) <= 9 else ",".join(map(str, states))
    return f"theta^({name})_{sub}"


@dataclass(frozen=True)
class ParamMatrix:
    shape: StateShape
    rows: tuple[RowKey, ...]
    columns: tuple[IndexVector, ...]
    matrix: np.ndarray = field(compare=False, repr=False)

    @property
    def row_labels(self) -> list[str]:
        return [_row_label(k, self.shape) for k in self.rows]

    @property
    def column_labels(self) -> list[str]:
        return [index_label(i, self.shape) for i in self.columns]

    def column(self, i: Union[str, Sequence[int]]) -> np.ndarray:
        idx = self._col_index(i)
        return self.matrix[:, idx]

    def _col_index(self, i) -> int:
        if isinstance(i, str):
            vec = parse_index_label(i, self.shape)
        else:
            vec = tuple(i)
        try:
            return self.columns.index(vec)
        except ValueError:
            raise KeyError(f"unknown column {i!r}") from None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + self.column_labels)
        for label, row in zip(self.row_labels, self.matrix):
            w.writerow([label] + [int(x) for x in row])
        return buf.getvalue()

    def to_plain(self) -> str:
        """Bare integer block, one row per line, for pasting into a CAS."""
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.matrix) + "\n"

    def to_json(self) -> dict:
        return {
            "rows": self.row_labels,
            "columns": self.column_labels,
            "matrix": [[int(x) for x in row] for row in self.matrix],
        }


def param_matrix(I: SplitClosedIdeal, shape: StateShape) -> ParamMatrix:
    if shape.n != I.n:
        raise ValueError(f"shape has {shape.n} variables, ideal has n={I.n}")
    rows: list[RowKey] = [("t",)]
    for c in connected_masks(I):
        vars_ = [v - 1 for v in elements_of(c)]
        for states in product(*(range(1, shape.r[v]) for v in vars_)):
            rows.append((c, states))
    row_at = {k: j for j, k in enumerate(rows)}
    cols = columns_in_order(shape)
    table = decomposition_table(I)
    A = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for k, i in enumerate(cols):
        A[0, k] = 1
        for b in table[support(i, shape)]:
            states = tuple(i[v - 1] for v in elements_of(b))
            A[row_at[(b, states)], k] = 1
    return ParamMatrix(shape, tuple(rows), tuple(cols), A)


def evaluate_parametrization(A: ParamMatrix, theta: Union[Mapping, Sequence]) -> np.ndarray:
    """Cdf tensor ``q_i = prod_rows theta_row ** A[row, i]``.

    ``theta`` is a sequence aligned with ``A.rows`` or a mapping keyed by row
    key or row label.
    """
    if isinstance(theta, Mapping):
        labels = A.row_labels
        vals = []
        for key, lab in zip(A.rows, labels):
            if key in theta:
                vals.append(Fraction(theta[key]))
            elif lab in theta:
                vals.append(Fraction(theta[lab]))
            else:
                raise KeyError(f"missing parameter {lab}")
    else:
        vals = [Fraction(v) for v in theta]
        if len(vals) != len(A.rows):
            raise ValueError(f"expected {len(A.rows)} parameters, got {len(vals)}")
    for lab, v in zip(A.row_labels, vals):
        if v <= 0:
            raise ValueError(f"parameter {lab} must be positive, got {v}")
    Q = np.empty(A.shape.r, dtype=object)
    for k, i in enumerate(A.columns):
        q = Fraction(1)
        for j in np.nonzero(A.matrix[:, k])[0]:
            q *= vals[j] ** int(A.matrix[j, k])
        Q[tuple(v - 1 for v in i)] = q
    return Q


def binomial_in_kernel(A: ParamMatrix, mono_plus: Iterable, mono_minus: Iterable) -> bool:
    """True iff the two monomials have the same image under the parametrization.

    Monomials are multisets of column labels (``"q_134"``) or index vectors.
    """
    lhs = sum((A.column(c) for c in mono_plus), np.zeros(len(A.rows), dtype=np.int64))
    rhs = sum((A.column(c) for c in mono_minus), np.zeros(len(A.rows), dtype=np.int64))
    return bool(np.array_equal(lhs, rhs))


# --- generic points -----------------------------------------------------


def _random_unit(rng: random.Random, denom: int = 97) -> Fraction:
    return Fraction(rng.randint(-denom, denom), denom)


def random_parameters(A: ParamMatrix, rng: random.Random, max_denominator: int = 30) -> list[Fraction]:
    """``t = 1`` and each theta a random rational in (0, 1)."""
    vals = [Fraction(1)]
    for _ in A.rows[1:]:
        d = rng.randint(2, max_denominator)
        vals.append(Fraction(rng.randint(1, d - 1), d))
    return vals


def generic_parameters(A: ParamMatrix, rng: random.Random) -> list[Fraction]:
    """Parameters of a random point close to the uniform distribution.

    Each theta starts at the uniform-marginal cdf value ``prod l_v / r_v``
    (strictly increasing in every ``l_v``) and is scaled by ``1 + eps*delta``
    with ``|delta| <= 1``. ``eps`` is small enough that Mobius inversion
    stays strictly positive, so the point is an interior distribution.
    """
    shape = A.shape
    n = shape.n
    eps = Fraction(1, (1 << (n + 2)) * n * shape.size)
    vals = [Fraction(1)]
    for mask, states in A.rows[1:]:
        base = Fraction(1)
        for v, l in zip(elements_of(mask), states):
            base *= Fraction(l, shape.r[v - 1])
        vals.append(base * (1 + eps * _random_unit(rng)))
    return vals


def minimal_non_members(I: SplitClosedIdeal) -> list[Partition]:
    """Minimal statements outside ``I``."""
    outside = [p for p in enumerate_partitions(I.n, 2) if p not in I.elements]
    return [p for p in outside if not any(q != p and leq(q, p) for q in outside)]


@dataclass
class ModelCheck:
    equations_checked: int = 0
    nonzero_equations: list[str] = field(default_factory=list)
    distribution_ok: bool = True
    witnesses: dict[str, str] = field(default_factory=dict)
    missing_witnesses: list[str] = field(default_factory=list)
    retries: int = 0

    @property
    def ok(self) -> bool:
        return not self.nonzero_equations and self.distribution_ok and not self.missing_witnesses


def check_vanishing(I: SplitClosedIdeal, shape: StateShape, Q: np.ndarray, report: ModelCheck,
                    equations=None, minors=None) -> None:
    eqs = maximal_equations(I, shape) if equations is None else equations
    for f in eqs:
        report.equations_checked += 1
        if f.evaluate(Q) != 0:
            report.nonzero_equations.append(f.to_text(shape))
    if minors is None:
        minors = [m for p in I for m in minor_equations(p, shape)]
    for m in minors:
        report.equations_checked += 1
        if evaluate_quad(m, Q) != 0:
            report.nonzero_equations.append(m.to_text(shape))


def check_model(I: SplitClosedIdeal, shape: StateShape, seed: int = 0, draws: int = 10,
                max_retries: int = 16) -> ModelCheck:
    """Sample the parametrization and test that it realizes exactly ``I``.

    Every draw must satisfy all factorization equations and all minors of
    ``Q_pi`` for ``pi`` in ``I``. One generic point must map to a genuine
    distribution and break each minimal statement outside ``I``, resampling
    up to ``max_retries`` times on accidental vanishing.
    """
    rng = random.Random(seed)
    A = param_matrix(I, shape)
    report = ModelCheck()
    eqs = maximal_equations(I, shape)
    minors = [m for p in I for m in minor_equations(p, shape)]
    for _ in range(draws):
        Q = evaluate_parametrization(A, random_parameters(A, rng))
        check_vanishing(I, shape, Q, report, eqs, minors)

    pending = {str(p): p for p in minimal_non_members(I)}
    for attempt in range(max_retries + 1):
        Q = evaluate_parametrization(A, generic_parameters(A, rng))
        check_vanishing(I, shape, Q, report, eqs, minors)
        if not is_distribution(cdf_to_prob(Q)):
            report.distribution_ok = False
        for name, p in list(pending.items()):
            for m in minor_equations(p, shape):
                if evaluate_quad(m, Q) != 0:
                    report.witnesses[name] = m.to_text(shape)
                    del pending[name]
                    break
        if not pending:
            break
        report.retries = attempt + 1
    report.missing_witnesses = sorted(pending)
    return report
