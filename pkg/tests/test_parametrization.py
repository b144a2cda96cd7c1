from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from mimodels.closure import StatementSet, closure
from mimodels.equations import evaluate_quad, maximal_equations, minor_equations
from mimodels.parametrization import (
    binomial_in_kernel,
    check_model,
    evaluate_parametrization,
    generic_parameters,
    minimal_non_members,
    param_matrix,
    random_parameters,
)
from mimodels.tensors import StateShape, cdf_to_prob, is_distribution, prob_to_cdf

B4 = StateShape.binary(4)

EXPECTED_COLUMNS = ["q", "q_1", "q_2", "q_3", "q_4", "q_12", "q_13", "q_14", "q_23", "q_24", "q_34",
                    "q_123", "q_124", "q_134", "q_234", "q_1234"]
EXPECTED_ROWS = {
    "t": "1111111111111111",
    "theta^(1)": "0100011100011101",
    "theta^(2)": "0010010011011011",
    "theta^(3)": "0001001010010000",
    "theta^(4)": "0000100101001000",
    "theta^(34)": "0000000000100111",
}

# homogenized factorization binomials and extra kernel elements for 1|2|34
KERNEL = [
    ("q_1 q_2", "q q_12"), ("q_1 q_3", "q q_13"), ("q_1 q_4", "q q_14"), ("q_2 q_3", "q q_23"),
    ("q_2 q_4", "q q_24"), ("q_1 q_34", "q q_134"), ("q_2 q_34", "q q_234"), ("q_1 q_23", "q q_123"),
    ("q_2 q_13", "q q_123"), ("q_3 q_12", "q q_123"), ("q_1 q_24", "q q_124"), ("q_2 q_14", "q q_124"),
    ("q_4 q_12", "q q_124"), ("q_1 q_234", "q q_1234"), ("q_2 q_134", "q q_1234"), ("q_12 q_34", "q q_1234"),
    ("q_134 q_234", "q_34 q_1234"), ("q_124 q_234", "q_24 q_1234"), ("q_123 q_234", "q_23 q_1234"),
    ("q_14 q_234", "q_4 q_1234"),
]


def ideal(text, n=4):
    return closure(StatementSet.parse(text, n))


def test_three_block_matrix():
    A = param_matrix(ideal("1|2|34"), B4)
    assert A.column_labels == EXPECTED_COLUMNS
    assert A.row_labels == list(EXPECTED_ROWS)
    for row, bits in zip(A.matrix, EXPECTED_ROWS.values()):
        assert "".join(str(int(x)) for x in row) == bits
    assert A.matrix.shape == (6, 16)


def test_matrix_outputs():
    A = param_matrix(ideal("1|2|34"), B4)
    lines = A.to_csv().splitlines()
    assert lines[0] == "," + ",".join(EXPECTED_COLUMNS)
    assert lines[1] == "t," + ",".join("1" * 16)
    assert A.to_plain().splitlines()[5] == " ".join(EXPECTED_ROWS["theta^(34)"])
    js = A.to_json()
    assert js["rows"][0] == "t" and len(js["matrix"]) == 6
    assert list(A.column("q_34")) == [1, 0, 0, 0, 0, 1]
    with pytest.raises(KeyError):
        A.column((1, 1, 1))


@pytest.mark.parametrize("plus,minus", KERNEL)
def test_kernel_binomials(plus, minus):
    A = param_matrix(ideal("1|2|34"), B4)
    assert binomial_in_kernel(A, plus.split(), minus.split())


def test_non_kernel_binomial():
    A = param_matrix(ideal("1|2|34"), B4)
    assert not binomial_in_kernel(A, ["q_1", "q_2"], ["q_1", "q_3"])


def test_empty_ideal_two_variables():
    A = param_matrix(ideal("", 2), StateShape.binary(2))
    assert A.row_labels == ["t", "theta^(1)", "theta^(2)", "theta^(12)"]
    assert A.matrix.tolist() == [[1, 1, 1, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_general_shape_rows():
    shape = StateShape((2, 3))
    A = param_matrix(ideal("1|2", 2), shape)
    assert A.row_labels == ["t", "theta^(1)_1", "theta^(2)_1", "theta^(2)_2"]
    # q_{1,2} = t theta^(1)_1 theta^(2)_2
    assert list(A.column((1, 2))) == [1, 1, 0, 1]
    assert list(A.column((2, 3))) == [1, 0, 0, 0]


def test_all_ones_gives_point_mass_cdf():
    A = param_matrix(ideal("1|23"), B4)
    Q = evaluate_parametrization(A, [1] * len(A.rows))
    assert all(q == 1 for q in Q.ravel())


@pytest.mark.parametrize("gens", ["", "1|2", "1|2|34", "12|34", "1|2|3|4"])
def test_fair_coins(gens):
    A = param_matrix(ideal(gens), B4)
    theta = {}
    for key, lab in zip(A.rows, A.row_labels):
        theta[lab] = 1 if key == ("t",) else Fraction(1, 2 ** bin(key[0]).count("1"))
    Q = evaluate_parametrization(A, theta)
    P = cdf_to_prob(Q)
    assert all(p == Fraction(1, 16) for p in P.ravel())


def test_parameter_validation():
    A = param_matrix(ideal("1|2"), B4)
    with pytest.raises(ValueError):
        evaluate_parametrization(A, [1] * (len(A.rows) - 1))
    with pytest.raises(ValueError):
        evaluate_parametrization(A, [1] * (len(A.rows) - 1) + [0])
    with pytest.raises(KeyError):
        evaluate_parametrization(A, {"t": 1})


@pytest.mark.parametrize("shape", [B4, StateShape((2, 3, 2)), StateShape((3, 3))])
def test_points_satisfy_equations(shape):
    rng = random.Random(5)
    n = shape.n
    gens = {4: "1|2|34,13|4", 3: "1|23", 2: "1|2"}[n]
    I = ideal(gens, n)
    A = param_matrix(I, shape)
    for _ in range(3):
        Q = evaluate_parametrization(A, random_parameters(A, rng))
        for f in maximal_equations(I, shape):
            assert f.evaluate(Q) == 0
        for p in I:
            for m in minor_equations(p, shape):
                assert evaluate_quad(m, Q) == 0


@pytest.mark.parametrize("shape", [B4, StateShape((2, 3, 3)), StateShape((3, 3))])
def test_generic_point_is_interior(shape):
    rng = random.Random(9)
    n = shape.n
    for gens in ["", "|".join(str(v) for v in range(1, n + 1))]:
        A = param_matrix(ideal(gens, n), shape)
        P = cdf_to_prob(evaluate_parametrization(A, generic_parameters(A, rng)))
        assert is_distribution(P)
        assert all(p > 0 for p in P.ravel())


def test_minimal_non_members():
    # 12|3 and 13|2 lie above 2|3, and 1|2|3 above all of them
    assert [str(p) for p in minimal_non_members(ideal("1|23", 3))] == ["2|3"]
    assert {str(p) for p in minimal_non_members(ideal("", 3))} == {"1|2", "1|3", "2|3"}


@pytest.mark.parametrize("gens", ["1|2", "1|23", "1|2,1|3,2|3", "1|234,2|3", "12|34", "1|2|3|4"])
def test_check_model(gens):
    report = check_model(ideal(gens), B4, seed=1, draws=3)
    assert report.ok, report
    assert report.equations_checked > 0


def test_check_model_general_shape():
    report = check_model(ideal("1|23", 3), StateShape((2, 3, 2)), seed=2, draws=2)
    assert report.ok


def test_uniform_product_lies_in_full_independence_model():
    # built without the parametrization
    P = np.empty((2, 2, 2, 2), dtype=object)
    for i in product(range(2), repeat=4):
        P[i] = Fraction(1, 16)
    Q = prob_to_cdf(P)
    I = ideal("1|2|3|4")
    assert all(f.evaluate(Q) == 0 for f in maximal_equations(I, B4))


def test_quadric_count_of_three_block_kernel():
    # no linear forms vanish, so dim of the degree-2 part of the kernel is the
    # number of minimal quadric generators: monomials minus distinct images
    A = param_matrix(ideal("1|2|34"), B4)
    cols = [tuple(A.matrix[:, j]) for j in range(A.matrix.shape[1])]
    pairs = [(i, j) for i in range(16) for j in range(i, 16)]
    images = {tuple(a + b for a, b in zip(cols[i], cols[j])) for i, j in pairs}
    assert len(pairs) - len(images) == 46
