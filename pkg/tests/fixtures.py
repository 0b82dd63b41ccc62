"""Shared small algebras and presentations for the test suite."""

from dqlab.exactlin import QQ
from dqlab.algebra import FinDimAlgebra, Idempotent
from dqlab.quiver import Quiver, QuiverPresentation, build_algebra


def base_field_algebra():
    return FinDimAlgebra(QQ, ["1"], [[[1]]], [1])


def truncated_polynomial_algebra(n, var="y"):
    labels = ["1"] + [f"{var}^{k}" if k > 1 else var for k in range(1, n)]
    mul = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            if i + j < n:
                v[i + j] = 1
            row.append(v)
        mul.append(row)
    return FinDimAlgebra(QQ, labels, mul, [1] + [0] * (n - 1))


def matrix_algebra_2x2():
    labels = ["E11", "E12", "E21", "E22"]
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    pos = {v: k for k, v in idx.items()}
    mul = []
    for i in range(4):
        row = []
        ai, aj = pos[i]
        for j in range(4):
            bi, bj = pos[j]
            v = [0, 0, 0, 0]
            if aj == bi:
                v[idx[(ai, bj)]] = 1
            row.append(v)
        mul.append(row)
    return FinDimAlgebra(QQ, labels, mul, [1, 0, 0, 1])


def product_algebra_k_times_k():
    mul = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    return FinDimAlgebra(QQ, ["u", "v"], mul, [1, 1])


def three_cycle_presentation(bound=6):
    q = Quiver(3, [("x", 1, 2), ("w", 2, 1), ("y", 2, 3), ("z", 3, 1)])
    rels = ["w - y*z", "x*y*z", "y*z*x", "z*x*y"]
    return QuiverPresentation(q, rels, bound)


def three_cycle_algebra(bound=6):
    return build_algebra(three_cycle_presentation(bound))


def flop_presentation(bound=8):
    q = Quiver(2, [
        ("a", 1, 2), ("b", 1, 2), ("s", 2, 1), ("t", 2, 1),
        ("m", 1, 1), ("n", 2, 2),
    ])
    rels = [
        "a*n - m*a",
        "b*n - m*b",
        "n*s - s*m",
        "n*t - t*m",
        "a*t - (b*s)^2 - m^3",
        "t*a - (s*b)^2 - n^3",
    ]
    return QuiverPresentation(q, rels, bound)


def unit_idempotent(a):
    return Idempotent(a.unit_element())


def zero_idempotent(a):
    return Idempotent(a.element([0] * a.dim))
