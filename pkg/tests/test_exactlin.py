import random
from fractions import Fraction

import pytest

from dqlab.exactlin import (
    QQ, PrimeField, Mat, Subspace, rref, rank, kernel_basis, quotient_dim,
    solve_in_span,
)
from dqlab.errors import NotContained
from dqlab import _intelim


def mat_q(rows):
    return Mat.from_int_rows(QQ, rows)


def test_rref_identity():
    m = Mat.identity(QQ, 3)
    assert rref(m) == m


def test_rref_rank_one_symmetric():
    m = mat_q([[1, 1], [1, 1]])
    assert rref(m) == mat_q([[1, 1], [0, 0]])


def test_rref_scaling_normalization():
    m = mat_q([[2, 4]])
    assert rref(m) == mat_q([[1, 2]])


def test_rref_idempotent_random():
    rng = random.Random(7)
    for _ in range(25):
        r = rng.randint(1, 6)
        c = rng.randint(1, 6)
        m = mat_q([[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)])
        first = rref(m)
        assert rref(first) == first


def test_kernel_injective():
    assert kernel_basis(Mat.identity(QQ, 2)).dim == 0


def test_kernel_zero_map():
    k = kernel_basis(Mat.zero(QQ, 2, 3))
    assert k.dim == 3
    assert k == Subspace.from_spanning_rows(QQ, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_kernel_char_two():
    F2 = PrimeField(2)
    m = Mat.from_int_rows(F2, [[1, 1], [1, 1]])
    k = kernel_basis(m)
    assert k.dim == 1
    assert k.contains([1, 1])


def test_rank_nullity_random():
    rng = random.Random(11)
    for _ in range(40):
        r = rng.randint(1, 7)
        c = rng.randint(1, 7)
        m = mat_q([[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)])
        assert rank(m) + kernel_basis(m).dim == c


def test_rank_agrees_mod_p_random():
    # reduction mod p preserves rank when p divides no pivot denominator or
    # leading minor; with entries in {-2..2} and p large that is generic
    rng = random.Random(13)
    p = 1000003
    Fp = PrimeField(p)
    for _ in range(30):
        r = rng.randint(1, 6)
        c = rng.randint(1, 6)
        rows = [[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)]
        rk_q = rank(mat_q(rows))
        rk_p = rank(Mat.from_int_rows(Fp, rows))
        assert rk_p <= rk_q
        # over a large prime with tiny entries the ranks agree in practice
        assert rk_p == rk_q


def test_quotient_dim_full_vs_zero():
    big = Subspace.from_spanning_rows(QQ, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    small = Subspace.zero(QQ, 3)
    assert quotient_dim(big, small) == 3


def test_quotient_dim_equal():
    v = Subspace.from_spanning_rows(QQ, 2, [[1, 2], [0, 1]])
    assert quotient_dim(v, v) == 0


def test_quotient_dim_line_in_plane():
    big = Subspace.from_spanning_rows(QQ, 2, [[1, 0], [0, 1]])
    small = Subspace.from_spanning_rows(QQ, 2, [[1, 1]])
    assert quotient_dim(big, small) == 1


def test_quotient_dim_not_contained():
    big = Subspace.from_spanning_rows(QQ, 2, [[1, 0]])
    small = Subspace.from_spanning_rows(QQ, 2, [[0, 1]])
    with pytest.raises(NotContained):
        quotient_dim(big, small)


def test_subspace_canonical_equality():
    a = Subspace.from_spanning_rows(QQ, 3, [[1, 1, 0], [0, 2, 2]])
    b = Subspace.from_spanning_rows(QQ, 3, [[2, 2, 0], [1, 2, 1]])
    assert a == b
    assert a.basis.entries == b.basis.entries


def test_solve_in_span():
    rows = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]
    c = solve_in_span(QQ, rows, [Fraction(2), Fraction(5)])
    assert c == [Fraction(2), Fraction(1)]
    assert solve_in_span(QQ, [[Fraction(1), Fraction(0)]], [Fraction(0), Fraction(1)]) is None


def test_intelim_rank_matches_exactlin_random():
    rng = random.Random(5)
    for _ in range(40):
        r = rng.randint(1, 8)
        c = rng.randint(1, 8)
        rows = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)]
        cols = []
        for j in range(c):
            cols.append({i: rows[i][j] for i in range(r) if rows[i][j]})
        assert _intelim.rank_of_columns(QQ, cols, r) == rank(mat_q(rows))


def test_intelim_kernel_matches_exactlin_random():
    rng = random.Random(17)
    for _ in range(30):
        r = rng.randint(1, 7)
        c = rng.randint(1, 7)
        rows = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)]
        cols = [{i: rows[i][j] for i in range(r) if rows[i][j]} for j in range(c)]
        kern = _intelim.kernel_of_columns(QQ, cols, r)
        assert len(kern) == kernel_basis(mat_q(rows)).dim
        for v in kern:
            image = [sum(rows[i][j] * v[j] for j in range(c)) for i in range(r)]
            assert all(x == 0 for x in image)
