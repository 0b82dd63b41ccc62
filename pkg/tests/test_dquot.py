from fractions import Fraction

import pytest

from dqlab.exactlin import QQ
from dqlab.algebra import Idempotent, cornering, two_sided_ideal, quotient_algebra
from dqlab.quiver import build_algebra, vertex_idempotent
from dqlab.dquot import (
    bar_truncation, cohomology, h_minus_one_kernel, tor_oracle,
    ae_module, ea_module, hochschild_zero_experimental,
    find_periodicity_element,
)
from dqlab.errors import (
    WindowExceedsDepth, DimensionBlowup, NoPeriodicityClass, NotLocal,
)

from fixtures import (
    base_field_algebra, truncated_polynomial_algebra, matrix_algebra_2x2,
    product_algebra_k_times_k, three_cycle_presentation, three_cycle_algebra,
    unit_idempotent, zero_idempotent,
)


def test_bar_zero_idempotent_kills_negative_degrees():
    a = matrix_algebra_2x2()
    bar = bar_truncation(a, zero_idempotent(a), depth=4)
    assert [bar.piece_dim(n) for n in range(5)] == [4, 0, 0, 0, 0]


def test_bar_unit_on_base_field_alternates():
    # A = k, e = 1: every piece is k and the differential alternates 0, id
    a = base_field_algebra()
    bar = bar_truncation(a, unit_idempotent(a), depth=5)
    assert [bar.piece_dim(n) for n in range(6)] == [1] * 6
    # d^-1(1 (x) 1) = 1; d^-2 = 1-1 = 0; d^-3 has three terms = 1; ...
    for n in range(1, 6):
        col = bar.full_diff[n][0]
        total = sum(col.values()) if col else 0
        assert total == (1 if n % 2 == 1 else 0)


def test_bar_piece_dimension_formula():
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    bar = bar_truncation(pba.algebra, e, depth=3)
    # dim Ae = dim eA = 6, dim R = 4
    assert bar.nU == 6 and bar.nW == 6 and bar.nV == 4
    assert bar.piece_dim(1) == 36
    assert bar.piece_dim(2) == 6 * 4 * 6
    assert bar.piece_dim(3) == 6 * 16 * 6


def test_bar_dimension_cap():
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    with pytest.raises(DimensionBlowup):
        bar_truncation(pba.algebra, e, depth=3, piece_cap=100)


def test_window_exceeds_depth():
    a = base_field_algebra()
    bar = bar_truncation(a, unit_idempotent(a), depth=3)
    with pytest.raises(WindowExceedsDepth):
        cohomology(bar, 3)


def test_unit_idempotent_gives_acyclic():
    # derived quotient by the unit ideal is acyclic
    for a in (base_field_algebra(), matrix_algebra_2x2(),
              truncated_polynomial_algebra(3)):
        bar = bar_truncation(a, unit_idempotent(a), depth=5)
        rep = cohomology(bar, 4)
        assert all(rep.dim(j) == 0 for j in rep.degrees)


def test_zero_idempotent_gives_algebra_in_degree_zero():
    a = truncated_polynomial_algebra(3)
    bar = bar_truncation(a, zero_idempotent(a), depth=4)
    rep = cohomology(bar, 3)
    assert rep.dim(0) == 3
    assert all(rep.dim(j) == 0 for j in rep.degrees if j < 0)
    assert rep.h0_matches_quotient


def test_three_cycle_cohomology():
    # checked against the formula H^0 = A/AeA, H^-1 = ker(Ae (x)_R eA -> A),
    # H^-j = Tor_(j-1) for j >= 2; here Ae and eA are projective over R,
    # so everything below degree -1 vanishes and the kernel is 1-dimensional.
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    bar = bar_truncation(pba.algebra, e, depth=5)
    rep = cohomology(bar, 4)
    assert rep.dim(0) == 1
    assert rep.dim(-1) == 1
    assert rep.dim(-2) == 0
    assert rep.dim(-3) == 0
    assert rep.h0_matches_quotient


def test_three_cycle_h_minus_one_kernel_matches():
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    kern = h_minus_one_kernel(pba.algebra, e)
    bar = bar_truncation(pba.algebra, e, depth=3)
    rep = cohomology(bar, 2)
    assert kern.dim == rep.dim(-1) == 1


def test_h_minus_one_kernel_matrix_algebra():
    a = matrix_algebra_2x2()
    e = Idempotent(a.element([1, 0, 0, 0]))
    assert h_minus_one_kernel(a, e).dim == 0


def test_h_minus_one_kernel_zero_idempotent():
    a = matrix_algebra_2x2()
    assert h_minus_one_kernel(a, zero_idempotent(a)).dim == 0


def test_tor_oracle_semisimple_base():
    # R = k: everything is projective, Tor vanishes in positive degrees
    a = matrix_algebra_2x2()
    e = Idempotent(a.element([1, 0, 0, 0]))
    corner, incl = cornering(a, e)
    assert corner.dim == 1
    right = ae_module(a, e, corner, incl)
    left = ea_module(a, e, corner, incl)
    for n in (1, 2, 3):
        assert tor_oracle(corner, right, left, n) == 0
    assert tor_oracle(corner, right, left, 0) == 4


def test_tor_oracle_dual_numbers():
    # A = End of (R + k) over R = k[x]/x^2 realized directly: take the
    # 2-dim algebra R itself with e its unit embedded in a bigger algebra is
    # covered elsewhere; here check the classic Tor_(n)(k, k) = k over
    # k[x]/x^2 by hand-built modules.
    from dqlab.exactlin import Mat
    from dqlab.dquot import RightModule, LeftModule
    R = truncated_polynomial_algebra(2, var="x")
    # the simple module k: x acts as zero
    act_right = [Mat.identity(QQ, 1), Mat.zero(QQ, 1, 1)]
    act_left = [Mat.identity(QQ, 1), Mat.zero(QQ, 1, 1)]
    right = RightModule(R, 1, act_right)
    left = LeftModule(R, 1, act_left)
    for n in range(0, 5):
        assert tor_oracle(R, right, left, n) == 1


def test_tor_oracle_matches_bar_on_three_cycle():
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    corner, incl = cornering(pba.algebra, e)
    right = ae_module(pba.algebra, e, corner, incl)
    left = ea_module(pba.algebra, e, corner, incl)
    bar = bar_truncation(pba.algebra, e, depth=6)
    rep = cohomology(bar, 5, products=False)
    for n in (1, 2, 3, 4):
        assert tor_oracle(corner, right, left, n) == rep.dim(-n - 1)
    # Tor_0 is the balanced tensor product itself
    assert tor_oracle(corner, right, left, 0) == 9


def test_products_associative_in_window():
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    bar = bar_truncation(pba.algebra, e, depth=4)
    rep = cohomology(bar, 3)
    F = rep.field
    for i in rep.degrees:
        for j in rep.degrees:
            for k in rep.degrees:
                if i + j + k < -rep.window_depth:
                    continue
                tij = rep.products.get((i, j))
                tjk = rep.products.get((j, k))
                if tij is None or tjk is None:
                    continue
                for x in range(rep.dim(i)):
                    for y in range(rep.dim(j)):
                        for w in range(rep.dim(k)):
                            lhs = [F.zero()] * rep.dim(i + j + k)
                            for m, c in enumerate(tij[x][y]):
                                if c != F.zero():
                                    for t, c2 in enumerate(
                                            rep.products[(i + j, k)][m][w]):
                                        lhs[t] = F.add(lhs[t], F.mul(c, c2))
                            rhs = [F.zero()] * rep.dim(i + j + k)
                            for m, c in enumerate(tjk[y][w]):
                                if c != F.zero():
                                    for t, c2 in enumerate(
                                            rep.products[(i, j + k)][x][m]):
                                        rhs[t] = F.add(rhs[t], F.mul(c, c2))
                            assert lhs == rhs


def test_h0_unit_is_algebra_unit():
    pba = three_cycle_algebra()
    e = vertex_idempotent(pba, [1, 2])
    bar = bar_truncation(pba.algebra, e, depth=3)
    rep = cohomology(bar, 2)
    h0 = rep.h0_algebra
    assert h0.dim == 1
    assert (h0.unit_element() * h0.unit_element()).coords == h0.unit


def test_find_periodicity_rejects_nonlocal():
    # k x k in degree zero: not local
    a = product_algebra_k_times_k()
    bar = bar_truncation(a, zero_idempotent(a), depth=7)
    rep = cohomology(bar, 6)
    with pytest.raises(NotLocal):
        find_periodicity_element(rep)


def test_find_periodicity_needs_deep_window():
    from dqlab.errors import InputError
    a = truncated_polynomial_algebra(2)
    bar = bar_truncation(a, zero_idempotent(a), depth=4)
    rep = cohomology(bar, 3)
    with pytest.raises(InputError):
        find_periodicity_element(rep)


def test_find_periodicity_no_class_when_h2_zero():
    # local H^0 but H^-2 = 0: fails cleanly
    a = truncated_polynomial_algebra(3)
    bar = bar_truncation(a, zero_idempotent(a), depth=7)
    rep = cohomology(bar, 6)
    with pytest.raises(NoPeriodicityClass):
        find_periodicity_element(rep)


def test_hochschild_zero_base_field_cases():
    a = base_field_algebra()
    bar1 = bar_truncation(a, unit_idempotent(a), depth=4)
    rep1 = hochschild_zero_experimental(a, bar1, depth_schedule=(1, 2, 3))
    assert rep1.values == [0, 0, 0]
    assert rep1.stabilized
    bar0 = bar_truncation(a, zero_idempotent(a), depth=4)
    rep0 = hochschild_zero_experimental(a, bar0, depth_schedule=(1, 2, 3))
    assert rep0.values == [1, 1, 1]
    assert rep0.stabilized
