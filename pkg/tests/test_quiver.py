import pytest

from dqlab.exactlin import QQ
from dqlab.quiver import (
    Quiver, QuiverPresentation, build_algebra, contraction_algebra,
    vertex_idempotent, parse_relation, eliminate_identifications,
)
from dqlab.algebra import cornering, two_sided_ideal, quotient_algebra
from dqlab.errors import DegreeBoundInsufficient, InputError


def three_cycle_presentation(bound=6):
    # 1 --x--> 2 --y--> 3 --z--> 1 with a chord w: 2 -> 1 identified with y*z,
    # and the three cyclic cubes set to zero
    q = Quiver(3, [("x", 1, 2), ("w", 2, 1), ("y", 2, 3), ("z", 3, 1)])
    rels = ["w - y*z", "x*y*z", "y*z*x", "z*x*y"]
    return QuiverPresentation(q, rels, bound)


def flop_presentation(bound=8):
    # two vertices with loops m, n, double arrows both ways, and the six
    # relations of a width-style flop presentation
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


def test_parse_relation_basic():
    q = Quiver(2, [("a", 1, 2), ("b", 2, 1)])
    combo = parse_relation("2*a*b - a*b", q)
    assert combo == {("a", "b"): 1}


def test_parse_relation_power_and_parens():
    q = Quiver(1, [("u", 1, 1), ("v", 1, 1)])
    combo = parse_relation("(u*v)^2 - v^3", q)
    assert combo == {("u", "v", "u", "v"): 1, ("v", "v", "v"): -1}


def test_parse_relation_rejects_noncomposable():
    q = Quiver(2, [("a", 1, 2)])
    with pytest.raises(InputError):
        parse_relation("a*a", q)


def test_parse_relation_rejects_nonparallel():
    q = Quiver(2, [("a", 1, 2), ("c", 1, 1)])
    with pytest.raises(InputError):
        parse_relation("a - c", q)


def test_eliminate_identification():
    q = Quiver(3, [("x", 1, 2), ("w", 2, 1), ("y", 2, 3), ("z", 3, 1)])
    rels = [parse_relation("w - y*z", q), parse_relation("x*w", q)]
    reduced, new_rels = eliminate_identifications(q, rels)
    assert [a[0] for a in reduced.arrows] == ["x", "y", "z"]
    assert new_rels == [{("x", "y", "z"): 1}]


def test_single_vertex_no_arrows():
    pba = build_algebra(QuiverPresentation(Quiver(1, []), [], 4))
    assert pba.algebra.dim == 1
    assert pba.algebra.unit == (QQ.one(),)


def test_dual_numbers():
    q = Quiver(1, [("x", 1, 1)])
    pba = build_algebra(QuiverPresentation(q, ["x^2"], 5))
    assert pba.algebra.dim == 2
    assert pba.algebra.basis_labels == ["e1", "x"]


def test_loop_without_relation_fails():
    q = Quiver(1, [("x", 1, 1)])
    with pytest.raises(DegreeBoundInsufficient):
        build_algebra(QuiverPresentation(q, [], 5))


def test_three_cycle_dimension_nine():
    pba = build_algebra(three_cycle_presentation())
    assert pba.algebra.dim == 9
    assert pba.algebra.grades is not None  # cubes are homogeneous


def test_three_cycle_corner_dimension_four():
    pba = build_algebra(three_cycle_presentation())
    e = vertex_idempotent(pba, [1, 2])
    corner, _ = cornering(pba.algebra, e)
    assert corner.dim == 4


def test_three_cycle_contraction_dimension_one():
    pba = build_algebra(three_cycle_presentation())
    e = vertex_idempotent(pba, [1, 2])
    ideal = two_sided_ideal(pba.algebra, [e.element])
    q, _ = quotient_algebra(pba.algebra, ideal)
    assert ideal.dim == 8
    assert q.dim == 1


def test_three_cycle_contraction_via_presentation():
    con = contraction_algebra(three_cycle_presentation(), [1, 2])
    assert con.dim == 1


def test_vertex_idempotents_sum_to_unit():
    pba = build_algebra(three_cycle_presentation())
    total = vertex_idempotent(pba, [1, 2, 3])
    assert total.coords == pba.algebra.unit
    for v in (1, 2, 3):
        ev = pba.vertex_idempotent_element(v)
        assert (ev * ev).coords == ev.coords
    e1 = pba.vertex_idempotent_element(1)
    e2 = pba.vertex_idempotent_element(2)
    assert (e1 * e2).is_zero()


def test_empty_vertex_set_is_zero_idempotent():
    pba = build_algebra(three_cycle_presentation())
    e = vertex_idempotent(pba, [])
    assert e.element.is_zero()


def test_flop_contraction_is_truncated_polynomial():
    con = contraction_algebra(flop_presentation(), [1])
    assert con.dim == 3
    # surviving vertex keeps its original number; generator n has n^3 = 0, n^2 != 0
    assert con.basis_labels == ["e2", "n", "n*n"]
    n = con.element([0, 1, 0])
    n2 = n * n
    assert not n2.is_zero()
    assert (n2 * n).is_zero()


def test_contraction_rejects_improper_subset():
    pres = three_cycle_presentation()
    with pytest.raises(InputError):
        contraction_algebra(pres, [1, 2, 3])
    with pytest.raises(InputError):
        contraction_algebra(pres, [])


def test_contraction_killing_all_arrows_gives_semisimple():
    # killing vertex 2 of 1 --a--> 2 --b--> 3 removes every arrow
    q = Quiver(3, [("a", 1, 2), ("b", 2, 3)])
    con = contraction_algebra(QuiverPresentation(q, [], 4), [2])
    assert con.dim == 2
    u = con.element([1, 0])
    v = con.element([0, 1])
    assert (u * v).is_zero()


def test_contraction_agrees_with_quotient_when_finite():
    pres = three_cycle_presentation()
    pba = build_algebra(pres)
    for S in ([1], [2], [3], [1, 2], [1, 3], [2, 3]):
        con = contraction_algebra(pres, S)
        e = vertex_idempotent(pba, S)
        ideal = two_sided_ideal(pba.algebra, [e.element])
        q, _ = quotient_algebra(pba.algebra, ideal)
        assert con.dim == q.dim
        # canonical bases are path classes on both sides; labels match
        assert sorted(con.basis_labels) == sorted(q.basis_labels)
        order = [con.basis_labels.index(l) for l in q.basis_labels]
        for i in range(q.dim):
            for j in range(q.dim):
                lhs = q.mul[i][j]
                rhs = con.mul[order[i]][order[j]]
                assert list(lhs) == [rhs[order[k]] for k in range(q.dim)]


def test_rebuild_with_larger_bound_is_stable():
    a6 = build_algebra(three_cycle_presentation(6)).algebra
    a9 = build_algebra(three_cycle_presentation(9)).algebra
    assert a6.dim == a9.dim
    assert a6.basis_labels == a9.basis_labels
    assert a6.mul == a9.mul


def test_from_json():
    data = {
        "vertices": 1,
        "arrows": [{"name": "x", "from": 1, "to": 1}],
        "relations": ["x^3"],
        "degree_bound": 6,
    }
    pba = build_algebra(QuiverPresentation.from_json(data))
    assert pba.algebra.dim == 3
