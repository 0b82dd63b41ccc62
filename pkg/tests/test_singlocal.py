from fractions import Fraction

import pytest
import sympy

from dqlab.matfac import Potential, _monomials_below
from dqlab.singlocal import (
    milnor_number, tjurina_number, is_quasi_homogeneous_consistent,
    probe_quotient,
)
from dqlab.errors import ZeroPotential, ConstantTerm, NotIsolated


def brute_quotient_dim_one_var(ideal_powers, order):
    # oracle: dim k[x]/(x^a, x^b, ..., x^order) = min(ideal_powers + [order])
    return min(list(ideal_powers) + [order])


def brute_quotient_dim_two_vars(gens, order):
    # oracle: direct row reduction over the monomial basis, written
    # independently of the production code (plain fractions, no Subspace)
    x, y = sympy.symbols("x y")
    monos = [(i, j) for t in range(order) for i in range(t + 1)
             for j in [t - i]]
    index = {m: k for k, m in enumerate(monos)}
    rows = []
    for g in gens:
        for (i, j) in monos:
            expr = sympy.expand(x ** i * y ** j * g)
            vec = [Fraction(0)] * len(monos)
            for exps, coeff in sympy.Poly(expr, x, y).terms():
                if sum(exps) < order:
                    vec[index[tuple(exps)]] = Fraction(coeff)
            if any(vec):
                rows.append(vec)
    # plain gaussian elimination
    rank = 0
    ncols = len(monos)
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / pr[c]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    return ncols - rank


def test_potential_validation():
    with pytest.raises(ZeroPotential):
        Potential(["x"], "0")
    with pytest.raises(ConstantTerm):
        Potential(["x"], "x + 1")


def test_monomials_below_deterministic():
    ms = _monomials_below(2, 3)
    assert ms == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


def test_milnor_smooth():
    assert milnor_number(Potential(["x"], "x")) == 0
    assert tjurina_number(Potential(["x"], "x")) == 0


def test_milnor_one_variable_powers():
    # oracle: k[x]/(x^n, x^N) has dimension n once N > n
    for n in range(1, 9):
        sigma = Potential(["x"], f"x^{n + 1}")
        expected = brute_quotient_dim_one_var([n], 16)
        assert expected == n
        assert milnor_number(sigma) == n
        assert tjurina_number(sigma) == n


def test_milnor_cusp_pair():
    # sigma = x^3 + y^3: Jacobian (x^2, y^2)
    expected = brute_quotient_dim_two_vars(
        [sympy.sympify("x**2"), sympy.sympify("y**2")], 6)
    assert expected == 4
    sigma = Potential(["x", "y"], "x^3 + y^3")
    assert milnor_number(sigma) == 4
    assert tjurina_number(sigma) == 4
    assert is_quasi_homogeneous_consistent(sigma)


def test_tjurina_cusp():
    # sigma = x^2 + y^3: ideal (x, y^2) at the Tjurina level
    expected = brute_quotient_dim_two_vars(
        [sympy.sympify("x"), sympy.sympify("y**2")], 6)
    assert expected == 2
    sigma = Potential(["x", "y"], "x^2 + y^3")
    assert tjurina_number(sigma) == 2
    assert milnor_number(sigma) == 2


def test_node():
    sigma = Potential(["x", "y"], "x*y")
    assert milnor_number(sigma) == 1
    assert tjurina_number(sigma) == 1


def test_non_isolated():
    # x^2 in two variables: the y-line is singular
    sigma = Potential(["x", "y"], "x^2")
    with pytest.raises(NotIsolated):
        milnor_number(sigma, schedule=(3, 4, 5))


def test_milnor_at_least_tjurina():
    for text, nvars in (("x^4 + y^4", 2), ("x^2*y + y^3 + x^5", 2),
                        ("x^3 + y^5", 2), ("x^5 + y^5 + x^3*y^3", 2)):
        sigma = Potential(["x", "y"], text)
        mu = milnor_number(sigma)
        tau = tjurina_number(sigma)
        assert mu >= tau >= 0


def test_finite_determinacy_dimension_level():
    # adding terms of degree >= N to sigma does not change mu found below N
    base = Potential(["x", "y"], "x^3 + y^3")
    mu = milnor_number(base)
    bumped = Potential(["x", "y"], "x^3 + y^3 + x^5*y^5")
    assert milnor_number(bumped) == mu


def test_probe_records_orders():
    sigma = Potential(["x"], "x^3")
    probe = probe_quotient(sigma, sigma.jacobian(), schedule=(4, 6))
    assert probe.verdict == ("finite", 2)
    assert probe.dims_at_order[0][0] == 4
