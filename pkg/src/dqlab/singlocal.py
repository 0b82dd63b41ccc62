"""Commutative local invariants of hypersurface germs.

Milnor and Tjurina numbers are dimensions of truncated quotients
k[x]/(ideal + m^N), probed over a schedule of orders. Isolatedness is
certified by a monomial-absorption witness: once every monomial of degree
N-1 reduces into the ideal plus the truncation, the dimension can no
longer grow and the germ is isolated.
"""

import sympy

from dqlab.exactlin import QQ, Subspace
from dqlab.matfac import Potential, _monomials_below
from dqlab.errors import NotIsolated

DEFAULT_SCHEDULE = (4, 6, 8, 12, 16)


class LocalQuotientProbe:
    """Record of the truncated-quotient dimensions of k[x]/(ideal + m^N)
    over a probe schedule, with the final verdict."""

    def __init__(self, potential, ideal_gens, dims_at_order, verdict):
        self.potential = potential
        self.ideal_gens = list(ideal_gens)
        self.dims_at_order = list(dims_at_order)
        self.verdict = verdict  # ("finite", value) or "not-yet-stable"

    @property
    def value(self):
        if self.verdict == "not-yet-stable":
            return None
        return self.verdict[1]

    def __repr__(self):
        return f"LocalQuotientProbe(dims={self.dims_at_order}, verdict={self.verdict})"


def _quotient_dim_with_witness(symbols, gens, order):
    """Dimension of k[x]/((gens) + m^order) and whether every monomial of
    degree order-1 lies in the ideal plus truncation."""
    from fractions import Fraction
    monos = _monomials_below(len(symbols), order)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in gens:
        if g == 0:
            continue
        for m in monos:
            mono = sympy.prod([s ** e for s, e in zip(symbols, m)],
                              start=sympy.Integer(1))
            expr = sympy.expand(mono * g)
            vec = [Fraction(0)] * len(monos)
            poly = sympy.Poly(expr, *symbols) if symbols else None
            if poly is None:
                continue
            for exps, coeff in poly.terms():
                if sum(exps) < order:
                    vec[index[tuple(exps)]] = Fraction(coeff)
            if any(vec):
                rows.append(vec)
    span = Subspace.from_spanning_rows(QQ, len(monos), rows)
    dim = len(monos) - span.dim
    witness = True
    for m in monos:
        if sum(m) == order - 1:
            vec = [Fraction(0)] * len(monos)
            vec[index[m]] = Fraction(1)
            if not span.contains(vec):
                witness = False
                break
    return dim, witness


def probe_quotient(potential, gens, schedule=DEFAULT_SCHEDULE):
    """Probe dim k[x]/((gens) + m^N) over the schedule; finite verdict as
    soon as the absorption witness holds."""
    dims = []
    for order in schedule:
        dim, witness = _quotient_dim_with_witness(potential.symbols, gens, order)
        dims.append((order, dim))
        if witness:
            return LocalQuotientProbe(potential, gens, dims, ("finite", dim))
    return LocalQuotientProbe(potential, gens, dims, "not-yet-stable")


def milnor_number(sigma, schedule=DEFAULT_SCHEDULE):
    """Dimension of k[[x]]/(Jacobian ideal); NotIsolated when the schedule
    exhausts without the absorption witness."""
    if not isinstance(sigma, Potential):
        raise TypeError("milnor_number expects a Potential")
    probe = probe_quotient(sigma, sigma.jacobian(), schedule)
    if probe.verdict == "not-yet-stable":
        raise NotIsolated(
            f"Milnor dimension did not stabilize over orders {tuple(schedule)}")
    return probe.value


def tjurina_number(sigma, schedule=DEFAULT_SCHEDULE):
    """Dimension of k[[x]]/((sigma) + Jacobian ideal)."""
    if not isinstance(sigma, Potential):
        raise TypeError("tjurina_number expects a Potential")
    probe = probe_quotient(sigma, [sigma.sigma] + sigma.jacobian(), schedule)
    if probe.verdict == "not-yet-stable":
        raise NotIsolated(
            f"Tjurina dimension did not stabilize over orders {tuple(schedule)}")
    return probe.value


def is_quasi_homogeneous_consistent(sigma, schedule=DEFAULT_SCHEDULE):
    """Whether the Milnor and Tjurina numbers agree, the dimension-level
    consequence of the potential lying in its own Jacobian ideal."""
    return milnor_number(sigma, schedule) == tjurina_number(sigma, schedule)
