"""Finite-dimensional associative unital algebras by structure constants.

An algebra is a basis, a multiplication table of coordinate vectors, and a
unit vector over an exact field. Associativity and the unit axioms are
verified at construction time. On top of that sit the idempotent
operations: cornering eAe, two-sided ideals AeA, quotients A/AeA, and the
trace-form radical test for locality.
"""

from fractions import Fraction

from dqlab import exactlin
from dqlab.exactlin import Mat, Subspace
from dqlab.errors import NotAnIdeal, UnsupportedCharacteristic, InputError


class FinDimAlgebra:
    """Associative unital algebra given by structure constants.

    mul[i][j] is the coordinate vector of b_i * b_j. Optional homogeneity
    data (grades and left/right types) lets downstream complexes split
    into blocks; it is validated against the multiplication table.
    """

    def __init__(self, field, basis_labels, mul, unit, grades=None,
                 ltype=None, rtype=None, _skip_checks=False):
        self.field = field
        self.dim = len(basis_labels)
        self.basis_labels = list(basis_labels)
        self.mul = [[tuple(v) for v in row] for row in mul]
        self.unit = tuple(unit)
        self.grades = list(grades) if grades is not None else None
        self.ltype = list(ltype) if ltype is not None else None
        self.rtype = list(rtype) if rtype is not None else None
        if not _skip_checks:
            self._check_shapes()
            self._check_unit()
            self._check_associativity()
            self._check_homogeneity()

    def _check_shapes(self):
        n = self.dim
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise InputError("multiplication table shape mismatch")
        for row in self.mul:
            for v in row:
                if len(v) != n:
                    raise InputError("structure constant vector has wrong length")
        if len(self.unit) != n:
            raise InputError("unit vector has wrong length")

    def _check_unit(self):
        for i in range(self.dim):
            b = self.basis_vector(i)
            if self.mul_vec(self.unit, b) != b or self.mul_vec(b, self.unit) != b:
                raise InputError(f"unit axiom fails at basis element {self.basis_labels[i]}")

    def _check_associativity(self):
        n = self.dim
        for i in range(n):
            for j in range(n):
                ij = self.mul[i][j]
                for k in range(n):
                    left = self.mul_vec(ij, self.basis_vector(k))
                    right = self.mul_vec(self.basis_vector(i), self.mul[j][k])
                    if left != right:
                        raise InputError(
                            "associativity fails at "
                            f"({self.basis_labels[i]}, {self.basis_labels[j]}, "
                            f"{self.basis_labels[k]})")

    def _check_homogeneity(self):
        z = self.field.zero()
        for name, data in (("grade", self.grades), ("ltype", self.ltype),
                           ("rtype", self.rtype)):
            if data is not None and len(data) != self.dim:
                raise InputError(f"{name} data has wrong length")
        if self.grades is None and self.ltype is None and self.rtype is None:
            return
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in enumerate(self.mul[i][j]):
                    if c == z:
                        continue
                    if self.grades is not None and \
                            self.grades[k] != self.grades[i] + self.grades[j]:
                        raise InputError("grading not respected by multiplication")
                    if self.ltype is not None and self.ltype[k] != self.ltype[i]:
                        raise InputError("left types not respected by multiplication")
                    if self.rtype is not None and self.rtype[k] != self.rtype[j]:
                        raise InputError("right types not respected by multiplication")

    def basis_vector(self, i):
        z, o = self.field.zero(), self.field.one()
        return tuple(o if j == i else z for j in range(self.dim))

    def zero_vector(self):
        return tuple(self.field.zero() for _ in range(self.dim))

    def mul_vec(self, u, v):
        """Bilinear product of coordinate vectors."""
        F = self.field
        z = F.zero()
        out = [z] * self.dim
        for i, a in enumerate(u):
            if a == z:
                continue
            rowi = self.mul[i]
            for j, b in enumerate(v):
                if b == z:
                    continue
                c = F.mul(a, b)
                for k, s in enumerate(rowi[j]):
                    if s != z:
                        out[k] = F.add(out[k], F.mul(c, s))
        return tuple(out)

    def element(self, coords):
        return AlgebraElement(self, coords)

    def unit_element(self):
        return AlgebraElement(self, self.unit)

    def basis_element(self, i):
        return AlgebraElement(self, self.basis_vector(i))

    def left_mult_matrix(self, vec):
        """Matrix of y -> vec*y in the basis (columns are images of b_j)."""
        cols = [self.mul_vec(vec, self.basis_vector(j)) for j in range(self.dim)]
        return Mat(self.field, [[cols[j][i] for j in range(self.dim)]
                                for i in range(self.dim)])

    def right_mult_matrix(self, vec):
        cols = [self.mul_vec(self.basis_vector(j), vec) for j in range(self.dim)]
        return Mat(self.field, [[cols[j][i] for j in range(self.dim)]
                                for i in range(self.dim)])

    def __repr__(self):
        return f"FinDimAlgebra(dim {self.dim} over {self.field.kind})"

    def to_json(self):
        return {
            "field": field_to_json(self.field),
            "basis": list(self.basis_labels),
            "unit": [scalar_to_json(x) for x in self.unit],
            "mul": [[[scalar_to_json(x) for x in v] for v in row] for row in self.mul],
        }

    @classmethod
    def from_json(cls, data):
        try:
            field = field_from_json(data["field"])
            basis = list(data["basis"])
            unit = [field.coerce(scalar_from_json(x)) for x in data["unit"]]
            mul = [[[field.coerce(scalar_from_json(x)) for x in v] for v in row]
                   for row in data["mul"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed algebra JSON: {exc}") from exc
        return cls(field, basis, mul, unit)


class AlgebraElement:
    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        if len(coords) != parent.dim:
            raise InputError("coordinate vector has wrong length")
        self.parent = parent
        self.coords = tuple(parent.field.coerce(x) for x in coords)

    def __mul__(self, other):
        return AlgebraElement(self.parent, self.parent.mul_vec(self.coords, other.coords))

    def __add__(self, other):
        F = self.parent.field
        return AlgebraElement(self.parent,
                              tuple(F.add(a, b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        F = self.parent.field
        return AlgebraElement(self.parent,
                              tuple(F.sub(a, b) for a, b in zip(self.coords, other.coords)))

    def scale(self, c):
        F = self.parent.field
        c = F.coerce(c)
        return AlgebraElement(self.parent, tuple(F.mul(c, a) for a in self.coords))

    def is_zero(self):
        z = self.parent.field.zero()
        return all(x == z for x in self.coords)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.parent is self.parent
                and other.coords == self.coords)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        terms = []
        z = self.parent.field.zero()
        for c, lab in zip(self.coords, self.parent.basis_labels):
            if c != z:
                terms.append(f"{c}*{lab}" if c != self.parent.field.one() else lab)
        return " + ".join(terms) if terms else "0"


class Idempotent:
    """An element verified to satisfy e*e = e."""

    __slots__ = ("element",)

    def __init__(self, element):
        if (element * element).coords != element.coords:
            raise InputError("element is not idempotent")
        self.element = element

    @property
    def coords(self):
        return self.element.coords

    @property
    def parent(self):
        return self.element.parent

    def complement(self):
        return Idempotent(self.parent.unit_element() - self.element)

    def __repr__(self):
        return f"Idempotent({self.element!r})"


def cornering(a, e):
    """The corner algebra eAe with unit e, plus its inclusion matrix into a.

    Returns (corner, inclusion) where inclusion rows are the corner basis
    vectors written in the coordinates of a.
    """
    ev = e.coords
    spanning = [a.mul_vec(a.mul_vec(ev, a.basis_vector(i)), ev) for i in range(a.dim)]
    span = Subspace.from_spanning_rows(a.field, a.dim, [list(v) for v in spanning])
    basis_rows = [tuple(r) for r in span.basis.entries]
    labels = [f"e*{a.basis_labels[span.pivots[i]]}*e" for i in range(span.dim)]

    def coords_in_corner(vec):
        # vec lies in the span; RREF basis means coefficients sit at pivots
        return tuple(vec[c] for c in span.pivots)

    mul = [[coords_in_corner(a.mul_vec(basis_rows[i], basis_rows[j]))
            for j in range(span.dim)] for i in range(span.dim)]
    unit = coords_in_corner(ev)
    grades = None
    if a.grades is not None:
        gs = []
        ok = True
        z = a.field.zero()
        for row in basis_rows:
            support = {a.grades[k] for k, c in enumerate(row) if c != z}
            if len(support) == 1:
                gs.append(support.pop())
            else:
                ok = False
                break
        if ok:
            grades = gs
    corner = FinDimAlgebra(a.field, labels, mul, unit, grades=grades)
    inclusion = Mat(a.field, [list(r) for r in basis_rows])
    return corner, inclusion


def two_sided_ideal(a, gens):
    """Smallest subspace containing gens and closed under multiplication by
    basis elements on both sides, by closure iteration to a fixed point."""
    current = Subspace.from_spanning_rows(
        a.field, a.dim, [list(g.coords) for g in gens])
    while True:
        new_rows = []
        for v in current.basis.entries:
            vt = tuple(v)
            for i in range(a.dim):
                b = a.basis_vector(i)
                for w in (a.mul_vec(b, vt), a.mul_vec(vt, b)):
                    if not current.contains(w):
                        new_rows.append(list(w))
        if not new_rows:
            return current
        current = Subspace.from_spanning_rows(
            a.field, a.dim, [list(r) for r in current.basis.entries] + new_rows)


def is_ideal(a, subspace):
    for v in subspace.basis.entries:
        vt = tuple(v)
        for i in range(a.dim):
            b = a.basis_vector(i)
            if not subspace.contains(a.mul_vec(b, vt)):
                return False
            if not subspace.contains(a.mul_vec(vt, b)):
                return False
    return True


def quotient_algebra(a, ideal):
    """Quotient of a by a two-sided ideal, on the complement basis.

    Returns (quotient, projection) where projection maps a-coordinates to
    quotient coordinates. Raises NotAnIdeal when the subspace is not closed.
    """
    if not is_ideal(a, ideal):
        raise NotAnIdeal("subspace is not closed under multiplication")
    z = a.field.zero()
    pivot_set = set(ideal.pivots)
    kept = [i for i in range(a.dim) if i not in pivot_set]

    def project(vec):
        red = ideal.reduce(list(vec))
        return tuple(red[c] for c in kept)

    labels = [a.basis_labels[c] for c in kept]
    reps = [a.basis_vector(c) for c in kept]
    mul = [[project(a.mul_vec(reps[i], reps[j])) for j in range(len(kept))]
           for i in range(len(kept))]
    unit = project(a.unit)
    quotient = FinDimAlgebra(a.field, labels, mul, unit)
    proj_rows = []
    for r in range(a.dim):
        proj_rows.append(list(project(a.basis_vector(r))))
    projection = Mat(a.field, [[proj_rows[r][c] for r in range(a.dim)]
                               for c in range(len(kept))]) if kept else Mat.zero(a.field, 0, a.dim)
    return quotient, projection


def radical_subspace(a):
    """Radical of a via the trace form of left multiplications (char 0)."""
    if a.field.characteristic != 0:
        raise UnsupportedCharacteristic(
            "trace-form radical requires characteristic zero")
    lmats = [a.left_mult_matrix(a.basis_vector(i)) for i in range(a.dim)]
    F = a.field
    gram = []
    for i in range(a.dim):
        row = []
        for j in range(a.dim):
            prod = lmats[i].mul(lmats[j])
            tr = F.zero()
            for k in range(a.dim):
                tr = F.add(tr, prod.entries[k][k])
            row.append(tr)
        gram.append(row)
    return exactlin.kernel_basis(Mat(F, gram))


def is_local(a):
    """Whether a is a local algebra, together with its radical.

    Local means the semisimple quotient is one-dimensional:
    dim(a) - dim(rad) == 1.
    """
    rad = radical_subspace(a)
    return a.dim - rad.dim == 1, rad


def field_to_json(field):
    if field.characteristic == 0:
        return "Q"
    return {"Fp": field.characteristic}


def field_from_json(data):
    if data == "Q":
        return exactlin.QQ
    if isinstance(data, dict) and set(data) == {"Fp"}:
        return exactlin.PrimeField(int(data["Fp"]))
    raise InputError(f"unknown field spec: {data!r}")


def scalar_to_json(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"
    return int(x)


def scalar_from_json(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, float)):
        if isinstance(x, float) and not x.is_integer():
            raise InputError(f"non-exact scalar in input: {x}")
        return Fraction(int(x))
    raise InputError(f"bad scalar in input: {x!r}")
