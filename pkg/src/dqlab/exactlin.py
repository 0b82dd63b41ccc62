"""Exact dense linear algebra over Q and prime fields.

Every other module reduces its work to the operations here: reduced row
echelon forms, kernels, and canonical subspaces. Arithmetic is exact;
rationals use arbitrary-precision Fractions, prime fields use ints mod p.
Subspaces are canonicalized by the RREF of their basis, so subspace
equality is plain equality of matrices.
"""

from fractions import Fraction

from dqlab.errors import NotContained


class Rationals:
    """The field Q. Elements are Fraction instances."""

    kind = "Q"
    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return Fraction(1) / a

    def coerce(self, x):
        return Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    """The field F_p for a prime p < 2^31. Elements are ints in [0, p)."""

    def __init__(self, p):
        if p < 2 or p >= 2**31:
            raise ValueError(f"prime out of range: {p}")
        for d in range(2, min(p, 1 << 16)):
            if d * d > p:
                break
            if p % d == 0:
                raise ValueError(f"{p} is not prime")
        self.p = p
        self.kind = f"F{p}"
        self.characteristic = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        return pow(a, self.p - 2, self.p)

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, self.p - 2, self.p) % self.p
        return int(x) % self.p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = Rationals()


class Mat:
    """Dense matrix over an exact field. Rows are lists of field elements."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, entries):
        self.field = field
        self.entries = [list(r) for r in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        for r in self.entries:
            if len(r) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def zero(cls, field, rows, cols):
        z = field.zero()
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_int_rows(cls, field, entries):
        return cls(field, [[field.from_int(x) for x in row] for row in entries])

    def copy(self):
        return Mat(self.field, self.entries)

    def row(self, i):
        return list(self.entries[i])

    def transpose(self):
        return Mat(self.field, [[self.entries[i][j] for i in range(self.rows)]
                                for j in range(self.cols)])

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        F = self.field
        z = F.zero()
        out = []
        ot = other.entries
        for i in range(self.rows):
            ri = self.entries[i]
            row = [z] * other.cols
            for k in range(self.cols):
                a = ri[k]
                if a == z:
                    continue
                rk = ot[k]
                for j in range(other.cols):
                    b = rk[j]
                    if b != z:
                        row[j] = F.add(row[j], F.mul(a, b))
            out.append(row)
        return Mat(F, out)

    def apply(self, vec):
        """Matrix times column vector (vec as a flat list)."""
        F = self.field
        z = F.zero()
        out = [z] * self.rows
        for i in range(self.rows):
            ri = self.entries[i]
            acc = z
            for j, v in enumerate(vec):
                if v != z and ri[j] != z:
                    acc = F.add(acc, F.mul(ri[j], v))
            out[i] = acc
        return out

    def stack(self, other):
        if other.cols != self.cols:
            raise ValueError("shape mismatch")
        return Mat(self.field, self.entries + other.entries)

    def __eq__(self, other):
        return (isinstance(other, Mat) and other.field == self.field
                and other.entries == self.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.entries))))

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols} over {self.field.kind})"


def _row_reduce(field, rows):
    """In-place RREF on a list of row-lists. Returns pivot column list."""
    F = field
    z = F.zero()
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for c in range(ncols):
        sel = None
        for r in range(rank, nrows):
            if rows[r][c] != z:
                sel = r
                break
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        pr = rows[rank]
        pv = pr[c]
        if pv != F.one():
            inv = F.inv(pv)
            rows[rank] = [F.mul(inv, x) for x in pr]
            pr = rows[rank]
        for r in range(nrows):
            if r == rank:
                continue
            f = rows[r][c]
            if f != z:
                rr = rows[r]
                rows[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(rr, pr)]
        pivots.append(c)
        rank += 1
        if rank == nrows:
            break
    return pivots


def rref(m):
    """Reduced row echelon form. Row space is preserved; zero rows kept."""
    rows = [list(r) for r in m.entries]
    _row_reduce(m.field, rows)
    return Mat(m.field, rows)


def rref_pivots(m):
    """RREF together with pivot columns, zero rows dropped."""
    rows = [list(r) for r in m.entries]
    pivots = _row_reduce(m.field, rows)
    return Mat(m.field, rows[: len(pivots)]) if pivots else Mat.zero(m.field, 0, m.cols), pivots


def rank(m):
    rows = [list(r) for r in m.entries]
    return len(_row_reduce(m.field, rows))


class Subspace:
    """A subspace of k^n, canonically represented by the RREF of a basis.

    Two equal subspaces have bit-identical basis matrices.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim, basis, pivots=None):
        self.ambient_dim = ambient_dim
        self.basis = basis
        if pivots is None:
            pivots = []
            z = basis.field.zero()
            for r in basis.entries:
                for c, x in enumerate(r):
                    if x != z:
                        pivots.append(c)
                        break
        self.pivots = list(pivots)

    @classmethod
    def from_spanning_rows(cls, field, ambient_dim, rows):
        if not rows:
            return cls(ambient_dim, Mat.zero(field, 0, ambient_dim), [])
        m, pivots = rref_pivots(Mat(field, rows))
        return cls(ambient_dim, m, pivots)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(ambient_dim, Mat.zero(field, 0, ambient_dim), [])

    @property
    def dim(self):
        return self.basis.rows

    def reduce(self, vec):
        """Residual of vec after subtracting its projection onto the span."""
        F = self.basis.field
        z = F.zero()
        v = list(vec)
        for i, c in enumerate(self.pivots):
            f = v[c]
            if f != z:
                row = self.basis.entries[i]
                v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        z = self.basis.field.zero()
        return all(x == z for x in self.reduce(vec))

    def sum_with(self, other):
        rows = self.basis.entries + other.basis.entries
        return Subspace.from_spanning_rows(self.basis.field, self.ambient_dim, rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and other.ambient_dim == self.ambient_dim
                and other.basis == self.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient_dim})"


def kernel_basis(m):
    """Canonical basis of the right null space of m; dim = cols - rank."""
    F = m.field
    z, o = F.zero(), F.one()
    rows = [list(r) for r in m.entries]
    pivots = _row_reduce(F, rows)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [z] * m.cols
        v[fc] = o
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(rows[i][fc])
        basis.append(v)
    return Subspace.from_spanning_rows(F, m.cols, basis)


def quotient_dim(big, small):
    """dim(big) - dim(small), after checking small is contained in big."""
    if small.ambient_dim != big.ambient_dim:
        raise NotContained("ambient dimensions differ")
    for i in range(small.dim):
        if not big.contains(small.basis.entries[i]):
            raise NotContained(f"basis vector {i} of small subspace not in big subspace")
    return big.dim - small.dim


def solve_linear(mat, rhs):
    """One solution x of mat.x = rhs, or None. rhs is a flat list."""
    F = mat.field
    z = F.zero()
    aug = [list(r) + [b] for r, b in zip(mat.entries, rhs)]
    pivots = _row_reduce(F, aug)
    x = [z] * mat.cols
    for i, c in enumerate(pivots):
        if c == mat.cols:
            return None  # pivot in the constant column: inconsistent
        x[c] = aug[i][mat.cols]
    return x


def solve_in_span(field, span_rows, vec):
    """Coefficients expressing vec over span_rows, or None.

    span_rows is a list of vectors; returns c with sum c_i span_rows[i] == vec.
    """
    if not span_rows:
        z = field.zero()
        return [] if all(x == z for x in vec) else None
    n = len(span_rows[0])
    k = len(span_rows)
    z = field.zero()
    aug = [list(r) + [field.one() if i == j else z for j in range(k)]
           for i, r in enumerate(span_rows)]
    pivots = _row_reduce(field, aug)
    v = list(vec)
    coeff = [z] * k
    for i, c in enumerate(pivots):
        if c >= n:
            break
        f = v[c]
        if f != z:
            row = aug[i]
            v = [field.sub(a, field.mul(f, b)) for a, b in zip(v, row[:n])]
            coeff = [field.add(a, field.mul(f, b)) for a, b in zip(coeff, row[n:])]
    if any(x != z for x in v):
        return None
    return coeff
