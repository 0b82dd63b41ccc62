"""Endomorphism algebras of R + M over artinian hypersurface rings, and
the two-pipeline comparison.

For R = k[x]/x^n and M = k[x]/x^m the endomorphism algebra of their sum is
finite-dimensional, graded by x-degree, and carries the idempotent given
by the projection to R. The comparison runs the bar pipeline on that
algebra against the matrix-factorization pipeline on x^m | x^(n-m) over
x^n, degree by degree: the two computations share no code path beyond the
exact linear algebra.
"""

from fractions import Fraction

from dqlab import exactlin
from dqlab.exactlin import QQ, Mat
from dqlab.algebra import FinDimAlgebra, Idempotent
from dqlab.dquot import bar_truncation, cohomology
from dqlab.matfac import Potential, MatrixFactorization, stable_ext, validate_mf
from dqlab.errors import InputError


def _hom_basis(a, b):
    """k[x]-module maps k[x]/x^a -> k[x]/x^b as the solution space of the
    x-equivariance system on b x a matrices; returns matrices sorted by the
    x-degree of the generator image."""
    # unknowns F[r][c], r < b, c < a: F maps x^c to sum_r F[r][c] x^r;
    # equivariance: F(x.v) = x.F(v), plus F(x^(a-1) . x) = 0 consistency
    rows = []

    def idx(r, c):
        return r * a + c

    for c in range(a):
        # compare F applied to x^(c+1) with x . F(x^c)
        for r in range(b):
            row = [Fraction(0)] * (a * b)
            if c + 1 < a:
                row[idx(r, c + 1)] += 1
            # x shifts image degrees up; top degree falls off
            if r - 1 >= 0:
                row[idx(r - 1, c)] -= 1
            if any(row):
                rows.append(row)
    if not rows:
        rows = [[Fraction(0)] * (a * b)]
    kern = exactlin.kernel_basis(Mat(QQ, rows))
    mats = []
    for v in kern.basis.entries:
        mats.append([[v[idx(r, c)] for c in range(a)] for r in range(b)])

    def gen_degree(m):
        for r in range(b):
            if m[r][0] != 0:
                return r
        return b

    mats.sort(key=gen_degree)
    return mats


def _generator_degree(mat):
    for r, row in enumerate(mat):
        if row[0] != 0:
            return r
    return 0


class EndoBuilder:
    """The endomorphism algebra of k[x]/x^n + k[x]/x^m with the projection
    idempotent, as a graded FinDimAlgebra."""

    def __init__(self, n, m):
        if not (1 <= m <= n <= 8):
            raise InputError("need 1 <= m <= n <= 8")
        self.n = n
        self.m = m
        sizes = {0: n, 1: m}
        blocks = {}
        for src in (0, 1):
            for tgt in (0, 1):
                blocks[(src, tgt)] = _hom_basis(sizes[src], sizes[tgt])
        self.block_dims = {k: len(v) for k, v in blocks.items()}

        entries = []   # (src, tgt, matrix, grade)
        labels = []
        name = {0: "r", 1: "m"}
        for src in (0, 1):
            for tgt in (0, 1):
                for kmat in blocks[(src, tgt)]:
                    grade = _generator_degree(kmat)
                    entries.append((src, tgt, kmat, grade))
                    labels.append(f"{name[src]}{name[tgt]}{grade}")
        self.entries = entries

        dim = len(entries)
        zero = [Fraction(0)] * dim

        def compose(e1, e2):
            # product f.g = apply f then g (left-to-right), so g o f
            s1, t1, m1, _ = e1
            s2, t2, m2, _ = e2
            if t1 != s2:
                return None
            rows = len(m2)
            mid = len(m1)
            cols = len(m1[0])
            out = [[sum(m2[r][k] * m1[k][c] for k in range(mid))
                    for c in range(cols)] for r in range(rows)]
            return (s1, t2, out)

        def coords_of(src, tgt, mat):
            vec = list(zero)
            # block bases are echelon in the generator image; solve exactly
            flat_targets = []
            members = [i for i, (s, t, _, _) in enumerate(entries)
                       if s == src and t == tgt]
            span = [sum((row for row in entries[i][2]), []) for i in members]
            flat = sum((row for row in mat), [])
            coeffs = exactlin.solve_in_span(QQ, span, flat)
            if coeffs is None:
                raise InputError("composition left the hom block")
            for i, c in zip(members, coeffs):
                vec[i] = c
            return vec

        mul = []
        for i, e1 in enumerate(entries):
            row = []
            for j, e2 in enumerate(entries):
                comp = compose(e1, e2)
                if comp is None or all(x == 0 for r in comp[2] for x in r):
                    row.append(list(zero))
                else:
                    row.append(coords_of(*comp))
            mul.append(row)

        def identity_matrix(size):
            return [[Fraction(1) if r == c else Fraction(0)
                     for c in range(size)] for r in range(size)]

        id_r = coords_of(0, 0, identity_matrix(n))
        id_m = coords_of(1, 1, identity_matrix(m))
        unit = [a_ + b_ for a_, b_ in zip(id_r, id_m)]
        grades = [g for (_, _, _, g) in entries]
        ltype = [s for (s, _, _, _) in entries]
        rtype = [t for (_, t, _, _) in entries]
        self.algebra = FinDimAlgebra(QQ, labels, mul, unit, grades=grades,
                                     ltype=ltype, rtype=rtype)
        self.idempotent = Idempotent(self.algebra.element(id_r))

    def __repr__(self):
        return f"EndoBuilder(n={self.n}, m={self.m}, dim={self.algebra.dim})"


def build_endomorphism_algebra(n, m):
    return EndoBuilder(n, m)


def module_factorization(n, m):
    """The factorization x^m | x^(n-m) of x^n presenting k[x]/x^m."""
    sigma = Potential(["x"], f"x^{n}")
    if m == n:
        mf = MatrixFactorization(sigma, [[f"x^{n}"]], [["1"]])
    else:
        mf = MatrixFactorization(sigma, [[f"x^{m}"]],
                                 [[f"x^{n - m}" if n - m > 0 else "1"]])
    assert validate_mf(mf, sigma)
    return mf, sigma


class ComparisonReport:
    """Per-degree dimensions from both pipelines and the verdict."""

    def __init__(self, n, m, window_depth, bar_dims, mf_dims):
        self.n = n
        self.m = m
        self.window_depth = window_depth
        self.bar_dims = dict(bar_dims)
        self.mf_dims = dict(mf_dims)

    @property
    def agree(self):
        return all(self.bar_dims[j] == self.mf_dims[j]
                   for j in range(-self.window_depth, 1))

    def rows(self):
        return [(j, self.bar_dims[j], self.mf_dims[j])
                for j in range(0, -self.window_depth - 1, -1)]

    def __repr__(self):
        return (f"ComparisonReport(n={self.n}, m={self.m}, "
                f"agree={self.agree})")


def comparison_check(n, m, window_depth=4):
    """dim H^j of the derived quotient of End(R + M) by the projection
    idempotent, against dim stable-Ext^j(M, M) from the factorization
    pipeline, for j in [-window_depth, 0]."""
    if window_depth > 6:
        raise InputError("window depth capped at 6 for cost control")
    builder = EndoBuilder(n, m)
    bar = bar_truncation(builder.algebra, builder.idempotent,
                         depth=window_depth + 1)
    rep = cohomology(bar, window_depth, products=False)
    bar_dims = {j: rep.dim(j) for j in range(-window_depth, 1)}
    mf, sigma = module_factorization(n, m)
    if m == n:
        mf_dims = {j: 0 for j in range(-window_depth, 1)}
    else:
        srep = stable_ext(mf, mf, sigma, window_depth=window_depth)
        mf_dims = {j: srep.dim(j) for j in range(-window_depth, 1)}
    return ComparisonReport(n, m, window_depth, bar_dims, mf_dims)
