"""Truncations of the derived quotient of an algebra by an idempotent.

The model: adjoin a degree -1 element h with dh = e and he = eh = h. Its
degree -n piece is Ae (x) R (x) ... (x) R (x) eA with n-1 middle factors,
all tensors over the base field, R = eAe the cornering, and the Hochschild
differential collapsing adjacent factors with alternating signs. The
multiplication is concatenation, merging the inner eA/Ae factors into a
middle R slot.

Cohomology is computed on the unit-reduced quotient complex (middle slots
taken in R/k.1), which is a quotient by a dg ideal, so dimensions and
products agree with the full model. The tensor bases split into blocks by
total grade and outer endpoint types whenever the algebra carries that
data, which keeps the eliminations small. Representatives returned in
reports are cocycles of the reduced model.
"""

import itertools
from fractions import Fraction
from math import gcd, lcm

from dqlab import exactlin
from dqlab.exactlin import Mat, Subspace
from dqlab.algebra import (
    FinDimAlgebra, Idempotent, cornering, two_sided_ideal, quotient_algebra,
    is_local, radical_subspace,
)
from dqlab import _intelim
from dqlab.errors import (
    DimensionBlowup, WindowExceedsDepth, NotLocal, NoPeriodicityClass,
    InputError, UnsupportedCharacteristic,
)

DEFAULT_PIECE_CAP = 200000


# --- small span utilities ----------------------------------------------------

def _span_rows(field, vectors, ambient):
    sub = Subspace.from_spanning_rows(field, ambient, [list(v) for v in vectors])
    return [tuple(r) for r in sub.basis.entries], sub


class _SpanSolver:
    """Expresses vectors over a fixed list of spanning rows (exact)."""

    def __init__(self, field, rows, ambient):
        self.field = field
        self.rows = [list(r) for r in rows]

    def coords(self, vec):
        c = exactlin.solve_in_span(self.field, self.rows, list(vec))
        if c is None:
            raise InputError("vector not in span")
        return tuple(c)


def _homogeneous_data(vectors, data, zero):
    """Per-vector value of basis data (grades or types); None if mixed."""
    out = []
    for v in vectors:
        support = {data[i] for i, c in enumerate(v) if c != zero}
        if len(support) != 1:
            return None
        out.append(support.pop())
    return out


# --- the truncation ----------------------------------------------------------

class BarTruncation:
    """Degrees [-depth, 0] of the model, carrying both the full graded
    pieces (dimension formula, d^2 = 0 check, JSON export) and the
    unit-reduced block complex used for cohomology."""

    def __init__(self, algebra, idem, depth, piece_cap=DEFAULT_PIECE_CAP):
        if depth < 1:
            raise InputError("depth must be at least 1")
        if not isinstance(idem, Idempotent):
            idem = Idempotent(idem)
        self.algebra = algebra
        self.idem = idem
        self.depth = depth
        self.piece_cap = piece_cap
        F = algebra.field
        self.field = F
        a = algebra
        ev = idem.coords

        n = a.dim
        ae_span = [a.mul_vec(a.basis_vector(i), ev) for i in range(n)]
        ea_span = [a.mul_vec(ev, a.basis_vector(i)) for i in range(n)]
        r_span = [a.mul_vec(ev, v) for v in ae_span]
        self.ae_rows, _ = _span_rows(F, ae_span, n)
        self.ea_rows, _ = _span_rows(F, ea_span, n)
        r_rows, r_sub = _span_rows(F, r_span, n)

        # middle basis: unit first, then a complement of k.e inside R
        if r_rows:
            coeffs = [ev[c] for c in r_sub.pivots]
            k0 = next(i for i, c in enumerate(coeffs) if c != F.zero())
            self.r_rows = [tuple(ev)] + [r for i, r in enumerate(r_rows) if i != k0]
        else:
            self.r_rows = []
        self.nU = len(self.ae_rows)
        self.nW = len(self.ea_rows)
        self.nV = len(self.r_rows)

        self._build_tables()
        self._build_keys()
        self._build_full()
        self._check_d_squared()
        self._build_reduced()

    # -- multiplication tables between factor bases

    def _build_tables(self):
        a, F = self.algebra, self.field
        U, V, W = self.ae_rows, self.r_rows, self.ea_rows
        solvU = _SpanSolver(F, U, a.dim)
        solvV = _SpanSolver(F, V, a.dim)
        solvW = _SpanSolver(F, W, a.dim)
        self.tab_UV = [[solvU.coords(a.mul_vec(u, v)) for v in V] for u in U]
        self.tab_VV = [[solvV.coords(a.mul_vec(v1, v2)) for v2 in V] for v1 in V]
        self.tab_VW = [[solvW.coords(a.mul_vec(v, w)) for w in W] for v in V]
        self.tab_UW = [[a.mul_vec(u, w) for w in W] for u in U]
        self.tab_WU = [[solvV.coords(a.mul_vec(w, u)) for u in U] for w in W]
        self.tab_AU = [[solvU.coords(a.mul_vec(a.basis_vector(i), u)) for u in U]
                       for i in range(a.dim)]
        self.tab_WA = [[solvW.coords(a.mul_vec(w, a.basis_vector(i)))
                        for i in range(a.dim)] for w in W]
        z = F.zero()

        def nz(table):
            return [[tuple((k, c) for k, c in enumerate(vec) if c != z)
                     for vec in row] for row in table]

        self.nz_UV = nz(self.tab_UV)
        self.nz_VV = nz(self.tab_VV)
        self.nz_VW = nz(self.tab_VW)
        self.nz_UW = nz(self.tab_UW)

    # -- block keys from optional grading / endpoint types

    def _build_keys(self):
        a = self.algebra
        z = a.field.zero()

        def resolved(rows, data):
            if data is None:
                return None
            return _homogeneous_data(rows, data, z)

        gU = resolved(self.ae_rows, a.grades)
        gV = resolved(self.r_rows, a.grades)
        gW = resolved(self.ea_rows, a.grades)
        if a.grades is None or gU is None or gV is None or gW is None:
            gU, gV, gW = [0] * self.nU, [0] * self.nV, [0] * self.nW
            gA = [0] * a.dim
        else:
            gA = list(a.grades)
        lU = resolved(self.ae_rows, a.ltype)
        if a.ltype is None or lU is None:
            lU, lA = [0] * self.nU, [0] * a.dim
        else:
            lA = list(a.ltype)
        rW = resolved(self.ea_rows, a.rtype)
        if a.rtype is None or rW is None:
            rW, rA = [0] * self.nW, [0] * a.dim
        else:
            rA = list(a.rtype)
        self.gU, self.gV, self.gW, self.gA = gU, gV, gW, gA
        self.lU, self.lA = lU, lA
        self.rW, self.rA = rW, rA

    # -- full model: basis tuples and sparse differential columns

    def piece_dim(self, n):
        """Dimension of the full degree -n piece."""
        if n == 0:
            return self.algebra.dim
        if self.nU == 0 or self.nW == 0:
            return 0
        return self.nU * self.nV ** (n - 1) * self.nW

    def _tensors(self, n, middle_count):
        if self.nU == 0 or self.nW == 0:
            return []
        if n - 1 > 0 and middle_count == 0:
            return []
        out = []
        for mids in itertools.product(range(middle_count), repeat=n - 1):
            for u in range(self.nU):
                for w in range(self.nW):
                    out.append((u, mids, w))
        return out

    def _build_full(self):
        for n in range(1, self.depth + 1):
            if self.piece_dim(n) > self.piece_cap:
                raise DimensionBlowup(
                    f"degree -{n} piece has dimension {self.piece_dim(n)} "
                    f"(cap {self.piece_cap})")
        self.full_basis = {}
        self.full_index = {}
        for n in range(1, self.depth + 1):
            basis = self._tensors(n, self.nV)
            self.full_basis[n] = basis
            self.full_index[n] = {t: i for i, t in enumerate(basis)}
        self.full_diff = {}
        for n in range(1, self.depth + 1):
            self.full_diff[n] = [self._d_full(n, t) for t in self.full_basis[n]]

    def _d_full(self, n, tensor):
        """Sparse differential of a full-model tensor: dict over the full
        basis of degree -(n-1) (over A-basis indices when n == 1)."""
        u, mids, w = tensor
        F = self.field
        z = F.zero()
        out = {}

        def add(i, coeff):
            prev = out.get(i)
            out[i] = coeff if prev is None else F.add(prev, coeff)

        if n == 1:
            for k, c in self.nz_UW[u][w]:
                add(k, c)
            return {k: v for k, v in out.items() if v != z}
        index = self.full_index[n - 1]
        for k, c in self.nz_UV[u][mids[0]]:
            add(index[(k, mids[1:], w)], c)
        neg = False
        for i in range(1, n - 1):
            neg = not neg
            for k, c in self.nz_VV[mids[i - 1]][mids[i]]:
                add(index[(u, mids[:i - 1] + (k,) + mids[i + 1:], w)],
                    F.neg(c) if neg else c)
        neg = not neg
        for k, c in self.nz_VW[mids[-1]][w]:
            add(index[(u, mids[:-1], k)], F.neg(c) if neg else c)
        return {k: v for k, v in out.items() if v != z}

    def _check_d_squared(self):
        F = self.field
        z = F.zero()
        for n in range(2, self.depth + 1):
            lower = self.full_diff[n - 1]
            for col in self.full_diff[n]:
                acc = {}
                for t, c in col.items():
                    for t2, c2 in lower[t].items():
                        acc[t2] = F.add(acc.get(t2, z), F.mul(c, c2))
                if any(v != z for v in acc.values()):
                    raise InputError("differential does not square to zero")

    # -- reduced model (middle slots in R/k.1), organized in blocks

    def _key_of(self, n, tensor):
        if n == 0:
            return (self.gA[tensor], self.lA[tensor], self.rA[tensor])
        u, mids, w = tensor
        g = self.gU[u] + self.gW[w]
        for m in mids:
            g += self.gV[m + 1]
        return (g, self.lU[u], self.rW[w])

    def _build_reduced(self):
        self.red_basis = {}
        self.red_blocks = {}
        self.red_lookup = {}
        self.red_index = {}
        for n in range(0, self.depth + 1):
            if n == 0:
                basis = list(range(self.algebra.dim))
            else:
                basis = self._tensors(n, self.nV - 1)
            blocks = {}
            lookup = {}
            for t in basis:
                key = self._key_of(n, t)
                blk = blocks.setdefault(key, [])
                lookup[t] = (key, len(blk))
                blk.append(t)
            self.red_basis[n] = basis
            self.red_blocks[n] = blocks
            self.red_lookup[n] = lookup
            self.red_index[n] = {t: i for i, t in enumerate(basis)}

    def _d_reduced(self, n, tensor):
        """Differential in the reduced model; middle-product expansions drop
        the unit coefficient. Sparse over (block_key, position) pairs at
        degree -(n-1)."""
        u, mids, w = tensor
        F = self.field
        z = F.zero()
        out = {}
        lookup = self.red_lookup[n - 1]

        def add(t, coeff):
            kp = lookup[t]
            prev = out.get(kp)
            out[kp] = coeff if prev is None else F.add(prev, coeff)

        if n == 1:
            for k, c in self.nz_UW[u][w]:
                add(k, c)
            return {k: v for k, v in out.items() if v != z}
        for k, c in self.nz_UV[u][mids[0] + 1]:
            add((k, mids[1:], w), c)
        neg = False
        for i in range(1, n - 1):
            neg = not neg
            for k, c in self.nz_VV[mids[i - 1] + 1][mids[i] + 1]:
                if k == 0:
                    continue  # unit component of the merged middle slot
                add((u, mids[:i - 1] + (k - 1,) + mids[i + 1:], w),
                    F.neg(c) if neg else c)
        neg = not neg
        for k, c in self.nz_VW[mids[-1] + 1][w]:
            add((u, mids[:-1], k), F.neg(c) if neg else c)
        return {k: v for k, v in out.items() if v != z}

    def differential_json(self, n, dense_limit=2000):
        """Dense full-model differential at degree -n, for debugging."""
        from dqlab.algebra import scalar_to_json
        rows = self.piece_dim(n - 1)
        cols = self.piece_dim(n)
        if rows > dense_limit or cols > dense_limit:
            raise InputError("differential too large for dense JSON export")
        z = self.field.zero()
        mat = [[scalar_to_json(z)] * cols for _ in range(rows)]
        for j, col in enumerate(self.full_diff.get(n, [])):
            for i, c in col.items():
                mat[i][j] = scalar_to_json(c)
        return {"degree": -n, "matrix": mat}

    def __repr__(self):
        return (f"BarTruncation(depth {self.depth}, pieces "
                f"{[self.piece_dim(n) for n in range(self.depth + 1)]})")


def bar_truncation(algebra, idem, depth, piece_cap=DEFAULT_PIECE_CAP):
    """Build the degrees [-depth, 0] truncation; d^2 = 0 is asserted."""
    return BarTruncation(algebra, idem, depth, piece_cap)


# --- cohomology --------------------------------------------------------------

def _cols_to_engine(field, flat_cols):
    """Primitive integer columns for the elimination engine, plus per-column
    scales. Scaling a spanning vector changes no span; kernel coefficients
    are rescaled per column afterwards."""
    if field.characteristic != 0:
        return [dict(c) for c in flat_cols], [1] * len(flat_cols)
    out = []
    scales = []
    for col in flat_cols:
        if not col:
            out.append({})
            scales.append(Fraction(1))
            continue
        mu = 1
        for c in col.values():
            mu = lcm(mu, Fraction(c).denominator)
        icol = {i: int(c * mu) for i, c in col.items()}
        g = 0
        for x in icol.values():
            g = gcd(g, abs(x))
        if g > 1:
            icol = {i: x // g for i, x in icol.items()}
        out.append(icol)
        scales.append(Fraction(mu, g if g > 1 else 1))
    return out, scales


def _primitive_int_vector(field, vec):
    """Clear denominators and strip content; identity in char p."""
    if field.characteristic != 0:
        return [x % field.characteristic for x in vec]
    mu = 1
    for c in vec:
        mu = lcm(mu, Fraction(c).denominator)
    ivec = [int(c * mu) for c in vec]
    g = 0
    for x in ivec:
        g = gcd(g, abs(x))
    if g > 1:
        ivec = [x // g for x in ivec]
    return ivec


class _BlockData:
    __slots__ = ("basis", "reps", "image_rows", "rep_offset")

    def __init__(self):
        self.basis = []
        self.reps = []
        self.image_rows = []
        self.rep_offset = 0


class CohomologyReport:
    """Graded dimensions, representative cocycles, and products of a
    connective dga truncation in a window [-D, 0].

    Degrees above 0 vanish by contract. products[(i, j)] is a nested list:
    entry [a][b] is the coefficient tuple of (basis_a of H^i) * (basis_b of
    H^j) over the basis of H^(i+j), present for all window degrees with
    i + j >= -D. h0_algebra carries the degree-0 algebra structure; bar
    reports also record whether it matched the plain idempotent quotient.
    """

    def __init__(self, field, window_depth, dims, rep_labels, products,
                 h0_algebra, h0_matches_quotient=None, source="bar",
                 degree_minus2_unit=None, rep_vectors=None,
                 stabilized=None, truncation_orders=None):
        self.field = field
        self.window_depth = window_depth
        self.degrees = list(range(0, -window_depth - 1, -1))
        self.dims = dict(dims)
        self.rep_labels = rep_labels or {}
        self.products = products or {}
        self.h0_algebra = h0_algebra
        self.h0_matches_quotient = h0_matches_quotient
        self.source = source
        self.degree_minus2_unit = degree_minus2_unit
        self.rep_vectors = rep_vectors or {}
        self.stabilized = stabilized
        self.truncation_orders = truncation_orders

    def dim(self, j):
        if j > 0:
            return 0
        return self.dims.get(j, 0)

    def left_multiplication(self, i, coeffs, j):
        """Matrix of left multiplication by sum(coeffs . H^i basis) as a map
        H^j -> H^(i+j); rows index H^(i+j), columns index H^j."""
        table = self.products.get((i, j))
        if table is None:
            return None
        F = self.field
        z = F.zero()
        rows, cols = self.dim(i + j), self.dim(j)
        out = [[z] * cols for _ in range(rows)]
        for a, ca in enumerate(coeffs):
            if ca == z:
                continue
            for b in range(cols):
                for k, c in enumerate(table[a][b]):
                    if c != z:
                        out[k][b] = F.add(out[k][b], F.mul(ca, c))
        return out

    def summary(self):
        return {j: self.dim(j) for j in self.degrees}

    def __repr__(self):
        return f"CohomologyReport({self.summary()}, source={self.source!r})"


def cohomology(bar, window_depth, products=True):
    """Cohomology of the truncation in degrees [-window_depth, 0].

    Requires window_depth <= depth - 1 so every computed degree has both
    adjacent differentials. With products=False only dimensions are
    computed, which is much faster on large truncations.
    """
    if window_depth > bar.depth - 1:
        raise WindowExceedsDepth(
            f"window depth {window_depth} needs truncation depth "
            f">= {window_depth + 1}, have {bar.depth}")
    F = bar.field

    # reduced differential columns per degree, flattened within each block
    red_cols = {}
    for n in range(1, window_depth + 2):
        per_key = {}
        for t in bar.red_basis[n]:
            key, pos = bar.red_lookup[n][t]
            col = bar._d_reduced(n, t)
            flat = {}
            for (tkey, tpos), c in col.items():
                if tkey != key:
                    raise InputError("differential leaves its block")
                flat[tpos] = c
            per_key.setdefault(key, []).append(flat)
        red_cols[n] = per_key

    data = {}
    dims = {}
    for n in range(0, window_depth + 1):
        total = 0
        blocks = {}
        for key in sorted(bar.red_blocks[n]):
            basis = bar.red_blocks[n][key]
            width = len(basis)
            blk = _BlockData()
            blk.basis = basis
            if n == 0:
                kernel = [[1 if i == j else 0 for j in range(width)]
                          for i in range(width)]
            else:
                tgt_width = len(bar.red_blocks[n - 1].get(key, []))
                cols = red_cols[n].get(key, [])
                icols, scales = _cols_to_engine(F, cols)
                raw = _intelim.kernel_of_columns(F, icols, tgt_width)
                kernel = []
                for kv in raw:
                    if F.characteristic == 0:
                        vec = [Fraction(x) * scales[i] for i, x in enumerate(kv)]
                        kernel.append(_primitive_int_vector(F, vec))
                    else:
                        kernel.append([x % F.characteristic for x in kv])
            in_cols = red_cols[n + 1].get(key, [])
            iin, _ = _cols_to_engine(F, in_cols)
            ech = _intelim.make_echelon(F, width)
            for col in iin:
                ech.add_row(_intelim.sparse_to_dense(col, width))
            blk.image_rows = [list(r) for r in ech.vrows]
            sel = _intelim.make_echelon(F, width)
            for r in blk.image_rows:
                sel.add_row(r)
            for kv in kernel:
                piv, _ = sel.add_row(kv)
                if piv is not None:
                    blk.reps.append(list(kv))
            blk.rep_offset = total
            total += len(blk.reps)
            blocks[key] = blk
        dims[-n] = total
        data[n] = blocks

    if not products:
        return CohomologyReport(F, window_depth, dims, None, None, None,
                                source="bar")
    return _finish_report(bar, window_depth, data, dims)


def _finish_report(bar, window_depth, data, dims):
    F = bar.field
    z = F.zero()

    reps = {}
    labels = {}
    for n in range(0, window_depth + 1):
        rep_list = []
        lab_list = []
        for key in sorted(data[n]):
            blk = data[n][key]
            for vec in blk.reps:
                rep_list.append((key, vec))
                lab_list.append(_rep_label(bar, n, blk, vec))
        reps[-n] = rep_list
        labels[-n] = lab_list

    solvers = {}

    def solver_for(n, key):
        if (n, key) not in solvers:
            blk = data[n][key]
            width = len(blk.basis)
            ech = _intelim.make_echelon(F, width, tag_width=len(blk.reps))
            for row in blk.image_rows:
                ech.add_row(row)
            for j, row in enumerate(blk.reps):
                tags = [0] * len(blk.reps)
                tags[j] = 1
                ech.add_row(row, tags)
            solvers[(n, key)] = (ech, blk)
        return solvers[(n, key)]

    def reduce_to_h(n, sparse):
        """Coefficients of a cocycle {(key,pos): scalar} over the H^-n basis."""
        out = [z] * dims[-n]
        by_key = {}
        for (key, pos), c in sparse.items():
            if c != z:
                by_key.setdefault(key, {})[pos] = c
        for key, col in by_key.items():
            ech, blk = solver_for(n, key)
            width = len(blk.basis)
            if F.characteristic == 0:
                mu = 1
                for c in col.values():
                    mu = lcm(mu, Fraction(c).denominator)
                vec = [0] * width
                for pos, c in col.items():
                    vec[pos] = int(c * mu)
            else:
                mu = 1
                vec = [0] * width
                for pos, c in col.items():
                    vec[pos] = c % F.characteristic
            residual, tags, den = ech.reduce(vec)
            if any(residual):
                raise InputError("vector is not a cocycle modulo coboundaries")
            for j, t in enumerate(tags):
                if t:
                    if F.characteristic == 0:
                        out[blk.rep_offset + j] = F.sub(
                            out[blk.rep_offset + j], Fraction(t, den * mu))
                    else:
                        out[blk.rep_offset + j] = F.sub(
                            out[blk.rep_offset + j], F.coerce(t))
        return out

    def rep_sparse(n, key, vec):
        return {(key, i): F.coerce(c) for i, c in enumerate(vec) if c}

    products = {}
    for i in range(0, window_depth + 1):
        for j in range(0, window_depth + 1 - i):
            table = []
            for (ka, va) in reps[-i]:
                row = []
                for (kb, vb) in reps[-j]:
                    prod = _concat_product(bar, i, rep_sparse(i, ka, va),
                                           j, rep_sparse(j, kb, vb))
                    row.append(tuple(reduce_to_h(i + j, prod)))
                table.append(row)
            products[(-i, -j)] = table

    a = bar.algebra
    h0_dim = dims.get(0, 0)
    unit_sparse = {}
    for idx, c in enumerate(a.unit):
        if c != z:
            unit_sparse[bar.red_lookup[0][idx]] = c
    if h0_dim:
        h0_unit = reduce_to_h(0, unit_sparse)
        t00 = products[(0, 0)]
        h0_algebra = FinDimAlgebra(
            F, [f"h{i}" for i in range(h0_dim)],
            [[list(t00[x][y]) for y in range(h0_dim)] for x in range(h0_dim)],
            h0_unit)
    else:
        h0_algebra = FinDimAlgebra(F, [], [], [])
    matches = _h0_matches_quotient(bar, data, reps, h0_algebra)

    rep_vectors = {-n: [rep_sparse(n, k, v) for (k, v) in reps[-n]]
                   for n in range(0, window_depth + 1)}
    return CohomologyReport(F, window_depth, dims, labels, products,
                            h0_algebra, h0_matches_quotient=matches,
                            source="bar", rep_vectors=rep_vectors)


def _rep_label(bar, n, blk, vec):
    terms = []
    for i, c in enumerate(vec):
        if c:
            t = blk.basis[i]
            if n == 0:
                terms.append(bar.algebra.basis_labels[t])
            else:
                u, mids, w = t
                mid = ",".join(f"R[{m + 1}]" for m in mids)
                terms.append(f"Ae[{u}]|{mid}|eA[{w}]" if mid else f"Ae[{u}]|eA[{w}]")
            if len(terms) >= 4:
                terms.append("...")
                break
    return " + ".join(terms) if terms else "0"


def _concat_product(bar, ni, xa, nj, xb):
    """Concatenation product of reduced-model chains, sparse over the
    reduced basis at degree -(ni+nj). The merged middle slot drops its unit
    component (multiplication in the quotient by the degenerate dg ideal)."""
    F = bar.field
    z = F.zero()
    out = {}
    lookup = bar.red_lookup[ni + nj]

    def add(t, c):
        if c == z:
            return
        kp = lookup[t]
        out[kp] = F.add(out.get(kp, z), c)

    def scaled(ca, cb, c):
        return F.mul(F.mul(ca, cb), c)

    if ni == 0 and nj == 0:
        for (ka, pa), ca in xa.items():
            ia = bar.red_blocks[0][ka][pa]
            for (kb, pb), cb in xb.items():
                ib = bar.red_blocks[0][kb][pb]
                prod = bar.algebra.mul[ia][ib]
                for k, c in enumerate(prod):
                    if c != z:
                        add(k, scaled(ca, cb, c))
        return out
    if ni == 0:
        for (ka, pa), ca in xa.items():
            ia = bar.red_blocks[0][ka][pa]
            for (kb, pb), cb in xb.items():
                (u, mids, w) = bar.red_blocks[nj][kb][pb]
                for k, c in enumerate(bar.tab_AU[ia][u]):
                    if c != z:
                        add((k, mids, w), scaled(ca, cb, c))
        return out
    if nj == 0:
        for (ka, pa), ca in xa.items():
            (u, mids, w) = bar.red_blocks[ni][ka][pa]
            for (kb, pb), cb in xb.items():
                ib = bar.red_blocks[0][kb][pb]
                for k, c in enumerate(bar.tab_WA[w][ib]):
                    if c != z:
                        add((u, mids, k), scaled(ca, cb, c))
        return out
    for (ka, pa), ca in xa.items():
        (u, mids, w) = bar.red_blocks[ni][ka][pa]
        for (kb, pb), cb in xb.items():
            (u2, mids2, w2) = bar.red_blocks[nj][kb][pb]
            coords = bar.tab_WU[w][u2]
            for k, c in enumerate(coords[1:]):
                if c != z:
                    add((u, mids + (k,) + mids2, w2), scaled(ca, cb, c))
    return out


def _h0_matches_quotient(bar, data, reps, h0_algebra):
    """H^0 versus the plain quotient by the idempotent ideal: the image of
    the degree -1 differential must be AeA, dimensions must agree, and the
    structure constants must match under projection of representatives."""
    a = bar.algebra
    F = a.field
    z = F.zero()
    ideal = two_sided_ideal(a, [bar.idem.element])
    image_rows = []
    for t in bar.red_basis[1]:
        col = bar._d_reduced(1, t)
        vec = [z] * a.dim
        for (key, pos), c in col.items():
            vec[bar.red_blocks[0][key][pos]] = c
        image_rows.append(vec)
    image = Subspace.from_spanning_rows(F, a.dim, image_rows)
    if image != ideal:
        return False
    quot, projection = quotient_algebra(a, ideal)
    if quot.dim != h0_algebra.dim:
        return False
    if quot.dim == 0:
        return True
    rep_vs = []
    for key, vec in reps[0]:
        av = [z] * a.dim
        blk = data[0][key]
        for i, c in enumerate(vec):
            av[blk.basis[i]] = F.coerce(c)
        rep_vs.append(av)
    proj = [projection.apply(v) for v in rep_vs]
    pm = Mat(F, proj)
    if exactlin.rank(pm) != quot.dim:
        return False
    for x in range(h0_algebra.dim):
        for y in range(h0_algebra.dim):
            lhs = quot.mul_vec(tuple(pm.entries[x]), tuple(pm.entries[y]))
            rhs = [z] * quot.dim
            for k, c in enumerate(h0_algebra.mul[x][y]):
                if c != z:
                    for t in range(quot.dim):
                        rhs[t] = F.add(rhs[t], F.mul(c, pm.entries[k][t]))
            if list(lhs) != rhs:
                return False
    return True


# --- the degree -1 kernel, independently of the bar complex ------------------

def h_minus_one_kernel(a, e):
    """Kernel of the multiplication map Ae (x)_R eA -> A, with the tensor
    product over R presented as (Ae (x) eA) / (xr (x) y - x (x) ry).

    Returns a Subspace in the coordinates of the balanced tensor product's
    canonical complement basis; its dimension equals dim H^-1.
    """
    if not isinstance(e, Idempotent):
        e = Idempotent(e)
    F = a.field
    z = F.zero()
    ev = e.coords
    ae_rows, _ = _span_rows(F, [a.mul_vec(a.basis_vector(i), ev)
                                for i in range(a.dim)], a.dim)
    ea_rows, _ = _span_rows(F, [a.mul_vec(ev, a.basis_vector(i))
                                for i in range(a.dim)], a.dim)
    r_rows, _ = _span_rows(F, [a.mul_vec(ev, a.mul_vec(a.basis_vector(i), ev))
                               for i in range(a.dim)], a.dim)
    nU, nW = len(ae_rows), len(ea_rows)
    solvU = _SpanSolver(F, ae_rows, a.dim)
    solvW = _SpanSolver(F, ea_rows, a.dim)

    def tix(i, j):
        return i * nW + j

    balancing = []
    for i, u in enumerate(ae_rows):
        for r in r_rows:
            ur = solvU.coords(a.mul_vec(u, r))
            for j, w in enumerate(ea_rows):
                rw = solvW.coords(a.mul_vec(r, w))
                vec = [z] * (nU * nW)
                for k, c in enumerate(ur):
                    if c != z:
                        vec[tix(k, j)] = F.add(vec[tix(k, j)], c)
                for k, c in enumerate(rw):
                    if c != z:
                        vec[tix(i, k)] = F.sub(vec[tix(i, k)], c)
                if any(x != z for x in vec):
                    balancing.append(vec)
    bal = Subspace.from_spanning_rows(F, nU * nW, balancing)
    pivot_set = set(bal.pivots)
    kept = [i for i in range(nU * nW) if i not in pivot_set]
    kept_pos = {c: i for i, c in enumerate(kept)}

    # multiplication on the quotient coordinates
    rows = []
    for c in kept:
        i, j = divmod(c, nW)
        rows.append(list(a.mul_vec(ae_rows[i], ea_rows[j])))
    mu = Mat(F, [[rows[r][c] for r in range(len(kept))] for c in range(a.dim)])
    return exactlin.kernel_basis(mu)


# --- Tor oracle over the cornering -------------------------------------------

class RightModule:
    """Finite-dimensional right module over a FinDimAlgebra: action matrices
    act[r] send a module vector to (vector . b_r)."""

    def __init__(self, algebra, dim, act):
        self.algebra = algebra
        self.dim = dim
        self.act = act  # list over algebra basis of dim x dim Mat

    def vector_times(self, vec, rcoords):
        F = self.algebra.field
        z = F.zero()
        out = [z] * self.dim
        for r, c in enumerate(rcoords):
            if c == z:
                continue
            img = self.act[r].apply(list(vec))
            for i, x in enumerate(img):
                if x != z:
                    out[i] = F.add(out[i], F.mul(c, x))
        return out


class LeftModule:
    """Finite-dimensional left module: act[r] sends a vector to b_r . vector."""

    def __init__(self, algebra, dim, act):
        self.algebra = algebra
        self.dim = dim
        self.act = act


def ae_module(a, e, corner=None, inclusion=None):
    """Ae as a right module over the cornering eAe."""
    if not isinstance(e, Idempotent):
        e = Idempotent(e)
    if corner is None:
        corner, inclusion = cornering(a, e)
    F = a.field
    ev = e.coords
    rows, _ = _span_rows(F, [a.mul_vec(a.basis_vector(i), ev)
                             for i in range(a.dim)], a.dim)
    solv = _SpanSolver(F, rows, a.dim)
    incl_rows = [tuple(r) for r in inclusion.entries]
    act = []
    for r in range(corner.dim):
        cols = [solv.coords(a.mul_vec(u, incl_rows[r])) for u in rows]
        act.append(Mat(F, [[cols[j][i] for j in range(len(rows))]
                           for i in range(len(rows))]))
    return RightModule(corner, len(rows), act)


def ea_module(a, e, corner=None, inclusion=None):
    """eA as a left module over the cornering eAe."""
    if not isinstance(e, Idempotent):
        e = Idempotent(e)
    if corner is None:
        corner, inclusion = cornering(a, e)
    F = a.field
    ev = e.coords
    rows, _ = _span_rows(F, [a.mul_vec(ev, a.basis_vector(i))
                             for i in range(a.dim)], a.dim)
    solv = _SpanSolver(F, rows, a.dim)
    incl_rows = [tuple(r) for r in inclusion.entries]
    act = []
    for r in range(corner.dim):
        cols = [solv.coords(a.mul_vec(incl_rows[r], w)) for w in rows]
        act.append(Mat(F, [[cols[j][i] for j in range(len(rows))]
                           for i in range(len(rows))]))
    return LeftModule(corner, len(rows), act)


def _module_generators(rmod):
    """Minimal generators in char 0 (basis modulo M.rad), any spanning set
    otherwise."""
    R = rmod.algebra
    F = R.field
    if F.characteristic != 0 or rmod.dim == 0:
        return [tuple(1 if i == j else 0 for j in range(rmod.dim))
                for i in range(rmod.dim)]
    rad = radical_subspace(R)
    rows = []
    for i in range(rmod.dim):
        base = [F.one() if j == i else F.zero() for j in range(rmod.dim)]
        for rv in rad.basis.entries:
            rows.append(rmod.vector_times(base, tuple(rv)))
    mrad = Subspace.from_spanning_rows(F, rmod.dim, rows)
    pivot_set = set(mrad.pivots)
    gens = []
    for i in range(rmod.dim):
        if i not in pivot_set:
            gens.append(tuple(F.one() if j == i else F.zero()
                              for j in range(rmod.dim)))
    return gens


def tor_oracle(r, right_mod, left_mod, n):
    """dim Tor_n over r of (right_mod, left_mod), via an explicit free
    resolution of the right module built by iterated kernels of free
    covers. Independent of the bar complex."""
    F = r.field
    z = F.zero()
    rdim = r.dim

    # current module: dim + action mats; maps recorded as matrices over r
    cur = right_mod
    maps = []  # maps[k]: list of columns; column = list of r-coordinate tuples
    for _step in range(n + 2):
        gens = _module_generators(cur)
        g = len(gens)
        # free cover r^g -> cur: flattened domain basis (slot, r-basis)
        cover_cols = []
        for s in range(g):
            for i in range(rdim):
                img = cur.vector_times(gens[s], r.basis_vector(i))
                cover_cols.append((s, i, img))
        maps.append((g, gens, cur))
        # kernel of the cover, as a submodule of r^g
        mat = Mat(F, [[col[2][row] for col in cover_cols]
                      for row in range(cur.dim)]) if cur.dim else Mat.zero(F, 0, g * rdim)
        kern = exactlin.kernel_basis(mat)
        # next module: the kernel with the right action of r on r^g
        kdim = kern.dim
        krows = [tuple(rr) for rr in kern.basis.entries]
        solv = _SpanSolver(F, krows, g * rdim) if kdim else None
        act = []
        for t in range(rdim):
            cols = []
            for kv in krows:
                out = [z] * (g * rdim)
                for c_idx, c in enumerate(kv):
                    if c == z:
                        continue
                    s, i = divmod(c_idx, rdim)
                    prod = r.mul[i][t]
                    for k2, c2 in enumerate(prod):
                        if c2 != z:
                            out[s * rdim + k2] = F.add(out[s * rdim + k2],
                                                       F.mul(c, c2))
                cols.append(solv.coords(out) if kdim else ())
            act.append(Mat(F, [[cols[j][i] for j in range(kdim)]
                               for i in range(kdim)]) if kdim else Mat.zero(F, 0, 0))

        class _Sub:
            pass

        nxt = RightModule(r, kdim, act)
        nxt._embedding = krows  # vectors in r^g coordinates
        nxt._free_rank = g
        cur = nxt

    # tensor the resolution with the left module and take homology at n
    ldim = left_mod.dim

    def induced(step):
        """Map F_step (x) N -> F_(step-1) (x) N from the embedding of the
        step-th syzygy into r^(g_(step-1))."""
        g_prev = maps[step - 1][0] if step >= 1 else None
        mod = maps[step][2]  # the syzygy module at this step, with embedding
        emb = getattr(mod, "_embedding", None)
        g_cur = maps[step][0]
        gens = maps[step][1]
        # generator images inside r^(g_prev): expand generator in embedding
        cols = []
        for gen in gens:
            vec = [z] * (mod._free_rank * rdim) if hasattr(mod, "_free_rank") else None
            emb_rows = mod._embedding
            out = [z] * (len(emb_rows[0]) if emb_rows else 0)
            for i, c in enumerate(gen):
                if c != z:
                    for t, x in enumerate(emb_rows[i]):
                        if x != z:
                            out[t] = F.add(out[t], F.mul(c, x))
            cols.append(out)
        # each col is in r^(g_prev) flattened; build field-linear map on
        # (g_cur x N) -> (g_prev x N): block (p, slot) gets left-mult by entry
        rows_dim = maps[step - 1][0] * ldim
        cols_out = []
        for s in range(g_cur):
            a_entries = []  # r-coordinates per target slot
            col = cols[s]
            for p in range(maps[step - 1][0]):
                a_entries.append(col[p * rdim:(p + 1) * rdim])
            for b in range(ldim):
                out = [z] * rows_dim
                for p in range(maps[step - 1][0]):
                    rc = a_entries[p]
                    acc = [z] * ldim
                    for t, c in enumerate(rc):
                        if c == z:
                            continue
                        img = left_mod.act[t].apply(
                            [F.one() if q == b else z for q in range(ldim)])
                        for q, x in enumerate(img):
                            if x != z:
                                acc[q] = F.add(acc[q], F.mul(c, x))
                    for q, x in enumerate(acc):
                        if x != z:
                            out[p * ldim + q] = F.add(out[p * ldim + q], x)
                cols_out.append(out)
        return Mat(F, [[cols_out[j][i] for j in range(g_cur * ldim)]
                       for i in range(rows_dim)])

    if n == 0:
        d1 = induced(1)
        g0 = maps[0][0]
        return g0 * ldim - exactlin.rank(d1)
    dn = induced(n)
    dn1 = induced(n + 1)
    return exactlin.kernel_basis(dn).dim - exactlin.rank(dn1)


# --- periodicity class -------------------------------------------------------

class PeriodicityClass:
    """A degree -2 class whose left multiplication is an isomorphism
    H^j -> H^(j-2) throughout the verified window."""

    def __init__(self, coeffs, representative, window, verified_degrees):
        self.coeffs = tuple(coeffs)
        self.representative = representative
        self.window = window
        self.verified_degrees = list(verified_degrees)

    def __repr__(self):
        return (f"PeriodicityClass(coeffs={self.coeffs}, "
                f"window={self.window})")


def find_periodicity_element(report, local_hint=None):
    """Search H^-2 for a class whose left multiplication gives isomorphisms
    H^j -> H^(j-2) for every window degree with j-2 >= -D.

    The sweep tries the H^-2 basis and its H^0 multiples; the first class
    that verifies wins. Requires the window to reach at least -6 and the
    degree-0 cohomology to be Artinian local (checked unless local_hint is
    True)."""
    D = report.window_depth
    if D < 6:
        raise InputError("periodicity search needs a window reaching -6")
    if local_hint is False:
        raise NotLocal("caller asserts H^0 is not local")
    if local_hint is None:
        if report.h0_algebra is None:
            raise InputError("report carries no H^0 algebra structure")
        try:
            local, _ = is_local(report.h0_algebra)
        except UnsupportedCharacteristic:
            raise NotLocal("cannot verify locality over a prime field; "
                           "pass local_hint")
        if not local:
            raise NotLocal("H^0 is not an Artinian local algebra")

    F = report.field
    z, o = F.zero(), F.one()
    d2 = report.dim(-2)
    if d2 == 0:
        raise NoPeriodicityClass("H^-2 is zero")

    candidates = []
    for k in range(d2):
        candidates.append(tuple(o if i == k else z for i in range(d2)))
    # H^0 multiples of the basis classes
    t0 = report.products.get((0, -2))
    if t0 is not None:
        for x in range(report.dim(0)):
            for k in range(d2):
                cand = t0[x][k]
                if any(c != z for c in cand):
                    candidates.append(tuple(cand))

    degrees = [j for j in range(0, -D - 1, -1) if j - 2 >= -D]
    for cand in candidates:
        ok = True
        for j in degrees:
            m = report.left_multiplication(-2, cand, j)
            if m is None:
                ok = False
                break
            if report.dim(j) != report.dim(j - 2):
                ok = False
                break
            mat = Mat(F, m) if m else Mat.zero(F, 0, 0)
            if report.dim(j) and exactlin.rank(mat) != report.dim(j):
                ok = False
                break
            if report.dim(j) == 0 and report.dim(j - 2) != 0:
                ok = False
                break
        if ok:
            rep = None
            if report.rep_vectors.get(-2):
                rep = {}
                for k, c in enumerate(cand):
                    if c != z:
                        for t, c2 in report.rep_vectors[-2][k].items():
                            rep[t] = F.add(rep.get(t, z), F.mul(c, c2))
            return PeriodicityClass(cand, rep, (-D, 0), degrees)
    raise NoPeriodicityClass(
        "no degree -2 class acts invertibly through the window; the input "
        "may not come from an isolated hypersurface, or the window is too small")


# --- experimental degree-zero Hochschild cohomology --------------------------

class HochschildZeroReport:
    def __init__(self, values, stabilized):
        self.values = list(values)
        self.stabilized = stabilized

    def __repr__(self):
        return (f"HochschildZeroReport(values={self.values}, "
                f"stabilized={self.stabilized})")


def hochschild_zero_experimental(a, bar, depth_schedule=(1, 2, 3)):
    """Degree-0 cohomology of the truncated total complex computing the
    Hochschild cohomology of the algebra with coefficients in the
    truncation.

    Experimental: the truncation only approximates the limit, so the result
    carries a stabilization flag (last two schedule values agree) and is
    never asserted against. Truncation level t keeps cochain components on
    at most t tensor arguments, with constraint components up to t+1."""
    values = []
    for t in depth_schedule:
        if t + 1 > bar.depth:
            raise InputError(f"schedule depth {t} needs bar depth >= {t + 1}")
        values.append(_hh0_at_depth(a, bar, t))
    stabilized = len(values) >= 2 and values[-1] == values[-2]
    return HochschildZeroReport(values, stabilized)


def _hochschild_column(bar, p, alpha, bi, put):
    """Total-differential column of the basis cochain sending the tensor
    tuple alpha to reduced basis element bi of B^-p: Hochschild terms plus
    (-1)^p times the internal differential."""
    a = bar.algebra
    F = bar.field
    z = F.zero()
    n = a.dim
    for a1 in range(n):
        for tt, c in _left_action(bar, p, a1, bi).items():
            put((p + 1, (a1,) + alpha, tt), c)
    sign = F.one()
    for i in range(1, p + 1):
        sign = F.neg(sign)
        left_part = alpha[:i - 1]
        right_part = alpha[i:]
        target = alpha[i - 1]
        for x in range(n):
            for y in range(n):
                c = a.mul[x][y][target]
                if c != z:
                    put((p + 1, left_part + (x, y) + right_part, bi),
                        F.mul(sign, c))
    sign = F.neg(sign)
    for a1 in range(n):
        for tt, c in _right_action(bar, p, bi, a1).items():
            put((p + 1, alpha + (a1,), tt), F.mul(sign, c))
    if p >= 1:
        vsign = F.one() if p % 2 == 0 else F.neg(F.one())
        sparse = bar._d_reduced(p, bar.red_basis[p][bi])
        blocks = bar.red_blocks[p - 1]
        for (key, pos), c in sparse.items():
            tt = bar.red_index[p - 1][blocks[key][pos]]
            put((p, alpha, tt), F.mul(vsign, c))


def _hh0_at_depth(a, bar, t):
    F = a.field
    z = F.zero()
    n = a.dim

    deg0 = []
    for p in range(0, t + 1):
        for alpha in itertools.product(range(n), repeat=p):
            for bi in range(len(bar.red_basis[p])):
                deg0.append((p, alpha, bi))
    idx0 = {key: i for i, key in enumerate(deg0)}

    deg1 = []
    for p in range(1, t + 2):
        for alpha in itertools.product(range(n), repeat=p):
            for bi in range(len(bar.red_basis[p - 1])):
                deg1.append((p, alpha, bi))
    idx1 = {key: i for i, key in enumerate(deg1)}

    cols = []
    for (p, alpha, bi) in deg0:
        col = {}

        def put(key, coeff):
            if coeff == z:
                return
            pp, aa, tt = key
            # cochain components map A^(x pp) into B^-(pp-1) at degree 1
            i = idx1.get((pp, aa, tt))
            if i is not None:
                col[i] = F.add(col.get(i, z), coeff)

        _hochschild_column(bar, p, alpha, bi, put)
        cols.append(col)

    # degree -1 components: p tensor arguments into B^-(p+1)
    cols_in = []
    for p in range(0, t):
        for alpha in itertools.product(range(n), repeat=p):
            for bi in range(len(bar.red_basis[p + 1])):
                col = {}

                def put0(key, coeff):
                    if coeff == z:
                        return
                    pp, aa, tt = key
                    # targets are degree-0 components A^(x pp) -> B^-pp
                    i = idx0.get((pp, aa, tt))
                    if i is not None:
                        col[i] = F.add(col.get(i, z), coeff)

                # the same formula, with the vertical part now mapping
                # B^-(p+1) -> B^-p, landing in degree 0
                for a1 in range(n):
                    for tt, c in _left_action(bar, p + 1, a1, bi).items():
                        put0((p + 1, (a1,) + alpha, tt), c)
                sign = F.one()
                for i2 in range(1, p + 1):
                    sign = F.neg(sign)
                    left_part = alpha[:i2 - 1]
                    right_part = alpha[i2:]
                    target = alpha[i2 - 1]
                    for x in range(n):
                        for y in range(n):
                            c = a.mul[x][y][target]
                            if c != z:
                                put0((p + 1, left_part + (x, y) + right_part, bi),
                                     F.mul(sign, c))
                sign = F.neg(sign)
                for a1 in range(n):
                    for tt, c in _right_action(bar, p + 1, bi, a1).items():
                        put0((p + 1, alpha + (a1,), tt), F.mul(sign, c))
                vsign = F.one() if p % 2 == 0 else F.neg(F.one())
                sparse = bar._d_reduced(p + 1, bar.red_basis[p + 1][bi])
                blocks = bar.red_blocks[p]
                for (key, pos), c in sparse.items():
                    tt = bar.red_index[p][blocks[key][pos]]
                    put0((p, alpha, tt), F.mul(vsign, c))
                cols_in.append(col)

    ic, _ = _cols_to_engine(F, cols)
    kernel = _intelim.kernel_of_columns(F, ic, len(deg1))
    iin, _ = _cols_to_engine(F, cols_in)
    ech = _intelim.make_echelon(F, len(deg0))
    for c in iin:
        ech.add_row(_intelim.sparse_to_dense(c, len(deg0)))
    sel = _intelim.make_echelon(F, len(deg0))
    for r in ech.vrows:
        sel.add_row(list(r))
    dim_h = 0
    for kv in kernel:
        piv, _ = sel.add_row(kv)
        if piv is not None:
            dim_h += 1
    return dim_h


def _left_action(bar, p, a_idx, bi):
    """a . (reduced basis element bi of B^-p), sparse over flat indices."""
    F = bar.field
    z = F.zero()
    out = {}
    if p == 0:
        for k, c in enumerate(bar.algebra.mul[a_idx][bi]):
            if c != z:
                out[k] = c
        return out
    u, mids, w = bar.red_basis[p][bi]
    index = bar.red_index[p]
    for k, c in enumerate(bar.tab_AU[a_idx][u]):
        if c != z:
            out[index[(k, mids, w)]] = c
    return out


def _right_action(bar, p, bi, a_idx):
    F = bar.field
    z = F.zero()
    out = {}
    if p == 0:
        for k, c in enumerate(bar.algebra.mul[bi][a_idx]):
            if c != z:
                out[k] = c
        return out
    u, mids, w = bar.red_basis[p][bi]
    index = bar.red_index[p]
    for k, c in enumerate(bar.tab_WA[w][a_idx]):
        if c != z:
            out[index[(u, mids, k)]] = c
    return out
