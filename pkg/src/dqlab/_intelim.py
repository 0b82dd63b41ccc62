"""Internal elimination engine for large block matrices.

The bar-complex differentials of the corpus algebras have small integer
entries, so ranks, kernels and coset reductions are done here with
arbitrary-precision integer rows (multiply-through elimination, rows kept
gcd-stripped) instead of Fraction arithmetic. Results are exact over Q and
are cross-validated against exactlin in the test suite. A modular variant
provides the same interface over prime fields.

Tag columns ride along with each row and record how the row was combined
from the originally inserted rows; coset reductions read coefficients off
the tags. Invariant: for every stored row, vec == sum(tag_j * original_j)
modulo rows inserted with zero tags.
"""

from math import gcd


def _gcd_of(vals, start=0):
    g = start
    for x in vals:
        if x:
            g = gcd(g, x if x > 0 else -x)
            if g == 1:
                return 1
    return g


class IntEchelon:
    """Staircase echelon of integer rows with optional tag columns.

    add_row reduces the incoming row against the echelon by multiply-through
    elimination (v <- mp*v - mf*row), so no fractions ever appear.
    """

    __slots__ = ("width", "tag_width", "vrows", "trows", "_by_pivot")

    def __init__(self, width, tag_width=0):
        self.width = width
        self.tag_width = tag_width
        self.vrows = []
        self.trows = []
        self._by_pivot = {}

    @property
    def rank(self):
        return len(self.vrows)

    def reduce(self, row, tags=None):
        """Reduce row (+tags) against the echelon.

        Returns (residual, tags, den) with
        residual == den*row - (combination of stored rows).
        """
        v = list(row)
        t = list(tags) if tags is not None else [0] * self.tag_width
        den = 1
        by_pivot = self._by_pivot
        c = 0
        w = self.width
        while c < w:
            f = v[c]
            if not f:
                c += 1
                continue
            hit = by_pivot.get(c)
            if hit is None:
                c += 1
                continue
            ev = self.vrows[hit]
            et = self.trows[hit]
            p = ev[c]
            g = gcd(p, f if f > 0 else -f)
            mp, mf = p // g, f // g
            if mp < 0:
                mp, mf = -mp, -mf
            if mp == 1:
                v = [a - mf * b for a, b in zip(v, ev)]
                if et or t:
                    t = [a - mf * b for a, b in zip(t, et)]
            else:
                v = [mp * a - mf * b for a, b in zip(v, ev)]
                t = [mp * a - mf * b for a, b in zip(t, et)]
                den *= mp
                if den > 1 << 128:
                    g2 = _gcd_of(v, _gcd_of(t, den))
                    if g2 > 1:
                        den //= g2
                        v = [x // g2 for x in v]
                        t = [x // g2 for x in t]
            c += 1
        return v, t, den

    def add_row(self, row, tags=None):
        """Insert a row. Returns (pivot, None) on a new pivot, or
        (None, reduced_tags) if the row reduced to zero."""
        v, t, _ = self.reduce(row, tags)
        piv = None
        for c in range(self.width):
            if v[c]:
                piv = c
                break
        if piv is None:
            return None, t
        g = _gcd_of(v, _gcd_of(t))
        if g > 1:
            v = [x // g for x in v]
            t = [x // g for x in t]
        self._by_pivot[piv] = len(self.vrows)
        self.vrows.append(v)
        self.trows.append(t)
        return piv, None

    def contains(self, row):
        v, _, _ = self.reduce(row)
        return not any(v)


class ModEchelon:
    """Same interface as IntEchelon, arithmetic mod a prime. Echelon rows
    are normalized to pivot 1, so reduce always returns den == 1."""

    __slots__ = ("width", "tag_width", "vrows", "trows", "_by_pivot", "p")

    def __init__(self, width, tag_width=0, p=2):
        self.width = width
        self.tag_width = tag_width
        self.vrows = []
        self.trows = []
        self._by_pivot = {}
        self.p = p

    @property
    def rank(self):
        return len(self.vrows)

    def reduce(self, row, tags=None):
        p = self.p
        v = [x % p for x in row]
        t = [x % p for x in tags] if tags is not None else [0] * self.tag_width
        by_pivot = self._by_pivot
        for c in range(self.width):
            f = v[c]
            if not f:
                continue
            hit = by_pivot.get(c)
            if hit is None:
                continue
            ev = self.vrows[hit]
            et = self.trows[hit]
            v = [(a - f * b) % p for a, b in zip(v, ev)]
            if et or t:
                t = [(a - f * b) % p for a, b in zip(t, et)]
        return v, t, 1

    def add_row(self, row, tags=None):
        p = self.p
        v, t, _ = self.reduce(row, tags)
        piv = None
        for c in range(self.width):
            if v[c]:
                piv = c
                break
        if piv is None:
            return None, t
        inv = pow(v[piv], p - 2, p)
        v = [(x * inv) % p for x in v]
        t = [(x * inv) % p for x in t]
        self._by_pivot[piv] = len(self.vrows)
        self.vrows.append(v)
        self.trows.append(t)
        return piv, None

    def contains(self, row):
        v, _, _ = self.reduce(row)
        return not any(v)


def make_echelon(field, width, tag_width=0):
    if field.characteristic == 0:
        return IntEchelon(width, tag_width)
    return ModEchelon(width, tag_width, p=field.characteristic)


def sparse_to_dense(col, width):
    v = [0] * width
    for i, x in col.items():
        v[i] = x
    return v


def rank_of_columns(field, columns, width):
    """Rank of the matrix whose columns are sparse dicts {row_index: int}."""
    ech = make_echelon(field, width)
    for col in columns:
        ech.add_row(sparse_to_dense(col, width))
    return ech.rank


def kernel_of_columns(field, columns, width):
    """Kernel, as dense coefficient vectors over the columns, of the matrix
    with the given sparse columns. Integer vectors in char 0."""
    n = len(columns)
    ech = make_echelon(field, width, tag_width=n)
    kernel = []
    for j, col in enumerate(columns):
        tags = [0] * n
        tags[j] = 1
        piv, t = ech.add_row(sparse_to_dense(col, width), tags)
        if piv is None:
            g = _gcd_of(t)
            if g > 1:
                t = [x // g for x in t]
            kernel.append(t)
    return kernel
