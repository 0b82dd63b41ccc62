"""Quivers with relations and degree-bounded quotient algebras.

Paths compose left to right: in the word "fg", arrow f is followed by
arrow g. Relations are linear combinations of parallel paths; an
arrow-linear relation like w - y*z identifies the arrow w with the
composite and is eliminated before any span construction. The quotient is
built inside the span of paths up to the degree bound, with a nilpotency
witness (every path of maximal length lies in the relation span)
certifying that the bound truncates nothing.
"""

from fractions import Fraction

from dqlab.exactlin import QQ, Subspace
from dqlab.algebra import FinDimAlgebra, Idempotent
from dqlab.errors import DegreeBoundInsufficient, InputError

DEFAULT_DEGREE_BOUND = 12
PATH_COUNT_CAP = 200000


class Quiver:
    """Vertices 1..n and named arrows between them."""

    def __init__(self, vertex_count, arrows):
        self.vertex_count = vertex_count
        self.arrows = [(str(n), int(s), int(t)) for (n, s, t) in arrows]
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("arrow names must be unique")
        for name, s, t in self.arrows:
            if not (1 <= s <= vertex_count and 1 <= t <= vertex_count):
                raise InputError(f"arrow {name} has endpoint out of range")
        self.source = {n: s for n, s, t in self.arrows}
        self.target = {n: t for n, s, t in self.arrows}

    def __repr__(self):
        return f"Quiver({self.vertex_count} vertices, {len(self.arrows)} arrows)"


class QuiverPresentation:
    """A quiver, relations (parsed linear combinations of parallel paths),
    and a degree bound."""

    def __init__(self, quiver, relations, degree_bound=DEFAULT_DEGREE_BOUND):
        self.quiver = quiver
        self.degree_bound = int(degree_bound)
        if self.degree_bound < 1:
            raise InputError("degree bound must be at least 1")
        self.relations = []
        for rel in relations:
            combo = parse_relation(rel, quiver) if isinstance(rel, str) else dict(rel)
            combo = {w: c for w, c in combo.items() if c != 0}
            if not combo:
                continue
            _validate_parallel(combo, quiver)
            self.relations.append(combo)

    @classmethod
    def from_json(cls, data):
        try:
            q = Quiver(int(data["vertices"]),
                       [(a["name"], a["from"], a["to"]) for a in data["arrows"]])
            rels = list(data.get("relations", []))
            bound = int(data.get("degree_bound", DEFAULT_DEGREE_BOUND))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed quiver JSON: {exc}") from exc
        return cls(q, rels, bound)


class PathBasisAlgebra:
    """A degree-bounded quiver quotient with its path labels and vertex
    idempotents."""

    def __init__(self, algebra, path_labels, vertex_idempotents, vertex_numbers):
        self.algebra = algebra
        self.path_labels = path_labels
        self.vertex_idempotents = vertex_idempotents
        self.vertex_numbers = vertex_numbers

    def vertex_idempotent_element(self, vertex):
        return self.algebra.element(self.vertex_idempotents[vertex])

    def __repr__(self):
        return f"PathBasisAlgebra(dim {self.algebra.dim})"


# --- relation parsing -------------------------------------------------------

def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append(ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
            continue
        raise InputError(f"unexpected character {ch!r} in relation {text!r}")
    return tokens


def _combo_mul(a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            out[w] = out.get(w, Fraction(0)) + ca * cb
    return {w: c for w, c in out.items() if c != 0}


def _combo_add(a, b, sign=1):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, Fraction(0)) + sign * c
    return {w: c for w, c in out.items() if c != 0}


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_expr(self):
        sign = 1
        if self.peek() == "-":
            self.next()
            sign = -1
        elif self.peek() == "+":
            self.next()
        combo = _combo_mul({(): Fraction(sign)}, self.parse_term())
        while self.peek() in ("+", "-"):
            op = self.next()
            term = self.parse_term()
            combo = _combo_add(combo, term, 1 if op == "+" else -1)
        return combo

    def parse_term(self):
        combo = self.parse_power()
        while self.peek() == "*":
            self.next()
            combo = _combo_mul(combo, self.parse_power())
        return combo

    def parse_power(self):
        base = self.parse_atom()
        while self.peek() == "^":
            self.next()
            exp = self.next()
            if not isinstance(exp, int) or exp < 0:
                raise InputError(f"bad exponent in {self.text!r}")
            acc = {(): Fraction(1)}
            for _ in range(exp):
                acc = _combo_mul(acc, base)
            base = acc
        return base

    def parse_atom(self):
        tok = self.next()
        if tok is None:
            raise InputError(f"unexpected end of relation {self.text!r}")
        if isinstance(tok, int):
            return {(): Fraction(tok)}
        if tok == "(":
            inner = self.parse_expr()
            if self.next() != ")":
                raise InputError(f"unbalanced parentheses in {self.text!r}")
            return inner
        if isinstance(tok, tuple) and tok[0] == "name":
            return {(tok[1],): Fraction(1)}
        raise InputError(f"unexpected token {tok!r} in {self.text!r}")


def parse_relation(text, quiver):
    """Parse a relation string into {word: coefficient}; words are tuples
    of arrow names composed left to right."""
    parser = _Parser(_tokenize(text), text)
    combo = parser.parse_expr()
    if parser.peek() is not None:
        raise InputError(f"trailing tokens in relation {text!r}")
    for word in combo:
        if len(word) == 0:
            raise InputError(f"relation {text!r} has a scalar term")
        _word_endpoints(word, quiver)
    _validate_parallel(combo, quiver)
    return combo


def _word_endpoints(word, quiver):
    for name in word:
        if name not in quiver.source:
            raise InputError(f"unknown arrow {name!r}")
    for a, b in zip(word, word[1:]):
        if quiver.target[a] != quiver.source[b]:
            raise InputError(f"word {'*'.join(word)} is not composable")
    return quiver.source[word[0]], quiver.target[word[-1]]


def _validate_parallel(combo, quiver):
    endpoints = {_word_endpoints(w, quiver) for w in combo}
    if len(endpoints) > 1:
        raise InputError("relation terms are not parallel paths")


# --- arrow elimination ------------------------------------------------------

def _substitute(combo, name, replacement):
    """Replace every occurrence of the arrow in every word; replacement is
    itself a combo (possibly empty, meaning zero)."""
    out = {}
    for word, coeff in combo.items():
        expanded = {(): coeff}
        for a in word:
            expanded = _combo_mul(expanded, replacement if a == name else {(a,): Fraction(1)})
        for w, c in expanded.items():
            out[w] = out.get(w, Fraction(0)) + c
    return {w: c for w, c in out.items() if c != 0}


def eliminate_identifications(quiver, relations):
    """Remove arrow-linear identification relations (w = combination of
    longer parallel paths, or w = 0) by substitution. Returns the reduced
    quiver and relations."""
    arrows = list(quiver.arrows)
    rels = [dict(r) for r in relations]
    while True:
        target = None
        for ri, rel in enumerate(rels):
            linear = [w for w in rel if len(w) == 1]
            if linear:
                target = (ri, linear[0])
                break
        if target is None:
            break
        ri, word = target
        rel = rels.pop(ri)
        name = word[0]
        coeff = rel[word]
        rest = {w: -c / coeff for w, c in rel.items() if w != word}
        if any(name in w for w in rest):
            raise InputError(f"cannot eliminate arrow {name!r}: appears on both sides")
        arrows = [a for a in arrows if a[0] != name]
        rels = [_substitute(r, name, rest) for r in rels]
        rels = [r for r in rels if r]
    reduced = Quiver(quiver.vertex_count, arrows)
    for r in rels:
        _validate_parallel(r, reduced)
    return reduced, rels


# --- path enumeration and the quotient algebra ------------------------------

class _Path:
    __slots__ = ("word", "src", "tgt")

    def __init__(self, word, src, tgt):
        self.word = word
        self.src = src
        self.tgt = tgt


def _enumerate_paths(quiver, bound):
    paths = [_Path((), v, v) for v in range(1, quiver.vertex_count + 1)]
    frontier = list(paths)
    for _ in range(bound):
        new = []
        for p in frontier:
            for name, s, t in quiver.arrows:
                if s == p.tgt:
                    new.append(_Path(p.word + (name,), p.src, t))
        paths.extend(new)
        frontier = new
        if len(paths) > PATH_COUNT_CAP:
            raise DegreeBoundInsufficient(
                f"more than {PATH_COUNT_CAP} paths below the degree bound; "
                "the quotient is likely infinite-dimensional at this bound")
        if not frontier:
            break
    paths.sort(key=lambda p: (len(p.word), p.word, p.src))
    return paths


def _path_label(p):
    return "*".join(p.word) if p.word else f"e{p.src}"


def build_algebra(presentation, field=QQ):
    """Quotient of the path algebra by the relations, inside paths of
    length up to the degree bound, over the chosen exact field.

    Raises DegreeBoundInsufficient when the nilpotency witness fails (some
    path of maximal length is not in the relation span), which signals an
    infinite-dimensional quotient or a bound that is too small; raising
    the bound may help.
    """
    quiver, relations = eliminate_identifications(
        presentation.quiver, presentation.relations)
    bound = presentation.degree_bound
    paths = _enumerate_paths(quiver, bound)
    index = {(p.word, p.src): i for i, p in enumerate(paths)}
    npaths = len(paths)

    def path_key(word, src):
        # trivial path needs its vertex; nontrivial determined by the word
        if word:
            return index.get((word, quiver.source[word[0]]))
        return index.get(((), src))

    # relation span: u * r * v over all sandwiching paths, fully below bound
    rows = []
    by_source = {}
    for p in paths:
        by_source.setdefault(p.src, []).append(p)
    by_target = {}
    for p in paths:
        by_target.setdefault(p.tgt, []).append(p)
    for rel in relations:
        words = list(rel.items())
        s = quiver.source[words[0][0][0]]
        t = quiver.target[words[0][0][-1]]
        max_len = max(len(w) for w, _ in words)
        for u in by_target.get(s, []):
            for v in by_source.get(t, []):
                if len(u.word) + max_len + len(v.word) > bound:
                    continue
                vec = [field.zero()] * npaths
                for w, c in words:
                    k = path_key(u.word + w + v.word, u.src)
                    vec[k] = field.add(vec[k], field.coerce(c))
                rows.append(vec)
    span = Subspace.from_spanning_rows(field, npaths, rows)

    # closure under truncated multiplication by arrows on both sides
    while True:
        new_rows = []
        zf = field.zero()
        for row in span.basis.entries:
            for name, s, t in quiver.arrows:
                left = [zf] * npaths
                right = [zf] * npaths
                touched_l = touched_r = False
                for i, c in enumerate(row):
                    if c == zf:
                        continue
                    p = paths[i]
                    if p.src == t and len(p.word) + 1 <= bound:
                        k = path_key((name,) + p.word, s)
                        left[k] = field.add(left[k], c)
                        touched_l = True
                    if p.tgt == s and len(p.word) + 1 <= bound:
                        k = path_key(p.word + (name,), p.src)
                        right[k] = field.add(right[k], c)
                        touched_r = True
                if touched_l and not span.contains(left):
                    new_rows.append(left)
                if touched_r and not span.contains(right):
                    new_rows.append(right)
        if not new_rows:
            break
        span = Subspace.from_spanning_rows(
            field, npaths, [list(r) for r in span.basis.entries] + new_rows)

    # nilpotency witness: every path of maximal length lies in the span
    z = field.zero()
    for i, p in enumerate(paths):
        if len(p.word) == bound:
            vec = [z] * npaths
            vec[i] = field.one()
            if not span.contains(vec):
                raise DegreeBoundInsufficient(
                    f"path {_path_label(p)} of length {bound} is not killed; "
                    "the quotient may be infinite-dimensional, or raise the bound")

    pivot_set = set(span.pivots)
    kept = [i for i in range(npaths) if i not in pivot_set]
    kept_pos = {i: k for k, i in enumerate(kept)}

    def project(vec):
        red = span.reduce(vec)
        return tuple(red[i] for i in kept)

    labels = [_path_label(paths[i]) for i in kept]
    mul = []
    for i in kept:
        p = paths[i]
        row = []
        for j in kept:
            q = paths[j]
            if p.tgt != q.src or len(p.word) + len(q.word) > bound:
                row.append(tuple([z] * len(kept)))
                continue
            vec = [z] * npaths
            vec[path_key(p.word + q.word, p.src)] = field.one()
            row.append(project(vec))
        mul.append(row)

    unit_vec = [z] * npaths
    for v in range(1, quiver.vertex_count + 1):
        unit_vec[path_key((), v)] = field.add(unit_vec[path_key((), v)],
                                              field.one())
    unit = project(unit_vec)

    # attach homogeneity data: endpoints always, length grading only when
    # the relation span is length-homogeneous
    ltype = [paths[i].src for i in kept]
    rtype = [paths[i].tgt for i in kept]
    grades = None
    if _span_is_graded(field, span, paths):
        grades = [len(paths[i].word) for i in kept]

    algebra = FinDimAlgebra(field, labels, mul, unit,
                            grades=grades, ltype=ltype, rtype=rtype)
    vertex_idems = {}
    for v in range(1, quiver.vertex_count + 1):
        vec = [z] * npaths
        vec[path_key((), v)] = field.one()
        vertex_idems[v] = project(vec)
    return PathBasisAlgebra(algebra, labels, vertex_idems,
                            list(range(1, quiver.vertex_count + 1)))


def _span_is_graded(field, span, paths):
    z = field.zero()
    by_len = {}
    for row in span.basis.entries:
        parts = {}
        for i, c in enumerate(row):
            if c != z:
                parts.setdefault(len(paths[i].word), [z] * len(row))
                parts[len(paths[i].word)][i] = c
        for length, vec in parts.items():
            by_len.setdefault(length, []).append(vec)
    total = 0
    for length, rows in by_len.items():
        sub = Subspace.from_spanning_rows(field, len(paths), rows)
        for r in sub.basis.entries:
            if not span.contains(list(r)):
                return False
        total += sub.dim
    return total == span.dim


def contraction_algebra(presentation, kill_vertices, field=QQ):
    """Quotient by the ideal of the summed vertex idempotents over
    kill_vertices, computed on the reduced presentation (delete the
    vertices, delete incident arrows, substitute 0 into relations).

    Works even when the un-contracted algebra is infinite-dimensional.
    """
    quiver = presentation.quiver
    S = set(int(v) for v in kill_vertices)
    allv = set(range(1, quiver.vertex_count + 1))
    if not S or not S < allv:
        raise InputError("kill set must be a nonempty proper subset of the vertices")
    keep = sorted(allv - S)
    renum = {old: i + 1 for i, old in enumerate(keep)}
    kept_arrows = [(n, renum[s], renum[t]) for (n, s, t) in quiver.arrows
                   if s not in S and t not in S]
    killed_names = {n for (n, s, t) in quiver.arrows if s in S or t in S}
    reduced = Quiver(len(keep), kept_arrows)
    new_rels = []
    for rel in presentation.relations:
        combo = {w: c for w, c in rel.items() if not (set(w) & killed_names)}
        if combo:
            new_rels.append(combo)
    reduced_pres = QuiverPresentation(reduced, new_rels, presentation.degree_bound)
    built = build_algebra(reduced_pres, field=field)
    a = built.algebra
    relabel = {f"e{new}": f"e{old}" for old, new in renum.items()}
    labels = [relabel.get(l, l) for l in a.basis_labels]
    renamed = FinDimAlgebra(a.field, labels, a.mul, a.unit, grades=a.grades,
                            ltype=a.ltype, rtype=a.rtype, _skip_checks=True)
    return renamed


def vertex_idempotent(pba, vertices):
    """The sum of the chosen vertex idempotents, as a verified Idempotent."""
    a = pba.algebra
    coords = list(a.zero_vector())
    F = a.field
    for v in vertices:
        if v not in pba.vertex_idempotents:
            raise InputError(f"vertex {v} not in the quiver")
        coords = [F.add(x, y) for x, y in zip(coords, pba.vertex_idempotents[v])]
    return Idempotent(a.element(coords))
