"""Finite-dimensional quiver algebras Λ = KQ/I.

Paths are written right to left: the path tuple ``(b, a)`` is "first a, then b"
and is printed ``b.a``.  A basis element of Λ is a normal-form path; the
trivial path at vertex v is printed ``e[v]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct
from typing import Optional, Sequence

from .errors import InputError, InvariantViolation
from .exactla import FieldSpec, Matrix, rref

NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # of (name, src, dst)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple((str(n), str(s), str(t)) for n, s, t in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("vertex ids are not unique")
        for v in self.vertices:
            if not NAME_RE.match(v):
                raise InputError(f"bad vertex id {v!r}")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("arrow names are not unique")
        vs = set(self.vertices)
        for n, s, t in self.arrows:
            if not NAME_RE.match(n):
                raise InputError(f"bad arrow name {n!r}")
            if s not in vs or t not in vs:
                raise InputError(f"arrow {n} refers to an undeclared vertex")

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a[0] == name:
                return i
        raise InputError(f"unknown arrow {name!r}")

    def vertex_index(self, v: str) -> int:
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise InputError(f"unknown vertex {v!r}") from None

    def src(self, i: int) -> int:
        return self.vertices.index(self.arrows[i][1])

    def dst(self, i: int) -> int:
        return self.vertices.index(self.arrows[i][2])

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple((n, t, s) for n, s, t in self.arrows))


@dataclass(frozen=True)
class Path:
    """A path with vertex indices; ``arrows`` is in written (right-to-left) order."""

    src: int
    dst: int
    arrows: tuple = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def trivial(self) -> bool:
        return not self.arrows


def make_path(q: Quiver, arrows: Sequence[int]) -> Optional[Path]:
    """Path from written-order arrow indices, or None if not composable."""
    arrows = tuple(arrows)
    if not arrows:
        raise InputError("empty arrow sequence")
    for left, right in zip(arrows, arrows[1:]):
        # left is applied after right
        if q.src(left) != q.dst(right):
            return None
    return Path(q.src(arrows[-1]), q.dst(arrows[0]), arrows)


def compose(p: Path, r: Path) -> Optional[Path]:
    """p·r  ("first r, then p"), or None."""
    if p.src != r.dst:
        return None
    if p.trivial:
        return r
    if r.trivial:
        return p
    return Path(r.src, p.dst, p.arrows + r.arrows)


def path_label(q: Quiver, p: Path) -> str:
    if p.trivial:
        return f"e[{q.vertices[p.src]}]"
    return ".".join(q.arrows[a][0] for a in p.arrows)


@dataclass
class AlgebraPresentation:
    quiver: Quiver
    relations: list  # each: list of (coeff, tuple of arrow names in written order)
    nilpotency_bound: int
    field: FieldSpec = dc_field(default_factory=FieldSpec)

    def validate(self):
        if self.nilpotency_bound < 2:
            raise InputError("nilpotency bound must be at least 2")
        parsed = []
        for r in self.relations:
            terms = []
            for coeff, names in r:
                names = tuple(names)
                if len(names) < 2:
                    raise InputError(f"relation term {'.'.join(names) or '1'} has length < 2")
                idx = [self.quiver.arrow_index(n) for n in names]
                p = make_path(self.quiver, idx)
                if p is None:
                    raise InputError(f"relation path {'.'.join(names)} is not composable")
                terms.append((self.field.coerce(coeff), p))
            parsed.append(terms)
        return parsed


def _enumerate_paths(q: Quiver, max_len: int) -> list:
    """All paths of length <= max_len, in basis order."""
    out = [Path(v, v) for v in range(len(q.vertices))]
    layer = [Path(q.src(i), q.dst(i), (i,)) for i in range(len(q.arrows))]
    length = 1
    while layer and length <= max_len:
        out.extend(sorted(layer, key=lambda p: p.arrows))
        nxt = []
        for p in layer:
            for i in range(len(q.arrows)):
                # prepend arrow i (applied after p)
                if q.src(i) == p.dst:
                    nxt.append(Path(p.src, q.dst(i), (i,) + p.arrows))
        layer = nxt
        length += 1
    return out


class Algebra:
    """Structure-constant model of a quiver algebra.

    ``left[i]`` is the matrix of left multiplication by basis element i on Λ
    (column j holds b_i·b_j); ``right[i]`` is right multiplication.
    """

    def __init__(self, field: FieldSpec, quiver: Quiver, basis: list, table: dict,
                 name: str = "", presentation=None, rad_square_zero: bool = False):
        self.field = field
        self.quiver = quiver
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.name = name
        self.presentation = presentation
        self.is_rad_square_zero = rad_square_zero
        self._table = table  # (i, j) -> list of (k, coeff), nonzero only
        self.index = {p: i for i, p in enumerate(self.basis)}
        nv = len(quiver.vertices)
        self.vertex_idempotents = [self.index[Path(v, v)] for v in range(nv)]
        self.e_subalgebra = list(self.vertex_idempotents)
        self.arrow_indices = []
        for a in range(len(quiver.arrows)):
            p = Path(quiver.src(a), quiver.dst(a), (a,))
            if p in self.index:
                self.arrow_indices.append(self.index[p])
        self.generators = self.vertex_idempotents + self.arrow_indices
        self.nontrivial = [i for i, p in enumerate(self.basis) if not p.trivial]
        self.labels = [path_label(quiver, p) for p in self.basis]
        self.unit = Matrix.column(field, [1 if p.trivial else 0 for p in self.basis])
        self._build_regular()
        self._check_laws()

    # -- structure ---------------------------------------------------------
    def _build_regular(self):
        n = self.dim
        F = self.field
        self.left = []
        self.right = []
        for i in range(n):
            L = [0] * (n * n)
            R = [0] * (n * n)
            for j in range(n):
                for k, c in self._table.get((i, j), ()):
                    L[k * n + j] = c
                for k, c in self._table.get((j, i), ()):
                    R[k * n + j] = c
            self.left.append(Matrix.from_flat(F, n, n, L))
            self.right.append(Matrix.from_flat(F, n, n, R))

    def _check_laws(self):
        n = self.dim
        one = self.unit
        for i in range(n):
            b = Matrix.unit_column(self.field, n, i)
            if self.mul_vec(one, b) != b or self.mul_vec(b, one) != b:
                raise InvariantViolation(f"unit law fails on {self.labels[i]}")
        for a in self.vertex_idempotents:
            for b in self.vertex_idempotents:
                expect = Matrix.unit_column(self.field, n, a) if a == b else Matrix.zeros(self.field, n, 1)
                if self.left[a] @ Matrix.unit_column(self.field, n, b) != expect:
                    raise InvariantViolation("vertex idempotents are not orthogonal")
        # associativity on all triples: L(b_i b_j) = L(b_i) L(b_j)
        for i in range(n):
            for j in range(n):
                lhs = self.left_of(self.product_vec(i, j))
                if lhs != self.left[i] @ self.left[j]:
                    raise InvariantViolation(f"multiplication not associative at ({self.labels[i]}, {self.labels[j]})")

    def product_vec(self, i: int, j: int) -> Matrix:
        vals = [0] * self.dim
        for k, c in self._table.get((i, j), ()):
            vals[k] = c
        return Matrix.column(self.field, vals)

    def product_terms(self, i: int, j: int):
        return self._table.get((i, j), ())

    def left_of(self, v: Matrix) -> Matrix:
        """Left multiplication matrix of an arbitrary element."""
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(v.flat_raw()):
            if c != 0:
                out = out + self.left[i].scale(c)
        return out

    def right_of(self, v: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(v.flat_raw()):
            if c != 0:
                out = out + self.right[i].scale(c)
        return out

    def mul_vec(self, a: Matrix, b: Matrix) -> Matrix:
        return self.left_of(a) @ b

    # -- vertex data ---------------------------------------------------------
    def src(self, i: int) -> int:
        return self.basis[i].src

    def dst(self, i: int) -> int:
        return self.basis[i].dst

    @property
    def num_vertices(self) -> int:
        return len(self.quiver.vertices)

    def paths_from(self, v: int) -> list:
        """Basis indices of Λe_v (paths starting at v)."""
        return [i for i, p in enumerate(self.basis) if p.src == v]

    def paths_to(self, v: int) -> list:
        return [i for i, p in enumerate(self.basis) if p.dst == v]

    def element(self, values) -> "AlgebraElement":
        return AlgebraElement(self, Matrix.column(self.field, list(values)))

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, Matrix.unit_column(self.field, self.dim, i))

    def by_label(self, label: str) -> "AlgebraElement":
        return self.basis_element(self.labels.index(label))

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def opposite(self) -> "Algebra":
        q = self.quiver.opposite()
        basis = [Path(p.dst, p.src, tuple(reversed(p.arrows))) for p in self.basis]
        table = {(j, i): v for (i, j), v in self._table.items()}
        return Algebra(self.field, q, basis, table, name=f"{self.name}^op",
                       rad_square_zero=self.is_rad_square_zero)

    def summary(self) -> dict:
        return {"name": self.name, "field": str(self.field), "dim": self.dim,
                "vertices": list(self.quiver.vertices),
                "arrows": [list(a) for a in self.quiver.arrows],
                "basis": list(self.labels)}

    def multiplication_table(self) -> list:
        rows = []
        for i in range(self.dim):
            for j in range(self.dim):
                terms = self._table.get((i, j), ())
                if terms:
                    rows.append((self.labels[i], self.labels[j],
                                 [(self.labels[k], self.field.to_python(c)) for k, c in terms]))
        return rows

    def __repr__(self):
        return f"Algebra({self.name or 'Λ'}, dim={self.dim}, field={self.field})"


@dataclass(frozen=True)
class AlgebraElement:
    algebra: Algebra
    vec: Matrix

    def __post_init__(self):
        if self.vec.rows != self.algebra.dim or self.vec.cols != 1:
            raise InputError("coefficient vector length does not match algebra dimension")

    def __add__(self, other):
        _same(self, other)
        return AlgebraElement(self.algebra, self.vec + other.vec)

    def __sub__(self, other):
        _same(self, other)
        return AlgebraElement(self.algebra, self.vec - other.vec)

    def __mul__(self, other):
        return multiply(self, other)

    def scale(self, c):
        return AlgebraElement(self.algebra, self.vec.scale(c))

    def is_zero(self):
        return self.vec.is_zero()

    def coefficients(self):
        return self.vec.entries()

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and other.algebra is self.algebra and other.vec == self.vec

    def __hash__(self):
        return hash((id(self.algebra), self.vec))

    def __repr__(self):
        terms = [f"{c}*{l}" for c, l in zip(self.coefficients(), self.algebra.labels) if c != 0]
        return " + ".join(terms) if terms else "0"


def _same(a, b):
    if not isinstance(b, AlgebraElement) or a.algebra is not b.algebra:
        raise InputError("elements belong to different algebras")


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _same(a, b)
    return AlgebraElement(a.algebra, a.algebra.mul_vec(a.vec, b.vec))


# -- construction -------------------------------------------------------------

def build_algebra(pres: AlgebraPresentation, name: str = "") -> Algebra:
    """Λ = KQ/(relations + paths of length >= N), by linear closure."""
    rels = pres.validate()
    q = pres.quiver
    F = pres.field
    N = pres.nilpotency_bound
    paths = _enumerate_paths(q, N - 1)
    col = {p: i for i, p in enumerate(paths)}
    n = len(paths)

    # split relations into vertex-homogeneous components
    comps = []
    for terms in rels:
        blocks = {}
        for c, p in terms:
            blocks.setdefault((p.src, p.dst), []).append((c, p))
        comps.extend(blocks.values())

    rows = []
    for rel in comps:
        s, t = rel[0][1].src, rel[0][1].dst
        minlen = min(p.length for _, p in rel)
        for u in paths:
            if u.src != t or u.length + minlen >= N:
                continue
            for w in paths:
                if w.dst != s or u.length + w.length + minlen >= N:
                    continue
                vec = {}
                for c, p in rel:
                    up = compose(compose(u, p), w)
                    if up.length < N:
                        k = col[up]
                        vec[k] = vec.get(k, 0) + c
                if any(v != 0 for v in vec.values()):
                    rows.append(vec)
    # order columns so that pivots land on the largest paths
    rev = list(range(n - 1, -1, -1))
    if rows:
        flat = []
        for vec in rows:
            r = [0] * n
            for k, c in vec.items():
                r[n - 1 - k] = c
            flat.extend(r)
        R, piv_rev = rref(Matrix.from_flat(F, len(rows), n, flat))
        pivots = [n - 1 - j for j in piv_rev]
        Re = R.raw.entries()
    else:
        pivots, Re = [], []
    pset = set(pivots)
    normal = [i for i in range(n) if i not in pset]
    basis = [paths[i] for i in normal]
    pos = {paths[i]: k for k, i in enumerate(normal)}

    # reduction of each pivot path: p ≡ -Σ R[r, t] q_t
    reduce = {}
    for r, pj in enumerate(pivots):
        terms = []
        for k, i in enumerate(normal):
            v = Re[r * n + (n - 1 - i)]
            if v != 0:
                terms.append((k, -v))
        reduce[paths[pj]] = terms

    def nf(p):
        if p.length >= N:
            return []
        if p in pos:
            return [(pos[p], F.one())]
        return reduce[p]

    table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            ab = compose(a, b)
            if ab is None:
                continue
            terms = [(k, c) for k, c in nf(ab) if c != 0]
            if terms:
                table[(i, j)] = terms
    return Algebra(F, q, basis, table, name=name, presentation=pres,
                   rad_square_zero=(N == 2))


def radical_square_zero(q: Quiver, field: Optional[FieldSpec] = None, name: str = "") -> Algebra:
    field = field or FieldSpec()
    rels = []
    for i in range(len(q.arrows)):
        for j in range(len(q.arrows)):
            if q.src(i) == q.dst(j):
                rels.append([(1, (q.arrows[i][0], q.arrows[j][0]))])
    return build_algebra(AlgebraPresentation(q, rels, 2, field), name=name)


# -- frequently used examples --------------------------------------------------

def one_loop(field=None):
    return radical_square_zero(Quiver(("1",), (("a", "1", "1"),)), field, "one-loop")


def truncated_polynomial(n: int, field=None):
    """K[x]/(x^n)."""
    q = Quiver(("1",), (("x", "1", "1"),))
    return build_algebra(AlgebraPresentation(q, [], n, field or FieldSpec()), name=f"K[x]/x^{n}")


def linear_quiver(n: int, field=None, rad_square_zero_flag: bool = True):
    """A_n: 1 -> 2 -> ... -> n with arrows a1, a2, ..."""
    vs = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple((f"a{i}", str(i), str(i + 1)) for i in range(1, n))
    q = Quiver(vs, arrows)
    if rad_square_zero_flag:
        return radical_square_zero(q, field, f"A{n}")
    return build_algebra(AlgebraPresentation(q, [], max(n, 2), field or FieldSpec()), name=f"A{n}-path")


def two_cycle(field=None):
    q = Quiver(("1", "2"), (("a", "1", "2"), ("b", "2", "1")))
    return radical_square_zero(q, field, "2-cycle")


def two_loop(field=None):
    q = Quiver(("1",), (("a", "1", "1"), ("b", "1", "1")))
    return radical_square_zero(q, field, "2-loop")


def semisimple(n: int, field=None):
    q = Quiver(tuple(str(i) for i in range(1, n + 1)), ())
    return radical_square_zero(q, field, f"K^{n}")
