"""Left modules, bimodules, morphisms, projective covers and Hom spaces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import Algebra
from .errors import InputError, InvariantViolation
from .exactla import (FieldSpec, LeftInverse, Matrix, Subspace, hstack, kernel_basis,
                      rank, rref)


def _actions_from_generators(alg: Algebra, dim: int, gens: dict, right: bool = False) -> list:
    """Extend action matrices given on idempotents and arrows to every basis path."""
    F = alg.field
    out = []
    arrow_of = {alg.basis[i].arrows[0]: i for i in alg.arrow_indices}
    for i, p in enumerate(alg.basis):
        if i in gens:
            out.append(gens[i])
            continue
        if p.trivial:
            raise InputError("missing idempotent action")
        mats = [gens[arrow_of[a]] for a in p.arrows]
        if right:
            mats = mats[::-1]
        m = mats[0]
        for x in mats[1:]:
            m = m @ x
        out.append(m)
    return out


def _homogeneous_vertices(alg: Algebra, acts: list, dim: int) -> Optional[list]:
    """Vertex of each basis vector if every e_v acts diagonally by 0/1."""
    verts = [None] * dim
    for v, e in enumerate(alg.vertex_idempotents):
        m = acts[e]
        ent = m.flat_raw()
        for r in range(dim):
            for c in range(dim):
                x = ent[r * dim + c]
                if r != c and x != 0:
                    return None
                if r == c and x != 0:
                    if x != 1 or verts[r] is not None:
                        return None
                    verts[r] = v
    if any(x is None for x in verts):
        return None
    return verts


class LeftModule:
    """Finite-dimensional left Λ-module: one action matrix per basis element."""

    is_regular = False

    def __init__(self, algebra: Algebra, dim: int, acts: list, name: str = "", check: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.acts = list(acts)
        self.name = name
        self._cover = None
        self._verts = False
        if len(self.acts) != algebra.dim:
            raise InputError("need one action matrix per algebra basis element")
        for m in self.acts:
            if m.shape != (dim, dim):
                raise InputError("action matrix has the wrong shape")
        if check:
            self.check()

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @classmethod
    def from_generators(cls, algebra: Algebra, dim: int, gens: dict, name: str = "", check: bool = False):
        return cls(algebra, dim, _actions_from_generators(algebra, dim, gens), name, check=check)

    def check(self):
        A = self.algebra
        I = Matrix.identity(self.field, self.dim)
        unit = Matrix.zeros(self.field, self.dim, self.dim)
        for e in A.vertex_idempotents:
            unit = unit + self.acts[e]
        if unit != I:
            raise InvariantViolation("unit does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.act_of(A.product_vec(i, j))
                if lhs != self.acts[i] @ self.acts[j]:
                    raise InvariantViolation("action does not respect multiplication")

    def act_of(self, v: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(v.flat_raw()):
            if c != 0:
                out = out + self.acts[i].scale(c)
        return out

    def vertices(self) -> Optional[list]:
        if self._verts is False:
            self._verts = _homogeneous_vertices(self.algebra, self.acts, self.dim)
        return self._verts

    def dimension_vector(self) -> list:
        return [rank(self.acts[e]) for e in self.algebra.vertex_idempotents]

    def cover(self) -> "Cover":
        if self._cover is None:
            self._cover = Cover(self)
        return self._cover

    def identity(self) -> "ModuleMorphism":
        return ModuleMorphism(self, self, Matrix.identity(self.field, self.dim))

    def zero_map(self, other) -> "ModuleMorphism":
        return ModuleMorphism(self, other, Matrix.zeros(self.field, other.dim, self.dim))

    def __repr__(self):
        return f"LeftModule({self.name or '?'}, dim={self.dim})"


class Bimodule(LeftModule):
    """Λ-Λ-bimodule; ``racts[b]`` is the matrix of x ↦ x·b."""

    def __init__(self, algebra: Algebra, dim: int, acts: list, racts: list, name: str = "",
                 check: bool = True):
        self.racts = list(racts)
        self._rverts = False
        super().__init__(algebra, dim, acts, name, check=False)
        if len(self.racts) != algebra.dim:
            raise InputError("need one right action matrix per algebra basis element")
        if check:
            self.check()

    @classmethod
    def from_generators(cls, algebra, dim, gens, rgens, name="", check=False):
        return cls(algebra, dim, _actions_from_generators(algebra, dim, gens),
                   _actions_from_generators(algebra, dim, rgens, right=True), name, check=check)

    def check(self):
        super().check()
        A = self.algebra
        I = Matrix.identity(self.field, self.dim)
        unit = Matrix.zeros(self.field, self.dim, self.dim)
        for e in A.vertex_idempotents:
            unit = unit + self.racts[e]
        if unit != I:
            raise InvariantViolation("unit does not act as the identity on the right")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.ract_of(A.product_vec(i, j))
                if lhs != self.racts[j] @ self.racts[i]:
                    raise InvariantViolation("right action does not respect multiplication")
        for i in A.generators:
            for j in A.generators:
                if self.acts[i] @ self.racts[j] != self.racts[j] @ self.acts[i]:
                    raise InvariantViolation("left and right actions do not commute")

    def ract_of(self, v: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(v.flat_raw()):
            if c != 0:
                out = out + self.racts[i].scale(c)
        return out

    def right_vertices(self) -> Optional[list]:
        if self._rverts is False:
            self._rverts = _homogeneous_vertices(self.algebra, self.racts, self.dim)
        return self._rverts

    def as_left_module(self) -> LeftModule:
        m = LeftModule(self.algebra, self.dim, self.acts, self.name, check=False)
        m._cover = self._cover
        return m

    def right_module_as_left(self, opposite: Algebra) -> LeftModule:
        """The right module M_Λ viewed as a left module over Λ^op."""
        return LeftModule(opposite, self.dim, self.racts, f"{self.name}_R", check=False)

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


def regular_module(alg: Algebra) -> LeftModule:
    m = LeftModule(alg, alg.dim, alg.left, "Λ", check=False)
    return m


def regular_bimodule(alg: Algebra) -> Bimodule:
    m = Bimodule(alg, alg.dim, alg.left, alg.right, "Λ", check=False)
    m.is_regular = True
    return m


def projective_module(alg: Algebra, v: int) -> LeftModule:
    """P_v = Λe_v."""
    idx = alg.paths_from(v)
    acts = [a.submatrix(idx, idx) for a in alg.left]
    return LeftModule(alg, len(idx), acts, f"P{alg.quiver.vertices[v]}", check=False)


def simple_module(alg: Algebra, v: int) -> LeftModule:
    F = alg.field
    acts = []
    for i, p in enumerate(alg.basis):
        acts.append(Matrix.from_flat(F, 1, 1, [1 if (p.trivial and p.src == v) else 0]))
    return LeftModule(alg, 1, acts, f"S{alg.quiver.vertices[v]}", check=False)


def zero_module(alg: Algebra) -> LeftModule:
    F = alg.field
    return LeftModule(alg, 0, [Matrix.zeros(F, 0, 0)] * alg.dim, "0", check=False)


def direct_sum(*mods: LeftModule) -> LeftModule:
    from .exactla import block_diag
    alg = mods[0].algebra
    F = alg.field
    acts = [block_diag(F, [m.acts[i] for m in mods]) for i in range(alg.dim)]
    return LeftModule(alg, sum(m.dim for m in mods), acts, "⊕".join(m.name for m in mods), check=False)


def module_from_matrices(alg: Algebra, dim: int, gens: dict, name: str = "") -> LeftModule:
    """Module from action matrices on idempotents and arrows, keyed by basis label."""
    F = alg.field
    g = {}
    for label, rows in gens.items():
        i = alg.labels.index(label)
        g[i] = rows if isinstance(rows, Matrix) else Matrix.from_rows(F, rows, dim)
    for e in alg.vertex_idempotents:
        if e not in g:
            raise InputError(f"missing action of {alg.labels[e]}")
    for a in alg.arrow_indices:
        if a not in g:
            g[a] = Matrix.zeros(F, dim, dim)
    m = LeftModule.from_generators(alg, dim, g, name)
    m.check()
    return m


@dataclass(frozen=True)
class ModuleMorphism:
    source: LeftModule
    target: LeftModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise InputError("morphism matrix has the wrong shape")

    def is_morphism(self) -> bool:
        for a in self.source.algebra.generators:
            if self.matrix @ self.source.acts[a] != self.target.acts[a] @ self.matrix:
                return False
        return True

    def is_bimodule_morphism(self) -> bool:
        if not self.is_morphism():
            return False
        for a in self.source.algebra.generators:
            if self.matrix @ self.source.racts[a] != self.target.racts[a] @ self.matrix:
                return False
        return True

    def compose(self, first: "ModuleMorphism") -> "ModuleMorphism":
        """self ∘ first."""
        if first.target.dim != self.source.dim:
            raise InputError("morphisms are not composable")
        return ModuleMorphism(first.source, self.target, self.matrix @ first.matrix)

    def __add__(self, other):
        return ModuleMorphism(self.source, self.target, self.matrix + other.matrix)

    def scale(self, c):
        return ModuleMorphism(self.source, self.target, self.matrix.scale(c))

    def is_zero(self):
        return self.matrix.is_zero()

    def rank(self):
        return rank(self.matrix)


# -- projective covers -----------------------------------------------------------

class Cover:
    """Projective cover ⊕_j Λe_{i_j} → X from homogeneous top lifts.

    Attributes: gens (list of column vectors), gen_vertex, gen_index (basis index
    when the generator is a basis vector), P (the projective module), slots
    (list of (j, path index) per basis vector of P), pi, kernel (columns),
    section (P-coordinates of each basis vector of X).
    """

    def __init__(self, X: LeftModule):
        A = X.algebra
        F = X.field
        self.module = X
        d = X.dim
        verts = X.vertices()
        if d == 0:
            rad_cols = []
        else:
            rad_cols = [X.acts[a] for a in A.arrow_indices]
        rad = Subspace.span_cols(hstack(F, rad_cols, rows=d)) if rad_cols else Subspace.zero(F, d)
        gens, gvert, gidx = [], [], []
        if verts is not None:
            pset = set(rad.pivots)
            for j in range(d):
                if j not in pset:
                    gens.append(Matrix.unit_column(F, d, j))
                    gvert.append(verts[j])
                    gidx.append(j)
        else:
            cur = [rad.basis.transpose()] if rad.dim else []
            r = rad.dim
            for v, e in enumerate(A.vertex_idempotents):
                for j in range(d):
                    g = X.acts[e].col(j)
                    if g.is_zero():
                        continue
                    trial = hstack(F, cur + [g])
                    if rank(trial) > r:
                        cur.append(g)
                        r += 1
                        gens.append(g)
                        gvert.append(v)
                        gidx.append(None)
        self.gens, self.gen_vertex, self.gen_index = gens, gvert, gidx
        slots = []
        for j, v in enumerate(gvert):
            for p in A.paths_from(v):
                slots.append((j, p))
        self.slots = slots
        nP = len(slots)
        # the projective module
        pos = {s: k for k, s in enumerate(slots)}
        acts = []
        for b in range(A.dim):
            flat = [0] * (nP * nP)
            for k, (j, p) in enumerate(slots):
                for q, c in A.product_terms(b, p):
                    flat[pos[(j, q)] * nP + k] = c
            acts.append(Matrix.from_flat(F, nP, nP, flat))
        self.P = LeftModule(A, nP, acts, f"P({X.name})", check=False)
        self.P._verts = [A.dst(p) for (j, p) in slots]
        # cover map
        if gidx and all(g is not None for g in gidx):
            cols = []
            ents = {}
            flat = [0] * (d * nP)
            for k, (j, p) in enumerate(slots):
                m = X.acts[p]
                e = ents.get(p)
                if e is None:
                    e = ents[p] = m.flat_raw()
                g = gidx[j]
                for r in range(d):
                    x = e[r * d + g]
                    if x != 0:
                        flat[r * nP + k] = x
            self.pi = Matrix.from_flat(F, d, nP, flat)
        else:
            cols = [X.acts[p] @ gens[j] for (j, p) in slots]
            self.pi = hstack(F, cols, rows=d) if cols else Matrix.zeros(F, d, 0)
        if rank(self.pi) != d:
            raise InvariantViolation("cover map is not surjective")
        # kernel and section, vertex by vertex when possible
        pverts = self.P._verts
        if verts is not None:
            kcols = []
            sec = [None] * d
            for v in range(A.num_vertices):
                pc = [k for k in range(nP) if pverts[k] == v]
                xr = [r for r in range(d) if verts[r] == v]
                if not pc:
                    continue
                blk = self.pi.submatrix(xr, pc)
                ker = kernel_basis(blk)
                for vec in ker.vectors():
                    e = vec.flat_raw()
                    full = [0] * nP
                    for t, k in enumerate(pc):
                        full[k] = e[t]
                    kcols.append(full)
                if xr:
                    R, piv = rref(blk)
                    sub = blk.select_cols(piv).inverse()
                    se = sub.flat_raw()
                    for a, r in enumerate(xr):
                        col = [0] * nP
                        for b, cidx in enumerate(piv):
                            col[pc[cidx]] = se[b * len(xr) + a]
                        sec[r] = col
            self.kernel = (Matrix.from_flat(F, len(kcols), nP, [x for c in kcols for x in c]).transpose()
                           if kcols else Matrix.zeros(F, nP, 0))
            flat = []
            for r in range(nP):
                flat.extend(sec[c][r] for c in range(d))
            self.section = Matrix.from_flat(F, nP, d, flat)
        else:
            self.kernel = kernel_basis(self.pi).basis.transpose()
            R, piv = rref(self.pi)
            inv = self.pi.select_cols(piv).inverse()
            flat = [0] * (nP * d)
            ie = inv.flat_raw()
            for b, cidx in enumerate(piv):
                for c in range(d):
                    flat[cidx * d + c] = ie[b * d + c]
            self.section = Matrix.from_flat(F, nP, d, flat)

    @property
    def rank(self) -> int:
        return len(self.gens)

    def pi_morphism(self) -> ModuleMorphism:
        return ModuleMorphism(self.P, self.module, self.pi)

    def kernel_module(self) -> LeftModule:
        """The first syzygy ker(P → X) as a module with a homogeneous basis."""
        return submodule(self.P, self.kernel, name=f"Ω({self.module.name})")

    def lift(self, f: Matrix, target_cover: "Cover") -> Matrix:
        """h : P_X → P_Y with π_Y h = f π_X, defined on generators."""
        Y = target_cover.module
        A = self.module.algebra
        F = self.module.field
        nP, nQ = self.P.dim, target_cover.P.dim
        qverts = target_cover.P._verts
        images = []
        for j, g in enumerate(self.gens):
            v = self.gen_vertex[j]
            cols = [k for k in range(nQ) if qverts[k] == v]
            y = f @ g
            if not cols:
                if not y.is_zero():
                    raise InvariantViolation("lift failed")
                images.append(Matrix.zeros(F, nQ, 1))
                continue
            blk = target_cover.pi.select_cols(cols)
            z = _solve_cols(blk, y)
            if z is None:
                raise InvariantViolation("lift failed")
            full = [0] * nQ
            ze = z.flat_raw()
            for t, k in enumerate(cols):
                full[k] = ze[t]
            images.append(Matrix.column(F, full))
        cols = []
        for (j, p) in self.slots:
            cols.append(target_cover.P.acts[p] @ images[j])
        return hstack(F, cols, rows=nQ) if cols else Matrix.zeros(F, nQ, 0)


def _solve_cols(m: Matrix, b: Matrix):
    from .exactla import solve
    return solve(m, b)


def submodule(X: LeftModule, basis: Matrix, name: str = "", check: bool = False) -> LeftModule:
    """Module structure on the column span of ``basis`` (assumed invariant)."""
    F = X.field
    A = X.algebra
    r = basis.cols
    if r == 0:
        return zero_module(A)
    li = LeftInverse(basis)
    gens = {}
    for a in A.generators:
        img = X.acts[a] @ basis
        c = li.apply(img, check=check)
        if c is None:
            raise InvariantViolation("subspace is not a submodule")
        gens[a] = c
    M = LeftModule.from_generators(A, r, gens, name)
    M._inclusion = basis
    return M


# -- Hom spaces -----------------------------------------------------------------

class HomSpace:
    """Basis of Hom_Λ(X, Y) in echelon order, with coordinate lookup."""

    def __init__(self, X: LeftModule, Y: LeftModule, mats: list):
        self.source = X
        self.target = Y
        F = X.field
        n = X.dim * Y.dim
        if mats and n:
            flat = [x for m in mats for x in m.flat_raw()]
            sub = Subspace.span_rows(Matrix.from_flat(F, len(mats), n, flat))
        else:
            sub = Subspace.zero(F, n)
        self.flat = sub
        self.basis = []
        e = sub.basis.flat_raw()
        for i in range(sub.dim):
            m = Matrix.from_flat(F, Y.dim, X.dim, e[i * n:(i + 1) * n])
            self.basis.append(ModuleMorphism(X, Y, m))

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, T) -> Optional[Matrix]:
        m = T.matrix if isinstance(T, ModuleMorphism) else T
        if self.source.dim * self.target.dim == 0:
            return Matrix.zeros(self.source.field, 0, 1)
        return self.flat.coords(m.flatten())

    def combine(self, c: Matrix) -> ModuleMorphism:
        F = self.source.field
        out = Matrix.zeros(F, self.target.dim, self.source.dim)
        for i, x in enumerate(c.flat_raw()):
            if x != 0:
                out = out + self.basis[i].matrix.scale(x)
        return ModuleMorphism(self.source, self.target, out)


def _check_same(X, Y):
    if X.algebra is not Y.algebra:
        raise InputError("modules are over different algebras")


def hom_space(X: LeftModule, Y: LeftModule) -> HomSpace:
    """Hom_Λ(X, Y) from a presentation of X: images of the top generators
    subject to the kernel relations."""
    _check_same(X, Y)
    F = X.field
    A = X.algebra
    if X.dim == 0 or Y.dim == 0:
        return HomSpace(X, Y, [])
    cov = X.cover()
    yv = Y.vertices()
    # basis of e_v Y for each generator vertex
    blocks = []
    for v in cov.gen_vertex:
        if yv is not None:
            idx = [r for r in range(Y.dim) if yv[r] == v]
            blocks.append(("idx", idx))
        else:
            sub = Subspace.span_cols(Y.acts[A.vertex_idempotents[v]])
            blocks.append(("mat", sub.basis.transpose()))

    def block_matrix(j):
        kind, val = blocks[j]
        if kind == "idx":
            return Matrix.from_flat(F, Y.dim, len(val),
                                    [1 if r == c else 0 for r in range(Y.dim) for c in val])
        return val

    E = [block_matrix(j) for j in range(len(blocks))]
    widths = [e.cols for e in E]
    offs = [0]
    for w in widths:
        offs.append(offs[-1] + w)
    nunk = offs[-1]
    if nunk == 0:
        return HomSpace(X, Y, [])
    # Z[(j, p)] = ρ_Y(p) E_j
    Z = {}
    for (j, p) in cov.slots:
        if (j, p) not in Z:
            Z[(j, p)] = Y.acts[p] @ E[j]
    K = cov.kernel
    kent = K.flat_raw()
    nk = K.cols
    nP = len(cov.slots)
    if nk:
        rows = []
        for c in range(nk):
            blk = [Matrix.zeros(F, Y.dim, w) for w in widths]
            for k, (j, p) in enumerate(cov.slots):
                x = kent[k * nk + c]
                if x != 0:
                    blk[j] = blk[j] + Z[(j, p)].scale(x)
            rows.append(hstack(F, blk))
        from .exactla import vstack
        C = vstack(F, rows)
        sols = kernel_basis(C).vectors()
    else:
        sols = [Matrix.unit_column(F, nunk, i) for i in range(nunk)]
    mats = []
    for s in sols:
        ent = s.flat_raw()
        cols = []
        for k, (j, p) in enumerate(cov.slots):
            cj = Matrix.from_flat(F, widths[j], 1, ent[offs[j]:offs[j + 1]])
            cols.append(Z[(j, p)] @ cj)
        V = hstack(F, cols, rows=Y.dim)
        mats.append(V @ cov.section)
    return HomSpace(X, Y, mats)


def is_module_map(X, Y, T: Matrix) -> bool:
    return ModuleMorphism(X, Y, T).is_morphism()


def end_space(X: LeftModule) -> HomSpace:
    return hom_space(X, X)
