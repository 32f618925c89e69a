"""Tensor products M ⊗_Λ X for a bimodule M and a left module (or bimodule) X.

With a cover ⊕_j Λe_{i_j} → X by generators g_j, M ⊗_Λ X is the quotient of
A = ⊕_j M e_{i_j} by the image of M ⊗ ker.  The quotient basis consists of
non-pivot coordinates of A, i.e. classes of pure tensors m ⊗ g_j with m a
basis vector of M; ``pure[t] = (m index, j)`` records them.
"""
from __future__ import annotations

from .errors import InputError, InvariantViolation
from .exactla import Matrix, Subspace, hstack
from .modules import Bimodule, LeftModule, ModuleMorphism


class TensorProduct:
    def __init__(self, M: Bimodule, X: LeftModule, name: str = ""):
        if M.algebra is not X.algebra:
            raise InputError("modules are over different algebras")
        self.M = M
        self.X = X
        A = M.algebra
        F = M.field
        self.field = F
        self.is_bimodule = isinstance(X, Bimodule)
        self._zcache = {}
        name = name or f"{M.name}⊗{X.name}"
        if X.is_regular:
            self._init_regular(name)
            return
        rv = M.right_vertices()
        if rv is None:
            raise InputError("tensor_over_algebra needs a bimodule with a right-homogeneous basis")
        cov = X.cover()
        self.cover = cov
        # ambient coordinates (j, m) with m e_{i_j} = m
        amb = []
        for j, v in enumerate(cov.gen_vertex):
            for m in range(M.dim):
                if rv[m] == v:
                    amb.append((j, m))
        self.amb = amb
        apos = {a: k for k, a in enumerate(amb)}
        self.apos = apos
        nA = len(amb)
        # relators (m·k_j)_j for kernel vectors k
        K = cov.kernel
        ke = K.flat_raw()
        nk = K.cols
        rel_rows = []
        rents = [r.flat_raw() for r in M.racts]
        dM = M.dim
        for c in range(nk):
            terms = [(cov.slots[s], ke[s * nk + c]) for s in range(len(cov.slots)) if ke[s * nk + c] != 0]
            for m in range(dM):
                row = [0] * nA
                nz = False
                for (j, p), x in terms:
                    e = rents[p]
                    for r in range(dM):
                        y = e[r * dM + m]
                        if y != 0:
                            k = apos.get((j, r))
                            if k is None:
                                raise InvariantViolation("relator left its block")
                            row[k] += x * y
                            nz = True
                if nz:
                    rel_rows.append(row)
        if rel_rows:
            W = Subspace.span_rows(Matrix.from_flat(F, len(rel_rows), nA, [x for r in rel_rows for x in r]))
        else:
            W = Subspace.zero(F, nA)
        piv = set(W.pivots)
        nonpiv = [k for k in range(nA) if k not in piv]
        self.nonpivot = nonpiv
        nQ = len(nonpiv)
        self.dim = nQ
        self.pure = [(amb[k][1], amb[k][0]) for k in nonpiv]
        # projection A -> Q
        flat = [0] * (nQ * nA)
        for t, k in enumerate(nonpiv):
            flat[t * nA + k] = 1
        We = W.basis.flat_raw()
        for r, pk in enumerate(W.pivots):
            for t, k in enumerate(nonpiv):
                x = We[r * nA + k]
                if x != 0:
                    flat[t * nA + pk] = -x
        self.proj = Matrix.from_flat(F, nQ, nA, flat)
        # left action on Q
        lents = [a.flat_raw() for a in M.acts]
        gens = {}
        for a in A.generators:
            e = lents[a]
            cols = [0] * (nA * nQ)
            for t, k in enumerate(nonpiv):
                j, m = amb[k]
                for r in range(dM):
                    y = e[r * dM + m]
                    if y != 0:
                        cols[apos[(j, r)] * nQ + t] = y
            gens[a] = self.proj @ Matrix.from_flat(F, nA, nQ, cols)
        if self.is_bimodule:
            rgens = {}
            for b in A.generators:
                rgens[b] = self._right_action(b)
            self.module = Bimodule.from_generators(A, nQ, gens, rgens, name)
        else:
            self.module = LeftModule.from_generators(A, nQ, gens, name)

    def _init_regular(self, name):
        M = self.M
        self.cover = None
        self.dim = M.dim
        self.pure = [(m, None) for m in range(M.dim)]
        if self.is_bimodule:
            self.module = M
        else:
            self.module = M.as_left_module()

    # -- bilinear map ---------------------------------------------------------
    def z_matrix(self, m) -> Matrix:
        """Linear map x ↦ m ⊗ x, as a (dim Q × dim X) matrix.  m is an index or vector."""
        key = m if isinstance(m, int) else None
        if key is not None and key in self._zcache:
            return self._zcache[key]
        M, F = self.M, self.field
        mv = Matrix.unit_column(F, M.dim, m) if isinstance(m, int) else m
        if self.X.is_regular:
            cols = [M.racts[b] @ mv for b in range(M.algebra.dim)]
            out = hstack(F, cols, rows=M.dim)
        else:
            cov = self.cover
            nA = len(self.amb)
            nP = len(cov.slots)
            flat = [0] * (nA * nP)
            ment = mv.flat_raw()
            nzm = [(i, x) for i, x in enumerate(ment) if x != 0]
            rents = {}
            for s, (j, p) in enumerate(cov.slots):
                e = rents.get(p)
                if e is None:
                    e = rents[p] = M.racts[p].flat_raw()
                for r in range(M.dim):
                    acc = 0
                    for i, x in nzm:
                        y = e[r * M.dim + i]
                        if y != 0:
                            acc += x * y
                    if acc != 0:
                        k = self.apos.get((j, r))
                        if k is None:
                            raise InvariantViolation("bilinear image left its block")
                        flat[k * nP + s] = acc
            Z = Matrix.from_flat(F, nA, nP, flat)
            out = self.proj @ Z @ cov.section
        if key is not None:
            self._zcache[key] = out
        return out

    def bil(self, m, x: Matrix) -> Matrix:
        return self.z_matrix(m) @ x

    def _right_action(self, b: int) -> Matrix:
        X = self.X
        cov = self.cover
        cols = []
        for (m, j) in self.pure:
            g = cov.gens[j]
            cols.append(self.bil(m, X.racts[b] @ g))
        return hstack(self.field, cols, rows=self.dim)

    def pure_vec(self, t: int) -> tuple:
        """(m index, generator vector of X) representing basis vector t."""
        m, j = self.pure[t]
        if j is None:
            return m, self.X.algebra.unit
        return m, self.cover.gens[j]

    def pure_x_index(self, t: int):
        """Basis index of X of the second factor (requires basis-vector generators)."""
        m, j = self.pure[t]
        if j is None:
            return None
        return self.cover.gen_index[j]

    # -- functoriality ----------------------------------------------------------
    def map_right(self, f: Matrix, target: "TensorProduct") -> Matrix:
        """M ⊗ f : M ⊗ X → M ⊗ X'."""
        if target.M is not self.M:
            raise InputError("left factors differ")
        cols = []
        for t in range(self.dim):
            m, g = self.pure_vec(t)
            cols.append(target.bil(m, f @ g))
        return hstack(self.field, cols, rows=target.dim) if cols else Matrix.zeros(self.field, target.dim, 0)

    def map_left(self, g: Matrix, target: "TensorProduct") -> Matrix:
        """g ⊗ X : M ⊗ X → M' ⊗ X for a bimodule map g : M → M'."""
        cols = []
        for t in range(self.dim):
            m, x = self.pure_vec(t)
            cols.append(target.bil(g.col(m), x))
        return hstack(self.field, cols, rows=target.dim) if cols else Matrix.zeros(self.field, target.dim, 0)


def tensor_over_algebra(M: Bimodule, X: LeftModule) -> LeftModule:
    """M ⊗_Λ X as a left module; the TensorProduct is attached as ``.tensor``."""
    if isinstance(X, Bimodule) and not X.is_regular:
        X = X.as_left_module()
    T = TensorProduct(M, X)
    mod = T.module.as_left_module() if isinstance(T.module, Bimodule) else T.module
    mod.tensor = T
    return mod


def tensor_bimodules(M: Bimodule, N: Bimodule) -> Bimodule:
    T = TensorProduct(M, N)
    mod = T.module
    mod.tensor = T
    return mod


def tensor_map(M: Bimodule, f: ModuleMorphism, src: TensorProduct = None, dst: TensorProduct = None) -> ModuleMorphism:
    """M ⊗ f."""
    src = src or TensorProduct(M, f.source)
    dst = dst or TensorProduct(M, f.target)
    return ModuleMorphism(src.module, dst.module, src.map_right(f.matrix, dst))


def associator(M: Bimodule, N: Bimodule, X: LeftModule):
    """Explicit isomorphism (M⊗N)⊗X → M⊗(N⊗X)."""
    MN = TensorProduct(M, N)
    left = TensorProduct(MN.module, X)
    NX = TensorProduct(N, X)
    right = TensorProduct(M, NX.module)
    F = M.field
    cols = []
    for t in range(left.dim):
        q, x = left.pure_vec(t)
        m, n = MN.pure_vec(q)
        cols.append(right.bil(m, _bil_vec(NX, n, x)))
    mat = hstack(F, cols, rows=right.dim) if cols else Matrix.zeros(F, right.dim, 0)
    return ModuleMorphism(left.module, right.module, mat)


def _bil_vec(T: TensorProduct, n_vec: Matrix, x: Matrix) -> Matrix:
    """n ⊗ x for a vector n (linear in n)."""
    out = Matrix.zeros(T.field, T.dim, 1)
    for i, c in enumerate(n_vec.flat_raw()):
        if c != 0:
            out = out + T.bil(i, x).scale(c)
    return out
