"""Left duals, dual bases, Casimir elements and the φ / Δ calculus.

Public surface of the bimodule layer; module and tensor primitives are
re-exported from :mod:`sgcat.modules` and :mod:`sgcat.tensor`.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Optional

from .errors import InputError, InvariantViolation, PreconditionError
from .exactla import LeftInverse, Matrix, Subspace, hstack, rank, solve, vstack
from .modules import (Bimodule, HomSpace, LeftModule, ModuleMorphism, direct_sum,
                      hom_space, module_from_matrices, projective_module,
                      regular_bimodule, regular_module, simple_module, zero_module)
from .tensor import TensorProduct, associator, tensor_bimodules, tensor_over_algebra

__all__ = [
    "Bimodule", "LeftModule", "ModuleMorphism", "HomSpace", "hom_space",
    "tensor_over_algebra", "tensor_bimodules", "associator", "left_dual",
    "is_left_projective", "dual_basis", "casimir", "phi", "compose_via_phi",
    "delta", "TensorCalculus", "TensorElement", "DualBasis", "regular_module",
    "regular_bimodule", "projective_module", "simple_module", "zero_module",
    "direct_sum", "module_from_matrices",
]


# -- projectivity ---------------------------------------------------------------

def trace_contains_identity(X: LeftModule, Y: LeftModule):
    """Coefficients c with id_X = Σ c_{ij} g_j ∘ f_i, or None.

    f_i runs over a basis of Hom(X, Y), g_j over a basis of Hom(Y, X).
    """
    F = X.field
    if X.dim == 0:
        return [], [], []
    H1 = hom_space(X, Y)
    H2 = hom_space(Y, X)
    cols, idx = [], []
    for i, f in enumerate(H1):
        for j, g in enumerate(H2):
            cols.append((g.matrix @ f.matrix).flatten())
            idx.append((i, j))
    target = Matrix.identity(F, X.dim).flatten()
    if not cols:
        return None
    C = hstack(F, cols)
    c = solve(C, target)
    if c is None:
        return None
    terms = []
    for (i, j), x in zip(idx, c.entries()):
        if x != 0:
            terms.append((H1[i], H2[j].scale(x)))
    return terms, H1, H2


def is_left_projective(M: LeftModule):
    """(True, splitting of the projective cover) or (False, obstruction)."""
    X = M.as_left_module() if isinstance(M, Bimodule) else M
    cov = X.cover()
    cert = {"cover_rank": cov.rank, "cover_dim": cov.P.dim, "dim": X.dim,
            "kernel_dim": cov.kernel.cols}
    if cov.kernel.cols == 0:
        s = cov.pi.inverse() if X.dim else cov.pi.transpose()
        sec = ModuleMorphism(X, cov.P, s)
        if not sec.is_morphism():
            raise InvariantViolation("inverse of cover is not a module map")
        cert["splitting"] = sec
        cert["generator_vertices"] = list(cov.gen_vertex)
        return True, cert
    L = regular_module(X.algebra)
    tr = trace_contains_identity(X, L)
    cert["identity_in_trace_span_of_Λ"] = tr is not None
    if tr is not None:
        raise InvariantViolation("identity factors through Λ but the cover has a kernel")
    cert["obstruction"] = "identity of M is not in the trace span of Λ"
    return False, cert


# -- left dual --------------------------------------------------------------------

class LeftDual:
    """M* = Hom_Λ(M, Λ) with a vertex-homogeneous basis of functionals.

    ``functionals[i]`` is a (dim Λ × dim M) matrix; ``blocks[i] = (u, v)`` with
    e_u f e_v = f.
    """

    def __init__(self, M: Bimodule):
        A = M.algebra
        F = M.field
        ok, cert = is_left_projective(M)
        if not ok:
            raise PreconditionError("left dual needs a left-projective bimodule", cert)
        self.M = M
        L = regular_module(A)
        H = hom_space(M.as_left_module(), L)
        funcs, blocks = [], []
        for u in range(A.num_vertices):
            eu = M.racts[A.vertex_idempotents[u]]
            for v in range(A.num_vertices):
                ev = A.right[A.vertex_idempotents[v]]
                imgs = [(ev @ h.matrix @ eu) for h in H]
                imgs = [m for m in imgs if not m.is_zero()]
                if not imgs:
                    continue
                n = A.dim * M.dim
                sub = Subspace.span_rows(Matrix.from_flat(F, len(imgs), n, [x for m in imgs for x in m.flat_raw()]))
                e = sub.basis.flat_raw()
                for i in range(sub.dim):
                    funcs.append(Matrix.from_flat(F, A.dim, M.dim, e[i * n:(i + 1) * n]))
                    blocks.append((u, v))
        if len(funcs) != H.dim:
            raise InvariantViolation("homogeneous decomposition of the dual lost dimensions")
        self.functionals = funcs
        self.blocks = blocks
        d = len(funcs)
        self.dim = d
        if d:
            self._li = LeftInverse(hstack(F, [f.flatten() for f in funcs]))
        gens, rgens = {}, {}
        for a in A.generators:
            gens[a] = self._matrix_of(lambda f: f @ M.racts[a])
            rgens[a] = self._matrix_of(lambda f: A.right[a] @ f)
        self.bimodule = Bimodule.from_generators(A, d, gens, rgens, f"{M.name}*")
        self.bimodule.dual = self

    def _matrix_of(self, op) -> Matrix:
        F = self.M.field
        if self.dim == 0:
            return Matrix.zeros(F, 0, 0)
        cols = [self.coords(op(f)) for f in self.functionals]
        return hstack(F, cols)

    def coords(self, fmat: Matrix) -> Matrix:
        if self.dim == 0:
            return Matrix.zeros(self.M.field, 0, 1)
        c = self._li.apply(fmat.flatten())
        if c is None:
            raise InvariantViolation("map is not a module map into Λ")
        return c

    def functional(self, vec: Matrix) -> Matrix:
        """The (dim Λ × dim M) matrix of an element of M* given in coordinates."""
        A = self.M.algebra
        out = Matrix.zeros(self.M.field, A.dim, self.M.dim)
        for i, c in enumerate(vec.flat_raw()):
            if c != 0:
                out = out + self.functionals[i].scale(c)
        return out

    def evaluate(self, fvec: Matrix, mvec: Matrix) -> Matrix:
        """Pairing M* × M → Λ."""
        return self.functional(fvec) @ mvec


def left_dual(M: Bimodule) -> Bimodule:
    """M* as a bimodule; the LeftDual (with its pairing) is attached as ``.dual``."""
    return LeftDual(M).bimodule


# -- dual bases ---------------------------------------------------------------------

@dataclass
class DualBasis:
    M: Bimodule
    dual: LeftDual
    elements: list      # α_j as vectors of M
    functionals: list   # α_j* as coordinate vectors of M*
    vertices: list      # α_j = e_{v_j} α_j and α_j* = α_j* e_{v_j}

    def __len__(self):
        return len(self.elements)

    def verify(self) -> dict:
        """Both reconstruction identities on full bases of M and M*."""
        M, D = self.M, self.dual
        A = M.algebra
        F = M.field
        ok1 = True
        for x in range(M.dim):
            xv = Matrix.unit_column(F, M.dim, x)
            acc = Matrix.zeros(F, M.dim, 1)
            for a, s in zip(self.elements, self.functionals):
                acc = acc + M.act_of(D.evaluate(s, xv)) @ a
            ok1 = ok1 and acc == xv
        ok2 = True
        Ds = D.bimodule
        for i in range(D.dim):
            fv = Matrix.unit_column(F, D.dim, i)
            acc = Matrix.zeros(F, D.dim, 1)
            for a, s in zip(self.elements, self.functionals):
                lam = D.evaluate(fv, a)
                acc = acc + Ds.ract_of(lam) @ s
            ok2 = ok2 and acc == fv
        return {"reconstruct_M": ok1, "reconstruct_dual": ok2, "size": len(self)}


def _dual_of(M: Bimodule) -> LeftDual:
    d = getattr(M, "_left_dual", None)
    if d is None:
        d = LeftDual(M)
        M._left_dual = d
    return d


def dual_basis(M: Bimodule, generators: Optional[list] = None) -> DualBasis:
    """Dual basis from a splitting of ⊕_j Λe_{v_j} → M.

    ``generators`` is an optional list of (vertex index, vector) with
    e_v g = g; by default the top lifts of the projective cover are used.
    """
    F = M.field
    A = M.algebra
    D = _dual_of(M)
    if generators is None:
        cov = M.as_left_module().cover() if M._cover is None else M._cover
        M._cover = cov
        generators = list(zip(cov.gen_vertex, cov.gens))
    for v, g in generators:
        if M.acts[A.vertex_idempotents[v]] @ g != g:
            raise InputError("generator is not homogeneous at its vertex")
    unknowns = []
    cols = []
    for j, (v, g) in enumerate(generators):
        G = hstack(F, [M.acts[b] @ g for b in range(A.dim)])
        for i, f in enumerate(D.functionals):
            if D.blocks[i][1] != v:
                continue
            unknowns.append((j, i))
            cols.append((G @ f).transpose().flatten())
    target = Matrix.identity(F, M.dim).flatten()
    if not cols:
        if M.dim == 0:
            return DualBasis(M, D, [], [], [])
        raise PreconditionError("generators do not split")
    c = solve(hstack(F, cols), target)
    if c is None:
        raise PreconditionError("no splitting through the given generators (not projective?)")
    ce = c.flat_raw()
    funcs = [[0] * D.dim for _ in generators]
    for (j, i), x in zip(unknowns, ce):
        funcs[j][i] = x
    return DualBasis(M, D, [g for v, g in generators],
                     [Matrix.column(F, f) for f in funcs], [v for v, g in generators])


# -- tensor calculus -------------------------------------------------------------------

@dataclass(frozen=True)
class TensorElement:
    p: int
    k: int
    vec: Matrix

    def __add__(self, other):
        if (self.p, self.k) != (other.p, other.k):
            raise InputError("tensor shapes differ")
        return TensorElement(self.p, self.k, self.vec + other.vec)

    def scale(self, c):
        return TensorElement(self.p, self.k, self.vec.scale(c))

    def is_zero(self):
        return self.vec.is_zero()


class TensorCalculus:
    """The spaces T^{p,k} = (M*)^{⊗p} ⊗ M^{⊗k} and the maps φ, Δ for one bimodule M.

    Every basis vector of T^{p,k} is a pure tensor f_1⊗…⊗f_p⊗a_1⊗…⊗a_k of basis
    vectors; ``tuples(p, k)[t] = (F, A)`` with F the dual indices and A the basis index
    in T^{0,k} (None for the unit of Λ when k = 0 < p).
    Results are memoized under a lock; values never change once computed.
    """

    def __init__(self, M: Bimodule, dual_basis_override: Optional[DualBasis] = None):
        if M.right_vertices() is None:
            raise InputError("bimodule needs a right-homogeneous basis")
        self.M = M
        self.algebra = M.algebra
        self.field = M.field
        self.D = _dual_of(M)
        self.Md = self.D.bimodule
        self.db = dual_basis_override or dual_basis(M)
        self._lock = threading.RLock()
        self._spaces = {}
        self._phi = {}
        self._phi_inv = {}
        self._embed = {}
        self._delta = {}
        self._contract = {}
        self._U = {}
        self.regular = regular_bimodule(self.algebra)

    # spaces
    def space(self, p: int, k: int):
        """(module, TensorProduct or None, tuples)."""
        if p < 0 or k < 0:
            raise InputError("negative tensor degree")
        with self._lock:
            hit = self._spaces.get((p, k))
            if hit is not None:
                return hit
            if p == 0 and k == 0:
                out = (self.regular, None, [((), a) for a in range(self.algebra.dim)])
            elif p == 0:
                prev_mod, _, prev_t = self.space(0, k - 1)
                T = TensorProduct(self.M, prev_mod)
                tuples = []
                for t in range(T.dim):
                    m, j = T.pure[t]
                    if j is None:
                        tuples.append(((), (m,)))
                    else:
                        y = T.cover.gen_index[j]
                        if y is None:
                            raise InvariantViolation("non-basis generator in tensor power")
                        tuples.append(((), (m,) + prev_t[y][1]))
                out = (T.module, T, tuples)
            else:
                prev_mod, _, prev_t = self.space(p - 1, k)
                T = TensorProduct(self.Md, prev_mod)
                tuples = []
                for t in range(T.dim):
                    f, j = T.pure[t]
                    if j is None:
                        tuples.append(((f,), None))
                    else:
                        y = T.cover.gen_index[j]
                        if y is None:
                            raise InvariantViolation("non-basis generator in tensor power")
                        Fp, Ap = prev_t[y]
                        tuples.append(((f,) + Fp, Ap))
                out = (T.module, T, tuples)
            self._spaces[(p, k)] = out
            return out

    def dim(self, p, k) -> int:
        return self.space(p, k)[0].dim

    def power(self, k: int) -> Bimodule:
        return self.space(0, k)[0]

    def plain_tuples(self, k: int) -> list:
        """Arrow-index tuples of the basis of M^{⊗k} (k ≥ 1); Λ basis index for k = 0."""
        if k == 0:
            return list(range(self.algebra.dim))
        return [t[1] for t in self.space(0, k)[2]]

    def a_vector(self, k: int, A) -> Matrix:
        F = self.field
        if A is None:
            return self.algebra.unit
        if k == 0:
            return Matrix.unit_column(F, self.algebra.dim, A)
        return Matrix.unit_column(F, self.dim(0, k), self._plain_index(k)[A])

    def _plain_index(self, k):
        key = ("pi", k)
        with self._lock:
            hit = self._spaces.get(key)
            if hit is None:
                hit = {t: i for i, t in enumerate(self.plain_tuples(k))}
                self._spaces[key] = hit
            return hit

    # contraction C(F, B) ∈ Λ
    def _u(self, m: int) -> Matrix:
        U = self._U.get(m)
        if U is None:
            M = self.M
            mv = Matrix.unit_column(self.field, M.dim, m)
            U = hstack(self.field, [M.racts[c] @ mv for c in range(self.algebra.dim)])
            self._U[m] = U
        return U

    def contract(self, Fs: tuple, Bs: tuple) -> Matrix:
        """f_p(b_1 ⋯ f_2(b_{p-1} f_1(b_p)) ⋯) for dual indices Fs and plain indices Bs."""
        p = len(Fs)
        if p == 0:
            return Matrix.unit_column(self.field, self.algebra.dim, Bs)
        if len(Bs) != p:
            raise InputError("contraction length mismatch")
        key = (Fs, Bs)
        hit = self._contract.get(key)
        if hit is not None:
            return hit
        f_last = self.D.functionals[Fs[-1]]
        if p == 1:
            lam = f_last @ Matrix.unit_column(self.field, self.M.dim, Bs[0])
        else:
            inner = self.contract(Fs[:-1], Bs[1:])
            lam = f_last @ (self._u(Bs[0]) @ inner)
        self._contract[key] = lam
        return lam

    # φ
    def phi_matrix(self, p: int, k: int) -> Matrix:
        """Columns: row-major flattenings of φ^{p,k}(t) over the basis t of T^{p,k}."""
        with self._lock:
            hit = self._phi.get((p, k))
            if hit is not None:
                return hit
            F = self.field
            _, _, tuples = self.space(p, k)
            target = self.power(k)
            src_tuples = self.plain_tuples(p)
            cols = []
            for (Fs, A) in tuples:
                a = self.a_vector(k, A)
                img = []
                for B in src_tuples:
                    lam = self.contract(Fs, B)
                    img.append(target.act_of(lam) @ a)
                m = hstack(F, img, rows=target.dim) if img else Matrix.zeros(F, target.dim, 0)
                cols.append(m.flatten())
            n = target.dim * len(src_tuples)
            out = hstack(F, cols, rows=n) if cols else Matrix.zeros(F, n, 0)
            self._phi[(p, k)] = out
            return out

    def phi(self, p: int, k: int, t: TensorElement) -> ModuleMorphism:
        if (t.p, t.k) != (p, k):
            raise InputError("tensor element lives in a different space")
        src, tgt = self.power(p), self.power(k)
        if t.vec.rows != self.dim(p, k):
            raise InputError("coefficient vector has the wrong length")
        flat = self.phi_matrix(p, k) @ t.vec
        return ModuleMorphism(src, tgt, flat.reshape(tgt.dim, src.dim))

    def phi_inverse(self, p: int, k: int, f: ModuleMorphism) -> TensorElement:
        with self._lock:
            li = self._phi_inv.get((p, k))
            if li is None:
                li = LeftInverse(self.phi_matrix(p, k))
                self._phi_inv[(p, k)] = li
        if self.dim(p, k) == 0:
            if not f.matrix.is_zero():
                raise InvariantViolation("nonzero map in a zero Hom space")
            return TensorElement(p, k, Matrix.zeros(self.field, 0, 1))
        c = li.apply(f.matrix.flatten())
        if c is None:
            raise InvariantViolation("map is not in the image of φ")
        return TensorElement(p, k, c)

    def phi_report(self, p: int, k: int) -> dict:
        """Bijectivity certificate for φ^{p,k}."""
        Phi = self.phi_matrix(p, k)
        H = hom_space(self.power(p).as_left_module(), self.power(k).as_left_module())
        r = rank(Phi)
        src, tgt = self.power(p), self.power(k)
        ok_maps = True
        for c in range(Phi.cols):
            m = ModuleMorphism(src, tgt, Phi.col(c).reshape(tgt.dim, src.dim))
            if not m.is_morphism():
                ok_maps = False
                break
        return {"p": p, "k": k, "dim_T": self.dim(p, k), "dim_hom": H.dim, "rank_phi": r,
                "images_are_morphisms": ok_maps,
                "bijective": ok_maps and r == self.dim(p, k) == H.dim}

    # embeddings v ↦ f_1 ⊗ … ⊗ f_r ⊗ v
    def w_matrix(self, q: int, k: int, f) -> Matrix:
        """T^{q-1,k} → T^{q,k}, v ↦ f ⊗ v  (f a dual index or coordinate vector)."""
        _, T, _ = self.space(q, k)
        return T.z_matrix(f)

    def embed(self, Fs: tuple, level: int, k: int) -> Matrix:
        """T^{level,k} → T^{level+len(Fs),k}, v ↦ Fs ⊗ v."""
        key = (Fs, level, k)
        hit = self._embed.get(key)
        if hit is not None:
            return hit
        if not Fs:
            out = Matrix.identity(self.field, self.dim(level, k))
        else:
            q = level + len(Fs)
            out = self.w_matrix(q, k, Fs[0]) @ self.embed(Fs[1:], level, k)
        self._embed[key] = out
        return out

    # composition through φ
    def compose_via_phi(self, g_t: TensorElement, f_t: TensorElement) -> TensorElement:
        """Tensor for φ(g_t) ∘ φ(f_t):  Σ f-part · g(a-part) ⊗ b-part."""
        p, k = f_t.p, f_t.k
        if g_t.p != k:
            raise InputError("inner degrees do not match")
        j = g_t.k
        F = self.field
        g = self.phi(k, j, g_t).matrix
        _, _, tuples = self.space(p, k)
        out = Matrix.zeros(F, self.dim(p, j), 1)
        groups = {}
        for t, x in enumerate(f_t.vec.flat_raw()):
            if x != 0:
                Fs, A = tuples[t]
                groups.setdefault(Fs, []).append((A, x))
        for Fs, items in groups.items():
            acc = Matrix.zeros(F, g.rows, 1)
            for A, x in items:
                acc = acc + (g @ self.a_vector(k, A)).scale(x)
            out = out + self.embed(Fs, 0, j) @ acc
        return TensorElement(p, j, out)

    def product_table(self, p: int, k: int, j: int):
        """Products of all basis pairs, for bilinear sampling."""
        return [[self.compose_via_phi(TensorElement(k, j, Matrix.unit_column(self.field, self.dim(k, j), u)),
                                      TensorElement(p, k, Matrix.unit_column(self.field, self.dim(p, k), t))).vec
                 for u in range(self.dim(k, j))] for t in range(self.dim(p, k))]

    # Δ
    def casimir(self) -> TensorElement:
        _, T, _ = self.space(1, 1)
        F = self.field
        out = Matrix.zeros(F, T.dim, 1)
        for a, s in zip(self.db.elements, self.db.functionals):
            out = out + T.bil(s, a)
        return TensorElement(1, 1, out)

    def delta_matrix(self, p: int, k: int) -> Matrix:
        with self._lock:
            hit = self._delta.get((p, k))
            if hit is not None:
                return hit
            F = self.field
            _, _, tuples = self.space(p, k)
            _, Tplain, _ = self.space(0, k + 1)
            n_out = self.dim(p + 1, k + 1)
            cols = []
            for (Fs, A) in tuples:
                a = self.a_vector(k, A)
                acc = Matrix.zeros(F, self.dim(1, k + 1), 1)
                for al, s in zip(self.db.elements, self.db.functionals):
                    aa = Tplain.bil(al, a)
                    acc = acc + self.w_matrix(1, k + 1, s) @ aa
                cols.append(self.embed(Fs, 1, k + 1) @ acc)
            out = hstack(F, cols, rows=n_out) if cols else Matrix.zeros(F, n_out, 0)
            self._delta[(p, k)] = out
            return out

    def delta(self, p: int, k: int, t: TensorElement) -> TensorElement:
        if (t.p, t.k) != (p, k):
            raise InputError("tensor element lives in a different space")
        return TensorElement(p + 1, k + 1, self.delta_matrix(p, k) @ t.vec)

    def push_map(self, p: int, k: int, f: Matrix) -> Matrix:
        """M ⊗ f for f : M^{⊗p} → M^{⊗k}."""
        _, Tp, _ = self.space(0, p + 1)
        _, Tk, _ = self.space(0, k + 1)
        return Tp.map_right(f, Tk)

    def random_element(self, p: int, k: int, rng: random.Random, lo: int = -5, hi: int = 5) -> TensorElement:
        n = self.dim(p, k)
        return TensorElement(p, k, Matrix.column(self.field, [rng.randint(lo, hi) for _ in range(n)]))

    def unit(self, stage: int = 0) -> TensorElement:
        """1 ∈ Λ pushed to T^{stage,stage}."""
        t = TensorElement(0, 0, self.algebra.unit)
        for s in range(stage):
            t = self.delta(s, s, t)
        return t


_calc_lock = threading.Lock()


def calculus(M: Bimodule) -> TensorCalculus:
    """Shared TensorCalculus for M (memoized on the bimodule)."""
    with _calc_lock:
        c = getattr(M, "_calculus", None)
        if c is None:
            c = TensorCalculus(M)
            M._calculus = c
        return c


def casimir(M: Bimodule, db: Optional[DualBasis] = None) -> TensorElement:
    calc = calculus(M)
    if db is None:
        return calc.casimir()
    _, T, _ = calc.space(1, 1)
    out = Matrix.zeros(M.field, T.dim, 1)
    for a, s in zip(db.elements, db.functionals):
        out = out + T.bil(s, a)
    return TensorElement(1, 1, out)


def phi(M: Bimodule, p: int, k: int, t: TensorElement) -> ModuleMorphism:
    return calculus(M).phi(p, k, t)


def compose_via_phi(M: Bimodule, g_t: TensorElement, f_t: TensorElement) -> TensorElement:
    return calculus(M).compose_via_phi(g_t, f_t)


def delta(M: Bimodule, p: int, k: int, t: TensorElement) -> TensorElement:
    return calculus(M).delta(p, k, t)
