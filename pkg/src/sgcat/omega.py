"""The bimodule Ω_nc = Λ̄ ⊗_E Λ, the fundamental sequence and the syzygy functor."""
from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

from .algebra import Algebra
from .errors import InvariantViolation
from .exactla import Matrix, hstack, rank
from .modules import Bimodule, LeftModule, ModuleMorphism
from .tensor import TensorProduct

_lock = threading.Lock()
_omega_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


@dataclass
class OmegaNc:
    algebra: Algebra
    bimodule: Bimodule
    pairs: list  # (a, x): basis index of ā ⊗ x, a nontrivial, s(a) = t(x)
    labels: list

    @property
    def dim(self):
        return self.bimodule.dim

    def index(self, a: int, x: int) -> int:
        return self.pairs.index((a, x))

    def generators(self) -> list:
        """Indices of ā ⊗ e_{s(a)}."""
        A = self.algebra
        return [k for k, (a, x) in enumerate(self.pairs) if A.basis[x].trivial]


def omega_nc(alg: Algebra) -> OmegaNc:
    with _lock:
        hit = _omega_cache.get(alg)
    if hit is not None:
        return hit
    om = _build_omega(alg)
    with _lock:
        _omega_cache[alg] = om
    return om


def _build_omega(A: Algebra) -> OmegaNc:
    F = A.field
    pairs = [(a, x) for a in A.nontrivial for x in range(A.dim) if A.src(a) == A.dst(x)]
    pos = {p: k for k, p in enumerate(pairs)}
    n = len(pairs)
    labels = []
    for a, x in pairs:
        if A.basis[x].trivial:
            labels.append(f"{A.labels[a]}~")
        else:
            labels.append(f"{A.labels[a]}~|{A.labels[x]}")
    trivial = set(A.vertex_idempotents)

    def left(b):
        flat = [0] * (n * n)
        for k, (a, x) in enumerate(pairs):
            # \overline{ba} ⊗ x
            for p, c in A.product_terms(b, a):
                if p not in trivial:
                    flat[pos[(p, x)] * n + k] += c
            # - b̄ ⊗ ax
            if b not in trivial:
                for q, c in A.product_terms(a, x):
                    if A.dst(q) == A.src(b):
                        flat[pos[(b, q)] * n + k] -= c
        return Matrix.from_flat(F, n, n, flat)

    def right(b):
        flat = [0] * (n * n)
        for k, (a, x) in enumerate(pairs):
            for q, c in A.product_terms(x, b):
                flat[pos[(a, q)] * n + k] += c
        return Matrix.from_flat(F, n, n, flat)

    gens = {b: left(b) for b in A.generators}
    rgens = {b: right(b) for b in A.generators}
    M = Bimodule.from_generators(A, n, gens, rgens, "Ω")
    return OmegaNc(A, M, pairs, labels)


# -- Λ ⊗_E X ------------------------------------------------------------------

@dataclass
class LambdaTensorE:
    """Λ ⊗_E X with basis pairs (path a, basis vector y of X at vertex s(a))."""

    module: LeftModule
    pairs: list
    mu: ModuleMorphism


def lambda_tensor_e(X: LeftModule) -> LambdaTensorE:
    A = X.algebra
    F = X.field
    verts = X.vertices()
    if verts is None:
        raise InvariantViolation("Λ⊗_E X needs a vertex-homogeneous basis of X")
    pairs = [(a, y) for a in range(A.dim) for y in range(X.dim) if verts[y] == A.src(a)]
    pos = {p: k for k, p in enumerate(pairs)}
    n = len(pairs)
    gens = {}
    for b in A.generators:
        flat = [0] * (n * n)
        for k, (a, y) in enumerate(pairs):
            for q, c in A.product_terms(b, a):
                flat[pos[(q, y)] * n + k] += c
        gens[b] = Matrix.from_flat(F, n, n, flat)
    mod = LeftModule.from_generators(A, n, gens, f"Λ⊗E{X.name}")
    mod._verts = [A.dst(a) for a, y in pairs]
    cols = [X.acts[a].col(y) for a, y in pairs]
    mu = hstack(F, cols, rows=X.dim) if cols else Matrix.zeros(F, X.dim, 0)
    out = LambdaTensorE(mod, pairs, ModuleMorphism(mod, X, mu))
    out.pos = pos
    return out


def _pure_in_lte(lte: LambdaTensorE, a: int, v: Matrix) -> Matrix:
    """Coordinates of a ⊗ v in Λ ⊗_E X (v any vector of X)."""
    X = lte.mu.target
    A = X.algebra
    verts = X.vertices()
    s = A.src(a)
    out = [0] * lte.module.dim
    for y, c in enumerate(v.flat_raw()):
        if c != 0 and verts[y] == s:
            out[lte.pos[(a, y)]] += c
    return Matrix.column(X.field, out)


@dataclass
class FundamentalSequence:
    X: LeftModule
    omega_x: LeftModule
    middle: LeftModule
    iota: ModuleMorphism
    mu: ModuleMorphism
    certificate: dict


def fundamental_sequence(X: LeftModule) -> FundamentalSequence:
    """0 → Ω⊗X → Λ⊗_E X → X → 0 with its rank certificate."""
    A = X.algebra
    F = X.field
    om = omega_nc(A)
    T = TensorProduct(om.bimodule, X)
    lte = lambda_tensor_e(X)
    cols = []
    for t in range(T.dim):
        w, g = T.pure_vec(t)
        a, x = om.pairs[w]
        xv = X.acts[x] @ g
        v = _pure_in_lte(lte, a, xv)
        axg = X.act_of(A.product_vec(a, x)) @ g
        for e in A.vertex_idempotents:
            v = v - _pure_in_lte(lte, e, axg)
        cols.append(v)
    iota = hstack(F, cols, rows=lte.module.dim) if cols else Matrix.zeros(F, lte.module.dim, 0)
    seq = FundamentalSequence(X, T.module, lte.module,
                              ModuleMorphism(T.module, lte.module, iota), lte.mu, {})
    seq.tensor = T
    seq.certificate = exactness_certificate(seq)
    if not seq.certificate["exact"]:
        raise InvariantViolation(f"fundamental sequence not exact: {seq.certificate}")
    return seq


def exactness_certificate(seq: FundamentalSequence) -> dict:
    ri = rank(seq.iota.matrix)
    rm = rank(seq.mu.matrix)
    comp = (seq.mu.matrix @ seq.iota.matrix).is_zero()
    dl, dm, dr = seq.omega_x.dim, seq.middle.dim, seq.X.dim
    return {
        "dims": [dl, dm, dr],
        "rank_iota": ri,
        "rank_mu": rm,
        "mu_iota_zero": comp,
        "iota_is_morphism": seq.iota.is_morphism(),
        "mu_is_morphism": seq.mu.is_morphism(),
        "exact": ri == dl and rm == dr and comp and dm == dl + dr,
    }


def syzygy(X: LeftModule) -> LeftModule:
    """Ω_nc ⊗_Λ X; the TensorProduct is attached as ``.tensor``."""
    om = omega_nc(X.algebra)
    if isinstance(X, Bimodule) and not X.is_regular:
        X = X.as_left_module()
    T = TensorProduct(om.bimodule, X)
    mod = T.module.as_left_module() if isinstance(T.module, Bimodule) else T.module
    mod.tensor = T
    return mod


def syzygy_map(f: ModuleMorphism, src: LeftModule = None, dst: LeftModule = None) -> ModuleMorphism:
    """Ω_nc ⊗ f.  Pass previously built syzygies to reuse their bases."""
    src = src if src is not None else syzygy(f.source)
    dst = dst if dst is not None else syzygy(f.target)
    return ModuleMorphism(src, dst, src.tensor.map_right(f.matrix, dst.tensor))


def syzygy_power(X: LeftModule, k: int) -> list:
    """[X, ΩX, ..., Ω^k X] (literal tensor model)."""
    out = [X]
    for _ in range(k):
        out.append(syzygy(out[-1]))
    return out
