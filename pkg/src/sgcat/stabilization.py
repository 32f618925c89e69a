"""Stable Hom groups, add-membership, truncated stabilization and derived probes.

Two syzygy models are available.  ``minimal`` uses kernels of projective
covers with structure maps from cover lifts; ``nc`` uses Ω_nc ⊗_Λ − literally.
They agree up to projective summands, so stable Hom groups coincide.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .algebra import Algebra
from .bimodule import calculus, trace_contains_identity
from .errors import HorizonExceeded, InputError, InvariantViolation
from .exactla import LeftInverse, Matrix, Subspace, hstack, rank, solve
from .modules import (LeftModule, ModuleMorphism, hom_space, regular_module,
                      simple_module)
from .omega import lambda_tensor_e, omega_nc, syzygy, syzygy_map

DEFAULT_HORIZON = 12
SIZE_LIMIT = 256  # largest dim X · dim Y of a stable Hom term explored
PROBE_LIMIT = 64  # largest syzygy dimension explored by the global-dimension probe
CROSS_CHECK_DIM = 16  # in_add(X, Λ) is recomputed for syzygies up to this size


# -- quotients of Hom spaces ---------------------------------------------------------

class _Quotient:
    """K^N / S with coordinates on the non-pivot positions of S."""

    def __init__(self, field, n: int, sub: Subspace):
        self.field = field
        self.n = n
        self.sub = sub
        piv = set(sub.pivots)
        self.free = [i for i in range(n) if i not in piv]

    @property
    def dim(self):
        return len(self.free)

    def project(self, v: Matrix) -> Matrix:
        e = list(v.flat_raw())
        if self.sub.dim:
            B = self.sub.basis.flat_raw()
            for r, pc in enumerate(self.sub.pivots):
                x = e[pc]
                if x != 0:
                    for i in range(self.n):
                        y = B[r * self.n + i]
                        if y != 0:
                            e[i] -= x * y
        return Matrix.column(self.field, [e[i] for i in self.free])


@dataclass
class StableHom:
    """Hom(X,Y) modulo maps factoring through a projective."""

    hom: object           # HomSpace
    projective_part: Subspace  # in hom coordinates
    quotient: _Quotient
    via: str

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def project(self, f) -> Matrix:
        c = self.hom.coords(f)
        if c is None:
            raise InvariantViolation("not a module map")
        return self.quotient.project(c)

    def representatives(self) -> list:
        """Hom basis morphisms whose classes form a basis of the quotient."""
        return [self.hom[i] for i in self.quotient.free]

    def factors_through_projective(self, f) -> bool:
        return self.project(f).is_zero()


def _projective_epi(Y: LeftModule, via: str):
    """(P, π) with P projective and π : P ↠ Y."""
    if via == "cover":
        cov = Y.cover()
        return cov.P, cov.pi
    if via == "E":
        lte = lambda_tensor_e(Y)
        return lte.module, lte.mu.matrix
    if via == "EE":
        l1 = lambda_tensor_e(Y)
        l2 = lambda_tensor_e(l1.module)
        return l2.module, l1.mu.matrix @ l2.mu.matrix
    raise InputError(f"unknown projective epi '{via}'")


def stable_hom(X: LeftModule, Y: LeftModule, via: str = "E") -> StableHom:
    """Hom(X,Y) / image of Hom(X, P) under π∘ for a projective epi π : P ↠ Y.

    ``via`` selects P: "E" for Λ⊗_E Y, "EE" for Λ⊗_E Λ⊗_E Y, "cover" for the
    projective cover.
    """
    if X.algebra is not Y.algebra:
        raise InputError("modules are over different algebras")
    F = X.field
    H = hom_space(X, Y)
    if H.dim == 0:
        sub = Subspace.zero(F, 0)
        return StableHom(H, sub, _Quotient(F, 0, sub), via)
    P, pi = _projective_epi(Y, via)
    HP = hom_space(X, P)
    vecs = []
    for g in HP:
        c = H.coords(pi @ g.matrix)
        if c is None:
            raise InvariantViolation("composite with the epi is not in Hom(X,Y)")
        vecs.append(c)
    if vecs:
        sub = Subspace.span_cols(hstack(F, vecs, rows=H.dim))
    else:
        sub = Subspace.zero(F, H.dim)
    return StableHom(H, sub, _Quotient(F, H.dim, sub), via)


# -- add -------------------------------------------------------------------------------

@dataclass
class AddCertificate:
    holds: bool
    terms: list   # [(f : X → Y, g : Y → X)] with Σ g∘f = id_X

    def verify(self, X: LeftModule) -> bool:
        F = X.field
        acc = Matrix.zeros(F, X.dim, X.dim)
        for f, g in self.terms:
            acc = acc + g.matrix @ f.matrix
        return acc == Matrix.identity(F, X.dim)

    def __bool__(self):
        return self.holds


def in_add(X: LeftModule, Y: LeftModule) -> AddCertificate:
    """Whether X is a summand of some Y^n; truthy, with the trace-span witness."""
    if X.algebra is not Y.algebra:
        raise InputError("modules are over different algebras")
    if X.dim == 0:
        return AddCertificate(True, [])
    if Y.dim == 0:
        return AddCertificate(False, [])
    tr = trace_contains_identity(X, Y)
    if tr is None:
        return AddCertificate(False, [])
    cert = AddCertificate(True, tr[0])
    if not cert.verify(X):
        raise InvariantViolation("trace-span witness does not compose to the identity")
    return cert


def is_projective(X: LeftModule) -> bool:
    return X.cover().kernel.cols == 0


# -- syzygy chains ------------------------------------------------------------------------

class MinimalChain:
    """X = Ω⁰X, Ω¹X, ... as kernels of projective covers, with induced maps."""

    def __init__(self, X: LeftModule):
        if isinstance(X, LeftModule) and hasattr(X, "racts"):
            X = X.as_left_module()
        self.mods = [X]
        self._li = []

    def __getitem__(self, k) -> LeftModule:
        while len(self.mods) <= k:
            cur = self.mods[-1]
            cov = cur.cover()
            K = cov.kernel_module()
            self._li.append(LeftInverse(cov.kernel) if cov.kernel.cols else None)
            self.mods.append(K)
        return self.mods[k]


class NcChain:
    """Ω_nc^{⊗k} ⊗ X through the literal tensor model."""

    def __init__(self, X: LeftModule):
        if hasattr(X, "racts") and not X.is_regular:
            X = X.as_left_module()
        self.mods = [X]

    def __getitem__(self, k) -> LeftModule:
        while len(self.mods) <= k:
            self.mods.append(syzygy(self.mods[-1]))
        return self.mods[k]


def _chain(X, model):
    if model == "minimal":
        return MinimalChain(X)
    if model == "nc":
        return NcChain(X)
    raise InputError(f"unknown syzygy model '{model}'")


# -- stabilized Hom -----------------------------------------------------------------------

@dataclass(frozen=True)
class StabilizedObject:
    """The pair (X, n); suspension raises n."""

    module: LeftModule
    shift: int

    def suspend(self, k: int = 1) -> "StabilizedObject":
        return StabilizedObject(self.module, self.shift + k)


@dataclass
class StabilizedHomReport:
    steps: list          # p values
    dims: list
    structure_maps: list  # matrices between consecutive quotient coordinates
    map_ranks: list
    verdict: dict        # {"kind": "Stabilized", "at", "dim"} or {"kind": "Inconclusive", "horizon"}
    witnesses: list = field(default_factory=list)
    model: str = "minimal"

    @property
    def stabilized(self) -> bool:
        return self.verdict["kind"] == "Stabilized"

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "steps": self.steps,
            "dims": self.dims,
            "map_ranks": self.map_ranks,
            "verdict": dict(self.verdict),
            "witness_count": len(self.witnesses),
        }


def _induced_map(sh_src: StableHom, sh_dst: StableHom, push) -> Matrix:
    F = sh_src.hom.source.field
    cols = [sh_dst.project(push(r.matrix)) for r in sh_src.representatives()]
    if not cols:
        return Matrix.zeros(F, sh_dst.dim, 0)
    return hstack(F, cols, rows=sh_dst.dim)


def sg_hom(X: LeftModule, n: int, Y: LeftModule, m: int, horizon: int = DEFAULT_HORIZON,
           model: str = "minimal", size_limit: int = SIZE_LIMIT) -> StabilizedHomReport:
    """Terms Hom_stable(Ω^{p-n}X, Ω^{p-m}Y) for p = max(n,m) .. min(n,m)+horizon.

    The horizon counts syzygy steps on the less shifted side, so shifting both
    objects by the same amount reindexes the terms without changing them.
    Exploration stops early once dim X · dim Y of a term exceeds ``size_limit``;
    the verdict is then Inconclusive.
    """
    if X.algebra is not Y.algebra:
        raise InputError("modules are over different algebras")
    lo, hi = min(n, m), max(n, m)
    if horizon < hi - lo:
        raise InputError(f"horizon {horizon} is smaller than the shift difference {hi - lo}")
    cx, cy = _chain(X, model), _chain(Y, model)
    via = "cover" if model == "minimal" else "E"
    steps = []
    terms = []
    truncated = None
    for p in range(hi, lo + horizon + 1):
        A, B = cx[p - n], cy[p - m]
        if A.dim * B.dim > size_limit:
            truncated = p
            break
        steps.append(p)
        terms.append(stable_hom(A, B, via=via))
    dims = [t.dim for t in terms]
    maps, ranks = [], []
    for i in range(len(steps) - 1):
        p = steps[i]
        a, b = p - n, p - m
        push = (lambda f, a=a, b=b: _cross_syzygy(cx, cy, a, b, f))
        M = _induced_map(terms[i], terms[i + 1], push)
        maps.append(M)
        ranks.append(rank(M))
    bij = [ranks[i] == dims[i] == dims[i + 1] for i in range(len(maps))]
    at = None
    for i in range(len(maps) - 1, -1, -1):
        if not bij[i]:
            break
        at = i
    if at is not None and truncated is None:
        verdict = {"kind": "Stabilized", "at": steps[at], "dim": dims[at]}
        witnesses = terms[at].representatives()
    else:
        verdict = {"kind": "Inconclusive", "horizon": horizon}
        if truncated is not None:
            verdict["size_limit_at"] = truncated
        witnesses = []
    return StabilizedHomReport(steps, dims, maps, ranks, verdict, witnesses, model)


def _cross_syzygy(cx, cy, a: int, b: int, f: Matrix) -> Matrix:
    """Ω(f) : Ω^{a+1}X → Ω^{b+1}Y for f : Ω^a X → Ω^b Y."""
    if isinstance(cx, MinimalChain):
        A, B = cx[a + 1], cy[b + 1]
        sc, dc = cx.mods[a].cover(), cy.mods[b].cover()
        if A.dim == 0 or B.dim == 0:
            return Matrix.zeros(f.field, B.dim, A.dim)
        h = sc.lift(f, dc)
        c = cy._li[b].apply(h @ sc.kernel)
        if c is None:
            raise InvariantViolation("lift does not restrict to syzygies")
        return c
    src, dst = cx[a + 1], cy[b + 1]
    return src.tensor.map_right(f, dst.tensor)


# -- isomorphism in the stabilization --------------------------------------------------------

def _invariants(A: LeftModule, B: LeftModule):
    if A.dim != B.dim:
        return False, "dimensions differ"
    if A.dimension_vector() != B.dimension_vector():
        return False, "dimension vectors differ"
    for a in A.algebra.arrow_indices:
        if rank(A.acts[a]) != rank(B.acts[a]):
            return False, "arrow ranks differ"
    hab = hom_space(A, B)
    haa = hom_space(A, A)
    hbb = hom_space(B, B)
    if not (hab.dim == haa.dim == hbb.dim):
        return False, "Hom dimensions differ"
    return True, hab


def module_isomorphism(A: LeftModule, B: LeftModule, trials: int = 4, rng: Optional[random.Random] = None,
                       exhaustive_limit: int = 2 ** 20):
    """("iso", witness) | ("non-iso", reason) | ("unknown", reason)."""
    rng = rng or random.Random(0)
    ok, info = _invariants(A, B)
    if not ok:
        return "non-iso", info
    H = info
    F = A.field
    if A.dim == 0:
        return "iso", Matrix.zeros(F, 0, 0)
    for _ in range(trials):
        c = Matrix.column(F, [rng.randint(-50, 50) if not F.is_finite else rng.randrange(F.p) for _ in range(H.dim)])
        T = H.combine(c).matrix
        if rank(T) == A.dim:
            return "iso", T
    if F.is_finite and F.p ** H.dim <= exhaustive_limit:
        for c in itertools.product(range(F.p), repeat=H.dim):
            T = H.combine(Matrix.column(F, list(c))).matrix
            if rank(T) == A.dim:
                return "iso", T
        return "non-iso", "no invertible map among all of Hom"
    return "unknown", "random search found no invertible map"


def iso_in_stabilization(X: LeftModule, n: int, Y: LeftModule, m: int, horizon: int = 4,
                         trials: int = 4, seed: int = 0) -> dict:
    """Search p with Ω^{p-n}X ≅ Ω^{p-m}Y in the literal syzygy model."""
    rng = random.Random(seed)
    cx, cy = NcChain(X), NcChain(Y)
    lo, hi = min(n, m), max(n, m)
    undecided = []
    for p in range(hi, lo + horizon + 1):
        A, B = cx[p - n], cy[p - m]
        kind, info = module_isomorphism(A, B, trials, rng)
        if kind == "iso":
            if not ModuleMorphism(A, B, info).is_morphism():
                raise InvariantViolation("iso witness is not a module map")
            return {"kind": "Isomorphic", "at": p, "witness": info, "seed": seed}
        if kind == "unknown":
            undecided.append(p)
    if undecided:
        return {"kind": "Unknown", "undecided_steps": undecided, "seed": seed}
    return {"kind": "NotIsomorphicUpTo", "horizon": horizon, "seed": seed}


# -- strong grading and global dimension ---------------------------------------------------

@dataclass
class StrongGradingCertificate:
    index: int
    forward: AddCertificate    # Ω^{p0}Λ ∈ add Ω^{p0+1}Λ
    backward: AddCertificate   # Ω^{p0+1}Λ ∈ add Ω^{p0}Λ
    chain_dims: list
    modules: list

    def verify(self) -> bool:
        return (self.forward.verify(self.modules[self.index])
                and self.backward.verify(self.modules[self.index + 1]))

    def to_dict(self):
        return {"p0": self.index, "chain_dims": self.chain_dims,
                "forward_terms": len(self.forward.terms),
                "backward_terms": len(self.backward.terms),
                "verified": self.verify()}


class _PowerChain:
    """Ω_nc^{⊗p} ⊗ Λ = Ω_nc^{⊗p} with the bases of the tensor calculus."""

    def __init__(self, calc):
        self.calc = calc
        self.mods = []

    def __getitem__(self, k):
        while len(self.mods) <= k:
            self.mods.append(self.calc.power(len(self.mods)).as_left_module())
        return self.mods[k]


def strong_grading_index(algebra: Algebra, horizon: int = 6) -> StrongGradingCertificate:
    """Smallest p0 with add(Ω^{p0}Λ) = add(Ω^{p0+1}Λ), for Ω = Ω_nc ⊗ −."""
    calc = calculus(omega_nc(algebra).bimodule)
    chain = _PowerChain(calc)
    dims = [chain[0].dim]
    for p in range(horizon + 1):
        A, B = chain[p], chain[p + 1]
        dims.append(B.dim)
        fw = in_add(A, B)
        if not fw:
            continue
        bw = in_add(B, A)
        if bw:
            cert = StrongGradingCertificate(p, fw, bw, dims, chain.mods[:p + 2])
            return cert
    raise HorizonExceeded(f"add chain did not stabilize by p = {horizon}", {"chain_dims": dims})


def global_dim_probe(algebra: Algebra, horizon: int = DEFAULT_HORIZON, size_limit: int = PROBE_LIMIT) -> dict:
    """FiniteWithBound(n) when every simple has a projective Ω^k S with k ≤ horizon."""
    L = regular_module(algebra)
    per = {}
    reached = horizon
    for v in range(algebra.num_vertices):
        ch = MinimalChain(simple_module(algebra, v))
        name = algebra.quiver.vertices[v]
        per[name] = None
        for k in range(horizon + 1):
            X = ch[k]
            if X.dim > size_limit:
                reached = min(reached, k - 1)
                break
            proj = is_projective(X)
            if X.dim <= CROSS_CHECK_DIM and bool(in_add(X, L)) != proj:
                raise InvariantViolation("projectivity test disagrees with add(Λ) membership")
            if proj:
                per[name] = k
                break
    if all(k is not None for k in per.values()):
        return {"kind": "FiniteWithBound", "bound": max(per.values(), default=0), "per_simple": per}
    out = {"kind": "NotDetectedUpTo", "horizon": reached, "per_simple": per}
    if reached < horizon:
        out["size_limit"] = size_limit
    return out


def split_mono_retraction(f: ModuleMorphism) -> Optional[Matrix]:
    """A module retraction of Ω_nc ⊗ f, or None if none exists."""
    src, dst = syzygy(f.source), syzygy(f.target)
    g = syzygy_map(f, src, dst).matrix
    F = f.source.field
    H = hom_space(dst, src)
    if src.dim == 0:
        return Matrix.zeros(F, 0, dst.dim)
    cols = [(h.matrix @ g).flatten() for h in H]
    if not cols:
        return None
    c = solve(hstack(F, cols), Matrix.identity(F, src.dim).flatten())
    if c is None:
        return None
    return H.combine(c).matrix
