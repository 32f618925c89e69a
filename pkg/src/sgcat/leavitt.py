"""Graded components of the Leavitt ring through the orbit-ring model.

Γ_n at stage p is Hom(M^{⊗p}, M^{⊗(p-n)}) for M = Ω_nc; [f; p] equals
[M ⊗ f; p+1].  The product x·y is y∘x after aligning stages, computed both by
matrix composition and by the tensor formula, which must agree.
"""
from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass, field
from typing import Optional

from .algebra import Algebra, Quiver, radical_square_zero
from .bimodule import TensorElement, calculus
from .errors import HorizonExceeded, InputError, InvariantViolation
from .exactla import FieldSpec, LeftInverse, Matrix, hstack, rank
from .modules import ModuleMorphism, hom_space
from .omega import omega_nc

TOWER_SIZE_LIMIT = 1024


# -- the orbit ring ------------------------------------------------------------------

@dataclass(frozen=True)
class GammaElement:
    """[f; p] with f : M^{⊗p} → M^{⊗(p-deg)}."""

    deg: int
    stage: int
    matrix: Matrix

    @property
    def target_stage(self) -> int:
        return self.stage - self.deg


class GammaRing:
    """Orbit-ring model for one algebra, with Ω_nc as the shifting bimodule."""

    def __init__(self, algebra: Algebra, cross_check: bool = True):
        self.algebra = algebra
        self.field = algebra.field
        self.omega = omega_nc(algebra)
        self.M = self.omega.bimodule
        self.calc = calculus(self.M)
        self.cross_check = cross_check
        self._lock = threading.RLock()

    # construction
    def element(self, deg: int, stage: int, matrix: Matrix) -> GammaElement:
        if stage < max(0, deg):
            raise InputError(f"stage {stage} too small for degree {deg}")
        src, tgt = self.calc.power(stage), self.calc.power(stage - deg)
        if matrix.shape != (tgt.dim, src.dim):
            raise InputError("payload has the wrong shape")
        return GammaElement(deg, stage, matrix)

    def unit(self, stage: int = 0) -> GammaElement:
        return GammaElement(0, stage, Matrix.identity(self.field, self.calc.dim(0, stage)))

    def zero(self, deg: int, stage: Optional[int] = None) -> GammaElement:
        stage = max(0, deg) if stage is None else stage
        c = self.calc
        return GammaElement(deg, stage, Matrix.zeros(self.field, c.dim(0, stage - deg), c.dim(0, stage)))

    def from_algebra(self, vec: Matrix) -> GammaElement:
        """a ↦ [φ^{0,0}(a); 0]."""
        return GammaElement(0, 0, self.calc.phi(0, 0, TensorElement(0, 0, vec)).matrix)

    def from_module(self, vec: Matrix) -> GammaElement:
        """m ↦ [φ^{0,1}(m); 0] in degree -1."""
        return GammaElement(-1, 0, self.calc.phi(0, 1, TensorElement(0, 1, vec)).matrix)

    def from_dual(self, vec: Matrix) -> GammaElement:
        """f ↦ [φ^{1,0}(f); 1] in degree 1."""
        return GammaElement(1, 1, self.calc.phi(1, 0, TensorElement(1, 0, vec)).matrix)

    # stages
    def push(self, x: GammaElement, steps: int = 1) -> GammaElement:
        m = x.matrix
        p, k = x.stage, x.target_stage
        for _ in range(steps):
            m = self.calc.push_map(p, k, m)
            p, k = p + 1, k + 1
        return GammaElement(x.deg, p, m)

    def at_stage(self, x: GammaElement, stage: int) -> GammaElement:
        if stage < x.stage:
            raise InputError("cannot pull an element to an earlier stage")
        return self.push(x, stage - x.stage)

    def _tensor(self, x: GammaElement) -> TensorElement:
        f = ModuleMorphism(self.calc.power(x.stage), self.calc.power(x.target_stage), x.matrix)
        return self.calc.phi_inverse(x.stage, x.target_stage, f)

    def _delta_push(self, t: TensorElement, steps: int) -> TensorElement:
        for _ in range(steps):
            t = self.calc.delta(t.p, t.k, t)
        return t

    # ring operations
    def multiply(self, x: GammaElement, y: GammaElement) -> GammaElement:
        """x·y = y∘x after pushing so that y starts where x ends."""
        a = max(0, y.stage - x.target_stage)
        b = max(0, x.target_stage - y.stage)
        xs, ys = self.push(x, a), self.push(y, b)
        prod = GammaElement(x.deg + y.deg, xs.stage, ys.matrix @ xs.matrix)
        if self.cross_check:
            tx = self._delta_push(self._tensor(x), a)
            ty = self._delta_push(self._tensor(y), b)
            tz = self.calc.compose_via_phi(ty, tx)
            other = self.calc.phi(tz.p, tz.k, tz).matrix
            if other != prod.matrix:
                raise InvariantViolation("tensor-formula product disagrees with composition")
        return prod

    def add(self, x: GammaElement, y: GammaElement) -> GammaElement:
        if x.deg != y.deg:
            raise InputError("cannot add elements of different degrees")
        s = max(x.stage, y.stage)
        return GammaElement(x.deg, s, self.at_stage(x, s).matrix + self.at_stage(y, s).matrix)

    def scale(self, x: GammaElement, c) -> GammaElement:
        return GammaElement(x.deg, x.stage, x.matrix.scale(c))

    def is_zero(self, x: GammaElement, budget: int) -> Optional[int]:
        """First stage ≤ budget where x vanishes, or None."""
        cur = x
        while True:
            if cur.matrix.is_zero():
                return cur.stage
            if cur.stage >= budget:
                return None
            cur = self.push(cur)

    def equal(self, x: GammaElement, y: GammaElement, budget: int) -> bool:
        return self.is_zero(self.add(x, self.scale(y, -1)), budget) is not None


_rings: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_rings_lock = threading.Lock()


def gamma_ring(algebra: Algebra) -> GammaRing:
    with _rings_lock:
        r = _rings.get(algebra)
        if r is None:
            r = GammaRing(algebra)
            _rings[algebra] = r
        return r


def gamma_multiply(x: GammaElement, y: GammaElement, ring: GammaRing) -> GammaElement:
    return ring.multiply(x, y)


@dataclass
class GammaComponent:
    deg: int
    stage: int
    hom: object            # HomSpace
    embedding: Matrix      # stage p coordinates → stage p+1 coordinates

    @property
    def dim(self):
        return self.hom.dim


def gamma_component(ring: GammaRing, n: int, p: int) -> GammaComponent:
    """Stage-p model of Γ_n with its embedding into stage p+1."""
    if p < max(0, n):
        raise InputError(f"stage {p} too small for degree {n}")
    c = ring.calc
    H = hom_space(c.power(p).as_left_module(), c.power(p - n).as_left_module())
    H2 = hom_space(c.power(p + 1).as_left_module(), c.power(p + 1 - n).as_left_module())
    cols = []
    for f in H:
        v = H2.coords(c.push_map(p, p - n, f.matrix))
        if v is None:
            raise InvariantViolation("pushed map is not a module map")
        cols.append(v)
    emb = hstack(ring.field, cols, rows=H2.dim) if cols else Matrix.zeros(ring.field, H2.dim, 0)
    return GammaComponent(n, p, H, emb)


# -- Γ₀ tower ---------------------------------------------------------------------------

@dataclass
class TowerStage:
    stage: int
    dim: int
    hom_dim: int
    unital: bool = True
    multiplicative: bool = True
    connecting_rank: Optional[int] = None


@dataclass
class GammaZeroTower:
    stages: list
    verdict: dict
    truncated_at: Optional[int] = None

    @property
    def dims(self):
        return [s.dim for s in self.stages]

    def to_dict(self):
        return {
            "dims": self.dims,
            "hom_dims": [s.hom_dim for s in self.stages],
            "connecting_ranks": [s.connecting_rank for s in self.stages[:-1]],
            "unital": all(s.unital for s in self.stages[:-1]),
            "multiplicative": all(s.multiplicative for s in self.stages[:-1]),
            "verdict": dict(self.verdict),
            "truncated_at": self.truncated_at,
        }


def gamma_zero_tower(algebra: Algebra, horizon: int = 4, size_limit: int = TOWER_SIZE_LIMIT) -> GammaZeroTower:
    """End(M^{⊗p}) as T^{p,p} with the tensor-formula product, linked by Δ."""
    ring = gamma_ring(algebra)
    c = ring.calc
    F = ring.field
    stages = []
    truncated = None
    for p in range(horizon + 1):
        d = c.dim(p, p)
        if d > size_limit:
            truncated = p
            break
        hd = hom_space(c.power(p).as_left_module(), c.power(p).as_left_module()).dim
        stages.append(TowerStage(p, d, hd))
    for i in range(len(stages) - 1):
        p = stages[i].stage
        D = c.delta_matrix(p, p)
        st = stages[i]
        st.connecting_rank = rank(D)
        one = c.phi_inverse(p, p, ModuleMorphism(c.power(p), c.power(p), Matrix.identity(F, c.dim(0, p))))
        one_next = c.phi_inverse(p + 1, p + 1, ModuleMorphism(c.power(p + 1), c.power(p + 1),
                                                              Matrix.identity(F, c.dim(0, p + 1))))
        st.unital = (D @ one.vec) == one_next.vec
        ok = True
        n = st.dim
        basis = [TensorElement(p, p, Matrix.unit_column(F, n, u)) for u in range(n)]
        img = [TensorElement(p + 1, p + 1, D.col(u)) for u in range(n)]
        for u in range(n):
            for v in range(n):
                xy = c.compose_via_phi(basis[v], basis[u])
                lhs = D @ xy.vec
                rhs = c.compose_via_phi(img[v], img[u]).vec
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        st.multiplicative = ok
        if not (st.unital and ok):
            raise InvariantViolation(f"connecting map at stage {p} is not a unital ring map")
    bij = [s.connecting_rank == s.dim == stages[i + 1].dim for i, s in enumerate(stages[:-1])]
    at = None
    for i in range(len(bij) - 1, -1, -1):
        if not bij[i]:
            break
        at = i
    if at is not None:
        verdict = {"kind": "Stabilized", "at": stages[at].stage, "dim": stages[at].dim}
    else:
        verdict = {"kind": "Inconclusive", "horizon": stages[-1].stage if stages else 0}
    return GammaZeroTower(stages, verdict, truncated)


# -- presentations ---------------------------------------------------------------------------

@dataclass
class GradedPresentation:
    quiver: Quiver
    arrows: list            # (name, degree, src, dst)
    relations: list         # (family, [(coeff, (word...))])
    notes: list = field(default_factory=list)

    def families(self) -> dict:
        out = {}
        for fam, poly in self.relations:
            out.setdefault(fam, []).append(poly)
        return out

    def check_homogeneous(self) -> bool:
        deg = {name: d for name, d, s, t in self.arrows}
        src = {name: s for name, d, s, t in self.arrows}
        dst = {name: t for name, d, s, t in self.arrows}
        for fam, poly in self.relations:
            ds = set()
            for c, word in poly:
                ds.add(sum(deg.get(w, 0) for w in word))
                # right-to-left: word[i] follows word[i+1]
                for i in range(len(word) - 1):
                    a, b = word[i], word[i + 1]
                    if a in src and b in dst and src[a] != dst[b]:
                        return False
            if len(ds) > 1:
                return False
        return True


def _bar(a):
    return f"{a}~"


def _star(a):
    return f"{a}*"


def _idem(v):
    return f"e[{v}]"


def leavitt_presentation_rad_square_zero(q: Quiver) -> GradedPresentation:
    """Doubled quiver and the four relation families (R0, R1, R2, CK)."""
    arrows = []
    for name, s, t in q.arrows:
        arrows.append((name, 0, s, t))
    for name, s, t in q.arrows:
        arrows.append((_bar(name), -1, s, t))
    for name, s, t in q.arrows:
        arrows.append((_star(name), 1, t, s))
    rels = []
    A = q.arrows
    for b, sb, tb in A:
        for a, sa, ta in A:
            if sb == ta:
                rels.append(("R0", [(1, (b, a))]))
    for b, sb, tb in A:
        for a, sa, ta in A:
            if sb == ta:
                rels.append(("R1", [(1, (b, _bar(a))), (1, (_bar(b), a))]))
    for a, sa, ta in A:
        for a2, sa2, ta2 in A:
            if sa != sa2:
                continue
            poly = [(1, (a2, _star(a)))]
            if a == a2:
                for b, sb, tb in A:
                    if sb == ta:
                        poly.append((1, (_star(b), b)))
            rels.append(("R2", poly))
    for a, sa, ta in A:
        for a2, sa2, ta2 in A:
            if sa != sa2:
                continue
            poly = [(1, (_bar(a2), _star(a)))]
            if a == a2:
                poly.append((-1, (_idem(ta),)))
            rels.append(("CK", poly))
    rels.append(("CK", [(1, (_star(a), _bar(a))) for a, s, t in A] + [(-1, ())]))
    notes = []
    if not A:
        notes.append("inconsistent: the sum over an empty arrow set is 0, so the last relation forces 1 = 0")
    return GradedPresentation(q, arrows, rels, notes)


def _fmt_coeff(c) -> str:
    return f"+{c}" if c > 0 else f"{c}"


def format_word(word) -> str:
    return ".".join(word) if word else "1"


def format_polynomial(poly) -> str:
    return " ".join(f"{_fmt_coeff(c)}*{format_word(w)}" for c, w in poly)


def export_presentation(pres: GradedPresentation) -> str:
    """Line-oriented export, stable across runs."""
    q = pres.quiver
    lines = ["[vertices]", " ".join(q.vertices), "[arrows]"]
    for name, d, s, t in pres.arrows:
        lines.append(f"{name} {d} {s} {t}")
    lines.append("[relations]")
    for fam, poly in pres.relations:
        lines.append(f"{fam}: {format_polynomial(poly)}")
    if pres.notes:
        lines.append("[notes]")
        lines.extend(pres.notes)
    return "\n".join(lines) + "\n"


# -- relation checking in the orbit model --------------------------------------------------

class GeneratorMap:
    """Names of the doubled quiver ↦ Γ elements."""

    def __init__(self, ring: GammaRing):
        self.ring = ring
        A = ring.algebra
        q = A.quiver
        om = ring.omega
        calc = ring.calc
        F = ring.field
        self.values = {}
        for v, name in enumerate(q.vertices):
            self.values[_idem(name)] = ring.from_algebra(
                Matrix.unit_column(F, A.dim, A.vertex_idempotents[v]))
        db = calc.db
        gen_of = {}
        for j, g in enumerate(db.elements):
            nz = [i for i, x in enumerate(g.flat_raw()) if x != 0]
            if len(nz) == 1:
                gen_of[nz[0]] = j
        for i, (name, s, t) in enumerate(q.arrows):
            a = A.arrow_indices[i]
            self.values[name] = ring.from_algebra(Matrix.unit_column(F, A.dim, a))
            k = om.pairs.index((a, A.vertex_idempotents[q.vertex_index(s)]))
            self.values[_bar(name)] = ring.from_module(Matrix.unit_column(F, om.dim, k))
            j = gen_of.get(k)
            if j is None:
                raise InvariantViolation(f"no dual functional for generator {name}~")
            g = db.elements[j]
            scale = g.flat_raw()[k]
            self.values[_star(name)] = ring.from_dual(db.functionals[j].scale(scale))

    def word(self, w) -> GammaElement:
        ring = self.ring
        if not w:
            return ring.unit(0)
        out = self.values[w[0]]
        for name in w[1:]:
            out = ring.multiply(out, self.values[name])
        return out

    def polynomial(self, poly) -> GammaElement:
        ring = self.ring
        acc = None
        for c, w in poly:
            t = ring.scale(self.word(w), c)
            acc = t if acc is None else ring.add(acc, t)
        return acc


@dataclass
class RelationCheck:
    family: str
    text: str
    passed: bool
    zero_at: Optional[int]
    max_stage: int


def check_relations_in_orbit_model(q: Quiver, p: int = 3, field_spec: Optional[FieldSpec] = None,
                                   algebra: Optional[Algebra] = None) -> list:
    """Evaluate every emitted relation in Γ and test it for zero by stage p."""
    if p < 2:
        raise InputError("check needs a stage budget p ≥ 2")
    A = algebra or radical_square_zero(q, field_spec or FieldSpec(0))
    ring = gamma_ring(A)
    gm = GeneratorMap(ring)
    pres = leavitt_presentation_rad_square_zero(q)
    out = []
    for fam, poly in pres.relations:
        val = gm.polynomial(poly)
        if val.stage > p:
            raise InputError(f"relation needs stage {val.stage} > {p}; rerun with a larger stage")
        z = ring.is_zero(val, p)
        out.append(RelationCheck(fam, format_polynomial(poly), z is not None, z, val.stage))
    return out


def defining_relations_check(ring: GammaRing, budget: int = 3) -> dict:
    """x·f = f(x) on basis pairs and Σ α_j*·α_j = 1."""
    calc = ring.calc
    F = ring.field
    D = calc.D
    M = ring.M
    bad = 0
    for i in range(M.dim):
        x = Matrix.unit_column(F, M.dim, i)
        for j in range(D.dim):
            f = Matrix.unit_column(F, D.dim, j)
            lhs = ring.multiply(ring.from_module(x), ring.from_dual(f))
            rhs = ring.from_algebra(D.evaluate(f, x))
            if not ring.equal(lhs, rhs, budget):
                bad += 1
    acc = ring.zero(0, 1)
    for a, s in zip(calc.db.elements, calc.db.functionals):
        acc = ring.add(acc, ring.multiply(ring.from_dual(s), ring.from_module(a)))
    cas = ring.equal(acc, ring.unit(0), budget)
    return {"evaluation_failures": bad, "pairs": M.dim * D.dim, "casimir_is_one": cas}


# -- strong grading witnesses --------------------------------------------------------------------

def strong_grading_factorizations(algebra: Algebra, cert) -> dict:
    """Turn an add certificate at p0 into 1 ∈ Γ₋₁Γ₁ and 1 ∈ Γ₁Γ₋₁."""
    ring = gamma_ring(algebra)
    p = cert.index
    budget = p + 2

    def total(terms, first_deg, first_stage, second_deg, second_stage):
        acc = None
        for f, g in terms:
            x = GammaElement(first_deg, first_stage, f.matrix)
            y = GammaElement(second_deg, second_stage, g.matrix)
            t = ring.multiply(x, y)
            acc = t if acc is None else ring.add(acc, t)
        return acc

    # forward: f : X_p → X_{p+1} (deg -1, stage p), g : X_{p+1} → X_p (deg 1, stage p+1)
    fw = total(cert.forward.terms, -1, p, 1, p + 1)
    # backward: f : X_{p+1} → X_p (deg 1, stage p+1), g : X_p → X_{p+1} (deg -1, stage p)
    bw = total(cert.backward.terms, 1, p + 1, -1, p)
    one = ring.unit(0)
    ok_fw = (fw is None and ring.is_zero(one, budget) is not None) or (fw is not None and ring.equal(fw, one, budget))
    ok_bw = (bw is None and ring.is_zero(one, budget) is not None) or (bw is not None and ring.equal(bw, one, budget))
    return {"p0": p, "one_in_Gm1_G1": ok_fw, "one_in_G1_Gm1": ok_bw,
            "terms": [len(cert.forward.terms), len(cert.backward.terms)]}
