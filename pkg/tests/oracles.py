"""Independent reference computations used by the tests.

Nothing here imports the package: scalars are Fractions or ints mod p and
everything is done by enumeration or textbook elimination.
"""
from fractions import Fraction
from itertools import product


def frac_rank(rows):
    """Rank over Q by Gaussian elimination on Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                t = m[i][c] / m[r][c]
                m[i] = [a - t * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def mod_rank(rows, p):
    m = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [a * inv % p for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                t = m[i][c]
                m[i] = [(a - t * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def count_kernel_gf(rows, ncols, p):
    """|{x in GF(p)^n : A x = 0}| by enumeration."""
    n = 0
    for x in product(range(p), repeat=ncols):
        if all(sum(a * b for a, b in zip(r, x)) % p == 0 for r in rows):
            n += 1
    return n


# -- modules over K[x]/(x^n) as Jordan blocks -------------------------------------------

def jordan(k):
    """Nilpotent k x k shift: x e_i = e_{i+1}."""
    return [[1 if i == j + 1 else 0 for j in range(k)] for i in range(k)]


def _mul(a, b, p):
    n, m, l = len(a), len(b), len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(m)) % p for j in range(l)] for i in range(n)]


def _all_matrices(rows, cols, p):
    for flat in product(range(p), repeat=rows * cols):
        yield [list(flat[i * cols:(i + 1) * cols]) for i in range(rows)]


def brute_hom(NX, NY, p):
    """All T with T NX = NY T over GF(p), as tuples."""
    dx, dy = len(NX), len(NY)
    out = []
    for T in _all_matrices(dy, dx, p):
        if _mul(T, NX, p) == _mul(NY, T, p):
            out.append(tuple(tuple(r) for r in T))
    return out


def _add(a, b, p):
    return tuple(tuple((x + y) % p for x, y in zip(r, s)) for r, s in zip(a, b))


def stable_end_dim_truncated(n, k, p):
    """dim over GF(p) of the stable endomorphisms of J_k over K[x]/(x^n).

    Enumerates Hom(J_k, J_k), all composites J_k -> Λ -> J_k and their additive
    closure; the free module Λ = J_n is the only indecomposable projective.
    """
    NX, NL = jordan(k), jordan(n)
    H = brute_hom(NX, NX, p)
    to_l = brute_hom(NX, NL, p)
    from_l = brute_hom(NL, NX, p)
    comps = {tuple(tuple(r) for r in _mul([list(r) for r in g], [list(r) for r in h], p))
             for h in to_l for g in from_l}
    zero = tuple(tuple(0 for _ in range(k)) for _ in range(k))
    span = {zero}
    frontier = set(comps)
    while frontier:
        new = set()
        for a in span:
            for b in frontier:
                c = _add(a, b, p)
                if c not in span:
                    new.add(c)
        span |= new
        frontier = new
    ratio = len(H) // len(span)
    d = 0
    while p ** d < ratio:
        d += 1
    assert p ** d == ratio
    return d


def jordan_syzygy(n, k):
    """Block size of the first syzygy of J_k over K[x]/(x^n)."""
    return 0 if k == n else n - k
