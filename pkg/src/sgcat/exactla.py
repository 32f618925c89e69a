"""Exact linear algebra over the rationals and prime fields.

Matrices wrap python-flint's ``fmpq_mat`` / ``nmod_mat``.  Vectors are column
matrices unless stated otherwise.  Everything here is immutable by convention:
no operation mutates its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import flint

from .errors import InputError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p == 0``) or GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise InputError(f"field characteristic {self.p} is not prime")

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec(0)

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec(int(p))

    @staticmethod
    def parse(text: str) -> "FieldSpec":
        """Accepts ``Q``, ``Fp 5`` and ``Fp:5``."""
        t = text.strip().replace(":", " ").split()
        if t == ["Q"]:
            return FieldSpec(0)
        if len(t) == 2 and t[0] == "Fp":
            try:
                p = int(t[1])
            except ValueError:
                raise InputError(f"bad prime in field spec {text!r}") from None
            return FieldSpec(p)
        raise InputError(f"unknown field spec {text!r}")

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def kind(self) -> str:
        return "Rationals" if self.p == 0 else "PrimeField"

    def __str__(self):
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    # scalar handling
    def coerce(self, x):
        """Convert an int / Fraction / flint scalar into the flint scalar type."""
        if self.p == 0:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, flint.fmpz):
                return flint.fmpq(x)
            return flint.fmpq(int(x)) if isinstance(x, int) else flint.fmpq(_frac(x))
        if isinstance(x, Fraction) or isinstance(x, flint.fmpq):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % self.p == 0:
                raise InputError(f"denominator {den} not invertible mod {self.p}")
            return flint.nmod(num * pow(den, -1, self.p), self.p)
        return flint.nmod(int(x), self.p)

    def to_python(self, x):
        """Canonical python value: Fraction in lowest terms, or int in [0, p)."""
        if self.p == 0:
            x = self.coerce(x)
            return Fraction(int(x.p), int(x.q))
        return int(x) % self.p

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)


def _frac(x):
    f = Fraction(x)
    return flint.fmpq(f.numerator, f.denominator)


def _raw_entries(field: FieldSpec, values: Iterable):
    if field.p == 0:
        return [v if isinstance(v, (int, flint.fmpq)) else field.coerce(v) for v in values]
    p = field.p
    out = []
    for v in values:
        if isinstance(v, int):
            out.append(v % p)
        elif isinstance(v, flint.nmod):
            out.append(int(v))
        else:
            out.append(int(field.coerce(v)))
    return out


class Matrix:
    """Dense exact matrix over a FieldSpec."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FieldSpec, raw):
        self.field = field
        self.raw = raw

    # construction
    @staticmethod
    def from_flat(field: FieldSpec, rows: int, cols: int, values: Sequence) -> "Matrix":
        if len(values) != rows * cols:
            raise InputError("entry count does not match shape")
        vals = _raw_entries(field, values)
        if field.p == 0:
            return Matrix(field, flint.fmpq_mat(rows, cols, vals))
        return Matrix(field, flint.nmod_mat(rows, cols, vals, field.p))

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else (cols or 0)
        flat = []
        for row in rows:
            if len(row) != c:
                raise InputError("ragged rows")
            flat.extend(row)
        return Matrix.from_flat(field, r, c, flat)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        if field.p == 0:
            return Matrix(field, flint.fmpq_mat(rows, cols))
        return Matrix(field, flint.nmod_mat(rows, cols, field.p))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        m = Matrix.zeros(field, n, n)
        for i in range(n):
            m.raw[i, i] = 1
        return m

    @staticmethod
    def column(field: FieldSpec, values: Sequence) -> "Matrix":
        return Matrix.from_flat(field, len(values), 1, list(values))

    @staticmethod
    def unit_column(field: FieldSpec, n: int, i: int) -> "Matrix":
        m = Matrix.zeros(field, n, 1)
        m.raw[i, 0] = 1
        return m

    # shape
    @property
    def rows(self) -> int:
        return self.raw.nrows()

    @property
    def cols(self) -> int:
        return self.raw.ncols()

    @property
    def shape(self):
        return (self.raw.nrows(), self.raw.ncols())

    # entries
    def __getitem__(self, ij):
        return self.field.to_python(self.raw[ij])

    def entries(self) -> list:
        """Row-major canonical python scalars."""
        tp = self.field.to_python
        return [tp(x) for x in self.raw.entries()]

    def to_rows(self) -> list:
        e = self.entries()
        c = self.cols
        return [e[i * c:(i + 1) * c] for i in range(self.rows)]

    def flat_raw(self) -> list:
        return self.raw.entries()

    def is_zero(self) -> bool:
        if self.raw.nrows() == 0 or self.raw.ncols() == 0:
            return True
        return self.raw == Matrix.zeros(self.field, self.rows, self.cols).raw

    # arithmetic
    def _wrap(self, raw):
        return Matrix(self.field, raw)

    def _check(self, other):
        if not isinstance(other, Matrix) or other.field != self.field:
            raise InputError("matrix field mismatch")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise InputError("shape mismatch in addition")
        return self._wrap(self.raw + other.raw)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise InputError("shape mismatch in subtraction")
        return self._wrap(self.raw - other.raw)

    def __neg__(self):
        return self._wrap(-self.raw)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise InputError(f"shape mismatch in product {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return self._wrap(self.raw * other.raw)

    def scale(self, c) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return self
        return self._wrap(self.raw * self.field.coerce(c))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and (
            self.rows == 0 or self.cols == 0 or self.raw == other.raw)

    def __hash__(self):
        return hash((self.field, self.shape, tuple(str(x) for x in self.raw.entries())))

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_rows()})"

    def transpose(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.cols, self.rows)
        return self._wrap(self.raw.transpose())

    @property
    def T(self):
        return self.transpose()

    # slicing
    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        c = self.cols
        rows, cols = list(rows), list(cols)
        if 4 * len(rows) * len(cols) < self.rows * c:
            r = self.raw
            vals = [r[i, j] for i in rows for j in cols]
        else:
            e = self.raw.entries()
            vals = [e[i * c + j] for i in rows for j in cols]
        return Matrix.from_flat(self.field, len(rows), len(cols), vals)

    def select_rows(self, rows: Sequence[int]) -> "Matrix":
        return self.submatrix(rows, range(self.cols))

    def select_cols(self, cols: Sequence[int]) -> "Matrix":
        return self.submatrix(range(self.rows), cols)

    def col(self, j: int) -> "Matrix":
        return self.select_cols([j])

    def flatten(self) -> "Matrix":
        """Row-major flattening into a column vector."""
        return Matrix.from_flat(self.field, self.rows * self.cols, 1, self.raw.entries())

    def reshape(self, rows: int, cols: int) -> "Matrix":
        return Matrix.from_flat(self.field, rows, cols, self.raw.entries())

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise InputError("inverse of non-square matrix")
        if self.rows == 0:
            return self
        if rank(self) != self.rows:
            raise InputError("matrix is singular")
        return self._wrap(self.raw.inv())


def hstack(field: FieldSpec, mats: Sequence[Matrix], rows: Optional[int] = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows or 0, 0)
    r = mats[0].rows
    for m in mats:
        if m.rows != r:
            raise InputError("hstack row mismatch")
    ents = [m.raw.entries() for m in mats]
    widths = [m.cols for m in mats]
    flat = []
    for i in range(r):
        for e, w in zip(ents, widths):
            flat.extend(e[i * w:(i + 1) * w])
    return Matrix.from_flat(field, r, sum(widths), flat)


def vstack(field: FieldSpec, mats: Sequence[Matrix], cols: Optional[int] = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols or 0)
    c = mats[0].cols
    flat = []
    for m in mats:
        if m.cols != c:
            raise InputError("vstack column mismatch")
        flat.extend(m.raw.entries())
    return Matrix.from_flat(field, sum(m.rows for m in mats), c, flat)


def block_diag(field: FieldSpec, mats: Sequence[Matrix]) -> Matrix:
    R = sum(m.rows for m in mats)
    C = sum(m.cols for m in mats)
    out = Matrix.zeros(field, R, C)
    r0 = c0 = 0
    for m in mats:
        e = m.raw.entries()
        for i in range(m.rows):
            for j in range(m.cols):
                v = e[i * m.cols + j]
                if v != 0:
                    out.raw[r0 + i, c0 + j] = v
        r0 += m.rows
        c0 += m.cols
    return out


# -- echelon forms ---------------------------------------------------------

def rref(m: Matrix):
    """Reduced row echelon form: (R with only the nonzero rows, pivot columns)."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.field, 0, m.cols), []
    R, r = m.raw.rref()
    R = Matrix(m.field, R)
    pivots = []
    e = R.raw.entries()
    c = m.cols
    for i in range(r):
        row = e[i * c:(i + 1) * c]
        for j, v in enumerate(row):
            if v != 0:
                pivots.append(j)
                break
    if r < m.rows:
        R = R.select_rows(range(r))
    return R, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return m.raw.rank()


class Subspace:
    """Subspace of K^n stored as the unique RREF basis (rows)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: FieldSpec, ambient_dim: int, basis: Matrix, pivots: list):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @staticmethod
    def span_rows(m: Matrix) -> "Subspace":
        R, piv = rref(m)
        return Subspace(m.field, m.cols, R, piv)

    @staticmethod
    def span_cols(m: Matrix) -> "Subspace":
        return Subspace.span_rows(m.transpose())

    @staticmethod
    def zero(field: FieldSpec, n: int) -> "Subspace":
        return Subspace(field, n, Matrix.zeros(field, 0, n), [])

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list:
        """Basis vectors as column matrices."""
        n = self.ambient_dim
        e = self.basis.raw.entries()
        return [Matrix.from_flat(self.field, n, 1, e[i * n:(i + 1) * n]) for i in range(self.dim)]

    def coords(self, v: Matrix) -> Optional[Matrix]:
        """Coordinates of column v with respect to the echelon basis, or None."""
        if v.rows != self.ambient_dim or v.cols != 1:
            raise InputError("vector length does not match ambient dimension")
        if self.dim == 0:
            return Matrix.zeros(self.field, 0, 1) if v.is_zero() else None
        e = v.raw.entries()
        c = Matrix.from_flat(self.field, self.dim, 1, [e[j] for j in self.pivots])
        if self.basis.transpose() @ c != v:
            return None
        return c

    def contains(self, v: Matrix) -> bool:
        return self.coords(v) is not None

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Right null space {x : m x = 0}."""
    n = m.cols
    R, piv = rref(m)
    free = [j for j in range(n) if j not in set(piv)]
    if not free:
        return Subspace.zero(m.field, n)
    e = R.raw.entries()
    pset = {j: i for i, j in enumerate(piv)}
    vecs = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for j, i in pset.items():
            x = e[i * n + f]
            if x != 0:
                v[j] = -x
        vecs.append(v)
    flat = [x for v in vecs for x in v]
    return Subspace.span_rows(Matrix.from_flat(m.field, len(vecs), n, flat))


def kernel_matrix(m: Matrix) -> Matrix:
    """Kernel basis as the columns of a matrix."""
    k = kernel_basis(m)
    return k.basis.transpose()


def solve(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """One solution x of m x = b (free variables set to zero), or None."""
    if b.rows != m.rows:
        raise InputError("right-hand side length does not match matrix rows")
    n = m.cols
    aug = hstack(m.field, [m, b])
    R, piv = rref(aug)
    if any(p >= n for p in piv):
        return None
    x = Matrix.zeros(m.field, n, b.cols)
    e = R.raw.entries()
    w = n + b.cols
    for i, j in enumerate(piv):
        for c in range(b.cols):
            v = e[i * w + n + c]
            if v != 0:
                x.raw[j, c] = v
    return x


def in_span(s: Subspace, v: Matrix) -> bool:
    return s.contains(v)


class LeftInverse:
    """Fast exact left inverse of a full-column-rank matrix A.

    ``apply(y)`` returns x with A x = y, or None if y is outside the column space.
    """

    def __init__(self, A: Matrix):
        self.A = A
        if A.cols == 0:
            self.rows_sel = []
            self.inv = Matrix.zeros(A.field, 0, 0)
            return
        R, piv = rref(A.transpose())
        if len(piv) != A.cols:
            raise InputError("matrix does not have full column rank")
        self.rows_sel = piv
        self.inv = A.select_rows(piv).inverse()

    def apply(self, y: Matrix, check: bool = True) -> Optional[Matrix]:
        if self.A.cols == 0:
            x = Matrix.zeros(self.A.field, 0, y.cols)
            return x if (not check or y.is_zero()) else None
        x = self.inv @ y.select_rows(self.rows_sel)
        if check and self.A @ x != y:
            return None
        return x


def matrix_from_columns(field: FieldSpec, n: int, cols: Sequence[Matrix]) -> Matrix:
    if not cols:
        return Matrix.zeros(field, n, 0)
    return hstack(field, list(cols))
