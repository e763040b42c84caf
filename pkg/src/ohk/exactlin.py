"""Exact dense linear algebra over Q and prime fields F_p.

Matrices are immutable and store raw field values: ``fractions.Fraction``
(or plain ``int``) over Q, canonical residues in ``[0, p)`` over F_p.
Mixing two fields in one operation raises :class:`FieldMismatchError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionLimitError, FieldMismatchError, ShapeError

MAX_CARRIER_DIM = 64
MAX_TENSOR_DIM = 4096


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _q_norm(a):
    # integral rationals are kept as ints: int arithmetic is much cheaper than Fraction
    if type(a) is Fraction and a.denominator == 1:
        return a.numerator
    return a


@dataclass(frozen=True)
class Field:
    """Q when ``p`` is None, otherwise the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls(None)
        m = re.fullmatch(r"F_?(\d+)", text)
        if not m:
            raise ValueError(f"unknown field {text!r}; expected Q or F<p>")
        return cls(int(m.group(1)))

    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into this field."""
        if isinstance(x, FieldScalar):
            self.check(x.field)
            return x.value
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return _q_norm(Fraction(x))
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def check(self, other: "Field"):
        if other != self:
            raise FieldMismatchError(f"cannot mix {self.name} and {other.name}")

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return _q_norm(1 / Fraction(a))
        return pow(a, -1, self.p)

    def reduce(self, a):
        return _q_norm(a) if self.p is None else a % self.p

    def fmt(self, a) -> str:
        if self.p is None:
            a = Fraction(a)
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a % self.p)


QQ = Field(None)


def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class FieldScalar:
    """A single exact scalar tagged with its field."""

    value: object
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, other):
        if isinstance(other, FieldScalar):
            self.field.check(other.field)
            return other.value
        return self.field(other)

    def __add__(self, other):
        return FieldScalar(self.value + self._other(other), self.field)

    def __sub__(self, other):
        return FieldScalar(self.value - self._other(other), self.field)

    def __mul__(self, other):
        return FieldScalar(self.value * self._other(other), self.field)

    def __truediv__(self, other):
        return FieldScalar(self.value * self.field.inv(self._other(other)), self.field)

    def __neg__(self):
        return FieldScalar(-self.value, self.field)

    __radd__ = __add__
    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return bool(self.value)

    def __repr__(self):
        return f"{self.field.fmt(self.value)}:{self.field.name}"


def _check_dim(n: int, what: str = "dimension"):
    if n > MAX_TENSOR_DIM:
        raise DimensionLimitError(f"{what} {n} exceeds the limit of {MAX_TENSOR_DIM}")


class Matrix:
    """Immutable dense matrix over a :class:`Field`.

    Columns are images of basis vectors: a matrix with ``cols`` columns is a
    linear map from a ``cols``-dimensional space.
    """

    __slots__ = ("field", "rows", "cols", "_data", "_hash")

    def __init__(self, field: Field, rows: Iterable[Sequence], cols: int | None = None, *, _trusted=False):
        if _trusted:
            data = rows
        else:
            data = tuple(tuple(field(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        for r in data:
            if len(r) != cols:
                raise ShapeError("ragged matrix rows")
        self.field = field
        self.rows = len(data)
        self.cols = cols
        self._data = data
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, tuple((z,) * cols for _ in range(rows)), cols, _trusted=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n, _trusted=True)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        columns = [tuple(c) for c in columns]
        if rows is None:
            if not columns:
                raise ShapeError("row count needed for an empty column list")
            rows = len(columns[0])
        if any(len(c) != rows for c in columns):
            raise ShapeError("columns of unequal length")
        data = tuple(tuple(field(c[i]) for c in columns) for i in range(rows))
        return cls(field, data, len(columns), _trusted=True)

    @classmethod
    def _raw(cls, field: Field, data, cols: int) -> "Matrix":
        return cls(field, data, cols, _trusted=True)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [tuple(c) for c in zip(*self._data)] if self.rows else [() for _ in range(self.cols)]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self._data)
        return f"Matrix[{self.field.name}]({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    # arithmetic ---------------------------------------------------------
    def _same(self, other: "Matrix"):
        self.field.check(other.field)
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        red = self.field.reduce
        return Matrix._raw(self.field, tuple(tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        red = self.field.reduce
        return Matrix._raw(self.field, tuple(tuple(red(a - b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __neg__(self) -> "Matrix":
        red = self.field.reduce
        return Matrix._raw(self.field, tuple(tuple(red(-a) for a in r) for r in self._data), self.cols)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        red = self.field.reduce
        return Matrix._raw(self.field, tuple(tuple(red(c * a) for a in r) for r in self._data), self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self.field.check(other.field)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        n = other.cols
        zero = self.field.zero
        red = self.field.reduce
        odata = other._data
        # row-sparse product; most operands are very sparse
        sparse_rows = [[(j, b) for j, b in enumerate(r) if b] for r in odata]
        out = []
        for r in self._data:
            acc = [zero] * n
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse_rows[k]:
                        acc[j] += a * b
            out.append(tuple(red(x) for x in acc))
        return Matrix._raw(self.field, tuple(out), n)

    def apply(self, v: Sequence) -> tuple:
        """Image of a column vector."""
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for a map from dimension {self.cols}")
        zero = self.field.zero
        nz = [(k, a) for k, a in enumerate(v) if a]
        red = self.field.reduce
        return tuple(red(sum((r[k] * a for k, a in nz if r[k]), zero)) for r in self._data)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols)), self.rows)

    def hstack(self, other: "Matrix") -> "Matrix":
        self.field.check(other.field)
        if self.rows != other.rows:
            raise ShapeError("hstack needs equal row counts")
        return Matrix._raw(self.field, tuple(r + s for r, s in zip(self._data, other._data)), self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self.field.check(other.field)
        if self.cols != other.cols:
            raise ShapeError("vstack needs equal column counts")
        return Matrix._raw(self.field, self._data + other._data, self.cols)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, tuple(tuple(r[j] for j in idx) for r in self._data), len(idx))

    # elimination --------------------------------------------------------
    def rref(self) -> "Matrix":
        return rref(self)

    def rank(self) -> int:
        return len(_rref_rows(self)[1])

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("inverse of a non-square matrix")
        n = self.rows
        aug = self.hstack(Matrix.identity(self.field, n))
        rows, piv = _rref_rows(aug)
        if len(piv) < n or piv[n - 1] >= n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix._raw(self.field, tuple(tuple(r[n:]) for r in rows[:n]), n)

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """Some X with ``self @ X == rhs``, or None when no solution exists."""
        self.field.check(rhs.field)
        if rhs.rows != self.rows:
            raise ShapeError("right-hand side has the wrong number of rows")
        aug = self.hstack(rhs)
        rows, piv = _rref_rows(aug)
        n = self.cols
        if any(p >= n for p in piv):
            return None
        zero = self.field.zero
        sol = [[zero] * rhs.cols for _ in range(n)]
        for r, p in zip(rows, piv):
            sol[p] = list(r[n:])
        return Matrix._raw(self.field, tuple(tuple(s) for s in sol), rhs.cols)

    def is_injective(self) -> bool:
        return self.rank() == self.cols

    def is_surjective(self) -> bool:
        return self.rank() == self.rows


def _rref_rows(m: Matrix) -> tuple[list[list], list[int]]:
    """Gauss-Jordan elimination; returns the nonzero RREF rows and pivot columns."""
    field = m.field
    red = field.reduce
    rows = [list(r) for r in m]
    pivots: list[int] = []
    r0 = 0
    for c in range(m.cols):
        piv = None
        for i in range(r0, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = field.inv(rows[r0][c])
        prow = [red(x * inv) for x in rows[r0]]
        rows[r0] = prow
        nzp = [(j, x) for j, x in enumerate(prow) if x]
        for i in range(len(rows)):
            if i != r0:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j, x in nzp:
                        row[j] = red(row[j] - f * x)
        pivots.append(c)
        r0 += 1
        if r0 == len(rows):
            break
    return rows[:r0], pivots


def rref(m: Matrix) -> Matrix:
    """Reduced row echelon form with zero rows dropped (a basis of the row space)."""
    rows, _ = _rref_rows(m)
    return Matrix._raw(m.field, tuple(tuple(r) for r in rows), m.cols)


def kernel_basis(m: Matrix) -> "Subspace":
    """Null space of ``m`` acting on column vectors of length ``m.cols``."""
    rows, piv = _rref_rows(m)
    field = m.field
    zero, one = field.zero, field.one
    pivset = set(piv)
    vecs = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [zero] * m.cols
        v[free] = one
        for r, p in zip(rows, piv):
            if r[free]:
                v[p] = field.reduce(-r[free])
        vecs.append(v)
    return Subspace.span(field, m.cols, vecs)


def tensor(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; index (i, j) of the pair maps to ``i * dim_b + j``."""
    a.field.check(b.field)
    _check_dim(a.rows * b.rows, "tensor row dimension")
    _check_dim(a.cols * b.cols, "tensor column dimension")
    red = a.field.reduce
    zero = a.field.zero
    data = []
    zrow = (zero,) * (a.cols * b.cols)
    for ra in a:
        for rb in b:
            if not any(ra) or not any(rb):
                data.append(zrow)
                continue
            row = []
            for x in ra:
                if x:
                    row.extend(red(x * y) for y in rb)
                else:
                    row.extend((zero,) * b.cols)
            data.append(tuple(row))
    return Matrix._raw(a.field, tuple(data), a.cols * b.cols)


def tensor_all(mats: Sequence[Matrix]) -> Matrix:
    out = mats[0]
    for m in mats[1:]:
        out = tensor(out, m)
    return out


def tensor_vectors(u: Sequence, v: Sequence, field: Field) -> tuple:
    red = field.reduce
    zero = field.zero
    out = []
    for x in u:
        if x:
            out.extend(red(x * y) for y in v)
        else:
            out.extend((zero,) * len(v))
    return tuple(out)


def swap_matrix(field: Field, m: int, n: int) -> Matrix:
    """The flip V_m (x) V_n -> V_n (x) V_m."""
    _check_dim(m * n)
    cols = []
    for j in range(m * n):
        a, b = divmod(j, n)
        v = [0] * (m * n)
        v[b * m + a] = 1
        cols.append(v)
    return Matrix.from_columns(field, cols, m * n)


def permutation_matrix(field: Field, perm: Sequence[int]) -> Matrix:
    """Matrix sending basis vector j to basis vector ``perm[j]``."""
    n = len(perm)
    z, o = field.zero, field.one
    data = [[z] * n for _ in range(n)]
    for j, i in enumerate(perm):
        data[i][j] = o
    return Matrix._raw(field, tuple(tuple(r) for r in data), n)


class Subspace:
    """A subspace of K^n held as the RREF basis matrix (rows = basis vectors).

    Two subspaces are equal exactly when their RREF bases coincide entry-wise.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, basis: Matrix, pivots: Sequence[int]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vectors):
            raise ShapeError("vector length differs from the ambient dimension")
        if not vectors:
            return cls.zero(field, ambient_dim)
        m = Matrix(field, vectors, ambient_dim)
        rows, piv = _rref_rows(m)
        return cls(field, ambient_dim, Matrix._raw(field, tuple(tuple(r) for r in rows), ambient_dim), piv)

    @classmethod
    def from_matrix_rows(cls, m: Matrix) -> "Subspace":
        rows, piv = _rref_rows(m)
        return cls(m.field, m.cols, Matrix._raw(m.field, tuple(tuple(r) for r in rows), m.cols), piv)

    @classmethod
    def column_space(cls, m: Matrix) -> "Subspace":
        return cls.from_matrix_rows(m.T)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix._raw(field, (), ambient_dim), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, Matrix.identity(field, ambient_dim), range(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[tuple]:
        return [tuple(r) for r in self.basis]

    def _compat(self, other: "Subspace"):
        self.field.check(other.field)
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field == other.field and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.field.name}^{self.ambient_dim})"

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ShapeError("vector length differs from the ambient dimension")
        return not any(self.reduce(v))

    def reduce(self, v: Sequence) -> tuple:
        """Remainder of ``v`` after clearing the pivot coordinates with the basis."""
        red = self.field.reduce
        w = [self.field(x) for x in v]
        for r, p in zip(self.basis, self.pivots):
            f = w[p]
            if f:
                for j, x in enumerate(r):
                    if x:
                        w[j] = red(w[j] - f * x)
        return tuple(w)

    def contains(self, other: "Subspace") -> bool:
        self._compat(other)
        return all(self.contains_vector(v) for v in other.basis)

    __ge__ = contains

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def sum(self, other: "Subspace") -> "Subspace":
        self._compat(other)
        return Subspace.span(self.field, self.ambient_dim, self.vectors() + other.vectors())

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        self._compat(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        # solve a.U = b.W for coefficient rows a, b
        stacked = self.basis.vstack(other.basis)
        ker = kernel_basis(stacked.T)
        vecs = []
        for coeffs in ker.basis:
            a = coeffs[: self.dim]
            vecs.append(self.basis.T.apply(a))
        return Subspace.span(self.field, self.ambient_dim, vecs)

    def image(self, m: Matrix) -> "Subspace":
        """Image of this subspace under a linear map."""
        self.field.check(m.field)
        if m.cols != self.ambient_dim:
            raise ShapeError("map domain differs from the ambient dimension")
        return Subspace.span(self.field, m.rows, [m.apply(v) for v in self.basis])

    def complement_indices(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def quotient_map(self) -> Matrix:
        """Surjection onto K^(n - dim) with kernel exactly this subspace.

        Coordinates of the quotient are the non-pivot coordinates of the RREF
        basis, so the choice is deterministic.
        """
        comp = self.complement_indices()
        pos = {c: k for k, c in enumerate(comp)}
        field = self.field
        zero, one = field.zero, field.one
        data = [[zero] * self.ambient_dim for _ in comp]
        for c, k in pos.items():
            data[k][c] = one
        for r, p in zip(self.basis, self.pivots):
            for c, k in pos.items():
                if r[c]:
                    data[k][p] = field.reduce(-r[c])
        return Matrix._raw(field, tuple(tuple(r) for r in data), self.ambient_dim)

    def section(self) -> Matrix:
        """Linear right inverse of :meth:`quotient_map` (non-pivot coordinate inclusion)."""
        comp = self.complement_indices()
        z, o = self.field.zero, self.field.one
        data = tuple(tuple(o if c == i else z for c in comp) for i in range(self.ambient_dim))
        return Matrix._raw(self.field, data, len(comp))

    def inclusion(self) -> Matrix:
        """Matrix whose columns are the basis vectors."""
        return self.basis.T if self.dim else Matrix.zeros(self.field, self.ambient_dim, 0)


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    return s.sum(t)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    return s.intersect(t)


def contains(s: Subspace, t: Subspace) -> bool:
    return s.contains(t)


def quotient_map(s: Subspace) -> Matrix:
    return s.quotient_map()


def unit_vector(field: Field, n: int, i: int) -> tuple:
    z, o = field.zero, field.one
    return tuple(o if j == i else z for j in range(n))
