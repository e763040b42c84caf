"""Finite-dimensional cocommutative coalgebras and their tensor calculus."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache

from .errors import DimensionLimitError, ShapeError, UnresolvedGrouplikesError
from .exactlin import (
    MAX_CARRIER_DIM,
    MAX_TENSOR_DIM,
    Field,
    Matrix,
    Subspace,
    kernel_basis,
    tensor,
    permutation_matrix,
    tensor_vectors,
    unit_vector,
)
from .report import Report, tensor_labels


class Coalgebra:
    """Carrier with comultiplication (dim^2 x dim) and counit (1 x dim) matrices.

    Tensor index convention: basis pair (i, j) sits at ``i * dim + j``.
    """

    def __init__(self, field: Field, labels, delta: Matrix, epsilon: Matrix):
        labels = tuple(labels)
        dim = len(labels)
        if dim == 0:
            raise ShapeError("a coalgebra needs a nonzero carrier")
        if dim > MAX_CARRIER_DIM:
            raise DimensionLimitError(f"carrier dimension {dim} exceeds {MAX_CARRIER_DIM}")
        if len(set(labels)) != dim:
            raise ShapeError("basis labels must be distinct")
        if delta.shape != (dim * dim, dim):
            raise ShapeError(f"delta must be {dim * dim}x{dim}, got {delta.rows}x{delta.cols}")
        if epsilon.shape != (1, dim):
            raise ShapeError(f"epsilon must be 1x{dim}, got {epsilon.rows}x{epsilon.cols}")
        field.check(delta.field)
        field.check(epsilon.field)
        self.field = field
        self.labels = labels
        self.dim = dim
        self.delta = delta
        self.epsilon = epsilon

    def __eq__(self, other):
        if not isinstance(other, Coalgebra):
            return NotImplemented
        return (self.field, self.labels, self.delta, self.epsilon) == (other.field, other.labels, other.delta, other.epsilon)

    def __hash__(self):
        return hash((self.labels, self.delta, self.epsilon))

    def __repr__(self):
        return f"Coalgebra(dim={self.dim}, field={self.field.name})"

    @classmethod
    def grouplike_basis(cls, field: Field, labels) -> "Coalgebra":
        """K[X]: every basis element is grouplike."""
        labels = tuple(labels)
        d = len(labels)
        cols = [unit_vector(field, d * d, i * d + i) for i in range(d)]
        return cls(field, labels, Matrix.from_columns(field, cols, d * d), Matrix(field, [[1] * d]))

    @classmethod
    def trivial(cls, field: Field, label: str = "1") -> "Coalgebra":
        return cls.grouplike_basis(field, [label])

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def identity(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)

    @cached_property
    def delta_terms(self) -> tuple:
        """Per basis element, the nonzero ``(i, j, coeff)`` of its coproduct."""
        d = self.dim
        out = []
        for c in range(d):
            out.append(tuple((r // d, r % d, x) for r, x in enumerate(self.delta.column(c)) if x))
        return tuple(out)

    @cached_property
    def eps(self) -> tuple:
        return self.epsilon.row(0)

    def iterated_terms(self, i: int, k: int) -> dict:
        """Sparse Δ^(k-1)(e_i) as ``{(j1..jk): coeff}``, left-nested."""
        return _iterated_terms(self, i, k)

    def tensor_power(self, n: int) -> "Coalgebra":
        """C^{(x)n} with the interleaved product comultiplication (K for n = 0)."""
        if n == 0:
            return Coalgebra.trivial(self.field)
        dim = self.dim ** n
        if dim * dim > MAX_TENSOR_DIM:
            raise DimensionLimitError(f"tensor power of total dimension {dim * dim} exceeds {MAX_TENSOR_DIM}")
        return Coalgebra(self.field, tensor_labels(self.labels, n), product_delta(self, n), tensor_power_eps(self, n))


_ITER_CACHE_ATTR = "_iter_cache"


def _iterated_terms(c: Coalgebra, i: int, k: int) -> dict:
    cache = c.__dict__.setdefault(_ITER_CACHE_ATTR, {})
    key = (i, k)
    if key in cache:
        return cache[key]
    if k == 1:
        res = {(i,): c.field.one}
    else:
        res = {}
        red = c.field.reduce
        for tup, coef in _iterated_terms(c, i, k - 1).items():
            for a, b, x in c.delta_terms[tup[0]]:
                key2 = (a, b) + tup[1:]
                res[key2] = red(res.get(key2, 0) + coef * x)
        res = {t: x for t, x in res.items() if x}
    cache[key] = res
    return res


def check_coalgebra(c: Coalgebra) -> Report:
    """Coassociativity, both counit laws and cocommutativity, witnessed by basis label.

    Evaluated column by column on the sparse coproduct, so carriers up to the
    dimension cap are checked without forming C^{(x)3}.
    """
    rep = Report("coalgebra")
    rep.dims["dim"] = c.dim
    red = c.field.reduce
    eps = c.eps
    bad_assoc = bad_counit = bad_swap = None
    for col in range(c.dim):
        terms = c.delta_terms[col]
        left: dict = {}
        right: dict = {}
        for a, b, x in terms:
            for a1, a2, y in c.delta_terms[a]:
                left[(a1, a2, b)] = red(left.get((a1, a2, b), 0) + x * y)
            for b1, b2, y in c.delta_terms[b]:
                right[(a, b1, b2)] = red(right.get((a, b1, b2), 0) + x * y)
        if bad_assoc is None and _nonzero(left) != _nonzero(right):
            bad_assoc = c.labels[col]
        lc = [0] * c.dim
        rc = [0] * c.dim
        for a, b, x in terms:
            lc[b] = red(lc[b] + eps[a] * x)
            rc[a] = red(rc[a] + eps[b] * x)
        want = [1 if j == col else 0 for j in range(c.dim)]
        if bad_counit is None and (lc != want or rc != want):
            bad_counit = c.labels[col]
        coeffs = {(a, b): x for a, b, x in terms}
        if bad_swap is None and any(coeffs.get((b, a), 0) != x for (a, b), x in coeffs.items()):
            bad_swap = c.labels[col]
    rep.add("coassociativity", bad_assoc is None, bad_assoc)
    rep.add("counit", bad_counit is None, bad_counit)
    rep.add("cocommutativity", bad_swap is None, bad_swap)
    return rep


def _nonzero(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def iterated_delta(c: Coalgebra, k: int) -> Matrix:
    """Dense Δ^(k-1): C -> C^{(x)k}, left-nested: (Δ⊗id^{k-2})∘Δ^(k-2)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if c.dim ** k > MAX_TENSOR_DIM:
        raise DimensionLimitError(f"C^(x){k} has dimension {c.dim ** k} > {MAX_TENSOR_DIM}")
    out = c.identity()
    for j in range(2, k + 1):
        rest = Matrix.identity(c.field, c.dim ** (j - 2))
        out = tensor(c.delta, rest) @ out
    return out


def var_projection_matrix(c: Coalgebra, n: int, i: int) -> Matrix:
    """ε⊗…⊗id⊗…⊗ε : C^{(x)n} -> C with the identity in slot ``i``."""
    if not 0 <= i < n:
        raise IndexError(f"variable {i} out of range for arity {n}")
    if c.dim ** n > MAX_TENSOR_DIM:
        raise DimensionLimitError(f"C^(x){n} has dimension {c.dim ** n} > {MAX_TENSOR_DIM}")
    mats = [c.identity() if j == i else c.epsilon for j in range(n)]
    out = mats[0]
    for m in mats[1:]:
        out = tensor(out, m)
    return out


class LinearizedMap:
    """A linear map C^{(x)n} -> C attached to its coalgebra."""

    __slots__ = ("coalgebra", "arity", "matrix")

    def __init__(self, coalgebra: Coalgebra, arity: int, matrix: Matrix):
        if matrix.shape != (coalgebra.dim, coalgebra.dim ** arity):
            raise ShapeError(f"linearized map must be {coalgebra.dim}x{coalgebra.dim ** arity}")
        self.coalgebra = coalgebra
        self.arity = arity
        self.matrix = matrix

    def __eq__(self, other):
        return isinstance(other, LinearizedMap) and self.arity == other.arity and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.arity, self.matrix))

    def __repr__(self):
        return f"LinearizedMap(arity={self.arity}, {self.matrix!r})"


def var_projection(c: Coalgebra, n: int, i: int) -> LinearizedMap:
    return LinearizedMap(c, n, var_projection_matrix(c, n, i))


def interleave_permutation(dim: int, n: int, k: int) -> list[int]:
    """Index map (C^{(x)k})^{(x)n} -> (C^{(x)n})^{(x)k}.

    Input position ``(j, r)`` (factor j of the n-fold product, copy r) moves to
    copy r of the k-fold product, slot j.
    """
    return list(_interleave_cached(dim, n, k))


def _interleave(dim: int, n: int, k: int) -> tuple:
    perm = []
    for idx in itertools.product(range(dim), repeat=n * k):
        # idx laid out as n blocks of k
        grid = [idx[j * k:(j + 1) * k] for j in range(n)]
        out = 0
        for r in range(k):
            for j in range(n):
                out = out * dim + grid[j][r]
        perm.append(out)
    return tuple(perm)


_interleave_cached = lru_cache(maxsize=64)(_interleave)


def product_delta(c: Coalgebra, n: int, k: int = 2) -> Matrix:
    """Δ^(k-1) of the product coalgebra C^{(x)n}: factor-wise Δ^(k-1), then interleave."""
    total = c.dim ** (n * k)
    if total > MAX_TENSOR_DIM:
        raise DimensionLimitError(f"(C^(x){n})^(x){k} has dimension {total} > {MAX_TENSOR_DIM}")
    factor = iterated_delta(c, k)
    out = factor
    for _ in range(n - 1):
        out = tensor(out, factor)
    return permutation_matrix(c.field, interleave_permutation(c.dim, n, k)) @ out


def tensor_power_eps(c: Coalgebra, n: int) -> Matrix:
    out = c.epsilon
    for _ in range(n - 1):
        out = tensor(out, c.epsilon)
    return out


# ---------------------------------------------------------------------------
# grouplikes via characters of the dual algebra


def _dual_operators(c: Coalgebra) -> list[Matrix]:
    """M_i = (e_i^* ⊗ id)∘Δ, the transposed multiplication by e_i^* on C*."""
    d = c.dim
    ops = []
    for i in range(d):
        rows = [[c.field.zero] * d for _ in range(d)]
        for col in range(d):
            for a, b, x in c.delta_terms[col]:
                if a == i:
                    rows[b][col] = c.field.reduce(rows[b][col] + x)
        ops.append(Matrix(c.field, rows))
    return ops


def _roots_in_field(m: Matrix) -> tuple[dict, int]:
    """Eigenvalues of a square matrix lying in its field, with multiplicities."""
    from sympy import GF as sGF
    from sympy import QQ as sQQ
    from sympy import Poly, symbols
    from sympy.polys.matrices import DomainMatrix

    field = m.field
    x = symbols("x")
    n = m.rows
    if field.p is None:
        dm = DomainMatrix([[sQQ(int(Fraction(a).numerator), int(Fraction(a).denominator)) for a in r] for r in m], (n, n), sQQ)
        coeffs = [sQQ(c) for c in dm.charpoly()]
        roots = Poly([sQQ.to_sympy(c) for c in coeffs], x, domain="QQ").ground_roots()
        out = {Fraction(int(r.p), int(r.q)): mult for r, mult in roots.items()}
    else:
        K = sGF(field.p)
        dm = DomainMatrix([[K(int(a)) for a in r] for r in m], (n, n), K)
        coeffs = [int(K.to_int(c)) % field.p for c in dm.charpoly()]
        roots = Poly(coeffs, x, modulus=field.p).ground_roots()
        out = {}
        for r, mult in roots.items():
            key = int(r) % field.p
            out[key] = out.get(key, 0) + mult
    return out, n


def _restrict(op: Matrix, w: Subspace) -> Matrix:
    """Matrix of ``op`` on the invariant subspace ``w`` in w's basis."""
    basis = w.inclusion()
    images = op @ basis
    sol = basis.solve(images)
    if sol is None:
        raise ArithmeticError("subspace is not invariant")
    return sol


def grouplikes(c: Coalgebra) -> list[tuple]:
    """All grouplike elements, as coordinate vectors in a deterministic order.

    Grouplikes are the characters of the commutative dual algebra C*. The
    operators M_i commute; splitting C into joint eigenspaces over the ground
    field leaves one line per character, whose eigenvalue tuple is the
    grouplike's coordinate vector. Raises when some character needs a field
    extension.
    """
    ops = _dual_operators(c)
    for i, op in enumerate(ops):
        roots, n = _roots_in_field(op)
        if sum(roots.values()) < n:
            raise UnresolvedGrouplikesError(
                f"multiplication by the dual of {c.labels[i]!r} has eigenvalues outside {c.field.name}"
            )
    found = []
    stack = [(Subspace.full(c.field, c.dim), 0, ())]
    while stack:
        w, k, eig = stack.pop()
        if w.dim == 0:
            continue
        if k == len(ops):
            found.append(eig)
            continue
        op = ops[k]
        roots, _ = _roots_in_field(_restrict(op, w))
        for lam in sorted(roots, key=str):
            shifted = op - Matrix.identity(c.field, c.dim).scale(lam)
            e = kernel_basis(shifted).intersect(w)
            stack.append((e, k + 1, eig + (lam,)))
    result = []
    for eig in found:
        g = tuple(c.field(x) for x in eig)
        if is_grouplike(c, g):
            result.append(g)
    result.sort(key=_vector_key)
    return result


def _vector_key(v):
    nz = [i for i, x in enumerate(v) if x]
    return (nz, [str(x) for x in v])


def is_grouplike(c: Coalgebra, v) -> bool:
    v = tuple(v)
    if c.epsilon.apply(v)[0] != c.field.one:
        return False
    return c.delta.apply(v) == tensor_vectors(v, v, c.field)
