"""Independent reference computations used to cross-check the library."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from ohk.coalgebra import Coalgebra, product_delta, var_projection_matrix
from ohk.exactlin import Matrix, Subspace, kernel_basis, tensor, tensor_all
from ohk.theory import Var


def dense_linearize(m, t, n: int) -> Matrix:
    """l(t) built from whole matrices: projections, Kronecker products and the product coproduct."""
    c = m.carrier
    if isinstance(t, Var):
        return var_projection_matrix(c, n, t.index)
    f = m.op(t.op)
    if not t.args:
        eps_n = Matrix.identity(m.field, 1)
        for _ in range(n):
            eps_n = tensor(eps_n, c.epsilon)
        return f @ eps_n
    inner = tensor_all([dense_linearize(m, a, n) for a in t.args])
    return f @ inner @ product_delta(c, n, len(t.args))


def brute_grouplikes(c: Coalgebra) -> list[tuple]:
    """Solve ε(v) = 1 and Δ(v) = v⊗v directly.

    Over F_p every vector is tried; over Q the quadratic system goes to sympy.
    """
    d = c.dim
    field = c.field
    if field.p is not None:
        out = []
        for v in itertools.product(range(field.p), repeat=d):
            if c.epsilon.apply(v)[0] != 1:
                continue
            dv = c.delta.apply(v)
            if all(dv[i * d + j] == (v[i] * v[j]) % field.p for i in range(d) for j in range(d)):
                out.append(tuple(v))
        return sorted(out)
    xs = sympy.symbols(f"x0:{d}")
    eqs = [sum(sympy.Rational(str(c.epsilon[0, k])) * xs[k] for k in range(d)) - 1]
    for i in range(d):
        for j in range(d):
            lin = sum(sympy.Rational(str(c.delta[i * d + j, k])) * xs[k] for k in range(d))
            eqs.append(lin - xs[i] * xs[j])
    sols = sympy.solve(eqs, xs, dict=True)
    out = []
    for s in sols:
        vals = [s.get(x, x) for x in xs]
        if all(v.is_Rational for v in vals):
            out.append(tuple(Fraction(int(v.p), int(v.q)) for v in vals))
    return sorted(out)


def brute_hopf_kernel(f) -> Subspace:
    """Kernel of (f⊗id)Δ − u⊗id as one dense matrix."""
    a, b = f.source, f.target
    u = Matrix.from_columns(a.field, [b.unit()], b.dim)
    lhs = tensor(f.matrix, a.carrier.identity()) @ a.carrier.delta
    rhs = tensor(u, a.carrier.identity())
    return kernel_basis(lhs - rhs)


def brute_ideal(m, gens: Subspace) -> Subspace:
    """Close under every op in every slot by repeated whole-basis passes until stable."""
    d = m.dim
    field = m.field
    current = gens
    while True:
        vecs = current.vectors()
        new = list(vecs)
        for o in m.theory.ops:
            if o.arity == 0:
                continue
            mat = m.op(o.name)
            for slot in range(o.arity):
                for v in vecs:
                    for rest in itertools.product(range(d), repeat=o.arity - 1):
                        factors = [_unit(field, d, j) for j in rest]
                        factors.insert(slot, v)
                        w = factors[0]
                        for x in factors[1:]:
                            w = _kron(w, x, field)
                        new.append(mat.apply(w))
        nxt = Subspace.span(field, d, new)
        if nxt == current:
            return current
        current = nxt


def _unit(field, d, j):
    return tuple(field.one if i == j else field.zero for i in range(d))


def _kron(u, v, field):
    return tuple(field.reduce(x * y) for x in u for y in v)
