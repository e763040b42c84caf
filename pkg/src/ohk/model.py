"""T-coalgebras: operations as coalgebra maps, linearized terms, axiom and hom checks."""

from __future__ import annotations

import itertools
from functools import cached_property

from .coalgebra import Coalgebra, LinearizedMap, check_coalgebra
from .errors import DimensionLimitError, NotPointedError, ShapeError, TheoryError
from .exactlin import MAX_TENSOR_DIM, Matrix, tensor, tensor_vectors
from .report import Report, render_vector, tensor_labels
from .theory import App, Equation, Term, TheoryPresentation, Var, format_equation


class TCoalgebraModel:
    """A cocommutative coalgebra with one coalgebra map C^{(x)n} -> C per op."""

    def __init__(self, theory: TheoryPresentation, carrier: Coalgebra, op_matrices: dict, name: str = ""):
        d = carrier.dim
        ops = {}
        for o in theory.ops:
            if o.name not in op_matrices:
                raise ShapeError(f"model lacks a matrix for op {o.name!r}")
            m = op_matrices[o.name]
            carrier.field.check(m.field)
            want = (d, d ** o.arity)
            if m.shape != want:
                raise ShapeError(f"op {o.name} matrix must be {want[0]}x{want[1]}, got {m.rows}x{m.cols}")
            ops[o.name] = m
        extra = set(op_matrices) - set(ops)
        if extra:
            raise ShapeError(f"matrices for ops not in theory {theory.name}: {sorted(extra)}")
        self.theory = theory
        self.carrier = carrier
        self.name = name
        self._ops = tuple((o.name, ops[o.name]) for o in theory.ops)

    @property
    def op_matrices(self) -> dict:
        return dict(self._ops)

    @property
    def field(self):
        return self.carrier.field

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @property
    def labels(self):
        return self.carrier.labels

    def op(self, name: str) -> Matrix:
        for n, m in self._ops:
            if n == name:
                return m
        raise TheoryError(f"unknown op {name!r}")

    def __eq__(self, other):
        if not isinstance(other, TCoalgebraModel):
            return NotImplemented
        return (self.theory.name, self.theory.ops, self.carrier, self._ops) == (
            other.theory.name, other.theory.ops, other.carrier, other._ops)

    def __hash__(self):
        return hash((self.theory.name, self.carrier))

    def __repr__(self):
        return f"TCoalgebraModel({self.name or '?'} over {self.theory.name}, dim={self.dim}, {self.field.name})"

    @cached_property
    def _op_columns(self) -> dict:
        out = {}
        for n, m in self._ops:
            out[n] = [{i: x for i, x in enumerate(col) if x} for col in m.columns()]
        return out

    def unit(self) -> tuple:
        """Coordinates of 1 for the designated group unit."""
        g = self.theory.omega_group
        if g is None:
            raise NotPointedError(f"theory {self.theory.name} is not pointed")
        return self.op(g.unit).column(0)

    def with_theory(self, theory: TheoryPresentation, op_matrices: dict | None = None, name: str | None = None):
        return TCoalgebraModel(theory, self.carrier, op_matrices or self.op_matrices, self.name if name is None else name)


# ---------------------------------------------------------------------------
# sparse helpers


def _sparse(v) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def _dense(d: dict, n: int, field) -> tuple:
    z = field.zero
    return tuple(d.get(i, z) for i in range(n))


def sparse_tensor(vectors: list[dict], dim: int, field) -> dict:
    """Sparse tensor of sparse vectors over a common dimension."""
    red = field.reduce
    out = {0: field.one}
    for v in vectors:
        nxt = {}
        for i, x in out.items():
            base = i * dim
            for j, y in v.items():
                nxt[base + j] = red(nxt.get(base + j, 0) + x * y)
        out = {k: x for k, x in nxt.items() if x}
    return out


def apply_op(m: TCoalgebraModel, name: str, vectors) -> tuple:
    """f(v_1 (x) ... (x) v_n) for an op of arity n."""
    cols = m._op_columns[name]
    field = m.field
    t = sparse_tensor([v if isinstance(v, dict) else _sparse(v) for v in vectors], m.dim, field)
    acc: dict = {}
    red = field.reduce
    for idx, x in t.items():
        for r, y in cols[idx].items():
            acc[r] = red(acc.get(r, 0) + x * y)
    return _dense(acc, m.dim, field)


def _apply_sparse(cols: list[dict], v: dict, field) -> dict:
    acc: dict = {}
    red = field.reduce
    for idx, x in v.items():
        for r, y in cols[idx].items():
            acc[r] = red(acc.get(r, 0) + x * y)
    return {k: x for k, x in acc.items() if x}


def multi_index(idx: int, dim: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, dim)
        out.append(r)
    return tuple(reversed(out))


def flat_index(tup, dim: int) -> int:
    i = 0
    for t in tup:
        i = i * dim + t
    return i


# ---------------------------------------------------------------------------
# linearization


def linearize(m: TCoalgebraModel, t: Term, nvars: int) -> LinearizedMap:
    """The linearized term C^{(x)n} -> C.

    Variables become ε⊗…⊗id⊗…⊗ε; an application f(t_1..t_k) becomes
    f∘(l(t_1)⊗…⊗l(t_k))∘Δ^(k-1) where Δ^(k-1) is the iterated coproduct of the
    product coalgebra C^{(x)n} (factor-wise Δ^(k-1) followed by the interleaving
    shuffle). Columns are evaluated on basis tensors using the sparse
    coproduct, which is the same map as the dense composite.
    """
    m.theory.check_term(t, nvars)
    d = m.dim
    if d ** nvars > MAX_TENSOR_DIM:
        raise DimensionLimitError(f"C^(x){nvars} has dimension {d ** nvars} > {MAX_TENSOR_DIM}")
    cols = _linearize_columns(m, t, nvars, {})
    return LinearizedMap(m.carrier, nvars, Matrix.from_columns(m.field, [_dense(c, d, m.field) for c in cols], d))


def _linearize_columns(m: TCoalgebraModel, t: Term, n: int, memo: dict) -> list[dict]:
    if t in memo:
        return memo[t]
    c = m.carrier
    d = c.dim
    field = m.field
    red = field.reduce
    eps = c.eps
    indices = list(itertools.product(range(d), repeat=n))
    out: list[dict] = []
    if isinstance(t, Var):
        for J in indices:
            coef = field.one
            for l, j in enumerate(J):
                if l != t.index:
                    coef = coef * eps[j]
                    if not coef:
                        break
            out.append({J[t.index]: red(coef)} if coef else {})
    else:
        opcols = m._op_columns[t.op]
        k = len(t.args)
        if k == 0:
            u = opcols[0]
            for J in indices:
                coef = field.one
                for j in J:
                    coef = coef * eps[j]
                coef = red(coef)
                out.append({r: red(coef * y) for r, y in u.items() if red(coef * y)} if coef else {})
        else:
            args = [_linearize_columns(m, a, n, memo) for a in t.args]
            for J in indices:
                # Δ^(k-1) on each factor, then regroup copy r across factors
                per_factor = [list(c.iterated_terms(j, k).items()) for j in J]
                acc: dict = {}
                for choice in itertools.product(*per_factor):
                    coef = field.one
                    for _, x in choice:
                        coef = coef * x
                    coef = red(coef)
                    if not coef:
                        continue
                    vecs = []
                    for r in range(k):
                        idx = 0
                        for tup, _ in choice:
                            idx = idx * d + tup[r]
                        vecs.append(args[r][idx])
                    if any(not v for v in vecs):
                        continue
                    for key, x in sparse_tensor(vecs, d, field).items():
                        acc[key] = red(acc.get(key, 0) + coef * x)
                out.append(_apply_sparse(opcols, {a: b for a, b in acc.items() if b}, field))
    memo[t] = out
    return out


def linearize_equation(m: TCoalgebraModel, eq: Equation) -> tuple[LinearizedMap, LinearizedMap]:
    return linearize(m, eq.lhs, eq.nvars), linearize(m, eq.rhs, eq.nvars)


# ---------------------------------------------------------------------------
# checks


def _op_coalgebra_failure(m: TCoalgebraModel, name: str, arity: int):
    """First basis tensor where op ``name`` breaks Δ- or ε-compatibility."""
    c = m.carrier
    d = c.dim
    field = m.field
    red = field.reduce
    cols = m._op_columns[name]
    delta_cols = [{(a * d + b): x for a, b, x in c.delta_terms[i]} for i in range(d)]
    eps = c.eps
    labels = tensor_labels(c.labels, arity) if arity else ["1"]
    for idx, J in enumerate(itertools.product(range(d), repeat=arity)):
        fj = cols[idx]
        # ε∘f = ε^{⊗n}
        e_left = red(sum((eps[r] * x for r, x in fj.items()), field.zero))
        e_right = field.one
        for j in J:
            e_right = e_right * eps[j]
        if e_left != red(e_right):
            return "counit", labels[idx]
        # Δ∘f
        left: dict = {}
        for r, x in fj.items():
            for key, y in delta_cols[r].items():
                left[key] = red(left.get(key, 0) + x * y)
        # (f⊗f)∘Δ_{C^{⊗n}}
        right: dict = {}
        for choice in itertools.product(*[c.delta_terms[j] for j in J]):
            coef = field.one
            for _, _, x in choice:
                coef = coef * x
            a_idx = flat_index([ch[0] for ch in choice], d)
            b_idx = flat_index([ch[1] for ch in choice], d)
            for r1, x1 in cols[a_idx].items():
                for r2, x2 in cols[b_idx].items():
                    key = r1 * d + r2
                    right[key] = red(right.get(key, 0) + coef * x1 * x2)
        if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
            return "comultiplication", labels[idx]
    return None


def check_model(m: TCoalgebraModel) -> Report:
    """Full axiom report: carrier, ops as coalgebra maps, unit preservation, equations."""
    rep = Report(f"model {m.name or '?'} over {m.theory.name}")
    rep.dims["dim"] = m.dim
    rep.extend(check_coalgebra(m.carrier), "carrier.")
    for o in m.theory.ops:
        bad = _op_coalgebra_failure(m, o.name, o.arity)
        rep.add(f"op {o.name}: coalgebra morphism", bad is None,
                None if bad is None else bad[1], None if bad is None else f"{bad[0]} fails")
    g = m.theory.omega_group
    if g is not None:
        u = _sparse(m.op(g.unit).column(0))
        for o in m.theory.ops:
            if o.arity == 0:
                continue
            # f∘Δ^(n-1)∘u
            acc: dict = {}
            red = m.field.reduce
            for i, x in u.items():
                for tup, y in m.carrier.iterated_terms(i, o.arity).items():
                    for r, z in m._op_columns[o.name][flat_index(tup, m.dim)].items():
                        acc[r] = red(acc.get(r, 0) + x * y * z)
            got = {k: v for k, v in acc.items() if v}
            rep.add(f"op {o.name}: preserves unit", got == u,
                    render_vector(_dense(got, m.dim, m.field), m.labels, m.field))
    for k, eq in enumerate(m.theory.eqs):
        lhs, rhs = linearize_equation(m, eq)
        name = f"eq {k}: {format_equation(eq)}"
        witness = None
        if lhs != rhs:
            labels = tensor_labels(m.labels, eq.nvars) if eq.nvars else ["1"]
            for j in range(lhs.matrix.cols):
                a, b = lhs.matrix.column(j), rhs.matrix.column(j)
                if a != b:
                    witness = {
                        "at": labels[j],
                        "lhs": render_vector(a, m.labels, m.field),
                        "rhs": render_vector(b, m.labels, m.field),
                    }
                    break
        rep.add(name, lhs == rhs, witness)
    return rep


class ModelHom:
    """Linear map between carriers claimed to be a T-coalgebra morphism."""

    def __init__(self, source: TCoalgebraModel, target: TCoalgebraModel, matrix: Matrix, name: str = ""):
        if matrix.shape != (target.dim, source.dim):
            raise ShapeError(f"hom matrix must be {target.dim}x{source.dim}, got {matrix.rows}x{matrix.cols}")
        source.field.check(target.field)
        source.field.check(matrix.field)
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name
        self.verified = False

    def __repr__(self):
        return f"ModelHom({self.name or '?'}: {self.source.name} -> {self.target.name})"

    def __eq__(self, other):
        if not isinstance(other, ModelHom):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def compose(self, first: "ModelHom", name: str = "") -> "ModelHom":
        """``self ∘ first``."""
        return ModelHom(first.source, self.target, self.matrix @ first.matrix, name)

    def is_injective(self) -> bool:
        return self.matrix.is_injective()

    def is_surjective(self) -> bool:
        return self.matrix.is_surjective()


def identity_hom(a: TCoalgebraModel) -> ModelHom:
    return ModelHom(a, a, a.carrier.identity(), f"id_{a.name}")


def _same_theory(a: TheoryPresentation, b: TheoryPresentation) -> bool:
    return a.ops == b.ops and a.name == b.name


def check_hom(h: ModelHom) -> Report:
    """Δ-, ε- and op-compatibility of a hom, each with a witness; sets ``h.verified``."""
    a, b = h.source, h.target
    if not _same_theory(a.theory, b.theory):
        raise TheoryError(f"hom between models of different theories ({a.theory.name}, {b.theory.name})")
    rep = Report(f"hom {h.name or '?'}: {a.name} -> {b.name}")
    rep.dims.update({"source": a.dim, "target": b.dim, "rank": h.matrix.rank()})
    f = h.matrix
    field = a.field
    left = b.carrier.delta @ f
    # (h⊗h)∘Δ_A column by column
    hcols = [_sparse(col) for col in f.columns()]
    wit = None
    for j in range(a.dim):
        acc: dict = {}
        red = field.reduce
        for p, q, x in a.carrier.delta_terms[j]:
            for key, y in sparse_tensor([hcols[p], hcols[q]], b.dim, field).items():
                acc[key] = red(acc.get(key, 0) + x * y)
        if _sparse(left.column(j)) != {k: v for k, v in acc.items() if v}:
            wit = a.labels[j]
            break
    rep.add("comultiplication", wit is None, wit)
    el = b.carrier.epsilon @ f
    wit = next((a.labels[j] for j in range(a.dim) if el[0, j] != a.carrier.eps[j]), None)
    rep.add("counit", wit is None, wit)
    for o in a.theory.ops:
        wit = None
        labels = tensor_labels(a.labels, o.arity) if o.arity else ["1"]
        fa = a._op_columns[o.name]
        for idx, J in enumerate(itertools.product(range(a.dim), repeat=o.arity)):
            lhs = apply_op(b, o.name, [hcols[j] for j in J]) if o.arity else b.op(o.name).column(0)
            rhs = f.apply(_dense(fa[idx], a.dim, field))
            if lhs != rhs:
                wit = labels[idx]
                break
        rep.add(f"op {o.name}", wit is None, wit)
    h.verified = rep.ok
    return rep


def zero_morphism(a: TCoalgebraModel, b: TCoalgebraModel) -> ModelHom:
    """u_B ∘ ε_A."""
    if a.theory.omega_group is None:
        raise NotPointedError(f"theory {a.theory.name} is not pointed")
    u = Matrix.from_columns(b.field, [b.unit()], b.dim)
    h = ModelHom(a, b, u @ a.carrier.epsilon, f"0_{a.name}{b.name}")
    h.verified = True
    return h


def tensor_hom_power(f: Matrix, n: int) -> Matrix:
    out = f
    for _ in range(n - 1):
        out = tensor(out, f)
    return out


def evaluate_on_vectors(m: TCoalgebraModel, t: Term, vectors: list) -> tuple:
    """Evaluate a term with grouplike inputs (no coproduct needed)."""
    if isinstance(t, Var):
        return tuple(vectors[t.index])
    if not t.args:
        return m.op(t.op).column(0)
    return apply_op(m, t.op, [evaluate_on_vectors(m, a, vectors) for a in t.args])


def tensor_of(vectors, field) -> tuple:
    out = (field.one,)
    for v in vectors:
        out = tensor_vectors(out, v, field)
    return out


__all__ = [
    "TCoalgebraModel", "ModelHom", "linearize", "linearize_equation", "check_model", "check_hom",
    "zero_morphism", "identity_hom", "apply_op", "evaluate_on_vectors", "App", "Var",
]
