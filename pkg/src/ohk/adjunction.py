"""Finite set-models, the lift K[-], grouplike models and the hom-set bijection."""

from __future__ import annotations

import itertools
from typing import Sequence

from .coalgebra import Coalgebra, grouplikes
from .errors import PreconditionError, ShapeError, TheoryError
from .exactlin import QQ, Field, Matrix, Subspace, kernel_basis, tensor, unit_vector
from .model import ModelHom, TCoalgebraModel, apply_op, check_hom
from .report import Report
from .theory import App, Term, TheoryPresentation, Var, format_equation


class SetModel:
    """A finite algebra: element labels plus a total table per op."""

    def __init__(self, theory: TheoryPresentation, elements: Sequence[str], tables: dict, name: str = ""):
        elements = tuple(elements)
        if not elements:
            raise ShapeError("a set-model needs at least one element")
        if len(set(elements)) != len(elements):
            raise ShapeError("element labels must be distinct")
        known = set(elements)
        norm = {}
        for o in theory.ops:
            if o.name not in tables:
                raise ShapeError(f"no table for op {o.name!r}")
            table = {}
            for args, val in tables[o.name].items():
                args = tuple(args)
                if len(args) != o.arity:
                    raise ShapeError(f"table {o.name}: entry {args} has arity {len(args)}, expected {o.arity}")
                if val not in known or not set(args) <= known:
                    raise ShapeError(f"table {o.name}: entry {args} -> {val} uses unknown elements")
                table[args] = val
            missing = [a for a in itertools.product(elements, repeat=o.arity) if a not in table]
            if missing:
                raise ShapeError(f"table {o.name} is not total; missing {missing[0]}")
            norm[o.name] = table
        extra = set(tables) - set(norm)
        if extra:
            raise ShapeError(f"tables for ops not in theory {theory.name}: {sorted(extra)}")
        self.theory = theory
        self.elements = elements
        self.tables = norm
        self.name = name

    @property
    def size(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, SetModel):
            return NotImplemented
        return (self.theory.name, self.elements, self.tables) == (other.theory.name, other.elements, other.tables)

    def __hash__(self):
        return hash((self.theory.name, self.elements))

    def __repr__(self):
        return f"SetModel({self.name or '?'} over {self.theory.name}, |X|={self.size})"

    def apply(self, op: str, *args: str) -> str:
        return self.tables[op][tuple(args)]

    def evaluate(self, t: Term, env: Sequence[str]) -> str:
        if isinstance(t, Var):
            return env[t.index]
        return self.tables[t.op][tuple(self.evaluate(a, env) for a in t.args)]

    def relabel(self, mapping: dict, name: str | None = None) -> "SetModel":
        tables = {op: {tuple(mapping[a] for a in k): mapping[v] for k, v in tab.items()} for op, tab in self.tables.items()}
        return SetModel(self.theory, [mapping[e] for e in self.elements], tables, self.name if name is None else name)


def check_set_model(s: SetModel) -> Report:
    """Every equation on every assignment; the witness is the first failing tuple."""
    rep = Report(f"setmodel {s.name or '?'} over {s.theory.name}")
    rep.dims["size"] = s.size
    for k, eq in enumerate(s.theory.eqs):
        wit = None
        for env in itertools.product(s.elements, repeat=eq.nvars):
            if s.evaluate(eq.lhs, env) != s.evaluate(eq.rhs, env):
                wit = list(env)
                break
        rep.add(f"eq {k}: {format_equation(eq)}", wit is None, wit)
    return rep


def lift(s: SetModel, field: Field = QQ, name: str | None = None) -> TCoalgebraModel:
    """K[X] with every op extended linearly from its table."""
    carrier = Coalgebra.grouplike_basis(field, s.elements)
    d = s.size
    pos = {e: i for i, e in enumerate(s.elements)}
    ops = {}
    for o in s.theory.ops:
        cols = [unit_vector(field, d, pos[s.tables[o.name][args]])
                for args in itertools.product(s.elements, repeat=o.arity)]
        ops[o.name] = Matrix.from_columns(field, cols, d)
    return TCoalgebraModel(s.theory, carrier, ops, s.name if name is None else name)


def grouplike_labels(m: TCoalgebraModel, gls: list) -> list[str]:
    """Basis label for a basis grouplike, ``g<k>`` otherwise."""
    out = []
    for k, v in enumerate(gls):
        nz = [i for i, x in enumerate(v) if x]
        out.append(m.labels[nz[0]] if len(nz) == 1 and v[nz[0]] == m.field.one else f"g{k}")
    return out


def grouplike_model(m: TCoalgebraModel, name: str | None = None) -> SetModel:
    """G(C): grouplikes with ops restricted to them."""
    gls = grouplikes(m.carrier)
    labels = grouplike_labels(m, gls)
    index = {v: i for i, v in enumerate(gls)}
    tables = {}
    for o in m.theory.ops:
        tab = {}
        for combo in itertools.product(range(len(gls)), repeat=o.arity):
            v = apply_op(m, o.name, [gls[i] for i in combo]) if o.arity else m.op(o.name).column(0)
            if v not in index:
                raise PreconditionError(f"op {o.name} leaves the grouplikes", [labels[i] for i in combo])
            tab[tuple(labels[i] for i in combo)] = labels[index[v]]
        tables[o.name] = tab
    return SetModel(m.theory, labels, tables, f"G({m.name})" if name is None else name)


def _entries_by_last(x: SetModel) -> list[list]:
    """Table entries grouped by the latest element position they mention."""
    pos = {e: i for i, e in enumerate(x.elements)}
    buckets: list[list] = [[] for _ in x.elements]
    for op, tab in x.tables.items():
        for args, val in tab.items():
            last = max([pos[a] for a in args] + [pos[val]])
            buckets[last].append((op, args, val))
    return buckets


def _enumerate_maps(x: SetModel, targets: list, compatible) -> list[tuple]:
    """All assignments X -> targets passing ``compatible`` on every table entry."""
    buckets = _entries_by_last(x)
    pos = {e: i for i, e in enumerate(x.elements)}
    out = []
    assign: list = []

    def rec(k):
        if k == x.size:
            out.append(tuple(assign))
            return
        for t in range(len(targets)):
            assign.append(t)
            if all(compatible(op, [assign[pos[a]] for a in args], assign[pos[val]]) for op, args, val in buckets[k]):
                rec(k + 1)
            assign.pop()

    rec(0)
    return out


def hom_bijection_check(x: SetModel, c: TCoalgebraModel) -> Report:
    """Hom(K[X], C) against Hom(X, G(C)), both enumerated and compared."""
    if x.theory.ops != c.theory.ops:
        raise TheoryError("set-model and coalgebraic model have different signatures")
    rep = Report(f"hom bijection {x.name or '?'} -> {c.name or '?'}")
    g = grouplike_model(c)
    gls = grouplikes(c.carrier)

    def set_ok(op, args, val):
        return g.tables[op][tuple(g.elements[a] for a in args)] == g.elements[val]

    def lin_ok(op, args, val):
        v = apply_op(c, op, [gls[a] for a in args]) if args else c.op(op).column(0)
        return v == gls[val]

    set_homs = _enumerate_maps(x, g.elements, set_ok)
    lin_homs = _enumerate_maps(x, gls, lin_ok)
    rep.dims.update({"set_homs": len(set_homs), "coalgebra_homs": len(lin_homs), "grouplikes": len(gls)})
    rep.add("counts agree", len(set_homs) == len(lin_homs), [len(set_homs), len(lin_homs)])
    rep.add("same maps", set(set_homs) == set(lin_homs))
    src = lift(x, c.field)
    bad = None
    for h in set_homs:
        mat = Matrix.from_columns(c.field, [gls[t] for t in h], c.dim)
        if not check_hom(ModelHom(src, c, mat)).ok:
            bad = [g.elements[t] for t in h]
            break
    rep.add("every lifted map is a hom", bad is None, bad)
    return rep


def equalizer_preservation_check(f: Sequence[int], g: Sequence[int], n_target: int, field: Field = QQ) -> Report:
    """K^E against {c | c1 (x) Ff c2 = c1 (x) Fg c2} for maps f, g: I -> J."""
    if len(f) != len(g):
        raise ShapeError("f and g need the same domain")
    n = len(f)
    if any(not 0 <= v < n_target for v in list(f) + list(g)):
        raise ShapeError("function values out of range")
    rep = Report("equalizer preservation")
    ki = Coalgebra.grouplike_basis(field, [str(i) for i in range(n)])

    def push(h):
        return Matrix.from_columns(field, [unit_vector(field, n_target, h[i]) for i in range(n)], n_target)

    ident = ki.identity()
    diff = tensor(ident, push(f)) @ ki.delta - tensor(ident, push(g)) @ ki.delta
    lin = kernel_basis(diff)
    e = [i for i in range(n) if f[i] == g[i]]
    expect = Subspace.span(field, n, [unit_vector(field, n, i) for i in e])
    rep.dims.update({"equalizer": len(e), "linear": lin.dim})
    rep.add("K^E = Eq(Ff, Fg)", lin == expect, {"E": e, "linear_dim": lin.dim})
    return rep


__all__ = [
    "SetModel", "check_set_model", "lift", "grouplike_model", "grouplike_labels",
    "hom_bijection_check", "equalizer_preservation_check", "App",
]
