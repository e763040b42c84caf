"""Reflections along surjective theory morphisms, the linearized radicalator and closure under quotients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import PreconditionError, TheoryError
from .exactlin import Subspace
from .ideals import Quotient, factor_through, is_coideal, quotient_model, saturate_t_ideal
from .model import ModelHom, TCoalgebraModel, _sparse, apply_op, check_hom, check_model, linearize
from .report import Report
from .theory import App, Equation, TheoryMorphism, Var, check_morphism, rename_ops


def restrict(m: TCoalgebraModel, r: TheoryMorphism, name: str | None = None) -> TCoalgebraModel:
    """A T-model seen as an S-model: op a acts as r(a)."""
    if m.theory.ops != r.target.ops:
        raise TheoryError(f"model is not over {r.target.name}")
    ops = {a: m.op(b) for a, b in r.mapping.items()}
    return TCoalgebraModel(r.source, m.carrier, ops, m.name if name is None else name)


def view_along(m: TCoalgebraModel, r: TheoryMorphism, name: str | None = None) -> TCoalgebraModel:
    """An S-model whose identified ops agree, rebranded over T."""
    if m.theory.ops != r.source.ops:
        raise TheoryError(f"model is not over {r.source.name}")
    for a, b in check_morphism(r).identified:
        if m.op(a) != m.op(b):
            raise PreconditionError(f"ops {a} and {b} are identified by the morphism but differ", [a, b])
    ops = {o.name: m.op(r.preimage(o.name)) for o in r.target.ops}
    return TCoalgebraModel(r.target, m.carrier, ops, m.name if name is None else name)


def _same_signature(m: TCoalgebraModel, t) -> bool:
    return m.theory.ops == t.ops and m.theory.name == t.name


@dataclass
class ReflectionResult:
    reflected: TCoalgebraModel
    unit: ModelHom
    generating_coideal: Subspace
    quotient: Quotient
    morphism: TheoryMorphism
    report: Report


def _extra_relations(r: TheoryMorphism) -> list[Equation]:
    """Target axioms missing from the renamed source, plus f = g for identified ops, over source op names."""
    rep = check_morphism(r)
    back = {o.name: r.preimage(o.name) for o in r.target.ops}
    out = [Equation(e.nvars, rename_ops(e.lhs, back), rename_ops(e.rhs, back)) for e in rep.extra]
    for a, b in rep.identified:
        n = r.source.arity(a)
        xs = tuple(Var(i) for i in range(n))
        out.append(Equation(n, App(a, xs), App(b, xs)))
    return out


def generating_coideal(m: TCoalgebraModel, r: TheoryMorphism) -> Subspace:
    """Span of the columns of l(t) − l(s) over the extra relations."""
    vecs = []
    for eq in _extra_relations(r):
        diff = linearize(m, eq.lhs, eq.nvars).matrix - linearize(m, eq.rhs, eq.nvars).matrix
        vecs.extend(diff.columns())
    return Subspace.span(m.field, m.dim, vecs)


def reflect(m: TCoalgebraModel, r: TheoryMorphism, name: str | None = None) -> ReflectionResult:
    """Free T-model on an S-model, as the quotient by the saturated generating coideal."""
    if not _same_signature(m, r.source):
        raise TheoryError(f"model is over {m.theory.name}, morphism starts at {r.source.name}")
    if not r.surjective:
        raise PreconditionError("reflection needs a morphism surjective on operations")
    gen = generating_coideal(m, r)
    ok, wit = is_coideal(m, gen)
    if not ok:
        raise PreconditionError("generating subspace is not a coideal", wit)
    quot = quotient_model(m, saturate_t_ideal(m, gen, check=False))
    quot.generators = gen
    reflected = view_along(quot.model, r, f"{m.name}_{r.target.name}" if name is None else name)
    rep = Report(f"reflect {m.name} along {r.source.name} -> {r.target.name}")
    rep.dims.update({"source": m.dim, "generating": gen.dim, "ideal": quot.ideal.dim, "reflected": reflected.dim})
    rep.extend(check_model(reflected), "reflected: ")
    rep.add("unit surjective", quot.projection.is_surjective())
    rep.add("unit is a hom", quot.projection.verified)
    return ReflectionResult(reflected, quot.projection, gen, quot, r, rep)


def radicalator_coideal(m: TCoalgebraModel) -> Subspace:
    """span{a·b − b·a, (a·b)•c − (a•c1)·S(c2)·(b•c3)} evaluated directly on basis tensors.

    Here · is the additive group law ``add`` (antipode ``neg``) and • is ``mul``.
    """
    if m.theory.name != "SKB" or not {"add", "neg", "mul"} <= set(m.theory.op_names):
        raise TheoryError(f"radicalator needs a model over SKB, got {m.theory.name}")
    field = m.field
    one = field.one
    d = m.dim
    e = [{i: one} for i in range(d)]
    vecs = []
    for i, j in itertools.product(range(d), repeat=2):
        ab = apply_op(m, "add", [e[i], e[j]])
        ba = apply_op(m, "add", [e[j], e[i]])
        vecs.append(tuple(field.reduce(x - y) for x, y in zip(ab, ba)))
    red = field.reduce
    for i, j, k in itertools.product(range(d), repeat=3):
        s1 = apply_op(m, "mul", [_sparse(apply_op(m, "add", [e[i], e[j]])), e[k]])
        s2 = [field.zero] * d
        for (c1, c2, c3), x in m.carrier.iterated_terms(k, 3).items():
            left = apply_op(m, "add", [_sparse(apply_op(m, "mul", [e[i], e[c1]])),
                                       _sparse(apply_op(m, "neg", [e[c2]]))])
            v = apply_op(m, "add", [_sparse(left), _sparse(apply_op(m, "mul", [e[j], e[c3]]))])
            s2 = [red(a + x * b) for a, b in zip(s2, v)]
        vecs.append(tuple(red(a - b) for a, b in zip(s1, s2)))
    out = Subspace.span(field, d, vecs)
    ok, wit = is_coideal(m, out)
    if not ok:
        raise PreconditionError("radicalator span is not a coideal", wit)
    return out


def reflect_factor(res: ReflectionResult, h: ModelHom, name: str = "") -> ModelHom:
    """The unique map out of the reflection through which h factors."""
    r = res.morphism
    tgt = view_along(h.target, r)
    rep = check_model(tgt)
    if not rep.ok:
        raise PreconditionError(f"target does not satisfy {r.target.name}", rep.failures()[0].as_dict())
    hbar = factor_through(res.quotient, h)
    out = ModelHom(res.reflected, tgt, hbar.matrix, name or f"{h.name}_bar")
    check_hom(out)
    return out


def birkhoff_closure_check(r: TheoryMorphism, q: ModelHom) -> Report:
    """A surjective image of a model satisfying T satisfies T."""
    rep = Report(f"birkhoff closure {r.source.name} -> {r.target.name}")
    over_target = _same_signature(q.source, r.target)
    src = q.source if over_target else view_along(q.source, r)
    pre = check_model(src)
    if not pre.ok:
        raise PreconditionError(f"source does not satisfy {r.target.name}", pre.failures()[0].as_dict())
    if not q.is_surjective():
        raise PreconditionError("q is not surjective")
    rep.add("q is a hom", check_hom(q).ok)
    tgt = q.target if over_target else view_along(q.target, r)
    rep.dims.update({"source": q.source.dim, "target": q.target.dim})
    rep.extend(check_model(tgt), "target: ")
    return rep


__all__ = [
    "ReflectionResult", "reflect", "radicalator_coideal", "reflect_factor", "birkhoff_closure_check",
    "restrict", "view_along", "generating_coideal",
]
