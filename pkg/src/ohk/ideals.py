"""Coideals, T-ideals, their saturation, quotient models, coequalizers and cokernels."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coalgebra import Coalgebra
from .errors import NotPointedError, PreconditionError, ShapeError
from .exactlin import Matrix, Subspace, kernel_basis
from .model import ModelHom, TCoalgebraModel, _sparse, apply_op, check_hom
from .report import render_vector


@dataclass(frozen=True)
class CoidealWitness:
    subspace: Subspace
    is_coideal: bool
    is_t_ideal: bool
    witness: object = None


def _check_ambient(m: TCoalgebraModel, s: Subspace):
    m.field.check(s.field)
    if s.ambient_dim != m.dim:
        raise ShapeError(f"subspace lives in dimension {s.ambient_dim}, carrier has {m.dim}")


def _qq_delta_vanishes(m: TCoalgebraModel, q: Matrix, v) -> bool:
    """Is (q⊗q)Δ(v) zero, i.e. Δ(v) in I⊗A + A⊗I for I = ker q."""
    field = m.field
    red = field.reduce
    qcols = [_sparse(c) for c in q.columns()]
    k = q.rows
    acc: dict = {}
    for i, x in enumerate(v):
        if not x:
            continue
        for a, b, y in m.carrier.delta_terms[i]:
            for r1, z1 in qcols[a].items():
                for r2, z2 in qcols[b].items():
                    key = r1 * k + r2
                    acc[key] = red(acc.get(key, 0) + x * y * z1 * z2)
    return not any(acc.values())


def is_coideal(m: TCoalgebraModel, s: Subspace) -> tuple[bool, object]:
    """Δ(I) ⊆ I⊗A + A⊗I and ε(I) = 0; the witness is a violating basis vector."""
    _check_ambient(m, s)
    eps = m.carrier.epsilon
    for v in s.basis:
        if eps.apply(v)[0]:
            return False, {"vector": render_vector(v, m.labels, m.field), "fails": "counit"}
    if s.dim == 0:
        return True, None
    q = s.quotient_map()
    for v in s.basis:
        if not _qq_delta_vanishes(m, q, v):
            return False, {"vector": render_vector(v, m.labels, m.field), "fails": "comultiplication"}
    return True, None


def _slot_images(m: TCoalgebraModel, op: str, arity: int, slot: int, v):
    """f(e_J) with slot ``slot`` replaced by v, over all basis tuples J of the other slots."""
    d = m.dim
    basis = [{i: m.field.one} for i in range(d)]
    vs = _sparse(v)
    for rest in itertools.product(range(d), repeat=arity - 1):
        args = [basis[j] for j in rest]
        args.insert(slot, vs)
        yield rest, apply_op(m, op, args)


def is_t_ideal(m: TCoalgebraModel, s: Subspace) -> tuple[bool, object]:
    """Every op maps I in any slot (other slots arbitrary) into I."""
    _check_ambient(m, s)
    for o in m.theory.ops:
        for slot in range(o.arity):
            for v in s.basis:
                for rest, img in _slot_images(m, o.name, o.arity, slot, v):
                    if not s.contains_vector(img):
                        return False, {"op": o.name, "slot": slot,
                                       "vector": render_vector(v, m.labels, m.field),
                                       "others": [m.labels[j] for j in rest]}
    return True, None


def classify(m: TCoalgebraModel, s: Subspace) -> CoidealWitness:
    co, w1 = is_coideal(m, s)
    ti, w2 = is_t_ideal(m, s)
    return CoidealWitness(s, co, ti, w1 if not co else w2)


def saturate_t_ideal(m: TCoalgebraModel, i: Subspace, check: bool = True) -> Subspace:
    """Least T-ideal containing the coideal ``i``, as a linear fixpoint.

    Each new basis direction is pushed through every op in every slot once;
    the span grows by at least one dimension per accepted vector, so the
    loop ends after at most dim(carrier) additions.
    """
    _check_ambient(m, i)
    if check:
        ok, wit = is_coideal(m, i)
        if not ok:
            raise PreconditionError("saturation needs a coideal", wit)
    current = i
    pending = list(i.basis)
    ops = [o for o in m.theory.ops if o.arity > 0]
    while pending:
        v = pending.pop(0)
        for o in ops:
            for slot in range(o.arity):
                for _, img in _slot_images(m, o.name, o.arity, slot, v):
                    r = current.reduce(img)
                    if any(r):
                        current = Subspace.span(m.field, m.dim, current.vectors() + [r])
                        pending.append(r)
    return current


def bib_span(m: TCoalgebraModel, i: Subspace) -> Subspace:
    """span{b·x·b′} over basis vectors b, b′ and x in I, for the group multiplication."""
    g = m.theory.omega_group
    if g is None:
        raise NotPointedError(f"theory {m.theory.name} has no group structure")
    d = m.dim
    one = m.field.one
    vecs = []
    for x in i.basis:
        for b in range(d):
            left = apply_op(m, g.mul, [{b: one}, _sparse(x)])
            for b2 in range(d):
                vecs.append(apply_op(m, g.mul, [_sparse(left), {b2: one}]))
    return Subspace.span(m.field, d, vecs)


@dataclass
class Quotient:
    """A quotient model with its projection, the ideal and a linear section."""
    model: TCoalgebraModel
    projection: ModelHom
    ideal: Subspace
    section: Matrix
    generators: Subspace | None = None


def quotient_model(m: TCoalgebraModel, ideal: Subspace, name: str | None = None) -> Quotient:
    """A/I for a subspace that is both a coideal and a T-ideal.

    Quotient coordinates are the non-pivot coordinates of I's RREF basis and
    keep their labels. The induced structure is q∘(structure)∘section; the
    projection is then verified as a hom, which certifies well-definedness.
    """
    _check_ambient(m, ideal)
    ok, wit = is_coideal(m, ideal)
    if not ok:
        raise PreconditionError("not a coideal", wit)
    ok, wit = is_t_ideal(m, ideal)
    if not ok:
        raise PreconditionError("not a T-ideal", wit)
    q = ideal.quotient_map()
    sec = ideal.section()
    k = q.rows
    field = m.field
    labels = [m.labels[j] for j in ideal.complement_indices()]
    scols = [_sparse(c) for c in sec.columns()]
    qcols = [_sparse(c) for c in q.columns()]
    delta_cols = []
    for j in range(k):
        acc: dict = {}
        red = field.reduce
        for i, x in scols[j].items():
            for a, b, y in m.carrier.delta_terms[i]:
                for r1, z1 in qcols[a].items():
                    for r2, z2 in qcols[b].items():
                        key = r1 * k + r2
                        acc[key] = red(acc.get(key, 0) + x * y * z1 * z2)
        delta_cols.append(tuple(acc.get(t, field.zero) for t in range(k * k)))
    carrier = Coalgebra(field, labels, Matrix.from_columns(field, delta_cols, k * k), m.carrier.epsilon @ sec)
    ops = {}
    for o in m.theory.ops:
        if o.arity == 0:
            ops[o.name] = q @ m.op(o.name)
            continue
        cols = [q.apply(apply_op(m, o.name, [scols[j] for j in J]))
                for J in itertools.product(range(k), repeat=o.arity)]
        ops[o.name] = Matrix.from_columns(field, cols, k)
    qm = TCoalgebraModel(m.theory, carrier, ops, f"{m.name}_q" if name is None else name)
    proj = ModelHom(m, qm, q, f"q_{m.name}")
    rep = check_hom(proj)
    if not rep.ok:
        raise PreconditionError("induced quotient structure is not well defined", rep.failures()[0].as_dict())
    return Quotient(qm, proj, ideal, sec)


def _same_endpoints(f: ModelHom, g: ModelHom):
    if f.source != g.source or f.target != g.target:
        raise PreconditionError("homs do not share source and target")


def coequalizer(f: ModelHom, g: ModelHom, name: str | None = None) -> Quotient:
    """B/⟨I⟩ with I the column space of f − g."""
    _same_endpoints(f, g)
    gen = Subspace.column_space(f.matrix - g.matrix)
    quot = quotient_model(f.target, saturate_t_ideal(f.target, gen), name)
    quot.generators = gen
    return quot


def augmented_image(f: ModelHom) -> Subspace:
    """f[A]⁺ = image(f) ∩ ker ε_B."""
    b = f.target
    img = Subspace.column_space(f.matrix)
    return img.intersect(kernel_basis(b.carrier.epsilon))


def cokernel(f: ModelHom, name: str | None = None) -> Quotient:
    """B/⟨f[A]⁺⟩."""
    if f.target.theory.omega_group is None:
        raise NotPointedError(f"theory {f.target.theory.name} is not pointed")
    gen = augmented_image(f)
    quot = quotient_model(f.target, saturate_t_ideal(f.target, gen), name)
    quot.generators = gen
    return quot


def factor_through(quot: Quotient, h: ModelHom, name: str = "") -> ModelHom:
    """The unique h̄ with h̄∘q = h, for h vanishing on the defining subspace."""
    src = quot.projection.source
    if h.source != src:
        raise PreconditionError("h does not start at the quotiented model")
    kill = quot.generators if quot.generators is not None else quot.ideal
    for space in (kill, quot.ideal):
        for v in space.basis:
            if any(h.matrix.apply(v)):
                raise PreconditionError("h does not vanish on the ideal",
                                        render_vector(v, src.labels, src.field))
    hbar = ModelHom(quot.model, h.target, h.matrix @ quot.section, name or f"{h.name}_bar")
    if hbar.matrix @ quot.projection.matrix != h.matrix:
        raise PreconditionError("factorization does not commute")
    check_hom(hbar)
    return hbar
