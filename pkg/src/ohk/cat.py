"""Hopf kernels, factorization, normality, protomodularity terms and split-short-five reconstruction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coalgebra import Coalgebra, product_delta, var_projection_matrix
from .errors import DimensionLimitError, NotPointedError, PreconditionError
from .exactlin import MAX_TENSOR_DIM, Matrix, Subspace, kernel_basis, tensor
from .ideals import Quotient, factor_through, quotient_model, saturate_t_ideal
from .model import ModelHom, TCoalgebraModel, _sparse, apply_op, check_hom, linearize
from .report import Report, render_vector, tensor_labels
from .theory import App, Term, TheoryPresentation, Var, substitute


def _pointed(m: TCoalgebraModel):
    if m.theory.omega_group is None:
        raise NotPointedError(f"theory {m.theory.name} is not pointed")


def _verified(h: ModelHom):
    if not h.verified:
        rep = check_hom(h)
        if not rep.ok:
            raise PreconditionError(f"{h.name or 'hom'} is not a T-coalgebra morphism", rep.failures()[0].as_dict())


# ---------------------------------------------------------------------------
# sub-T-coalgebras


def _in_tensor_square(m: TCoalgebraModel, s: Subspace, v) -> bool:
    """Is Δ(v) in S⊗S (= S⊗A ∩ A⊗S)."""
    q = s.quotient_map()
    d, k = m.dim, q.rows
    field = m.field
    red = field.reduce
    qcols = [_sparse(c) for c in q.columns()]
    left: dict = {}
    right: dict = {}
    for i, x in enumerate(v):
        if not x:
            continue
        for a, b, y in m.carrier.delta_terms[i]:
            for r, z in qcols[a].items():
                key = r * d + b
                left[key] = red(left.get(key, 0) + x * y * z)
            for r, z in qcols[b].items():
                key = a * k + r
                right[key] = red(right.get(key, 0) + x * y * z)
    return not any(left.values()) and not any(right.values())


def sub_model_report(m: TCoalgebraModel, s: Subspace, title: str = "sub-T-coalgebra") -> Report:
    """Closure of ``s`` under Δ and every op, and containment of the unit."""
    _pointed(m)
    rep = Report(title)
    rep.dims["dim"] = s.dim
    rep.add("contains unit", s.contains_vector(m.unit()))
    bad = next((v for v in s.basis if not _in_tensor_square(m, s, v)), None)
    rep.add("closed under comultiplication", bad is None,
            None if bad is None else render_vector(bad, m.labels, m.field))
    vecs = [_sparse(v) for v in s.basis]
    for o in m.theory.ops:
        if o.arity == 0:
            ok = s.contains_vector(m.op(o.name).column(0))
            rep.add(f"closed under {o.name}", ok)
            continue
        wit = None
        for combo in itertools.product(range(len(vecs)), repeat=o.arity):
            if not s.contains_vector(apply_op(m, o.name, [vecs[i] for i in combo])):
                wit = [render_vector(s.basis.row(i), m.labels, m.field) for i in combo]
                break
        rep.add(f"closed under {o.name}", wit is None, wit)
    return rep


def sub_model(m: TCoalgebraModel, s: Subspace, name: str | None = None) -> tuple[TCoalgebraModel, ModelHom]:
    """A sub-T-coalgebra as a model in its RREF basis (pivot labels), with the inclusion."""
    rep = sub_model_report(m, s)
    if not rep.ok:
        raise PreconditionError("not a sub-T-coalgebra", rep.failures()[0].as_dict())
    j = s.inclusion()
    k = s.dim
    labels = [m.labels[p] for p in s.pivots]
    delta = tensor(j, j).solve(m.carrier.delta @ j)
    carrier = Coalgebra(m.field, labels, delta, m.carrier.epsilon @ j)
    cols = [_sparse(c) for c in j.columns()]
    ops = {}
    for o in m.theory.ops:
        if o.arity == 0:
            images = [m.op(o.name).column(0)]
        else:
            images = [apply_op(m, o.name, [cols[i] for i in combo])
                      for combo in itertools.product(range(k), repeat=o.arity)]
        ops[o.name] = j.solve(Matrix.from_columns(m.field, images, m.dim))
    sub = TCoalgebraModel(m.theory, carrier, ops, f"{m.name}_sub" if name is None else name)
    inc = ModelHom(sub, m, j, f"inc_{sub.name}")
    check_hom(inc)
    return sub, inc


def augmentation(m: TCoalgebraModel, s: Subspace) -> Subspace:
    """S⁺ = S ∩ ker ε."""
    return s.intersect(kernel_basis(m.carrier.epsilon))


# ---------------------------------------------------------------------------
# kernels


@dataclass
class KernelData:
    hopf_kernel: Subspace
    linear_kernel: Subspace
    augmentation_part: Subspace
    certificate: Report


def hopf_kernel(f: ModelHom) -> KernelData:
    """Hker f = {a | f(a1)⊗a2 = 1⊗a}, the linear kernel and Hker⁺, with a closure certificate."""
    a, b = f.source, f.target
    _pointed(a)
    _verified(f)
    da, db = a.dim, b.dim
    if da * db > MAX_TENSOR_DIM:
        raise DimensionLimitError(f"B⊗A has dimension {da * db} > {MAX_TENSOR_DIM}")
    field = a.field
    red = field.reduce
    u = _sparse(b.unit())
    fcols = [_sparse(c) for c in f.matrix.columns()]
    cols = []
    for j in range(da):
        acc: dict = {}
        for p, q, x in a.carrier.delta_terms[j]:
            for r, y in fcols[p].items():
                key = r * da + q
                acc[key] = red(acc.get(key, 0) + x * y)
        for r, y in u.items():
            key = r * da + j
            acc[key] = red(acc.get(key, 0) - y)
        cols.append(tuple(acc.get(t, field.zero) for t in range(db * da)))
    hk = kernel_basis(Matrix.from_columns(field, cols, db * da))
    lk = kernel_basis(f.matrix)
    aug = augmentation(a, hk)
    cert = sub_model_report(a, hk, "hopf kernel is a sub-T-coalgebra")
    cert.add("augmentation part = Hker ∩ ker ε", aug == hk.intersect(kernel_basis(a.carrier.epsilon)))
    return KernelData(hk, lk, aug, cert)


def newman_check(f: ModelHom) -> Report:
    """⟨Hker f⁺⟩_T = ker f as exact subspaces."""
    kd = hopf_kernel(f)
    sat = saturate_t_ideal(f.source, kd.augmentation_part)
    rep = Report(f"newman {f.name or '?'}")
    rep.dims.update({"hopf": kd.hopf_kernel.dim, "linear": kd.linear_kernel.dim,
                     "augmentation": kd.augmentation_part.dim, "saturated": sat.dim})
    rep.extend(kd.certificate, "hker: ")
    rep.add("saturate(Hker+) = ker f", sat == kd.linear_kernel,
            {"saturated": sat.dim, "linear": kd.linear_kernel.dim})
    return rep


@dataclass
class Factorization:
    epi: ModelHom
    mono: ModelHom
    middle: TCoalgebraModel
    quotient: Quotient
    report: Report


def factorize(f: ModelHom) -> Factorization:
    """f = m∘e through A/⟨Hker f⁺⟩_T."""
    kd = hopf_kernel(f)
    ideal = saturate_t_ideal(f.source, kd.augmentation_part)
    quot = quotient_model(f.source, ideal, f"{f.source.name}_im")
    e = quot.projection
    m = factor_through(quot, f, f"m_{f.name}")
    rep = Report(f"factorize {f.name or '?'}")
    rep.dims.update({"source": f.source.dim, "middle": quot.model.dim, "target": f.target.dim})
    rep.add("m∘e = f", m.matrix @ e.matrix == f.matrix)
    rep.add("e surjective", e.is_surjective())
    rep.add("m injective", m.is_injective())
    rep.add("e is a hom", e.verified)
    rep.add("m is a hom", m.verified)
    return Factorization(e, m, quot.model, quot, rep)


# ---------------------------------------------------------------------------
# normality


def product_span(m: TCoalgebraModel, s: Subspace) -> Subspace:
    """A·S = span{mul(e_a, x)} for the designated group multiplication."""
    mul = m.theory.omega_group.mul
    one = m.field.one
    vecs = [apply_op(m, mul, [{a: one}, _sparse(x)]) for x in s.basis for a in range(m.dim)]
    return Subspace.span(m.field, m.dim, vecs)


def is_normal(a: TCoalgebraModel, b: Subspace) -> tuple[bool, Report]:
    """⟨B⁺⟩_T = A·B⁺ for a sub-T-coalgebra B; on success B is the Hopf kernel of A → A/A·B⁺."""
    sub = sub_model_report(a, b)
    if not sub.ok:
        raise PreconditionError("not a sub-T-coalgebra", sub.failures()[0].as_dict())
    bplus = augmentation(a, b)
    lhs = saturate_t_ideal(a, bplus)
    rhs = product_span(a, bplus)
    rep = Report("normality")
    rep.dims.update({"sub": b.dim, "saturated": lhs.dim, "product": rhs.dim})
    ok = rep.add("⟨B+⟩_T = A·B+", lhs == rhs, {"saturated": lhs.dim, "product": rhs.dim})
    if ok:
        quot = quotient_model(a, lhs)
        kd = hopf_kernel(quot.projection)
        rep.add("B = Hker of the quotient projection", kd.hopf_kernel == b)
    return rep.ok, rep


def image_of_kernel_check(a: TCoalgebraModel, d: Subspace, rho: ModelHom) -> Report:
    """The image of a normal sub-T-coalgebra under a surjective hom is normal."""
    if rho.source != a:
        raise PreconditionError("rho does not start at A")
    _verified(rho)
    if not rho.is_surjective():
        raise PreconditionError("rho is not surjective")
    ok, _ = is_normal(a, d)
    if not ok:
        raise PreconditionError("d is not normal in A")
    img = d.image(rho.matrix)
    ok2, sub = is_normal(rho.target, img)
    rep = Report("image of kernel")
    rep.dims.update({"d": d.dim, "image": img.dim})
    rep.extend(sub, "image: ")
    rep.add("image is normal", ok2)
    return rep


# ---------------------------------------------------------------------------
# protomodularity


@dataclass(frozen=True)
class ProtoTerms:
    n: int
    alpha_terms: tuple[Term, ...]
    beta_term: Term


def proto_terms_for(t: TheoryPresentation) -> ProtoTerms:
    """n = 1: α(x, y) = x·y⁻¹ and β(a, y) = a·y in the designated group."""
    g = t.omega_group
    if g is None:
        raise NotPointedError(f"theory {t.name} has no designated group")
    alpha = App(g.mul, (Var(0), App(g.inv, (Var(1),))))
    beta = App(g.mul, (Var(0), Var(1)))
    return ProtoTerms(1, (alpha,), beta)


def _beta_composite(pt: ProtoTerms) -> Term:
    """β(α¹(x,y), …, αⁿ(x,y), y) in two variables."""
    return substitute(pt.beta_term, list(pt.alpha_terms) + [Var(1)])


def _first_bad_column(lhs: Matrix, rhs: Matrix, labels) -> str | None:
    for j in range(lhs.cols):
        if lhs.column(j) != rhs.column(j):
            return labels[j]
    return None


def verify_proto_terms(m: TCoalgebraModel, pt: ProtoTerms) -> Report:
    """(alphai) αⁱ∘Δ = u∘ε and (beta) β∘(α¹⊗…⊗αⁿ⊗(ε⊗id))∘Δ⁽ⁿ⁾_{H⊗H} = id⊗ε."""
    _pointed(m)
    rep = Report(f"protomodularity terms on {m.name or '?'}")
    c = m.carrier
    zero = Matrix.from_columns(m.field, [m.unit()], m.dim) @ c.epsilon
    for i, alpha in enumerate(pt.alpha_terms):
        la = linearize(m, alpha, 2).matrix
        lhs = la @ c.delta
        rep.add(f"alpha{i + 1}: α∘Δ = u∘ε", lhs == zero, _first_bad_column(lhs, zero, c.labels))
    target = var_projection_matrix(c, 2, 0)
    labels2 = tensor_labels(c.labels, 2)
    # explicit composite over the product coalgebra H⊗H
    if pt.n == 1 and m.dim ** 4 <= MAX_TENSOR_DIM:
        la = linearize(m, pt.alpha_terms[0], 2).matrix
        lb = linearize(m, pt.beta_term, 2).matrix
        inner = tensor(la, var_projection_matrix(c, 2, 1))
        lhs = lb @ inner @ product_delta(c, 2, 2)
        rep.add("beta: explicit composite = id⊗ε", lhs == target, _first_bad_column(lhs, target, labels2))
    lhs = linearize(m, _beta_composite(pt), 2).matrix
    rep.add("beta: linearized composite = id⊗ε", lhs == target, _first_bad_column(lhs, target, labels2))
    return rep


@dataclass
class SplitDiagram:
    """Two split extensions A -k-> B -p-> C (section s) joined by f, g, h."""
    A: TCoalgebraModel
    B: TCoalgebraModel
    C: TCoalgebraModel
    A2: TCoalgebraModel
    B2: TCoalgebraModel
    C2: TCoalgebraModel
    k: ModelHom
    p: ModelHom
    s: ModelHom
    k2: ModelHom
    p2: ModelHom
    s2: ModelHom
    f: ModelHom
    g: ModelHom
    h: ModelHom
    name: str = ""

    def homs(self) -> dict:
        return {n: getattr(self, n) for n in ("k", "p", "s", "k2", "p2", "s2", "f", "g", "h")}

    def models(self) -> dict:
        return {n: getattr(self, n) for n in ("A", "B", "C", "A2", "B2", "C2")}


def check_diagram(d: SplitDiagram) -> Report:
    rep = Report(f"split diagram {d.name or '?'}")
    ends = {"k": ("A", "B"), "p": ("B", "C"), "s": ("C", "B"), "k2": ("A2", "B2"), "p2": ("B2", "C2"),
            "s2": ("C2", "B2"), "f": ("A", "A2"), "g": ("B", "B2"), "h": ("C", "C2")}
    models = d.models()
    for n, h in d.homs().items():
        src, tgt = ends[n]
        if h.source != models[src] or h.target != models[tgt]:
            raise PreconditionError(f"{n} must go {src} -> {tgt}")
        rep.add(f"{n} is a hom", check_hom(h).ok)
    for k, p, tag in ((d.k, d.p, ""), (d.k2, d.p2, "'")):
        kd = hopf_kernel(p)
        rep.add(f"k{tag} injective", k.is_injective())
        rep.add(f"k{tag} is the kernel of p{tag}", Subspace.column_space(k.matrix) == kd.hopf_kernel)
    rep.add("p∘s = id", d.p.matrix @ d.s.matrix == d.C.carrier.identity())
    rep.add("p'∘s' = id", d.p2.matrix @ d.s2.matrix == d.C2.carrier.identity())
    rep.add("g∘k = k'∘f", d.g.matrix @ d.k.matrix == d.k2.matrix @ d.f.matrix)
    rep.add("p'∘g = h∘p", d.p2.matrix @ d.g.matrix == d.h.matrix @ d.p.matrix)
    rep.add("g∘s = s'∘h", d.g.matrix @ d.s.matrix == d.s2.matrix @ d.h.matrix)
    rep.add("f bijective", d.f.is_injective() and d.f.is_surjective())
    rep.add("h bijective", d.h.is_injective() and d.h.is_surjective())
    return rep


def ssfl_reconstruct(d: SplitDiagram, pt: ProtoTerms) -> tuple[ModelHom, Report]:
    """Build g′ = β_B∘(k f⁻¹ φ̄ ⊗ s h⁻¹ p′)∘Δ_{B′} and certify it inverts g."""
    if pt.n != 1:
        raise PreconditionError("only one alpha term is supported")
    rep = Report(f"ssfl {d.name or '?'}")
    diag = check_diagram(d)
    rep.extend(diag, "diagram: ")
    if not diag.ok:
        raise PreconditionError("diagram invariants fail", diag.failures()[0].as_dict())
    for n, m in d.models().items():
        pr = verify_proto_terms(m, pt)
        rep.add(f"proto terms on {n}", pr.ok)
    try:
        finv = d.f.matrix.inverse()
        hinv = d.h.matrix.inverse()
    except ZeroDivisionError:
        raise PreconditionError("f or h is not invertible") from None
    b, b2 = d.B, d.B2
    psi = d.g.matrix @ d.s.matrix @ hinv @ d.p2.matrix
    alpha = linearize(b2, pt.alpha_terms[0], 2).matrix
    phi = alpha @ tensor(b2.carrier.identity(), psi) @ b2.carrier.delta
    rep.add("p'∘φ = u∘ε", d.p2.matrix @ phi ==
            Matrix.from_columns(b2.field, [d.C2.unit()], d.C2.dim) @ b2.carrier.epsilon)
    phibar = d.k2.matrix.solve(phi)
    if phibar is None:
        raise PreconditionError("φ does not lift through k'")
    rep.add("k'∘φ̄ = φ", d.k2.matrix @ phibar == phi)
    beta = linearize(b, pt.beta_term, 2).matrix
    left = d.k.matrix @ finv @ phibar
    right = d.s.matrix @ hinv @ d.p2.matrix
    gp = beta @ tensor(left, right) @ b2.carrier.delta
    gprime = ModelHom(b2, b, gp, "g'")
    rep.dims.update({"B": b.dim, "B'": b2.dim, "A'": d.A2.dim})
    rep.add("g∘g' = id", d.g.matrix @ gp == b2.carrier.identity())
    rep.add("g'∘g = id", gp @ d.g.matrix == b.carrier.identity())
    rep.add("g' is a hom", check_hom(gprime).ok)
    return gprime, rep
