"""Builtin fixtures: theories, models, homs and the S3 split diagram."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from .adjunction import SetModel, lift
from .cat import SplitDiagram
from .errors import OhkError
from .exactlin import GF, QQ, Matrix, unit_vector
from .formats import parse_models, print_diagram, print_hom, print_model, print_setmodel
from .groups import cyclic, s3, trivial_brace, z6_brace, z_brace_trivial
from .model import ModelHom, TCoalgebraModel
from .theory import BUILTIN_NAMES, BUILTIN_TEXT, builtin

CORPUS_NAMES = ("paper-table", "models", "s3-ssfl", "full")
ALIASES = {"theories": "paper-table"}


class UnknownCorpusError(OhkError, KeyError):
    code = "unknown_corpus"


def named(s: SetModel, name: str) -> SetModel:
    return SetModel(s.theory, s.elements, s.tables, name)


@lru_cache(maxsize=None)
def corpus_setmodels() -> dict[str, SetModel]:
    out = {"K": named(cyclic(1), "K")}
    for n in range(2, 7):
        out[f"Z{n}"] = cyclic(n)
    out["S3"] = s3()
    skb = builtin("SKB")
    out["trivZ3"] = z_brace_trivial(3, skb)
    out["trivZ6"] = z_brace_trivial(6, skb)
    out["trivS3"] = named(trivial_brace(s3(), skb), "trivS3")
    out["braceZ6"] = z6_brace(skb)
    return out


def primitive_f2() -> TCoalgebraModel:
    """F2[x]/(x²) with x primitive, S(x) = x."""
    f = GF(2)
    src = (
        "model Prim over F2\ntheory Grp\ndim 2\nbasis 1 x\n"
        "delta 1 = 1 (1,1)\ndelta x = 1 (x,1) + 1 (1,x)\nepsilon 1 = 1\n"
        "opmap mul : (1,1) -> 1 1\nopmap mul : (1,x) -> 1 x\nopmap mul : (x,1) -> 1 x\n"
        "opmap one : () -> 1 1\nopmap inv : (1) -> 1 1\nopmap inv : (x) -> 1 x\n"
    )
    return parse_models(src, {"Grp": builtin("Grp")}, f).models["Prim"]


@lru_cache(maxsize=None)
def corpus_models() -> dict[str, TCoalgebraModel]:
    """Every corpus model that should pass check_model."""
    out = {name: lift(s, QQ, name) for name, s in corpus_setmodels().items()}
    out["K_F2"] = lift(corpus_setmodels()["K"], GF(2), "K_F2")
    out["Prim"] = primitive_f2()
    return out


def _with_op(m: TCoalgebraModel, op: str, mat: Matrix, name: str) -> TCoalgebraModel:
    ops = m.op_matrices
    ops[op] = mat
    return TCoalgebraModel(m.theory, m.carrier, ops, name)


@lru_cache(maxsize=None)
def mutated_models() -> dict[str, TCoalgebraModel]:
    """Deliberately broken fixtures; each must fail check_model."""
    z2 = corpus_models()["Z2"]
    z3 = corpus_models()["Z3"]
    bad_s = _with_op(z2, "inv", Matrix(QQ, [[1, 1], [0, 0]]), "Z2badS")
    cols = list(z3.op("mul").columns())
    cols[1 * 3 + 1] = unit_vector(QQ, 3, 0)  # g·g = e
    bad_mul = _with_op(z3, "mul", Matrix.from_columns(QQ, cols, 3), "Z3badmul")
    prim = corpus_models()["Prim"]
    bad_eps = _with_op(prim, "inv", Matrix(GF(2), [[1, 1], [0, 1]]), "PrimbadS")
    return {m.name: m for m in (bad_s, bad_mul, bad_eps)}


def hom_from_map(a: TCoalgebraModel, b: TCoalgebraModel, images: dict, name: str) -> ModelHom:
    cols = [unit_vector(a.field, b.dim, b.carrier.index(images[lab])) for lab in a.labels]
    return ModelHom(a, b, Matrix.from_columns(a.field, cols, b.dim), name)


@lru_cache(maxsize=None)
def corpus_homs() -> dict[str, ModelHom]:
    m = corpus_models()
    homs = [
        hom_from_map(m["Z4"], m["Z2"], {"e": "e", "g": "g", "g2": "e", "g3": "g"}, "z4z2"),
        hom_from_map(m["S3"], m["Z2"], {"e": "e", "r": "e", "r2": "e", "s": "g", "rs": "g", "r2s": "g"}, "sign"),
        hom_from_map(m["Z3"], m["S3"], {"e": "e", "g": "r", "g2": "r2"}, "incZ3"),
        hom_from_map(m["Z6"], m["Z3"], {lab: m["Z3"].labels[k % 3] for k, lab in enumerate(m["Z6"].labels)}, "z6z3"),
        hom_from_map(m["Z6"], m["Z2"], {lab: m["Z2"].labels[k % 2] for k, lab in enumerate(m["Z6"].labels)}, "z6z2"),
        hom_from_map(m["trivZ6"], m["trivZ3"], {str(k): str(k % 3) for k in range(6)}, "triv6to3"),
        hom_from_map(m["S3"], m["S3"], {lab: lab for lab in m["S3"].labels}, "idS3"),
        hom_from_map(m["S3"], m["K"], {lab: "e" for lab in m["S3"].labels}, "S3toK"),
        hom_from_map(m["Z2"], m["S3"], {"e": "e", "g": "s"}, "incZ2"),
    ]
    return {h.name: h for h in homs}


def s3_diagram(conjugate: bool = False) -> SplitDiagram:
    """K[Z3] -> K[S3] -> K[Z2] split by t -> s, over an isomorphic copy.

    With ``conjugate`` the vertical map g is conjugation by r, and the lower
    section is g∘s.
    """
    m = corpus_models()
    z3, s3m, z2 = m["Z3"], m["S3"], m["Z2"]
    A = _rename(z3, "A")
    B = _rename(s3m, "B")
    C = _rename(z2, "C")
    A2, B2, C2 = _rename(z3, "A2"), _rename(s3m, "B2"), _rename(z2, "C2")
    inc = {"e": "e", "g": "r", "g2": "r2"}
    sgn = {"e": "e", "r": "e", "r2": "e", "s": "g", "rs": "g", "r2s": "g"}
    conj = {"e": "e", "r": "r", "r2": "r2", "s": "r2s", "rs": "s", "r2s": "rs"}
    gmap = conj if conjugate else {lab: lab for lab in s3m.labels}
    sec2 = {"e": "e", "g": gmap["s"]}
    homs = dict(
        k=hom_from_map(A, B, inc, "k"), p=hom_from_map(B, C, sgn, "p"), s=hom_from_map(C, B, {"e": "e", "g": "s"}, "s"),
        k2=hom_from_map(A2, B2, inc, "k2"), p2=hom_from_map(B2, C2, sgn, "p2"), s2=hom_from_map(C2, B2, sec2, "s2"),
        f=hom_from_map(A, A2, {lab: lab for lab in z3.labels}, "f"),
        g=hom_from_map(B, B2, gmap, "g"),
        h=hom_from_map(C, C2, {lab: lab for lab in z2.labels}, "h"),
    )
    return SplitDiagram(A, B, C, A2, B2, C2, name="S3conj" if conjugate else "S3split", **homs)


def _rename(m: TCoalgebraModel, name: str) -> TCoalgebraModel:
    return TCoalgebraModel(m.theory, m.carrier, m.op_matrices, name)


def _files(name: str) -> dict[str, str]:
    name = ALIASES.get(name, name)
    if name == "paper-table":
        return {f"{n}.lth": BUILTIN_TEXT[n] for n in BUILTIN_NAMES}
    if name == "models":
        parts = [print_setmodel(s, QQ) for s in corpus_setmodels().values()]
        parts.append(print_setmodel(corpus_setmodels()["K"], GF(2), "K_F2"))
        parts.append(print_model(corpus_models()["Prim"]))
        homs = "".join(print_hom(h) for h in corpus_homs().values())
        bad = "".join(print_model(m) for m in mutated_models().values())
        return {"models.lmod": "\n".join(parts), "homs.lhom": homs, "mutated.lmod": bad}
    if name == "s3-ssfl":
        d = s3_diagram()
        mods = "\n".join(print_model(m) for m in d.models().values())
        homs = "".join(print_hom(h) for h in d.homs().values()) + print_diagram(d)
        return {"s3_ssfl.lmod": mods, "s3_ssfl.lhom": homs}
    if name == "full":
        out = {}
        for n in ("paper-table", "models", "s3-ssfl"):
            sub = _files(n)
            out.update({(f"theories/{k}" if n == "paper-table" else k): v for k, v in sub.items()})
        return out
    raise UnknownCorpusError(f"unknown corpus {name!r}; known: {', '.join(CORPUS_NAMES)}")


def write_corpus(name: str, out_dir) -> list[Path]:
    files = _files(name)
    out = Path(out_dir)
    written = []
    for rel, text in sorted(files.items()):
        p = out / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
        written.append(p)
    return written

