"""The ``.lmod`` and ``.lhom`` line formats, and a workspace that resolves names across files."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from .adjunction import SetModel, lift
from .cat import SplitDiagram
from .coalgebra import Coalgebra
from .errors import OhkError, ParseError
from .exactlin import Field, Matrix
from .model import ModelHom, TCoalgebraModel
from .theory import BUILTIN_NAMES, TheoryPresentation, builtin, parse_theory, print_theory

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(,)|([+-])(?=\s)|(-?\d+(?:/\d+)?)(?=[\s]|$)|([A-Za-z0-9_.']+))")
_NAME = r"[A-Za-z_][A-Za-z0-9_.']*"


def _tokens(text: str, lineno: int, col0: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", lineno, col0 + pos + 1)
        kinds = ("(", ")", ",", "sign", "num", "label")
        for k, g in zip(kinds, m.groups()):
            if g is not None:
                out.append((k, g, col0 + m.start(m.lastindex) + 1))
                break
        pos = m.end()
    return out


def _parse_tuple(toks, i, lineno) -> tuple[tuple[str, ...], int]:
    if i >= len(toks) or toks[i][0] != "(":
        col = toks[i][2] if i < len(toks) else None
        raise ParseError("expected '('", lineno, col)
    i += 1
    labels = []
    while i < len(toks) and toks[i][0] != ")":
        kind, val, col = toks[i]
        if kind in ("label", "num"):
            labels.append(val)
        elif kind != ",":
            raise ParseError(f"unexpected {val!r} in tuple", lineno, col)
        i += 1
    if i >= len(toks):
        raise ParseError("unclosed '('", lineno)
    return tuple(labels), i + 1


def _parse_combination(toks, i, lineno, tuples: bool) -> list[tuple[Fraction, object]]:
    """``c target [(+|-) c target ...]`` where target is a label or a tuple."""
    out = []
    sign = 1
    first = True
    while i < len(toks):
        kind, val, col = toks[i]
        if kind == "sign":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {val!r}", lineno, col)
        if i >= len(toks) or toks[i][0] != "num":
            raise ParseError("expected a coefficient", lineno, toks[i][2] if i < len(toks) else None)
        coeff = Fraction(toks[i][1]) * sign
        i += 1
        if tuples:
            target, i = _parse_tuple(toks, i, lineno)
        else:
            if i >= len(toks) or toks[i][0] not in ("label", "num"):
                raise ParseError("expected a basis label", lineno, toks[i][2] if i < len(toks) else None)
            target = toks[i][1]
            i += 1
        out.append((coeff, target))
        sign = 1
        first = False
    if first:
        raise ParseError("empty linear combination", lineno)
    return out


@dataclass
class _ModelBlock:
    name: str
    field: Field
    line: int
    theory: str | None = None
    kind: str | None = None
    dim: int | None = None
    basis: list[str] | None = None
    delta: dict = dc_field(default_factory=dict)
    epsilon: dict = dc_field(default_factory=dict)
    opmaps: dict = dc_field(default_factory=dict)
    op_lines: dict = dc_field(default_factory=dict)
    elems: list[str] | None = None
    tables: dict = dc_field(default_factory=dict)


@dataclass
class ParsedModels:
    models: dict
    setmodels: dict


def parse_models(text: str, theories: dict, field_override: Field | None = None) -> ParsedModels:
    """Parse one or more ``model`` blocks."""
    blocks: list[_ModelBlock] = []
    cur: _ModelBlock | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        kw, _, rest = line.strip().partition(" ")
        col0 = indent + len(kw) + 1
        if kw == "model":
            m = re.fullmatch(rf"\s*({_NAME})\s+over\s+(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'model <Name> over <Q|F<p>>'", lineno, col0 + 1)
            try:
                fld = field_override or Field.parse(m.group(2))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, col0 + m.start(2) + 1) from None
            cur = _ModelBlock(m.group(1), fld, lineno)
            blocks.append(cur)
            continue
        if cur is None:
            raise ParseError("expected a 'model' line first", lineno, indent + 1)
        if kw == "theory":
            if rest.strip() not in theories:
                raise ParseError(f"unknown theory {rest.strip()!r}", lineno, col0 + 1)
            cur.theory = rest.strip()
        elif kw == "setmodel":
            cur.kind = _set_kind(cur, "set", lineno)
        elif kw == "elem":
            _set_kind(cur, "set", lineno)
            cur.elems = (cur.elems or []) + rest.split()
        elif kw == "table":
            _set_kind(cur, "set", lineno)
            m = re.fullmatch(rf"\s*({_NAME})\s*:\s*(.*?)\s*->\s*(\S+)\s*", rest)
            if not m:
                raise ParseError("expected 'table <op> : (args) -> value'", lineno, col0 + 1)
            args, _ = _parse_tuple(_tokens(m.group(2), lineno, col0 + m.start(2)), 0, lineno)
            cur.tables.setdefault(m.group(1), {})[args] = m.group(3)
        elif kw == "dim":
            _set_kind(cur, "explicit", lineno)
            if not rest.strip().isdigit():
                raise ParseError("dim needs a positive integer", lineno, col0 + 1)
            cur.dim = int(rest)
        elif kw == "basis":
            _set_kind(cur, "explicit", lineno)
            cur.basis = rest.split()
        elif kw == "delta":
            _set_kind(cur, "explicit", lineno)
            lab, expr, c = _split_eq(rest, lineno, col0)
            cur.delta[lab] = (lineno, _parse_combination(_tokens(expr, lineno, c), 0, lineno, True))
        elif kw == "epsilon":
            _set_kind(cur, "explicit", lineno)
            lab, expr, c = _split_eq(rest, lineno, col0)
            try:
                cur.epsilon[lab] = (lineno, Fraction(expr.strip()))
            except ValueError:
                raise ParseError("epsilon value must be a number", lineno, c + 1) from None
        elif kw == "opmap":
            _set_kind(cur, "explicit", lineno)
            m = re.fullmatch(rf"\s*({_NAME})\s*:\s*(\(.*?\))\s*->\s*(.*)", rest)
            if not m:
                raise ParseError("expected 'opmap <op> : (labels) -> combination'", lineno, col0 + 1)
            args, _ = _parse_tuple(_tokens(m.group(2), lineno, col0 + m.start(2)), 0, lineno)
            comb = _parse_combination(_tokens(m.group(3), lineno, col0 + m.start(3)), 0, lineno, False)
            cur.opmaps.setdefault(m.group(1), {})[args] = (lineno, comb)
            cur.op_lines.setdefault(m.group(1), lineno)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, indent + 1)
    models, setmodels = {}, {}
    for b in blocks:
        if b.theory is None:
            raise ParseError(f"model {b.name} has no 'theory' line", b.line)
        th = theories[b.theory]
        try:
            if b.kind == "set":
                s = SetModel(th, b.elems or [], b.tables, b.name)
                setmodels[b.name] = s
                models[b.name] = lift(s, b.field, b.name)
            elif b.kind == "explicit":
                models[b.name] = _build_explicit(b, th)
            else:
                raise ParseError(f"model {b.name} has neither a setmodel nor a basis", b.line)
        except ParseError:
            raise
        except (OhkError, KeyError, ZeroDivisionError) as exc:
            raise ParseError(f"model {b.name}: {exc}", b.line) from exc
    return ParsedModels(models, setmodels)


def _set_kind(b: _ModelBlock, kind: str, lineno: int) -> str:
    if b.kind not in (None, kind):
        raise ParseError(f"model {b.name} mixes setmodel and explicit lines", lineno)
    b.kind = kind
    return kind


def _split_eq(rest: str, lineno: int, col0: int) -> tuple[str, str, int]:
    lab, eq, expr = rest.partition("=")
    if not eq or not lab.strip():
        raise ParseError("expected '<label> = ...'", lineno, col0 + 1)
    return lab.strip(), expr, col0 + len(lab) + 1


def _build_explicit(b: _ModelBlock, th: TheoryPresentation) -> TCoalgebraModel:
    f = b.field
    if b.basis is None:
        raise ParseError(f"model {b.name} has no basis line", b.line)
    if b.dim is not None and b.dim != len(b.basis):
        raise ParseError(f"model {b.name}: dim {b.dim} but {len(b.basis)} basis labels", b.line)
    d = len(b.basis)
    pos = {l: i for i, l in enumerate(b.basis)}

    def idx(label, line):
        if label not in pos:
            raise ParseError(f"model {b.name}: unknown basis label {label!r}", line)
        return pos[label]

    delta = [[f.zero] * d for _ in range(d * d)]
    for lab, (line, comb) in b.delta.items():
        j = idx(lab, line)
        for c, (x, y) in comb:
            r = idx(x, line) * d + idx(y, line)
            delta[r][j] = f.reduce(delta[r][j] + f(c))
    eps = [f.zero] * d
    for lab, (line, c) in b.epsilon.items():
        eps[idx(lab, line)] = f(c)
    carrier = Coalgebra(f, b.basis, Matrix(f, delta, d), Matrix(f, [eps], d))
    ops = {}
    for o in th.ops:
        cols = o.arity and d ** o.arity or 1
        data = [[f.zero] * cols for _ in range(d)]
        for args, (line, comb) in b.opmaps.get(o.name, {}).items():
            if len(args) != o.arity:
                raise ParseError(f"opmap {o.name}{args} has arity {len(args)}, expected {o.arity}", line)
            col = 0
            for a in args:
                col = col * d + idx(a, line)
            for c, lab in comb:
                r = idx(lab, line)
                data[r][col] = f.reduce(data[r][col] + f(c))
        ops[o.name] = Matrix(f, data, cols)
    extra = set(b.opmaps) - set(th.op_names)
    if extra:
        raise ParseError(f"opmap for unknown op {min(extra)!r}", b.op_lines[min(extra)])
    return TCoalgebraModel(th, carrier, ops, b.name)


def _comb(vec, labels, field, tuples=False) -> str:
    parts = []
    for i, x in enumerate(vec):
        if not x:
            continue
        s = field.fmt(x)
        sign = "-" if s.startswith("-") else "+"
        s = s.lstrip("-")
        parts.append((sign, f"{s} {labels[i]}"))
    out = ""
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out = ("-" + body) if sign == "-" else body
        else:
            out += f" {sign} {body}"
    return out


def print_model(m: TCoalgebraModel, name: str | None = None) -> str:
    """Explicit ``.lmod`` block; zero entries are omitted."""
    f = m.field
    d = m.dim
    lines = [f"model {name or m.name or 'M'} over {f.name}", f"theory {m.theory.name}", f"dim {d}",
             "basis " + " ".join(m.labels)]
    pairs = [f"({a},{b})" for a in m.labels for b in m.labels]
    for j, lab in enumerate(m.labels):
        expr = _comb(m.carrier.delta.column(j), pairs, f)
        if expr:
            lines.append(f"delta {lab} = {expr}")
    for j, lab in enumerate(m.labels):
        if m.carrier.eps[j]:
            lines.append(f"epsilon {lab} = {f.fmt(m.carrier.eps[j])}")
    for o in m.theory.ops:
        mat = m.op(o.name)
        for k, args in enumerate(itertools.product(m.labels, repeat=o.arity)):
            expr = _comb(mat.column(k), m.labels, f)
            if expr:
                lines.append(f"opmap {o.name} : ({','.join(args)}) -> {expr}")
    return "\n".join(lines) + "\n"


def print_setmodel(s: SetModel, field: Field, name: str | None = None) -> str:
    lines = [f"model {name or s.name or 'X'} over {field.name}", f"theory {s.theory.name}", "setmodel",
             "elem " + " ".join(s.elements)]
    for o in s.theory.ops:
        for args in itertools.product(s.elements, repeat=o.arity):
            lines.append(f"table {o.name} : ({','.join(args)}) -> {s.tables[o.name][args]}")
    return "\n".join(lines) + "\n"


def print_hom(h: ModelHom, name: str | None = None) -> str:
    lines = [f"hom {name or h.name or 'h'} : {h.source.name} -> {h.target.name}"]
    for j, lab in enumerate(h.source.labels):
        expr = _comb(h.matrix.column(j), h.target.labels, h.source.field)
        if expr:
            lines.append(f"send {lab} = {expr}")
    return "\n".join(lines) + "\n"


_DIAGRAM_ROLES = ("k", "p", "s", "k2", "p2", "s2", "f", "g", "h")


def print_diagram(d: SplitDiagram) -> str:
    return f"diagram {d.name} : " + " ".join(getattr(d, r).name for r in _DIAGRAM_ROLES) + "\n"


@dataclass
class ParsedHoms:
    homs: dict
    diagrams: dict


def parse_homs(text: str, models: dict) -> ParsedHoms:
    homs: dict = {}
    diagrams: dict = {}
    pending_diagrams = []
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        kw, _, rest = line.strip().partition(" ")
        col0 = indent + len(kw) + 1
        if kw == "hom":
            m = re.fullmatch(rf"\s*({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*", rest)
            if not m:
                raise ParseError("expected 'hom <Name> : <A> -> <B>'", lineno, col0 + 1)
            for g in (2, 3):
                if m.group(g) not in models:
                    raise ParseError(f"unknown model {m.group(g)!r}", lineno, col0 + m.start(g) + 1)
            cur = {"name": m.group(1), "src": models[m.group(2)], "tgt": models[m.group(3)],
                   "send": {}, "line": lineno}
            homs[m.group(1)] = cur
        elif kw == "send":
            if cur is None:
                raise ParseError("'send' outside a hom block", lineno, indent + 1)
            lab, expr, c = _split_eq(rest, lineno, col0)
            cur["send"][lab] = _parse_combination(_tokens(expr, lineno, c), 0, lineno, False)
        elif kw == "diagram":
            m = re.fullmatch(rf"\s*({_NAME})\s*:\s*(.*)", rest)
            names = m.group(2).split() if m else []
            if len(names) != 9:
                raise ParseError("expected 'diagram <Name> : k p s k2 p2 s2 f g h'", lineno, col0 + 1)
            pending_diagrams.append((m.group(1), names, lineno))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, indent + 1)
    built = {}
    for name, h in homs.items():
        a, b = h["src"], h["tgt"]
        f = a.field
        data = [[f.zero] * a.dim for _ in range(b.dim)]
        try:
            for lab, comb in h["send"].items():
                j = a.carrier.index(lab)
                for c, tl in comb:
                    i = b.carrier.index(tl)
                    data[i][j] = f.reduce(data[i][j] + f(c))
            built[name] = ModelHom(a, b, Matrix(f, data, a.dim), name)
        except (OhkError, KeyError) as exc:
            raise ParseError(f"hom {name}: {exc}", h["line"]) from exc
    for name, names, lineno in pending_diagrams:
        missing = [n for n in names if n not in built]
        if missing:
            raise ParseError(f"diagram {name}: unknown hom(s) {missing}", lineno)
        hs = dict(zip(_DIAGRAM_ROLES, (built[n] for n in names)))
        diagrams[name] = SplitDiagram(
            hs["k"].source, hs["k"].target, hs["p"].target, hs["k2"].source, hs["k2"].target, hs["p2"].target,
            name=name, **hs)
    return ParsedHoms(built, diagrams)


class Workspace:
    """Theories, models, homs and diagrams loaded from files, addressable by name."""

    def __init__(self, field: Field | None = None):
        self.field = field
        self.theories: dict[str, TheoryPresentation] = {n: builtin(n) for n in BUILTIN_NAMES}
        self.models: dict[str, TCoalgebraModel] = {}
        self.setmodels: dict[str, SetModel] = {}
        self.homs: dict[str, ModelHom] = {}
        self.diagrams: dict[str, SplitDiagram] = {}

    def load(self, paths) -> "Workspace":
        order = {".lth": 0, ".lmod": 1, ".lhom": 2}
        paths = [Path(p) for p in paths]
        for p in paths:
            if p.suffix not in order:
                raise ParseError(f"{p}: unknown file type (expected .lth, .lmod or .lhom)")
        for p in sorted(paths, key=lambda q: order[q.suffix]):
            text = p.read_text()
            try:
                self.load_text(text, p.suffix)
            except ParseError as exc:
                raise ParseError(f"{p}: {exc.message}", exc.line, exc.column) from exc
        return self

    def load_text(self, text: str, kind: str):
        if kind == ".lth":
            t = parse_theory(text)
            self.theories[t.name] = t
        elif kind == ".lmod":
            pm = parse_models(text, self.theories, self.field)
            self.models.update(pm.models)
            self.setmodels.update(pm.setmodels)
        elif kind == ".lhom":
            models = dict(self.models)
            ph = parse_homs(text, models)
            self.homs.update(ph.homs)
            self.diagrams.update(ph.diagrams)
        else:
            raise ParseError(f"unknown file kind {kind!r}")


__all__ = [
    "parse_models", "parse_homs", "print_model", "print_setmodel", "print_hom", "print_diagram",
    "print_theory", "Workspace",
]
