"""Lawvere-theory presentations: terms, the ``.lth`` text format, builtins and morphisms."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import ParseError, TheoryError


@dataclass(frozen=True)
class OpSymbol:
    name: str
    arity: int


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()


Term = Union[Var, App]


def term_vars(t: Term) -> list[int]:
    """Variable indices in order of first appearance."""
    seen: list[int] = []

    def walk(s):
        if isinstance(s, Var):
            if s.index not in seen:
                seen.append(s.index)
        else:
            for a in s.args:
                walk(a)

    walk(t)
    return seen


def term_depth(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    return 1 + max((term_depth(a) for a in t.args), default=0)


def substitute(t: Term, images: dict | list) -> Term:
    """Replace ``Var(i)`` by ``images[i]``."""
    if isinstance(t, Var):
        return images[t.index]
    return App(t.op, tuple(substitute(a, images) for a in t.args))


def rename_ops(t: Term, op_map: dict[str, str]) -> Term:
    if isinstance(t, Var):
        return t
    return App(op_map[t.op], tuple(rename_ops(a, op_map) for a in t.args))


@dataclass(frozen=True)
class Equation:
    nvars: int
    lhs: Term
    rhs: Term
    var_names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for i in term_vars(self.lhs) + term_vars(self.rhs):
            if not 0 <= i < self.nvars:
                raise TheoryError(f"variable index {i} outside [0, {self.nvars})")

    def canonical(self) -> tuple:
        """Key invariant under consistent renaming of variables."""
        order = []
        for i in term_vars(self.lhs) + term_vars(self.rhs):
            if i not in order:
                order.append(i)
        ren = {i: Var(k) for k, i in enumerate(order)}
        return substitute(self.lhs, ren), substitute(self.rhs, ren)

    def flipped(self) -> "Equation":
        return Equation(self.nvars, self.rhs, self.lhs, self.var_names)

    def matches(self, other: "Equation") -> bool:
        """Structural equality up to variable renaming and orientation."""
        return self.canonical() in (other.canonical(), other.flipped().canonical())


@dataclass(frozen=True)
class GroupStructure:
    mul: str
    unit: str
    inv: str


@dataclass(frozen=True)
class TheoryPresentation:
    name: str
    ops: tuple[OpSymbol, ...]
    eqs: tuple[Equation, ...]
    groups: tuple[GroupStructure, ...] = ()

    def __post_init__(self):
        names = [o.name for o in self.ops]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise TheoryError(f"duplicate op name(s): {sorted(dup)}")
        for eq in self.eqs:
            self.check_term(eq.lhs, eq.nvars)
            self.check_term(eq.rhs, eq.nvars)
        for g in self.groups:
            self._check_group(g)

    @property
    def omega_group(self) -> GroupStructure | None:
        return self.groups[0] if self.groups else None

    @property
    def op_names(self) -> list[str]:
        return [o.name for o in self.ops]

    def arity(self, name: str) -> int:
        for o in self.ops:
            if o.name == name:
                return o.arity
        raise TheoryError(f"unknown op {name!r} in theory {self.name}")

    def has_op(self, name: str) -> bool:
        return any(o.name == name for o in self.ops)

    def check_term(self, t: Term, nvars: int):
        if isinstance(t, Var):
            if not 0 <= t.index < nvars:
                raise TheoryError(f"variable index {t.index} outside [0, {nvars})")
            return
        n = self.arity(t.op)
        if len(t.args) != n:
            raise TheoryError(f"op {t.op} has arity {n}, applied to {len(t.args)} argument(s)")
        for a in t.args:
            self.check_term(a, nvars)

    def _check_group(self, g: GroupStructure):
        for name, want in ((g.mul, 2), (g.unit, 0), (g.inv, 1)):
            if self.arity(name) != want:
                raise TheoryError(f"group op {name} must have arity {want}")
        missing = [label for label, eq in group_axioms(g) if not any(eq.matches(e) for e in self.eqs)]
        if missing:
            raise TheoryError(f"group ({g.mul}, {g.unit}, {g.inv}) lacks axiom(s): {', '.join(missing)}")

    def has_equation(self, eq: Equation) -> bool:
        return any(eq.matches(e) for e in self.eqs)


def group_axioms(g: GroupStructure) -> list[tuple[str, Equation]]:
    x, y, z = Var(0), Var(1), Var(2)
    m = lambda a, b: App(g.mul, (a, b))  # noqa: E731
    one = App(g.unit, ())
    inv = lambda a: App(g.inv, (a,))  # noqa: E731
    return [
        ("associativity", Equation(3, m(x, m(y, z)), m(m(x, y), z))),
        ("right unit", Equation(1, m(x, one), x)),
        ("left unit", Equation(1, m(one, x), x)),
        ("right inverse", Equation(1, m(x, inv(x)), one)),
        ("left inverse", Equation(1, m(inv(x), x), one)),
    ]


# ---------------------------------------------------------------------------
# .lth text format

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(\()|(\))|(,))")


class _TermParser:
    def __init__(self, text: str, line: int, col0: int, arities: dict[str, int]):
        self.text = text
        self.line = line
        self.col0 = col0
        self.pos = 0
        self.arities = arities
        self.names: list[str] = []

    def error(self, msg):
        raise ParseError(msg, self.line, self.col0 + self.pos + 1)

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == self.pos:
            return None, None
        return m, m.lastindex

    def take(self, kind):
        m, k = self.peek()
        if m is None or k != kind:
            self.error(f"expected {'identifier ( ) ,'.split()[kind - 1]!r}")
        self.pos = m.end()
        return m.group(kind)

    def term(self):
        m, k = self.peek()
        if m is None or k != 1:
            self.error("expected a term")
        start = m.start(1)
        name = m.group(1)
        self.pos = m.end()
        m2, k2 = self.peek()
        if m2 is not None and k2 == 2:
            self.pos = m2.end()
            args = []
            m3, k3 = self.peek()
            if m3 is not None and k3 == 3:
                self.pos = m3.end()
            else:
                while True:
                    args.append(self.term())
                    m4, k4 = self.peek()
                    if m4 is not None and k4 == 4:
                        self.pos = m4.end()
                        continue
                    self.take(3)
                    break
            if name not in self.arities:
                raise ParseError(f"unknown op {name!r}", self.line, self.col0 + start + 1)
            if self.arities[name] != len(args):
                raise ParseError(
                    f"arity mismatch: {name} has arity {self.arities[name]}, got {len(args)} argument(s)",
                    self.line, self.col0 + start + 1,
                )
            return App(name, tuple(args))
        if name in self.arities:
            raise ParseError(f"op {name!r} used without parentheses", self.line, self.col0 + start + 1)
        if name not in self.names:
            self.names.append(name)
        return ("var", name)

    def at_end(self):
        return self.text[self.pos:].strip() == ""


def _resolve(t, index: dict[str, int]):
    if isinstance(t, tuple):
        return Var(index[t[1]])
    return App(t.op, tuple(_resolve(a, index) for a in t.args))


def _collect_names(t, out: list):
    if isinstance(t, tuple):
        if t[1] not in out:
            out.append(t[1])
    else:
        for a in t.args:
            _collect_names(a, out)


def parse_theory(text: str) -> TheoryPresentation:
    """Parse one theory in the ``.lth`` line format.

    ``eq a = b = c`` chains expand to one equation per unordered pair.
    """
    name = None
    ops: list[OpSymbol] = []
    arities: dict[str, int] = {}
    eqs: list[Equation] = []
    groups: list[tuple[int, GroupStructure]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        kw, _, rest = stripped.partition(" ")
        rest_col = indent + len(kw) + 1
        if kw == "theory":
            if name is not None:
                raise ParseError("second 'theory' line", lineno, indent + 1)
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", rest.strip()):
                raise ParseError("bad theory name", lineno, rest_col + 1)
            name = rest.strip()
        elif kw == "op":
            m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(\d+)\s*", rest)
            if not m:
                raise ParseError("expected 'op <name> : <arity>'", lineno, rest_col + 1)
            if m.group(1) in arities:
                raise ParseError(f"duplicate op name {m.group(1)!r}", lineno, rest_col + m.start(1) + 1)
            arities[m.group(1)] = int(m.group(2))
            ops.append(OpSymbol(m.group(1), int(m.group(2))))
        elif kw == "eq":
            eqs.extend(_parse_eq_line(rest, lineno, rest_col, arities))
        elif kw == "group":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("expected 'group <mul> <unit> <antipode>'", lineno, rest_col + 1)
            for p in parts:
                if p not in arities:
                    raise ParseError(f"unknown op {p!r} in group line", lineno, rest_col + rest.index(p) + 1)
            groups.append((lineno, GroupStructure(*parts)))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, indent + 1)
    if name is None:
        raise ParseError("missing 'theory <Name>' line", 1, 1)
    try:
        return TheoryPresentation(name, tuple(ops), tuple(eqs), tuple(g for _, g in groups))
    except TheoryError as exc:
        line = groups[-1][0] if groups and "group" in str(exc) else None
        raise ParseError(str(exc), line) from exc


def _parse_eq_line(rest: str, lineno: int, col0: int, arities) -> list[Equation]:
    declared = None
    m = re.search(r"\bvars\b", rest)
    body = rest
    if m:
        declared = rest[m.end():].split()
        body = rest[: m.start()]
        if len(set(declared)) != len(declared):
            raise ParseError("repeated name in vars clause", lineno, col0 + m.start() + 1)
    pieces = []
    offset = 0
    for chunk in body.split("="):
        pieces.append((chunk, offset))
        offset += len(chunk) + 1
    if len(pieces) < 2:
        raise ParseError("equation needs '='", lineno, col0 + 1)
    terms = []
    names: list[str] = []
    for chunk, off in pieces:
        p = _TermParser(chunk, lineno, col0 + off, arities)
        t = p.term()
        if not p.at_end():
            p.error("unexpected text after term")
        terms.append(t)
        _collect_names(t, names)
    if declared is not None:
        unknown = [n for n in names if n not in declared]
        if unknown:
            raise ParseError(f"unknown variable {unknown[0]!r}", lineno, col0 + 1)
        order = declared
    else:
        order = names
    index = {n: i for i, n in enumerate(order)}
    resolved = [_resolve(t, index) for t in terms]
    return [
        Equation(len(order), resolved[i], resolved[j], tuple(order))
        for i, j in itertools.combinations(range(len(resolved)), 2)
    ]


_DEFAULT_NAMES = "xyzwuvabcdefgh"


def _var_names(eq: Equation) -> list[str]:
    if len(eq.var_names) == eq.nvars:
        return list(eq.var_names)
    if eq.nvars <= len(_DEFAULT_NAMES):
        return list(_DEFAULT_NAMES[: eq.nvars])
    return [f"x{i}" for i in range(eq.nvars)]


def format_term(t: Term, names: list[str] | None = None) -> str:
    if isinstance(t, Var):
        return names[t.index] if names else f"x{t.index}"
    return f"{t.op}({', '.join(format_term(a, names) for a in t.args)})"


def format_equation(eq: Equation) -> str:
    names = _var_names(eq)
    s = f"{format_term(eq.lhs, names)} = {format_term(eq.rhs, names)}"
    first = term_vars(eq.lhs) + [i for i in term_vars(eq.rhs) if i not in term_vars(eq.lhs)]
    if first != list(range(eq.nvars)):
        s += " vars " + " ".join(names)
    return s


def print_theory(t: TheoryPresentation) -> str:
    lines = [f"theory {t.name}"]
    lines += [f"op {o.name} : {o.arity}" for o in t.ops]
    lines += [f"eq {format_equation(e)}" for e in t.eqs]
    lines += [f"group {g.mul} {g.unit} {g.inv}" for g in t.groups]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# builtin presentations

_GROUP_AXIOMS = """\
eq {m}(x, {m}(y, z)) = {m}({m}(x, y), z)
eq {m}(x, {u}()) = x = {m}({u}(), x)
eq {m}(x, {i}(x)) = {u}() = {m}({i}(x), x)
"""

_SKB_COMPAT = "eq mul(a, add(b, c)) = add(add(mul(a, b), neg(a)), mul(a, c))\n"
_RADRNG_EXTRA = (
    "eq mul(add(a, b), c) = add(add(mul(a, c), neg(c)), mul(b, c))\n"
    "eq add(a, b) = add(b, a)\n"
)

_DIGRP_BODY = (
    "op add : 2\nop one : 0\nop neg : 1\nop mul : 2\nop minv : 1\n"
    + _GROUP_AXIOMS.format(m="add", u="one", i="neg")
    + _GROUP_AXIOMS.format(m="mul", u="one", i="minv")
)

BUILTIN_TEXT = {
    "Mon": (
        "theory Mon\nop mul : 2\nop one : 0\n"
        "eq mul(x, mul(y, z)) = mul(mul(x, y), z)\n"
        "eq mul(x, one()) = x = mul(one(), x)\n"
    ),
    "Grp": "theory Grp\nop mul : 2\nop one : 0\nop inv : 1\n"
    + _GROUP_AXIOMS.format(m="mul", u="one", i="inv")
    + "group mul one inv\n",
    "Ab": "theory Ab\nop mul : 2\nop one : 0\nop inv : 1\n"
    + _GROUP_AXIOMS.format(m="mul", u="one", i="inv")
    + "eq mul(x, y) = mul(y, x)\n"
    + "group mul one inv\n",
    "DiGrp": "theory DiGrp\n" + _DIGRP_BODY + "group add one neg\ngroup mul one minv\n",
    "SKB": "theory SKB\n" + _DIGRP_BODY + _SKB_COMPAT + "group add one neg\ngroup mul one minv\n",
    "RadRng": "theory RadRng\n" + _DIGRP_BODY + _SKB_COMPAT + _RADRNG_EXTRA
    + "group add one neg\ngroup mul one minv\n",
}

BUILTIN_NAMES = tuple(BUILTIN_TEXT)


def builtin(name: str) -> TheoryPresentation:
    """Canonical presentation of Mon, Grp, Ab, SKB, DiGrp or RadRng."""
    key = {n.lower(): n for n in BUILTIN_TEXT}.get(name.lower())
    if key is None:
        raise TheoryError(f"unknown builtin theory {name!r}; known: {', '.join(BUILTIN_TEXT)}")
    return parse_theory(BUILTIN_TEXT[key])


# ---------------------------------------------------------------------------
# Omega-group unit conditions

PRESENT = "present"
DERIVABLE = "derivable"
UNKNOWN = "unknown"


def _unit_normalize(t: Term, rules: list[tuple[str, int]], unit: str) -> Term:
    """Rewrite with unit laws ``op(.., 1, ..) -> other argument`` (binary ops only)."""
    if isinstance(t, Var):
        return t
    args = tuple(_unit_normalize(a, rules, unit) for a in t.args)
    t = App(t.op, args)
    one = App(unit, ())
    for op, slot in rules:
        if t.op == op and t.args[slot] == one:
            return t.args[1 - slot]
    return t


def validate_omega_group(t: TheoryPresentation) -> dict[str, str]:
    """Classify ``f(1, ..., 1) = 1`` for every op of positive arity.

    ``present``: the equation is literally among the axioms, or ``f`` is the
    multiplication/inverse of a declared group sharing the designated unit
    (its declaration carries the unit law). ``derivable``: some axiom, with all
    variables set to 1 and unit laws applied, becomes the equation.
    """
    g = t.omega_group
    if g is None:
        raise TheoryError(f"theory {t.name} designates no group structure")
    one = App(g.unit, ())
    rules = []
    for eq in t.eqs:
        for a, b in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
            if isinstance(a, App) and len(a.args) == 2 and isinstance(b, Var):
                for slot in (0, 1):
                    if a.args[slot] == one and a.args[1 - slot] == b:
                        rules.append((a.op, slot))
    declared = {x for grp in t.groups[1:] if grp.unit == g.unit for x in (grp.mul, grp.inv)}
    result = {}
    for op in t.ops:
        if op.arity == 0:
            continue
        target = (App(op.name, (one,) * op.arity), one)
        if any(Equation(0, *target).matches(e) for e in t.eqs if e.nvars == 0 or not term_vars(e.lhs) + term_vars(e.rhs)):
            result[op.name] = PRESENT
            continue
        if op.name in declared:
            result[op.name] = PRESENT
            continue
        status = UNKNOWN
        for eq in t.eqs:
            ones = [one] * eq.nvars
            lhs = _unit_normalize(substitute(eq.lhs, ones), rules, g.unit)
            rhs = _unit_normalize(substitute(eq.rhs, ones), rules, g.unit)
            raw_l, raw_r = substitute(eq.lhs, ones), substitute(eq.rhs, ones)
            for cand in ((raw_l, raw_r), (lhs, rhs)):
                if cand in (target, target[::-1]):
                    status = DERIVABLE
            if status == DERIVABLE:
                break
        result[op.name] = status
    return result


# ---------------------------------------------------------------------------
# theory morphisms


@dataclass(frozen=True)
class TheoryMorphism:
    source: TheoryPresentation
    target: TheoryPresentation
    op_map: tuple[tuple[str, str], ...]

    @classmethod
    def make(cls, source, target, op_map: dict[str, str] | None = None) -> "TheoryMorphism":
        """Build from a dict; a missing dict means identity on op names."""
        if op_map is None:
            op_map = {o.name: o.name for o in source.ops}
        return cls(source, target, tuple(sorted(op_map.items())))

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.op_map)

    @property
    def surjective(self) -> bool:
        return set(self.target.op_names) <= set(self.mapping.values())

    def preimage(self, target_op: str) -> str:
        """First source op (in declaration order) mapped to ``target_op``."""
        m = self.mapping
        for o in self.source.ops:
            if m.get(o.name) == target_op:
                return o.name
        raise TheoryError(f"target op {target_op!r} has no preimage")


@dataclass
class MorphismReport:
    valid: bool
    surjective: bool
    preserved: list[Equation]
    flagged: list[Equation]
    extra: list[Equation]
    identified: list[tuple[str, str]]

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "surjective": self.surjective,
            "preserved": len(self.preserved),
            "flagged": [format_equation(e) for e in self.flagged],
            "extra": [format_equation(e) for e in self.extra],
            "identified": [list(p) for p in self.identified],
        }


def check_morphism(m: TheoryMorphism) -> MorphismReport:
    """Verify an op-name mapping and sort target equations into preserved/extra.

    ``flagged`` lists renamed source equations not literally in the target
    (they need model-level checking); ``extra`` lists target equations not
    hit by any renamed source equation; ``identified`` lists pairs of source
    ops sent to the same target op.
    """
    mp = m.mapping
    for o in m.source.ops:
        if o.name not in mp:
            raise TheoryError(f"source op {o.name!r} is not mapped")
        if not m.target.has_op(mp[o.name]):
            raise TheoryError(f"{o.name!r} maps to unknown target op {mp[o.name]!r}")
        if m.target.arity(mp[o.name]) != o.arity:
            raise TheoryError(f"arity clash: {o.name}/{o.arity} -> {mp[o.name]}/{m.target.arity(mp[o.name])}")
    renamed = [Equation(e.nvars, rename_ops(e.lhs, mp), rename_ops(e.rhs, mp), e.var_names) for e in m.source.eqs]
    preserved, flagged = [], []
    for e in renamed:
        (preserved if m.target.has_equation(e) else flagged).append(e)
    extra = [e for e in m.target.eqs if not any(e.matches(r) for r in renamed)]
    identified = []
    for a, b in itertools.combinations(m.source.op_names, 2):
        if mp[a] == mp[b]:
            identified.append((a, b))
    return MorphismReport(True, m.surjective, preserved, flagged, extra, identified)


def identity_morphism(t: TheoryPresentation) -> TheoryMorphism:
    return TheoryMorphism.make(t, t)


def iter_subterms(t: Term) -> Iterable[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from iter_subterms(a)
