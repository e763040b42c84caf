"""Small finite groups and skew braces as set-models."""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

from .adjunction import SetModel
from .errors import PreconditionError
from .theory import TheoryPresentation, builtin


def _power_label(base: str, k: int) -> str:
    if k == 0:
        return "e"
    return base if k == 1 else f"{base}{k}"


def group_model(elements: Sequence[str], mul: Callable[[str, str], str],
                theory: TheoryPresentation | None = None, name: str = "") -> SetModel:
    """Set-model of a group given by its multiplication (unit and inverse derived)."""
    theory = theory or builtin("Grp")
    elements = tuple(elements)
    table = {(a, b): mul(a, b) for a in elements for b in elements}
    unit = next((u for u in elements if all(table[u, a] == a == table[a, u] for a in elements)), None)
    if unit is None:
        raise PreconditionError("multiplication has no two-sided unit")
    inv = {}
    for a in elements:
        inv[a] = next((b for b in elements if table[a, b] == unit), None)
        if inv[a] is None:
            raise PreconditionError(f"{a} has no inverse", a)
    g = theory.omega_group
    if g is None:
        # monoid-like signatures: keep only mul and one
        return SetModel(theory, elements, {"mul": table, "one": {(): unit}}, name)
    tables = {g.mul: table, g.unit: {(): unit}, g.inv: {(a,): inv[a] for a in elements}}
    return SetModel(theory, elements, tables, name)


def cyclic(n: int, theory: TheoryPresentation | None = None, base: str = "g") -> SetModel:
    labels = [_power_label(base, k) for k in range(n)]
    return group_model(labels, lambda a, b: labels[(labels.index(a) + labels.index(b)) % n], theory, f"Z{n}")


def dihedral(n: int, theory: TheoryPresentation | None = None) -> SetModel:
    """D_n of order 2n with elements r^i s^j, (i,j)(k,l) = (i + (-1)^j k, j + l)."""
    pairs = [(i, j) for j in (0, 1) for i in range(n)]

    def label(p):
        i, j = p
        r = _power_label("r", i) if i else ""
        if j:
            return f"{r}s"
        return r or "e"

    labels = [label(p) for p in pairs]
    lookup = dict(zip(labels, pairs))

    def mul(a, b):
        (i, j), (k, l) = lookup[a], lookup[b]
        return label(((i + (-1) ** j * k) % n, (j + l) % 2))

    return group_model(labels, mul, theory, "S3" if n == 3 else f"D{n}")


def s3(theory: TheoryPresentation | None = None) -> SetModel:
    """S3 = D3 with labels e, r, r2, s, rs, r2s."""
    return dihedral(3, theory)


def permutation_group(gens: Sequence[Sequence[int]], name: str,
                      theory: TheoryPresentation | None = None) -> SetModel:
    """Closure of permutations (tuples of images), labelled p0, p1, ... in BFS order."""
    n = len(gens[0])
    ident = tuple(range(n))
    seen = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(n))
                if q not in seen:
                    seen.append(q)
                    nxt.append(q)
        frontier = nxt
    labels = {p: ("e" if p == ident else f"p{k}") for k, p in enumerate(seen)}
    back = {v: k for k, v in labels.items()}

    def mul(a, b):
        pa, pb = back[a], back[b]
        return labels[tuple(pa[pb[i]] for i in range(n))]

    return group_model([labels[p] for p in seen], mul, theory, name)


def direct_product(a: SetModel, b: SetModel, theory: TheoryPresentation | None = None) -> SetModel:
    ga, gb = a.theory.omega_group, b.theory.omega_group
    labels = [f"{x}.{y}" for x in a.elements for y in b.elements]
    split = {f"{x}.{y}": (x, y) for x in a.elements for y in b.elements}

    def mul(u, v):
        (x1, y1), (x2, y2) = split[u], split[v]
        return f"{a.tables[ga.mul][x1, x2]}.{b.tables[gb.mul][y1, y2]}"

    return group_model(labels, mul, theory, f"{a.name}x{b.name}")


def brace_model(elements: Sequence[str], add: Callable, mul: Callable,
                theory: TheoryPresentation | None = None, name: str = "") -> SetModel:
    """Skew-brace-shaped set-model from its two group laws (sharing the unit)."""
    theory = theory or builtin("SKB")
    a = group_model(elements, add, builtin("Grp"))
    m = group_model(elements, mul, builtin("Grp"))
    if a.tables["one"] != m.tables["one"]:
        raise PreconditionError("the two group laws have different units")
    tables = {"add": a.tables["mul"], "neg": a.tables["inv"], "one": a.tables["one"],
              "mul": m.tables["mul"], "minv": m.tables["inv"]}
    return SetModel(theory, elements, tables, name)


def trivial_brace(g: SetModel, theory: TheoryPresentation | None = None) -> SetModel:
    """Both laws equal to the group law of ``g``."""
    op = g.theory.omega_group.mul
    return brace_model(g.elements, lambda x, y: g.tables[op][x, y], lambda x, y: g.tables[op][x, y],
                       theory, f"triv{g.name}")


def z6_brace(theory: TheoryPresentation | None = None) -> SetModel:
    """Additive Z/6 with a∘b = a + (-1)^a b (multiplicative group ≅ S3)."""
    labels = [str(k) for k in range(6)]
    return brace_model(labels,
                       lambda a, b: str((int(a) + int(b)) % 6),
                       lambda a, b: str((int(a) + (-1) ** int(a) * int(b)) % 6),
                       theory, "braceZ6")


def z_brace_trivial(n: int, theory: TheoryPresentation | None = None) -> SetModel:
    """Trivial brace on Z/n with numeric labels."""
    labels = [str(k) for k in range(n)]
    f = lambda a, b: str((int(a) + int(b)) % n)  # noqa: E731
    return brace_model(labels, f, f, theory, f"trivZ{n}")


def set_hom_is_valid(x: SetModel, y: SetModel, f: dict) -> bool:
    for op, tab in x.tables.items():
        for args, val in tab.items():
            if y.tables[op][tuple(f[a] for a in args)] != f[val]:
                return False
    return True


def all_set_homs(x: SetModel, y: SetModel) -> list[dict]:
    """Brute-force enumeration (test oracle, tiny carriers only)."""
    out = []
    for images in itertools.product(y.elements, repeat=x.size):
        f = dict(zip(x.elements, images))
        if set_hom_is_valid(x, y, f):
            out.append(f)
    return out
