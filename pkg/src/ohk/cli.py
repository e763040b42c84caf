"""ohk command line: load theories/models/homs, run one construction, print a report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .birkhoff import reflect
from .cat import factorize, hopf_kernel, is_normal, newman_check, proto_terms_for, ssfl_reconstruct, sub_model
from .coalgebra import grouplikes
from .corpus import CORPUS_NAMES, write_corpus
from .errors import OhkError
from .exactlin import Field, Subspace
from .formats import Workspace, print_hom, print_model
from .ideals import coequalizer, cokernel
from .model import check_hom, check_model
from .report import Report, render_vector
from .theory import TheoryMorphism

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(OhkError):
    code = "input"


def _pick(table: dict, name: str | None, kind: str):
    if name is not None:
        if name not in table:
            raise InputError(f"unknown {kind} {name!r}; loaded: {', '.join(sorted(table)) or 'none'}")
        return table[name]
    if len(table) != 1:
        raise InputError(f"pass --{kind} to choose among {len(table)} loaded {kind}s")
    return next(iter(table.values()))


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)


def cmd_check(ws: Workspace, a) -> tuple[list[Report], str | None]:
    names = [a.model] if a.model else sorted(ws.models)
    if not names:
        raise InputError("no models loaded")
    reports = [check_model(_pick(ws.models, n, "model")) for n in names]
    hom_names = [a.hom] if a.hom else ([] if a.model else sorted(ws.homs))
    reports += [check_hom(_pick(ws.homs, n, "hom")) for n in hom_names]
    return reports, None


def cmd_kernel(ws, a):
    h = _pick(ws.homs, a.hom, "hom")
    kd = hopf_kernel(h)
    rep = newman_check(h)
    rep.title = f"kernel {h.name}"
    sub, inc = sub_model(h.source, kd.hopf_kernel, f"Hker_{h.name}")
    return [rep], print_model(sub) + "\n" + print_hom(inc)


def cmd_cokernel(ws, a):
    h = _pick(ws.homs, a.hom, "hom")
    q = cokernel(h, f"coker_{h.name}")
    rep = Report(f"cokernel {h.name}")
    rep.dims.update({"target": h.target.dim, "ideal": q.ideal.dim, "cokernel": q.model.dim})
    rep.extend(check_model(q.model), "cokernel: ")
    rep.add("projection is a hom", q.projection.verified)
    rep.add("projection kills f[A]+", all(not any(q.projection.matrix.apply(v)) for v in q.generators.basis))
    return [rep], print_model(q.model)


def cmd_factorize(ws, a):
    h = _pick(ws.homs, a.hom, "hom")
    fz = factorize(h)
    fz.epi.name, fz.mono.name = f"e_{h.name}", f"m_{h.name}"
    return [fz.report], print_model(fz.middle) + "\n" + print_hom(fz.epi) + print_hom(fz.mono)


def cmd_coequalizer(ws, a):
    f = _pick(ws.homs, a.hom, "hom")
    g = _pick(ws.homs, a.hom2, "hom2")
    q = coequalizer(f, g, f"coeq_{f.name}_{g.name}")
    rep = Report(f"coequalizer {f.name} {g.name}")
    rep.dims.update({"target": f.target.dim, "generators": q.generators.dim, "ideal": q.ideal.dim,
                     "coequalizer": q.model.dim})
    pm = q.projection.matrix
    rep.add("q∘f = q∘g", pm @ f.matrix == pm @ g.matrix)
    rep.add("q surjective", q.projection.is_surjective())
    rep.extend(check_model(q.model), "coequalizer: ")
    return [rep], print_model(q.model)


def cmd_normal(ws, a):
    k = _pick(ws.homs, a.hom, "hom")
    b = Subspace.column_space(k.matrix)
    ok, rep = is_normal(k.target, b)
    rep.title = f"normal image({k.name}) in {k.target.name}"
    return [rep], None


def cmd_reflect(ws, a):
    m = _pick(ws.models, a.model, "model")
    if not a.to:
        raise InputError("reflect needs --to <Theory>")
    if a.to not in ws.theories:
        raise InputError(f"unknown theory {a.to!r}")
    r = TheoryMorphism.make(m.theory, ws.theories[a.to])
    res = reflect(m, r)
    if a.expect_bijective:
        res.report.add("unit bijective", res.unit.is_injective() and res.unit.is_surjective())
    return [res.report], print_model(res.reflected)


def cmd_grouplikes(ws, a):
    m = _pick(ws.models, a.model, "model")
    gls = grouplikes(m.carrier)
    rep = Report(f"grouplikes {m.name}")
    rep.dims["count"] = len(gls)
    for k, g in enumerate(gls):
        rep.add(f"grouplike {k}: {' + '.join(f'{c} {l}' for c, l in render_vector(g, m.labels, m.field))}", True)
    return [rep], None


def cmd_ssfl(ws, a):
    d = _pick(ws.diagrams, a.diagram, "diagram")
    gp, rep = ssfl_reconstruct(d, proto_terms_for(d.B.theory))
    return [rep], print_hom(gp)


COMMANDS = {
    "check": cmd_check, "kernel": cmd_kernel, "cokernel": cmd_cokernel, "factorize": cmd_factorize,
    "coequalizer": cmd_coequalizer, "normal": cmd_normal, "reflect": cmd_reflect,
    "grouplikes": cmd_grouplikes, "ssfl": cmd_ssfl,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ohk", description="Exact checks and constructions for coalgebraic models of Lawvere theories.")
    p.add_argument("command", choices=sorted(list(COMMANDS) + ["corpus"]))
    p.add_argument("paths", nargs="*", help="input .lth/.lmod/.lhom files (corpus: the corpus name)")
    p.add_argument("--field", help="ground field override: Q or F<p>")
    p.add_argument("--out", help="write the computed object (.lmod/.lhom text) or, for corpus, the directory")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    p.add_argument("--model", help="model name")
    p.add_argument("--hom", help="hom name")
    p.add_argument("--hom2", help="second hom name (coequalizer)")
    p.add_argument("--diagram", help="split diagram name (ssfl)")
    p.add_argument("--to", help="target theory (reflect)")
    p.add_argument("--expect-bijective", action="store_true", help="reflect: also require a bijective unit")
    return p


def _emit(payload: dict, as_json: bool, reports: list[Report] | None, out=sys.stdout):
    if as_json:
        out.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    elif reports is not None:
        out.write("\n\n".join(str(r) for r in reports) + "\n")


def run(argv: list[str], out=sys.stdout, err=sys.stderr) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    payload = {"schema": SCHEMA, "command": a.command, "argv": list(argv)}
    try:
        if a.command == "corpus":
            if len(a.paths) != 1:
                raise InputError("corpus takes exactly one name: " + ", ".join(CORPUS_NAMES))
            written = write_corpus(a.paths[0], a.out or ".")
            payload.update({"ok": True, "files": [str(p) for p in written]})
            if not a.json:
                out.write("\n".join(str(p) for p in written) + "\n")
            _emit(payload, a.json, None, out)
            return EXIT_OK
        field = Field.parse(a.field) if a.field else None
        for p in a.paths:
            if not Path(p).is_file():
                raise InputError(f"no such file: {p}")
        ws = Workspace(field).load(a.paths)
        reports, text = COMMANDS[a.command](ws, a)
    except (OhkError, ValueError, ArithmeticError) as exc:
        code = getattr(exc, "code", "input")
        payload.update({"ok": False, "error": {"code": code, "message": str(exc)}})
        if getattr(exc, "witness", None) is not None:
            payload["error"]["witness"] = exc.witness
        if a.json:
            _emit(payload, True, None, out)
        err.write(f"ohk {a.command}: error [{code}]: {exc}\n")
        return EXIT_INPUT
    ok = all(r.ok for r in reports)
    payload.update({"ok": ok, "reports": [r.as_dict() for r in reports]})
    if a.out and text is not None:
        _write(a.out, text)
    _emit(payload, a.json, reports, out)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
