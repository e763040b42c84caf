"""Check reports: ordered pass/fail entries with rendered witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class Check:
    name: str
    status: str
    witness: object = None
    detail: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.detail is not None:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    dims: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witness=None, detail: str | None = None) -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, None if ok else witness, detail))
        return ok

    def error(self, name: str, detail: str):
        self.checks.append(Check(name, ERROR, None, detail))

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.detail))
        for k, v in other.dims.items():
            self.dims.setdefault(prefix + k, v)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "dims": dict(sorted(self.dims.items())),
            "checks": [c.as_dict() for c in self.checks],
        }

    def __str__(self):
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{c.status}] {c.name}"
            if c.detail:
                line += f" ({c.detail})"
            if c.witness is not None:
                line += f" witness={render_plain(c.witness)}"
            lines.append(line)
        return "\n".join(lines)


def render_vector(v: Sequence, labels: Sequence[str], field) -> list[list[str]]:
    """Sparse ``[[coeff, label], ...]`` rendering over a labelled basis."""
    return [[field.fmt(x), labels[i]] for i, x in enumerate(v) if x]


def tensor_labels(labels: Sequence[str], n: int) -> list[str]:
    if n == 0:
        return ["1"]
    out = list(labels)
    for _ in range(n - 1):
        out = [f"{a},{b}" for a in out for b in labels]
    return [f"({x})" for x in out] if n > 1 else out


def render_plain(w) -> str:
    if isinstance(w, list) and all(isinstance(t, list) and len(t) == 2 for t in w):
        if not w:
            return "0"
        return " + ".join(f"{c} {lab}" for c, lab in w)
    return str(w)
