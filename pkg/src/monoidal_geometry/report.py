"""Certificate reports: text and machine formats, plus a one-pass verifier.

The verifier re-checks witnesses using only the data inside the report
(structure constants, coefficient vectors, traces) and exact arithmetic, so a
report can be audited without re-running the engine.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .fields import field_from_tag
from .linalg import Matrix

try:
    from importlib.metadata import version as _pkg_version

    ENGINE_VERSION = _pkg_version("artifact")
except Exception:  # not installed: running from a source tree
    ENGINE_VERSION = "0.1.0"

KEY_ORDER = ("command", "verdict", "field", "witnesses", "engine", "digest")


@dataclass
class CertificateReport:
    command: list
    verdict: str
    field: str
    witnesses: dict = dc_field(default_factory=dict)
    engine: str = ENGINE_VERSION
    digest: str = ""

    def to_machine(self) -> dict:
        return {k: plain(getattr(self, k)) for k in KEY_ORDER}


def plain(x):
    """JSON-ready copy: fractions become ints or ``"p/q"``, tuples become lists."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [plain(v) for v in x]
    return str(x)


def ring_block(ring) -> dict:
    return {"dim": ring.dim, "table": plain(ring.table), "unit": plain(ring.unit)}


def digest_of(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _flatten(prefix, value, out):
    if isinstance(value, dict) and value:
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, json.dumps(value, ensure_ascii=False)))


def render_text(report: CertificateReport) -> str:
    m = report.to_machine()
    lines = []
    for k in KEY_ORDER:
        if k == "witnesses":
            rows = []
            _flatten("", m[k], rows)
            lines.extend(f"witness.{key}: {val}" for key, val in rows)
        elif k == "command":
            lines.append(f"command: {' '.join(m[k])}")
        else:
            lines.append(f"{k}: {m[k]}")
    return "\n".join(lines) + "\n"


def render_machine(report: CertificateReport) -> str:
    return json.dumps(report.to_machine(), ensure_ascii=False, indent=1) + "\n"


def render(report: CertificateReport, fmt: str = "text") -> str:
    return render_machine(report) if fmt == "machine" else render_text(report)


# -- one-pass verifier ---------------------------------------------------------

class _Ring:
    def __init__(self, F, block):
        self.F = F
        self.dim = block["dim"]
        self.table = [[tuple(F(c) for c in v) for v in row] for row in block["table"]]
        self.unit = tuple(F(c) for c in block["unit"])

    def vec(self, x):
        return tuple(self.F(c) for c in x)

    def mul(self, x, y):
        F = self.F
        out = [F.zero] * self.dim
        for i, a in enumerate(x):
            if a == F.zero:
                continue
            for j, b in enumerate(y):
                if b == F.zero:
                    continue
                c = F.mul(a, b)
                for k, v in enumerate(self.table[i][j]):
                    out[k] = F.add(out[k], F.mul(c, v))
        return tuple(out)

    def add(self, x, y):
        return tuple(self.F.add(a, b) for a, b in zip(x, y))

    def zero(self):
        return (self.F.zero,) * self.dim

    def axioms_hold(self) -> bool:
        n = self.dim
        basis = [tuple(self.F.one if k == i else self.F.zero for k in range(n)) for i in range(n)]
        for x in basis:
            if self.mul(self.unit, x) != x:
                return False
            for y in basis:
                if self.mul(x, y) != self.mul(y, x):
                    return False
                for z in basis:
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                        return False
        return True


def _check_cover(F, w) -> list:
    r = _Ring(F, w["ring"])
    ts = [r.vec(t) for t in w["elements"]]
    if w.get("positive"):
        total = r.zero()
        for s, t in zip(w["coefficients"], ts):
            total = r.add(total, r.mul(r.vec(s), t))
        return [] if total == r.unit else ["sum s_i t_i is not 1"]
    basis = [r.vec(b) for b in w["proper_ideal"]]
    n = r.dim
    problems = []
    span = Matrix.from_columns(F, basis, n) if basis else Matrix.zeros(F, n, 0)
    rk = span.rank()
    if Matrix.from_columns(F, basis + [r.unit], n).rank() == rk:
        problems.append("1 lies in the claimed proper ideal")
    for t in ts:
        if Matrix.from_columns(F, basis + [t], n).rank() != rk:
            problems.append("a generator lies outside the claimed ideal")
    for b in basis:
        for i in range(n):
            e = tuple(F.one if k == i else F.zero for k in range(n))
            if Matrix.from_columns(F, basis + [r.mul(b, e)], n).rank() != rk:
                problems.append("claimed ideal is not closed under multiplication")
                return problems
    return problems


def _check_traces(w) -> list:
    problems = []
    for u, dims in (w.get("traces") or {}).items():
        if any(b > a for a, b in zip(dims, dims[1:])):
            problems.append(f"trace at {u} is not nonincreasing")
        if len(dims) < 2 or dims[-1] != dims[-2]:
            problems.append(f"trace at {u} does not stabilize")
    return problems


def _check_inverse(F, w) -> list:
    if not w.get("localized_ring") or w["localized_ring"]["dim"] == 0:
        return []
    r = _Ring(F, w["localized_ring"])
    x, y = r.vec(w["image_of_t"]), r.vec(w["inverse_of_t"])
    return [] if r.mul(x, y) == r.unit else ["claimed inverse of t is wrong"]


def _check_inverses(F, w) -> list:
    r = _Ring(F, w["ring"])
    bad = [x for x, y in w["inverses"] if r.mul(r.vec(x), r.vec(y)) != r.unit]
    return [f"{len(bad)} claimed inverses are wrong"] if bad else []


def _check_zero_divisor(F, w) -> list:
    r = _Ring(F, w["ring"])
    x, y = r.vec(w["zero_divisor"][0]), r.vec(w["zero_divisor"][1])
    if not any(x) or not any(y):
        return ["zero-divisor witness has a zero factor"]
    return [] if r.mul(x, y) == r.zero() else ["zero-divisor witness multiplies to a nonzero element"]


def _check_nilpotent(F, w) -> list:
    r = _Ring(F, w["ring"])
    x, k = r.vec(w["nilpotent"][0]), int(w["nilpotent"][1])
    if not any(x):
        return ["nilpotent witness is zero"]
    y = r.unit
    for _ in range(k):
        y = r.mul(y, x)
    return [] if y == r.zero() else ["nilpotent witness has a nonzero power"]


def verify_report(report) -> tuple[bool, list]:
    """Re-check every witness the report carries.  Returns ``(ok, problems)``."""
    m = report.to_machine() if isinstance(report, CertificateReport) else report
    F = field_from_tag(m["field"])
    w = m.get("witnesses") or {}
    problems = []
    for key in ("ring", "localized_ring"):
        if isinstance(w.get(key), dict) and "table" in w[key] and not _Ring(F, w[key]).axioms_hold():
            problems.append(f"{key} table is not a commutative ring")
    if "coefficients" in w or "proper_ideal" in w:
        problems += _check_cover(F, w)
    if "traces" in w:
        problems += _check_traces(w)
    if "inverse_of_t" in w:
        problems += _check_inverse(F, w)
    if "inverses" in w:
        problems += _check_inverses(F, w)
    if w.get("zero_divisor"):
        problems += _check_zero_divisor(F, w)
    if w.get("nilpotent"):
        problems += _check_nilpotent(F, w)
    return not problems, problems
