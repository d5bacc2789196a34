"""JSON workspace files: instance, monoids, modules, maps, elements, ideals, schemes.

Scalars are integers or ``"p/q"`` strings.  FinVect matrices are lists of
rows; presheaf data is given per open (``{"X": rows, "U": rows}``), and
restrictions are keyed ``"big>small"`` along covering inclusions.  Opens whose
dimension is zero may be omitted.

``emit`` writes a canonical form: fixed key order for the top level and for
each block, names in file order, every list on one line.  Emitting a parsed
canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .category import CatInstance, FiniteSpace, FinVect, Presheaf
from .errors import InputError
from .fields import field_from_tag
from .linalg import Matrix
from .monoid import (
    ModuleObject,
    MonoidMorphism,
    MonoidObject,
    algebra,
    check_monoid,
    direct_sum_modules,
    module,
    module_cokernel,
    monoid,
    zero_module,
)

FORMAT = "monoidal-workspace/1"
SECTIONS = ("format", "instance", "monoids", "modules", "morphisms", "maps", "elements", "ideals",
            "schemes", "ideal_sheaves")
BLOCK_KEYS = ("kind", "field", "opens", "inclusions", "over", "monoid", "scheme", "source", "target",
              "dims", "restrictions", "table", "mult", "unit", "action", "element", "sum", "matrix",
              "coords", "generators", "charts", "overlaps", "transitions", "ideals")


@dataclass
class SchemeData:
    """Gluing data as written in the file; validated by the ``glue`` command."""

    charts: list
    overlaps: dict
    transitions: dict
    names: list


@dataclass
class Workspace:
    raw: dict
    inst: CatInstance
    monoids: dict = dc_field(default_factory=dict)
    axioms: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    morphisms: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    elements: dict = dc_field(default_factory=dict)
    ideals: dict = dc_field(default_factory=dict)
    schemes: dict = dc_field(default_factory=dict)
    ideal_sheaves: dict = dc_field(default_factory=dict)

    def monoid(self, name, checked: bool = True) -> MonoidObject:
        """The named monoid; by default it must satisfy the axioms."""
        if name not in self.monoids:
            raise InputError(f"unknown monoid {name!r}")
        rep = self.axioms[name]
        if checked and not rep.ok:
            v = rep.violations[0]
            raise InputError(f"{v['axiom']} fails at open {v['open']!r}", block=f"monoids.{name}")
        return self.monoids[name]

    def module(self, name) -> ModuleObject:
        if name not in self.modules:
            raise InputError(f"unknown module {name!r}")
        return self.modules[name]

    def element(self, a_name, ref) -> tuple:
        """An element of E(A) from a name or a coordinate list."""
        a = self.monoid(a_name)
        if isinstance(ref, str) and ref in self.elements:
            owner, coords = self.elements[ref]
            if owner != a_name:
                raise InputError(f"element {ref!r} lives in {owner!r}, not {a_name!r}")
            return coords
        if isinstance(ref, str):
            try:
                ref = json.loads(ref)
            except json.JSONDecodeError as exc:
                raise InputError(f"unknown element {ref!r}") from exc
        if not isinstance(ref, list):
            raise InputError(f"unknown element {ref!r}")
        return _coords(a, ref, f"element {ref!r}")


# -- scalars and matrices ----------------------------------------------------

def _canon_scalar(F, v, where):
    try:
        x = F.from_text(v)
    except InputError as exc:
        raise InputError(exc.detail, block=where) from exc
    if F.characteristic:
        return int(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _canon(F, value, where):
    """Normalize nested lists of scalars."""
    if isinstance(value, list):
        return [_canon(F, v, where) for v in value]
    return _canon_scalar(F, value, where)


def _matrix(F, rows, ncols, where) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InputError("matrix must be a list of rows", block=where)
    for r in rows:
        if len(r) != ncols:
            raise InputError(f"row of length {len(r)}, expected {ncols}", block=where)
    return Matrix.from_rows(F, [[F.from_text(c) for c in r] for r in rows], ncols)


def _coords(a: MonoidObject, values, where) -> tuple:
    E = a.end
    if not isinstance(values, list) or len(values) != E.dim:
        raise InputError(f"expected {E.dim} coordinates against the E(A) basis", block=where)
    return tuple(a.field.from_text(v) for v in values)


def _per_open(inst, spec, where):
    """FinVect: the value itself.  Presheaf: ``{open: value}``."""
    if inst.kind == "finvect":
        return {"X": spec}
    if not isinstance(spec, dict):
        raise InputError("presheaf data must be given per open", block=where)
    unknown = set(spec) - set(inst.opens)
    if unknown:
        raise InputError(f"unknown opens {sorted(unknown)}", block=where)
    return spec


def _object(inst, spec, where):
    dims = spec.get("dims")
    if dims is None:
        raise InputError("missing 'dims'", block=where)
    if inst.kind == "finvect":
        if not isinstance(dims, int):
            raise InputError("FinVect dims is an integer", block=where)
        return inst.obj(dims)
    dims = _per_open(inst, dims, where)
    res = {}
    for key, rows in (spec.get("restrictions") or {}).items():
        if ">" not in key:
            raise InputError(f"restriction key {key!r} is not 'big>small'", block=where)
        big, small = key.split(">", 1)
        if big not in inst.opens or small not in inst.opens:
            raise InputError(f"restriction {key!r} names an unknown open", block=where)
        res[(big, small)] = _matrix(inst.field, rows, int(dims.get(big, 0)), f"{where}.restrictions")
    try:
        return inst.obj({u: int(dims.get(u, 0)) for u in inst.opens}, res)
    except InputError as exc:
        raise InputError(exc.detail, block=where) from exc


def _components(inst, source, target, spec, where):
    """Per-open matrices of shape ``target.dim(u) x source.dim(u)``."""
    spec = _per_open(inst, spec, where)
    comps = {}
    for u in inst.opens:
        r, c = target.dim(u), source.dim(u)
        rows = spec.get(u)
        comps[u] = Matrix.zeros(inst.field, r, c) if rows is None and (r == 0 or c == 0) else \
            _matrix(inst.field, rows if rows is not None else [], c, f"{where}[{u}]")
        if comps[u].shape != (r, c):
            raise InputError(f"component at {u!r} has shape {comps[u].shape}, expected {(r, c)}", block=where)
    return comps[inst.top] if inst.kind == "finvect" else comps


# -- parse ---------------------------------------------------------------------

def _line_of(text, name):
    if text is None:
        return None
    needle = json.dumps(name) + ":"
    for k, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return k
    return None


def _instance(spec) -> CatInstance:
    if not isinstance(spec, dict):
        raise InputError("missing instance block", block="instance")
    F = field_from_tag(spec.get("field", "Q"))
    kind = spec.get("kind", "finvect")
    if kind == "finvect":
        return FinVect(F)
    if kind != "presheaf":
        raise InputError(f"unknown instance kind {kind!r}", block="instance")
    opens = spec.get("opens")
    inclusions = [tuple(p) for p in spec.get("inclusions", [])]
    space = FiniteSpace(opens, inclusions, name=spec.get("name"))
    return Presheaf(space, F)


def parse_text(text: str) -> Workspace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    return build(data, text)


def parse(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def build(data: dict, text: str | None = None) -> Workspace:
    if not isinstance(data, dict):
        raise InputError("a workspace is a JSON object", line=1, column=1)
    unknown = set(data) - set(SECTIONS)
    if unknown:
        raise InputError(f"unknown sections {sorted(unknown)}")
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise InputError(f"unsupported format {fmt!r}", block="format")
    inst = _instance(data.get("instance"))
    F = inst.field
    ws = Workspace({}, inst)
    raw = {"format": FORMAT, "instance": _canon_instance(data["instance"], inst)}

    def located(section, name, fn):
        where = f"{section}.{name}"
        try:
            return fn(where)
        except InputError as exc:
            if exc.block is not None and exc.line is not None:
                raise
            raise InputError(getattr(exc, "detail", str(exc)), block=exc.block or where,
                             line=_line_of(text, name)) from exc

    for section in SECTIONS[2:]:
        blocks = data.get(section) or {}
        if not isinstance(blocks, dict):
            raise InputError(f"section {section!r} must map names to blocks", block=section)
        if blocks:
            raw[section] = {}
        for name, spec in blocks.items():
            if not isinstance(spec, dict):
                raise InputError("block must be an object", block=f"{section}.{name}")
            loader = _LOADERS[section]
            located(section, name, lambda where: loader(ws, name, spec, where))
            raw[section][name] = _canon_block(F, spec)
    ws.raw = raw
    return ws


def _canon_instance(spec, inst):
    out = {"kind": inst.kind, "field": inst.field.tag}
    if inst.kind == "presheaf":
        out["opens"] = list(spec["opens"])
        out["inclusions"] = [list(p) for p in spec.get("inclusions", [])]
        if spec.get("name"):
            out["name"] = spec["name"]
    return out


_SCALAR_KEYS = {"restrictions", "table", "mult", "unit", "action", "matrix", "coords"}


def _canon_value(F, key, value):
    if key in _SCALAR_KEYS:
        if isinstance(value, dict):
            return {k: _canon(F, v, key) for k, v in value.items()}
        return _canon(F, value, key)
    if key == "generators":
        return [_canon(F, g, key) if isinstance(g, list) else g for g in value]
    if key == "overlaps":
        return [[o[0], o[1], _canon(F, o[2], key) if isinstance(o[2], list) else o[2]] for o in value]
    if key == "transitions":
        return [{"pair": list(t["pair"]), "matrix": _canon_value(F, "matrix", t["matrix"])} for t in value]
    if key == "ideals":
        return [[_canon(F, g, key) if isinstance(g, list) else g for g in gens] for gens in value]
    return value


def _canon_block(F, spec):
    keys = [k for k in BLOCK_KEYS if k in spec] + sorted(k for k in spec if k not in BLOCK_KEYS)
    return {k: _canon_value(F, k, spec[k]) for k in keys}


def _load_monoid(ws: Workspace, name, spec, where):
    inst = ws.inst
    F = inst.field
    if inst.kind == "finvect":
        if "table" not in spec or "unit" not in spec:
            raise InputError("FinVect monoid needs 'table' and 'unit'", block=where)
        table, unit = spec["table"], spec["unit"]
        n = len(unit)
        if len(table) != n or any(len(row) != n for row in table) or \
                any(not isinstance(v, list) or len(v) != n for row in table for v in row):
            raise InputError(f"structure-constant table does not match dimension {n}", block=where)
        table = [[[F.from_text(c) for c in v] for v in row] for row in table]
        a = algebra(inst, table, [F.from_text(c) for c in unit], name=name, check=False)
    else:
        carrier = _object(inst, spec, where)
        ts = inst.tensor(carrier, carrier)
        mult = _components(inst, ts, carrier, spec.get("mult") or {}, f"{where}.mult")
        unit_spec = _per_open(inst, spec.get("unit") or {}, f"{where}.unit")
        unit_rows = {u: [[c] for c in v] for u, v in unit_spec.items()}
        unit = _components(inst, inst.unit(), carrier, unit_rows, f"{where}.unit")
        a = monoid(inst, carrier, mult, unit, name=name, check=False)
    ws.monoids[name] = a
    ws.axioms[name] = check_monoid(a)


def _load_module(ws: Workspace, name, spec, where):
    inst = ws.inst
    a = ws.monoid(spec.get("over"))
    kind = spec.get("kind", "explicit")
    if kind == "regular":
        m = a.regular
    elif kind == "zero":
        m = zero_module(a)
    elif kind == "quotient":
        t = ws.element(spec["over"], spec.get("element"))
        m, _ = module_cokernel(a.end.to_morphism(t), a.regular)
    elif kind == "sum":
        parts = [ws.module(p) for p in spec.get("sum", [])]
        if any(p.base is not a for p in parts):
            raise InputError("summands must be modules over the same monoid", block=where)
        m = direct_sum_modules(*parts)[0]
    elif kind == "explicit":
        carrier = _object(inst, spec, where)
        src = inst.tensor(a.carrier, carrier)
        action = _components(inst, src, carrier, spec.get("action") or {}, f"{where}.action")
        m = module(a, carrier, inst.morphism(src, carrier, action), name=name)
    else:
        raise InputError(f"unknown module kind {kind!r}", block=where)
    ws.modules[name] = m


def _load_morphism(ws: Workspace, name, spec, where):
    inst = ws.inst
    a, b = ws.monoid(spec.get("source")), ws.monoid(spec.get("target"))
    comps = _components(inst, a.carrier, b.carrier, spec.get("matrix"), where)
    f = MonoidMorphism(a, b, inst.morphism(a.carrier, b.carrier, comps))
    bad = f.violations()
    if bad:
        raise InputError(f"not a monoid morphism: {bad[0]}", block=where)
    ws.morphisms[name] = f


def _load_map(ws: Workspace, name, spec, where):
    inst = ws.inst
    m, n = ws.module(spec.get("source")), ws.module(spec.get("target"))
    comps = _components(inst, m.carrier, n.carrier, spec.get("matrix"), where)
    ws.maps[name] = inst.morphism(m.carrier, n.carrier, comps)


def _load_element(ws: Workspace, name, spec, where):
    a = ws.monoid(spec.get("monoid"))
    ws.elements[name] = (spec["monoid"], _coords(a, spec.get("coords"), where))


def _load_ideal(ws: Workspace, name, spec, where):
    ws.monoid(spec.get("monoid"))
    gens = [ws.element(spec["monoid"], g) for g in spec.get("generators", [])]
    ws.ideals[name] = (spec["monoid"], gens)


def _load_scheme(ws: Workspace, name, spec, where):
    inst = ws.inst
    chart_names = spec.get("charts") or []
    charts = [ws.monoid(c) for c in chart_names]
    overlaps = {}
    for entry in spec.get("overlaps", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError("overlap entries are [i, j, element]", block=where)
        i, j, t = entry
        if not (0 <= i < len(charts) and 0 <= j < len(charts)) or i == j:
            raise InputError(f"overlap ({i}, {j}) names a bad chart index", block=where)
        overlaps[(i, j)] = ws.element(chart_names[i], t)
    transitions = {}
    for entry in spec.get("transitions", []):
        i, j = entry["pair"]
        if (i, j) not in overlaps:
            raise InputError(f"transition ({i}, {j}) without an overlap", block=where)
        comps = _components(inst, charts[i].carrier, charts[j].carrier, entry["matrix"],
                            f"{where}.transitions[{i},{j}]")
        transitions[(i, j)] = inst.morphism(charts[i].carrier, charts[j].carrier, comps)
    ws.schemes[name] = SchemeData(charts, overlaps, transitions, list(chart_names))


def _load_ideal_sheaf(ws: Workspace, name, spec, where):
    sname = spec.get("scheme")
    if sname not in ws.schemes:
        raise InputError(f"unknown scheme {sname!r}", block=where)
    sd = ws.schemes[sname]
    ideals = spec.get("ideals", [])
    if len(ideals) != len(sd.charts):
        raise InputError("one generator list per chart is required", block=where)
    ws.ideal_sheaves[name] = (sname, {i: [ws.element(sd.names[i], g) for g in gens]
                                      for i, gens in enumerate(ideals)})


_LOADERS = {
    "monoids": _load_monoid,
    "modules": _load_module,
    "morphisms": _load_morphism,
    "maps": _load_map,
    "elements": _load_element,
    "ideals": _load_ideal,
    "schemes": _load_scheme,
    "ideal_sheaves": _load_ideal_sheaf,
}


# -- emit ------------------------------------------------------------------------

def _emit_value(value, indent):
    if isinstance(value, dict) and indent < 3:
        if not value:
            return "{}"
        pad = "  " * (indent + 1)
        items = [f"{pad}{json.dumps(k)}: {_emit_value(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    return json.dumps(value, ensure_ascii=False)


def emit(ws: Workspace | dict) -> str:
    raw = ws.raw if isinstance(ws, Workspace) else ws
    ordered = {k: raw[k] for k in SECTIONS if k in raw}
    return _emit_value(ordered, 0) + "\n"
