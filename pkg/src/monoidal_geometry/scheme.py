"""Affine schemes, covers, integrality, function fields, gluing, closed subschemes.

Opens are always principal: ``Spec(A_t)`` inside ``Spec(A)``.  A glued scheme
is a list of chart monoids together with overlap elements ``t_ij`` and
transition isomorphisms ``(A_i)_{t_ij} -> (A_j)_{t_ji}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, product as iproduct

from .category import CMorphism
from .endring import FiniteRing, RingMap, e_of_morphism, quotient_ring, ring_iso_under
from .errors import InputError, Rejected, SelfTestFailure
from .linalg import Matrix, kernel_basis, kron, solve
from .localization import (
    LocalizationResult,
    algebra_module,
    base_change_module,
    localize_element,
    localize_multset,
    verify_epi,
)
from .monoid import MonoidMorphism, MonoidObject
from .quotient import (
    base_change_quotient,
    chain_stabilization_check,
    quotient_ideal,
    submodule_chain_from_elements,
)

EXHAUSTIVE_LIMIT = 729


class AffineScheme:
    """``Spec(A)``; the zero monoid is the empty scheme."""

    def __init__(self, monoid: MonoidObject):
        self.monoid = monoid

    @property
    def ring(self):
        return self.monoid.end

    @property
    def is_empty(self) -> bool:
        return self.monoid.is_zero()

    def __repr__(self):
        return f"Spec({self.monoid.name or self.monoid.carrier!r})"


# -- covers ----------------------------------------------------------------

@dataclass
class CoverCertificate:
    positive: bool
    elements: list
    witnesses: list | None = None
    proper_ideal: list | None = None

    def recheck(self, ring) -> bool:
        """Re-verify ``sum s_i t_i = 1`` (positive) or that 1 is outside the ideal (negative)."""
        if self.positive:
            total = ring.zero()
            for s, t in zip(self.witnesses, self.elements):
                total = ring.add(total, ring.mul(s, t))
            return total == ring.one()
        return ring.ideal_membership(self.elements, ring.one()) is None


def check_cover(a: MonoidObject, ts) -> CoverCertificate:
    """The principal opens ``Spec(A_t)`` cover ``Spec(A)`` iff the ``t`` generate the unit ideal."""
    E = a.end
    ts = [E.element(t) for t in ts]
    wit = E.ideal_membership(ts, E.one())
    if wit is not None:
        return CoverCertificate(True, ts, wit)
    return CoverCertificate(False, ts, proper_ideal=E.ideal_basis(ts))


def principal_open_nonempty(a: MonoidObject, t) -> bool:
    """``A_t != 0``: the eventual image of ``t`` acting on ``A`` is nonzero."""
    E = a.end
    cc = a.inst.chain_colimit(E.to_morphism(E.element(t)))
    return not cc.obj.is_zero()


def nonzero_elements(ring, limit: int = EXHAUSTIVE_LIMIT) -> tuple[list, bool]:
    """All nonzero elements over a small prime field, else basis elements and ``1 - b``.

    Returns the list and whether it is exhaustive.
    """
    F = ring.field
    n = ring.dim
    if F.characteristic and F.characteristic ** n <= limit:
        out = [tuple(v) for v in iproduct(range(F.characteristic), repeat=n) if any(v)]
        return out, True
    out = [ring.basis_element(i) for i in range(n)]
    for i in range(n):
        c = ring.sub(ring.one(), ring.basis_element(i))
        if not ring.is_zero(c) and c not in out:
            out.append(c)
    if not ring.is_zero(ring.one()) and ring.one() not in out:
        out.append(ring.one())
    return out, False


# -- integrality -----------------------------------------------------------

@dataclass
class Verdict:
    value: bool
    witness: object = None
    zero: bool = False


def is_reduced(a: MonoidObject) -> Verdict:
    E = a.end
    if a.is_zero():
        return Verdict(True, None, zero=True)
    nw = E.nilpotent_witness()
    return Verdict(nw is None, nw)


def is_weakly_integral(a: MonoidObject) -> Verdict:
    """E(A) is an integral domain; the witness is a zero-divisor pair."""
    if a.is_zero():
        return Verdict(False, None, zero=True)
    ok, wit = a.end.domain_verdict()
    return Verdict(ok, wit)


@dataclass
class IntegralityReport:
    integral: bool
    zero: bool
    reduced: Verdict
    weakly_integral: Verdict
    condition1: dict = dc_field(default_factory=dict)
    condition2: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)


def _component_ring(m: MonoidObject, u) -> FiniteRing:
    F = m.field
    mult = m.mult.comp(u)
    d = mult.rows
    table = [[mult.col(i * d + j) for j in range(d)] for i in range(d)]
    return FiniteRing(F, table, m.unit.comp(u).col(0))


def _generated_dims(k: MonoidObject, u, v) -> tuple:
    """Dimensions of the K-submodule generated by a vector ``v`` of ``K(u)``."""
    inst = k.inst
    F = k.field
    out = []
    for w in inst.opens:
        if inst.kind == "finvect" or inst.space.leq(w, u):
            r = k.carrier.restriction(u, w) @ Matrix.column(F, v)
            d = k.carrier.dim(w)
            if d == 0:
                out.append(0)
                continue
            cols = [(k.mult.comp(w) @ _kron_unit(F, d, i, r)).col(0) for i in range(d)]
            out.append(Matrix.from_columns(F, cols, d).rank())
        else:
            out.append(0)
    return tuple(out)


def _kron_unit(F, d, i, r: Matrix) -> Matrix:
    return kron(Matrix.unit_vector(F, d, i), r)


def simplicity_check(k: MonoidObject) -> dict:
    """Whether ``K`` has no K-submodules besides 0 and K.

    A nonzero vector at an open ``u`` generates a submodule living only on opens
    below ``u``; so ``K`` is simple exactly when it is nonzero at a single open
    and its ring there is a field.  The basis-vector orbit test is recorded too.
    """
    inst = k.inst
    support = [u for u in inst.opens if k.carrier.dim(u) > 0]
    orbit_rows = []
    for u in support:
        for i in range(k.carrier.dim(u)):
            v = tuple(k.field.one if j == i else k.field.zero for j in range(k.carrier.dim(u)))
            gen = _generated_dims(k, u, v)
            orbit_rows.append({"open": u, "basis": i, "generated": gen, "spans": gen == k.carrier.dims})
    orbit_ok = all(r["spans"] for r in orbit_rows)
    if len(support) != 1:
        return {"ok": False, "support": support, "orbit_ok": orbit_ok, "orbits": orbit_rows,
                "reason": "K is nonzero on more than one open" if support else "K = 0"}
    ring = _component_ring(k, support[0])
    field_ok, wit = ring.domain_verdict()
    return {"ok": field_ok, "support": support, "orbit_ok": orbit_ok, "orbits": orbit_rows,
            "reason": "" if field_ok else "ring of K at its support is not a field", "witness": wit}


def is_integral(a: MonoidObject) -> IntegralityReport:
    inst = a.inst
    if a.is_zero():
        return IntegralityReport(False, True, Verdict(True, zero=True), Verdict(False, zero=True),
                                 notes=["zero monoid: the empty scheme"])
    E = a.end
    red = is_reduced(a)
    weak = is_weakly_integral(a)
    span = [E.basis_element(i) for i in range(E.dim)]
    if weak.witness:
        span.extend(x for x in weak.witness if x not in span)
    cond1 = {"ok": True, "checked": len(span), "route": "kernels on a spanning family plus domain E(A)"}
    for x in span:
        if E.is_zero(x):
            continue
        k, _ = inst.kernel(E.to_morphism(x))
        if not k.is_zero():
            cond1.update(ok=False, element=x, kernel_dims=k.dims)
            break
        if weak.value and not E.is_unit(x):
            raise SelfTestFailure("nonzero element of a finite-dimensional domain is not a unit")
    if not weak.value:
        cond1["ok"] = False
        cond1.setdefault("reason", "E(A) is not an integral domain")
    report = IntegralityReport(False, False, red, weak, cond1)
    if not cond1["ok"]:
        report.condition2 = {"ok": None, "reason": "not evaluated"}
        return report
    kloc = localize_multset(a, [E.basis_element(i) for i in range(E.dim)])
    cond2 = simplicity_check(kloc.target)
    cond2["K_dims"] = kloc.target.dims
    report.condition2 = cond2
    report.integral = bool(cond2["ok"])
    if report.integral and not (red.value and weak.value):
        raise SelfTestFailure("integral monoid that is not reduced and weakly integral")
    return report


@dataclass
class IrreducibilityReport:
    ok: bool
    rows: list
    exhaustive: bool
    informational: bool


def irreducibility_probe(a: MonoidObject, pairs=None, integral: bool | None = None) -> IrreducibilityReport:
    """``A_{st} != 0`` for nonzero ``s, t``; hard failure on integral input."""
    E = a.end
    exhaustive = False
    if pairs is None:
        elems, exhaustive = nonzero_elements(E)
        pairs = list(combinations(elems, 2)) + [(x, x) for x in elems]
    if integral is None:
        integral = is_integral(a).integral
    rows = []
    for s, t in pairs:
        s, t = E.element(s), E.element(t)
        rows.append({"s": s, "t": t, "nonempty": principal_open_nonempty(a, E.mul(s, t))})
    ok = all(r["nonempty"] for r in rows)
    if integral and not ok:
        bad = next(r for r in rows if not r["nonempty"])
        raise SelfTestFailure(f"integral monoid with A_st = 0 at s={bad['s']}, t={bad['t']}")
    return IrreducibilityReport(ok, rows, exhaustive, not integral)


# -- function fields -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FunctionField:
    source: MonoidObject
    localization: LocalizationResult
    ring: FiniteRing
    inverses: dict
    provenance: list
    stability: list
    exhaustive: bool


def _fraction_monoid(a: MonoidObject) -> LocalizationResult:
    E = a.end
    gens = [E.basis_element(i) for i in range(E.dim)]
    return localize_multset(a, gens)


def function_field(a: MonoidObject, samples=None) -> FunctionField:
    """``E(F(A))`` with ``F(A) = A_S``, ``S`` the nonzero elements of E(A)."""
    rep = is_integral(a)
    if not rep.integral:
        wit = rep.condition1.get("element") or rep.weakly_integral.witness or rep.reduced.witness
        raise Rejected("not integral", reason="not integral", witness=wit)
    loc = _fraction_monoid(a)
    K = loc.target.end
    elems, exhaustive = nonzero_elements(K)
    inverses = {}
    for x in elems:
        y = K.inverse(x)
        if y is None or K.mul(x, y) != K.one():
            raise SelfTestFailure(f"function field element {x} has no inverse")
        inverses[x] = y
    ok, wit = K.domain_verdict()
    if not ok:
        raise SelfTestFailure("function field is not a field")
    E = a.end
    if samples is None:
        samples = [E.basis_element(i) for i in range(E.dim)]
    stability = []
    provenance = [{"open": "A", "element": E.one(), "dims": loc.target.dims}]
    for t in samples:
        t = E.element(t)
        if E.is_zero(t):
            continue
        lt = localize_element(a, t)
        inner = _fraction_monoid(lt.target)
        composite = inner.structure.mor @ lt.structure.mor
        inst = a.inst
        _, k1 = inst.kernel(composite)
        _, k2 = inst.kernel(loc.structure.mor)
        same = composite.target.dims == loc.target.dims and inst.subobject_equal(k1, k2)
        if not same:
            raise SelfTestFailure("function field changes under a principal open")
        stability.append({"t": t, "same": same})
        provenance.append({"open": "A_t", "element": t, "dims": inner.target.dims})
    return FunctionField(a, loc, K, inverses, provenance, stability, exhaustive)


@dataclass(frozen=True, eq=False)
class FieldMap:
    ring_map: RingMap
    dominance: list


def dominant_pullback(f: MonoidMorphism, probes=None) -> FieldMap:
    """The field map ``k(Spec A) -> k(Spec B)`` induced by ``f: A -> B``."""
    bad = f.violations()
    if bad:
        raise InputError(f"not a monoid morphism: {', '.join(bad)} fails")
    A, B = f.source, f.target
    for m, label in ((A, "source"), (B, "target")):
        if not is_integral(m).integral:
            raise Rejected(f"{label} is not integral", reason="not integral")
    EA = A.end
    ef = e_of_morphism(f)
    if probes is None:
        probes = nonzero_elements(EA)[0]
    dominance = []
    for t in probes:
        t = EA.element(t)
        ok = principal_open_nonempty(B, ef(t))
        dominance.append({"t": t, "nonempty": ok})
        if not ok:
            raise Rejected("morphism is not dominant", reason="not dominant", witness=t)
    la, lb = _fraction_monoid(A), _fraction_monoid(B)
    inst = A.inst
    h = inst.factor_through_epi(lb.structure.mor @ f.mor, la.structure.mor)
    kf = e_of_morphism(MonoidMorphism(la.target, lb.target, h))
    if not kf.is_injective():
        raise SelfTestFailure("field map is not injective")
    return FieldMap(kf, dominance)


# -- glued schemes ---------------------------------------------------------

@dataclass
class GlueReport:
    valid: bool
    failures: list
    notes: list = dc_field(default_factory=list)


class GluedScheme:
    """Charts, principal overlaps and validated transition isomorphisms."""

    def __init__(self, charts, names, overlaps, transitions, report):
        self.charts = list(charts)
        self.names = list(names)
        self.overlaps = overlaps
        self.transitions = transitions
        self.report = report

    @property
    def inst(self):
        return self.charts[0].inst

    def pairs(self):
        return sorted(self.overlaps)

    def global_ring(self) -> tuple[FiniteRing, Matrix]:
        """Equalizer of ``prod E(A_i)`` over the overlaps, with its inclusion matrix."""
        rings = [c.end for c in self.charts]
        F = self.charts[0].field
        offsets, pos = [], 0
        for r in rings:
            offsets.append(pos)
            pos += r.dim
        rows = []
        for (i, j) in self.pairs():
            if i > j:
                continue
            lij, lji = self.overlaps[(i, j)], self.overlaps[(j, i)]
            rho = e_of_morphism(self.transitions[(i, j)]).compose(e_of_morphism(lij.structure))
            sigma = e_of_morphism(lji.structure)
            target_dim = sigma.target.dim
            for k in range(target_dim):
                row = [F.zero] * pos
                for c in range(rings[i].dim):
                    row[offsets[i] + c] = rho.matrix[k, c]
                for c in range(rings[j].dim):
                    row[offsets[j] + c] = F.sub(row[offsets[j] + c], sigma.matrix[k, c])
                rows.append(row)
        K = kernel_basis(Matrix.from_rows(F, rows, pos)) if rows else Matrix.identity(F, pos)
        basis = K.columns()

        def mul(x, y):
            out = []
            for r, o in zip(rings, offsets):
                out.extend(r.mul(x[o:o + r.dim], y[o:o + r.dim]))
            return tuple(out)

        one = tuple(c for r in rings for c in r.one())

        def coords(v):
            return solve(K, Matrix.column(F, v)).col(0)

        table = [[coords(mul(x, y)) for y in basis] for x in basis]
        unit = coords(one) if basis else ()
        return FiniteRing(F, table, unit), K


def _as_transition(mor: CMorphism, a_i, a_j, lij: LocalizationResult, lji: LocalizationResult):
    """Accept a morphism on the localized charts, or a lift ``A_i -> A_j`` / ``A_i -> (A_j)_t``."""
    inst = a_i.inst
    src_loc, dst_loc = lij.target.carrier, lji.target.carrier
    if mor.source == src_loc and mor.target == dst_loc:
        return mor
    if mor.source == a_i.carrier:
        g = mor
        if mor.target == a_j.carrier:
            g = lji.structure.mor @ mor
        elif mor.target != dst_loc:
            raise InputError("transition has the wrong target")
        return inst.factor_through_epi(g, lij.structure.mor)
    raise InputError("transition has the wrong source")


def validate_gluing(charts, overlaps, transitions, names=None) -> tuple[GlueReport, GluedScheme | None]:
    """Check transition isomorphisms, inverses, triple overlaps and cocycles.

    ``overlaps[(i, j)]`` is ``t_ij`` in E(A_i); ``transitions[(i, j)]`` is a
    morphism ``(A_i)_{t_ij} -> (A_j)_{t_ji}`` or a lift out of ``A_i``.  Missing
    reverse transitions are filled in as inverses.
    """
    charts = list(charts)
    names = list(names) if names else [c.name or f"A{i}" for i, c in enumerate(charts)]
    if not charts:
        raise InputError("a scheme needs at least one chart")
    failures = []
    locs = {}
    for (i, j), t in overlaps.items():
        if (j, i) not in overlaps:
            raise InputError(f"overlap ({i}, {j}) has no partner element t_{j}{i}")
        locs[(i, j)] = localize_element(charts[i], t)
    trans = {}
    for (i, j), mor in transitions.items():
        if (i, j) not in locs:
            raise InputError(f"transition ({i}, {j}) without an overlap")
        try:
            g = _as_transition(mor, charts[i], charts[j], locs[(i, j)], locs[(j, i)])
        except InputError as exc:
            failures.append({"kind": "transition does not descend to the overlap", "pair": (i, j),
                             "detail": str(exc)})
            continue
        trans[(i, j)] = MonoidMorphism(locs[(i, j)].target, locs[(j, i)].target, g)
    for (i, j) in list(trans):
        if (j, i) not in trans and (j, i) not in transitions:
            g = trans[(i, j)]
            if g.mor.is_iso():
                trans[(j, i)] = MonoidMorphism(g.target, g.source, g.mor.inst.inverse(g.mor))
    for (i, j) in locs:
        if i != j and (i, j) not in trans and not any(f["pair"] == (i, j) for f in failures):
            failures.append({"kind": "missing transition", "pair": (i, j)})
    for (i, j), g in sorted(trans.items()):
        bad = g.violations()
        if bad:
            failures.append({"kind": "transition is not a monoid morphism", "pair": (i, j), "detail": bad})
        elif not g.mor.is_iso():
            failures.append({"kind": "transition is not an isomorphism", "pair": (i, j)})
    for (i, j) in sorted(trans):
        if i < j and (j, i) in trans:
            back = trans[(j, i)].mor @ trans[(i, j)].mor
            if back != back.inst.identity(back.source):
                failures.append({"kind": "transitions are not mutually inverse", "pair": (i, j)})
    notes = []
    for key, loc in locs.items():
        if not verify_epi(loc.structure).ok:
            raise SelfTestFailure(f"chart inclusion {key} is not an epimorphism")
    notes.append("every chart inclusion is a localization at an element: certified open immersion")
    if not failures:
        failures.extend(_check_triples(charts, overlaps, locs, trans))
    report = GlueReport(not failures, failures, notes)
    if failures:
        return report, None
    return report, GluedScheme(charts, names, locs, trans, report)


def _check_triples(charts, overlaps, locs, trans) -> list:
    n = len(charts)
    failures = []
    inst = charts[0].inst
    cache = {}

    def triple_loc(i, j, k):
        key = (i, frozenset((j, k)))
        if key not in cache:
            E = charts[i].end
            cache[key] = localize_element(charts[i], E.mul(overlaps[(i, j)], overlaps[(i, k)]))
        return cache[key]

    def restrict(i, j, k):
        """``(A_i)_{t_ij} -> W_i``, the triple overlap seen from chart ``i``."""
        w = triple_loc(i, j, k)
        return inst.factor_through_epi(w.structure.mor, locs[(i, j)].structure.mor)

    def induced(i, j, k):
        """``W_i -> W_j`` induced by ``g_ij``."""
        return inst.factor_through_epi(restrict(j, i, k) @ trans[(i, j)].mor, restrict(i, j, k))

    for i, j, k in combinations(range(n), 3):
        if not all((x, y) in trans for x, y in ((i, j), (j, k), (i, k), (j, i), (k, j), (k, i))):
            continue
        try:
            hij, hjk, hik = induced(i, j, k), induced(j, k, i), induced(i, k, j)
        except InputError:
            failures.append({"kind": "transitions disagree on the triple overlap", "triple": (i, j, k),
                             "pair": (i, j)})
            continue
        if not (hij.is_iso() and hjk.is_iso() and hik.is_iso()):
            failures.append({"kind": "triple overlap maps are not isomorphisms", "triple": (i, j, k),
                             "pair": (i, j)})
        elif hjk @ hij != hik:
            failures.append({"kind": "cocycle identity fails", "triple": (i, j, k), "pair": (i, k)})
    return failures


def build_glued(charts, overlaps=None, transitions=None, names=None) -> GluedScheme:
    report, scheme = validate_gluing(charts, overlaps or {}, transitions or {}, names)
    if scheme is None:
        first = report.failures[0]
        where = first.get("triple", first.get("pair"))
        err = InputError(f"invalid gluing data: {first['kind']} at {where}")
        err.report = report
        raise err
    return scheme


def affine(a: MonoidObject, name=None) -> GluedScheme:
    return build_glued([a], names=[name or a.name or "A"])


# -- quasi-coherent ideals and algebras ------------------------------------

@dataclass
class SheafReport:
    ok: bool
    failures: list
    rows: list = dc_field(default_factory=list)


class QCIdealSheaf:
    """Ideals ``J_i`` of ``E(A_i)`` that agree on overlaps."""

    def __init__(self, scheme: GluedScheme, ideals):
        self.scheme = scheme
        self.ideals = {}
        for i, c in enumerate(scheme.charts):
            gens = ideals.get(i, ideals.get(scheme.names[i], ()))
            self.ideals[i] = tuple(c.end.element(g) for g in gens)

    def check(self) -> SheafReport:
        x = self.scheme
        failures, rows = [], []
        for (i, j) in x.pairs():
            lij, lji = x.overlaps[(i, j)], x.overlaps[(j, i)]
            from_i = [e_of_morphism(x.transitions[(i, j)])(e_of_morphism(lij.structure)(g))
                      for g in self.ideals[i]]
            from_j = [e_of_morphism(lji.structure)(g) for g in self.ideals[j]]
            ring = lji.target.end
            same = ring.ideal_equal(from_i, from_j)
            rows.append({"pair": (i, j), "equal": same})
            if not same:
                failures.append({"kind": "ideals disagree on the overlap", "pair": (i, j)})
        return SheafReport(not failures, failures, rows)


def qc_algebra_sheaf_check(x: GluedScheme, algebras, transitions=None) -> SheafReport:
    """Chart algebras ``f_i: A_i -> B_i`` glue iff they agree after base change to overlaps.

    Without explicit ``transitions`` the structure maps restricted to each
    overlap must be onto, which pins the comparison map down.
    """
    transitions = transitions or {}
    inst = x.inst
    failures, rows = [], []
    local = {}
    for (i, j), lij in x.overlaps.items():
        f = algebras[i]
        tb = e_of_morphism(f)(lij.element)
        lb = localize_element(f.target, tb)
        rt, unit_map = base_change_module(algebra_module(f), lij.structure)
        _, k1 = inst.kernel(unit_map)
        _, k2 = inst.kernel(lb.structure.mor)
        if rt.module.carrier.dims != lb.target.dims or not inst.subobject_equal(k1, k2):
            raise SelfTestFailure("B (x)_A A_t differs from B_{f(t)}")
        c = inst.factor_through_epi(lb.structure.mor @ f.mor, lij.structure.mor)
        local[(i, j)] = (lb, c)
    for (i, j) in x.pairs():
        lb_i, c_i = local[(i, j)]
        lb_j, c_j = local[(j, i)]
        g = x.transitions[(i, j)].mor
        target_map = c_j @ g
        if (i, j) in transitions:
            psi = transitions[(i, j)]
            ok = (psi.is_iso() and psi @ c_i == target_map
                  and not MonoidMorphism(lb_i.target, lb_j.target, psi).violations())
        else:
            if not c_i.is_epi():
                raise InputError(f"overlap {(i, j)} needs explicit algebra transition data")
            try:
                psi = inst.factor_through_epi(target_map, c_i)
                ok = psi.is_iso()
            except InputError:
                ok = False
        rows.append({"pair": (i, j), "ok": ok, "dims": (lb_i.target.dims, lb_j.target.dims)})
        if not ok:
            failures.append({"kind": "algebras disagree on the overlap", "pair": (i, j)})
    return SheafReport(not failures, failures, rows)


# -- closed subschemes -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClosedSubscheme:
    parent: GluedScheme
    sheaf: QCIdealSheaf
    quotients: list
    scheme: GluedScheme
    base_change: list
    stabilization: list
    label: str = "Y_J"

    @property
    def is_empty(self) -> bool:
        return all(q.target.is_zero() for q in self.quotients)


def closed_subscheme(x: GluedScheme, j: QCIdealSheaf) -> ClosedSubscheme:
    rep = j.check()
    if not rep.ok:
        f = rep.failures[0]
        raise Rejected(f"ideal sheaf is not compatible on overlap {f['pair']}", reason=f["kind"],
                       witness=f["pair"])
    inst = x.inst
    quotients = [quotient_ideal(c, j.ideals[i]) for i, c in enumerate(x.charts)]
    overlaps, transitions = {}, {}
    for (i, k), lik in x.overlaps.items():
        overlaps[(i, k)] = e_of_morphism(quotients[i].projection)(lik.element)
    qlocs = {key: localize_element(quotients[key[0]].target, t) for key, t in overlaps.items()}
    base_change = []
    for (i, k) in x.pairs():
        lik, lki = x.overlaps[(i, k)], x.overlaps[(k, i)]
        # A_i -> A_i/J_i -> (A_i/J_i)_t and A_k -> ... ; descend g_ik to the quotient overlaps
        u_i = qlocs[(i, k)].structure.mor @ quotients[i].projection.mor
        v_k = qlocs[(k, i)].structure.mor @ quotients[k].projection.mor
        w_k = inst.factor_through_epi(v_k, lki.structure.mor)
        g = inst.factor_through_epi(w_k @ x.transitions[(i, k)].mor @ lik.structure.mor, u_i)
        transitions[(i, k)] = g
        bc = base_change_quotient(quotients[i], lik)
        base_change.append({"pair": (i, k), "ok": bc.ok, "dims": (bc.left_dims, bc.right_dims)})
    names = [f"{n}/J" for n in x.names]
    report, y = validate_gluing([q.target for q in quotients], overlaps, transitions, names)
    if y is None:
        raise SelfTestFailure(f"quotient charts fail to glue: {report.failures[0]}")
    stab = []
    for q in quotients:
        if q.target.is_zero():
            stab.append({"dims": q.target.dims, "index": 0})
            continue
        qa = q.target
        E = qa.end
        chain = submodule_chain_from_elements(qa, [E.basis_element(b) for b in range(E.dim)])
        r = chain_stabilization_check(qa, chain)
        stab.append({"dims": qa.dims, "index": r.index})
    return ClosedSubscheme(x, j, quotients, y, base_change, stab)


# -- local rings -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LocalRingResult:
    chart: int
    ring: FiniteRing
    projection: RingMap
    maximal_ideal: list
    residue: RingMap
    pairs_route: dict
    locality: dict
    chart_independence: list


def _local_ring(ring: FiniteRing, prime) -> tuple[RingMap, list, int]:
    """``R_P = R / P^N`` at the stable power, with ``N``."""
    power, n = ring.stable_power(list(prime)) if prime else ([], 1)
    proj = quotient_ring(ring, power)
    return proj, power, n


def local_ring_at(x: GluedScheme, y: ClosedSubscheme, chart: int | None = None) -> LocalRingResult:
    """Classical localization of ``E(A_i)`` at the prime ``J_i`` on a chart meeting ``Y``."""
    if y.is_empty:
        raise Rejected("closed subscheme is empty", reason="Y empty")
    for i, q in enumerate(y.quotients):
        if not q.target.is_zero() and not is_integral(q.target).integral:
            raise Rejected(f"closed subscheme is not integral on chart {i}", reason="Y not integral", witness=i)
    meeting = [i for i, q in enumerate(y.quotients) if not q.target.is_zero()]
    i = meeting[0] if chart is None else chart
    if i not in meeting:
        raise InputError(f"chart {i} does not meet the closed subscheme")
    a = x.charts[i]
    R = a.end
    P = list(y.sheaf.ideals[i])
    proj, power, _ = _local_ring(R, P)
    L = proj.target
    m = L.ideal_basis([proj(g) for g in P])
    res = quotient_ring(L, m)
    residue_ok, _ = res.target.domain_verdict()
    nil = L.stable_power(m)[0] if m else []
    locality = {"maximal_nilpotent": not nil, "residue_is_field": residue_ok}
    # complement of m consists of units
    elems, exhaustive = nonzero_elements(L)
    checked = 0
    for v in elems:
        if not res.target.is_zero(res(v)):
            checked += 1
            if not L.is_unit(v):
                raise SelfTestFailure(f"element {v} outside the maximal ideal is not a unit")
    locality.update(checked=checked, exhaustive=exhaustive)
    if not (residue_ok and not nil):
        raise SelfTestFailure("localization at a prime is not local")
    # the (U, t_U) germs: one principal open meeting Y that already realizes R_P
    f = R.ideal_identity(power) if power else R.zero()
    if f is None:
        raise SelfTestFailure("stable power of the prime is not generated by an idempotent")
    s = R.sub(R.one(), f)
    germ = localize_element(a, s)
    er = e_of_morphism(germ.structure)
    pairs_ok = ring_iso_under(er, proj)
    extra = []
    for b in range(R.dim):
        t = R.basis_element(b)
        if R.ideal_membership(P, t) is None:
            inner = localize_element(germ.target, er(t))
            extra.append(inner.target.dims == germ.target.dims)
    pairs_route = {"element": s, "agrees": pairs_ok, "stable_under_further_opens": all(extra)}
    if not pairs_ok or not all(extra):
        raise SelfTestFailure("germ ring along Y disagrees with the prime localization")
    independence = []
    for (a_i, k) in x.pairs():
        if a_i != i or k not in meeting:
            continue
        lik = x.overlaps[(i, k)]
        O = lik.target.end
        q_ext = [e_of_morphism(lik.structure)(g) for g in P]
        if O.dim == 0 or O.ideal_membership(q_ext, O.one()) is not None:
            continue
        oproj, _, _ = _local_ring(O, q_ext)
        composite = oproj.compose(e_of_morphism(lik.structure))
        same_i = ring_iso_under(composite, proj)
        Rk = x.charts[k].end
        Pk = list(y.sheaf.ideals[k])
        kproj, _, _ = _local_ring(Rk, Pk)
        independence.append({"pair": (i, k), "same_as_overlap": same_i, "dims": (L.dim, kproj.target.dim)})
        if not same_i or L.dim != kproj.target.dim:
            raise SelfTestFailure(f"local ring depends on the chart at overlap {(i, k)}")
    return LocalRingResult(i, L, proj, m, res, pairs_route, locality, independence)

