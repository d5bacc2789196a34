"""Property suites over the corpus.

Each suite returns a ``SuiteResult`` counting the checks it ran and listing the
failures.  A failure means a proven identity did not hold on computed data,
so callers treat any failure as a self-test failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .category import FiniteSpace, FinVect, Presheaf
from .corpus import CorpusItem, corpus_modules, presheaf_corpus, sierpinski_split_monoid
from .crosscheck import (
    Bridge,
    CrossCheckResult,
    compare_cover,
    compare_fraction_field,
    compare_localization,
    compare_quotient,
    cover_queries,
)
from .errors import Rejected, SelfTestFailure
from .fields import QQ, PrimeField
from .localization import localize_element, standard_probes, verify_epi, verify_flat, zero_detection
from .monoid import algebra, product_monoid
from .quotient import base_change_quotient, quotient_ideal, quotient_sequence
from .scheme import (
    QCIdealSheaf,
    build_glued,
    check_cover,
    closed_subscheme,
    irreducibility_probe,
    is_integral,
    is_reduced,
    is_weakly_integral,
    local_ring_at,
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, detail):
        self.checked += 1
        if not ok:
            self.failures.append(detail)

    def merge(self, other: "SuiteResult"):
        self.checked += other.checked
        self.failures.extend(other.failures)


SUITES = {
    1: "cover biconditional",
    2: "E-localization compatibility",
    3: "quotient compatibility",
    4: "base change of quotients",
    5: "flat epimorphism certificates",
    6: "zero detection on covers",
    7: "integrality hierarchy",
    8: "function field",
    9: "closed subscheme gluing",
    10: "presheaf global sections",
}


def _from_crosscheck(name, cc: CrossCheckResult, kinds) -> SuiteResult:
    res = SuiteResult(name)
    res.checked = sum(cc.counts.get(k, 0) for k in kinds)
    res.failures = [d for d in cc.discrepancies if d["kind"] in kinds]
    return res


def _guarded(res: SuiteResult, label, fn):
    try:
        res.record(bool(fn()), label)
    except SelfTestFailure as exc:
        res.record(False, {"query": label, "error": str(exc)})


def suite_cover(item: CorpusItem) -> SuiteResult:
    cc = CrossCheckResult()
    bridge = Bridge(item.monoid)
    for ts in cover_queries(item.monoid):
        compare_cover(bridge, ts, cc, item.name)
    return _from_crosscheck(SUITES[1], cc, ("cover", "cover-certificate"))


def suite_localization(item: CorpusItem) -> SuiteResult:
    cc = CrossCheckResult()
    bridge = Bridge(item.monoid)
    E = item.monoid.end
    for i in range(E.dim):
        compare_localization(bridge, E.basis_element(i), cc, item.name)
    return _from_crosscheck(SUITES[2], cc, ("localization", "localization-search"))


def _generator_sets(a, k_max=2):
    E = a.end
    basis = [E.basis_element(i) for i in range(E.dim)]
    return [list(g) for k in range(1, k_max + 1) for g in combinations(basis, k)]


def suite_quotient(item: CorpusItem) -> SuiteResult:
    """E(A/J) against E(A)/J (oracle and classical), and the iterated quotient against
    the relative tensor of the A/t_iA (checked inside ``quotient_sequence``)."""
    cc = CrossCheckResult()
    bridge = Bridge(item.monoid)
    res = SuiteResult(SUITES[3])
    for gens in _generator_sets(item.monoid):
        try:
            compare_quotient(bridge, gens, cc, item.name)
        except SelfTestFailure as exc:
            res.record(False, {"monoid": item.name, "gens": gens, "error": str(exc)})
        if len(gens) > 1:
            _guarded(res, (item.name, gens), lambda: quotient_sequence(item.monoid, gens).checks["tensor_route"])
    res.merge(_from_crosscheck(SUITES[3], cc, ("quotient", "quotient-classical")))
    return res


def suite_base_change(item: CorpusItem) -> SuiteResult:
    a = item.monoid
    E = a.end
    res = SuiteResult(SUITES[4])
    for gens in _generator_sets(a):
        q = quotient_ideal(a, gens)
        for i in range(E.dim):
            t = E.basis_element(i)
            _guarded(res, (item.name, gens, t), lambda: base_change_quotient(q, localize_element(a, t)).ok)
    return res


def suite_flat_epi(item: CorpusItem) -> SuiteResult:
    a = item.monoid
    E = a.end
    res = SuiteResult(SUITES[5])
    probes = standard_probes(a)
    if len(probes) < 3:
        res.record(False, {"monoid": item.name, "error": "fewer than three probe sequences"})
    for i in range(E.dim):
        loc = localize_element(a, E.basis_element(i))
        _guarded(res, (item.name, i, "epi"), lambda: verify_epi(loc.structure).ok)
        _guarded(res, (item.name, i, "flat"), lambda: verify_flat(loc.structure, probes, hard=False).ok)
    return res


def suite_zero_detection(item: CorpusItem) -> SuiteResult:
    a = item.monoid
    E = a.end
    res = SuiteResult(SUITES[6])
    basis = [E.basis_element(i) for i in range(E.dim)]
    covers = [list(c) for k in range(1, E.dim + 1) for c in combinations(basis, k)
              if check_cover(a, list(c)).positive]
    modules = corpus_modules(a)
    for ts in covers:
        for m in modules:
            def agree():
                whole, parts = zero_detection(m, ts)
                return whole == all(parts)
            _guarded(res, (item.name, ts, m.carrier.dims), agree)
    return res


# the dimension-2 F2 classification: (integral, reduced, weakly integral)
F2_DIM2 = {
    "F4": (True, True, True),
    "F2xF2": (False, True, False),
    "F2[x]/(x^2)": (False, False, False),
}


def suite_integrality(item: CorpusItem) -> SuiteResult:
    a = item.monoid
    res = SuiteResult(SUITES[7])
    rep = is_integral(a)
    red = rep.reduced.value
    weak = rep.weakly_integral.value
    res.record(not rep.integral or (weak and red), {"monoid": item.name, "rule": "integral => weak and reduced"})
    res.record(red == is_reduced(a).value and weak == is_weakly_integral(a).value,
               {"monoid": item.name, "rule": "standalone verdicts agree"})
    probe = irreducibility_probe(a)
    if red and probe.ok:
        res.record(weak, {"monoid": item.name, "rule": "reduced and irreducible => weakly integral"})
    if a.field == PrimeField(2) and item.name in F2_DIM2:
        res.record((rep.integral, red, weak) == F2_DIM2[item.name],
                   {"monoid": item.name, "rule": "dimension-2 classification", "got": (rep.integral, red, weak)})
    return res


def suite_function_field(item: CorpusItem) -> SuiteResult:
    cc = CrossCheckResult()
    res = SuiteResult(SUITES[8])
    try:
        compare_fraction_field(Bridge(item.monoid), cc, item.name)
    except SelfTestFailure as exc:
        res.record(False, {"monoid": item.name, "error": str(exc)})
    kinds = ("integral-vs-field", "function-field", "function-field-stable", "function-field-inverses",
             "function-field-rejected")
    res.merge(_from_crosscheck(SUITES[8], cc, kinds))
    return res


PER_MONOID = {
    1: suite_cover,
    2: suite_localization,
    3: suite_quotient,
    4: suite_base_change,
    5: suite_flat_epi,
    6: suite_zero_detection,
    7: suite_integrality,
    8: suite_function_field,
}


def run_monoid_suites(item: CorpusItem, which=None) -> dict:
    out = {}
    for k, fn in PER_MONOID.items():
        if which is None or k in which:
            try:
                out[k] = fn(item)
            except SelfTestFailure as exc:
                r = SuiteResult(SUITES[k])
                r.record(False, {"monoid": item.name, "error": str(exc)})
                out[k] = r
    return out


# -- gluing --------------------------------------------------------------------

def hand_built_schemes() -> list:
    """``(name, scheme, ideal generators per chart)`` for the gluing suite."""
    out = []
    inst = FinVect(QQ)
    q = algebra(inst, [[[1]]], [1], name="Q")
    qq = product_monoid(q, q, name="QxQ")
    e1, e2 = (1, 0), (0, 1)
    idq = inst.identity(qq.carrier)
    two = build_glued([qq, qq], {(0, 1): e1, (1, 0): e1}, {(0, 1): idq}, names=["U0", "U1"])
    out.append(("two QxQ charts along the first factor", two, {0: [e2], 1: [e2]}))
    three = build_glued([qq, qq, qq], {(i, j): e1 for i in range(3) for j in range(3) if i != j},
                        {(i, j): idq for i in range(3) for j in range(3) if i < j}, names=["U0", "U1", "U2"])
    out.append(("three QxQ charts along the first factor", three, {0: [e2], 1: [e2], 2: [e2]}))
    s = sierpinski_split_monoid()
    ids = s.inst.identity(s.carrier)
    sier = build_glued([s, s], {(0, 1): e1, (1, 0): e1}, {(0, 1): ids}, names=["V0", "V1"])
    out.append(("two Sierpinski presheaf charts", sier, {0: [e2], 1: [e2]}))
    f3 = FinVect(PrimeField(3))
    dual = algebra(f3, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0], name="F3[x]/(x^2)")
    idd = f3.identity(dual.carrier)
    dd = build_glued([dual, dual], {(0, 1): (1, 0), (1, 0): (1, 0)}, {(0, 1): idd}, names=["W0", "W1"])
    out.append(("two F3[x]/(x^2) charts along the whole chart", dd, {0: [(0, 1)], 1: [(0, 1)]}))
    return out


def suite_gluing(schemes=None) -> SuiteResult:
    res = SuiteResult(SUITES[9])
    for name, x, gens in schemes or hand_built_schemes():
        try:
            y = closed_subscheme(x, QCIdealSheaf(x, gens))
            res.record(all(row["ok"] for row in y.base_change), {"scheme": name, "rule": "base-change squares"})
            res.record(y.scheme.report.valid, {"scheme": name, "rule": "quotient charts glue"})
            lr = local_ring_at(x, y)
            loc = lr.locality
            res.record(loc["maximal_nilpotent"] and loc["residue_is_field"] and lr.pairs_route["agrees"],
                       {"scheme": name, "rule": "locality"})
        except (SelfTestFailure, Rejected) as exc:
            res.record(False, {"scheme": name, "error": str(exc)})
    return res


# -- presheaves ------------------------------------------------------------------

def suite_presheaf(count: int = 24, seed: int = 0, field=QQ) -> SuiteResult:
    """``dim Hom(1, X)`` (naturality solve) against ``dim X(top)``."""
    res = SuiteResult(SUITES[10])
    for space_name, x in presheaf_corpus(count, seed, field):
        inst = x.inst
        got = len(inst.global_sections(x))
        res.record(got == x.dim(inst.top), {"space": space_name, "dims": x.dims, "hom": got})
    return res


def presheaf_spaces():
    return [FiniteSpace.point(), FiniteSpace.sierpinski(), FiniteSpace.discrete_two(), FiniteSpace.chain(3)]


def presheaf_instance(space, field=QQ):
    return Presheaf(space, field)
