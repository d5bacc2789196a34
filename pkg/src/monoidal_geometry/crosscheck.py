"""Engine against oracle on FinVect monoids.

The oracle sees only the multiplication table of ``A``; the engine works in
E(A) coordinates.  The bridge is the matrix ``H`` whose columns are the chosen
basis of Hom(1, A), so ``x`` in E(A) is ``H x`` in ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, product as iproduct

from .endring import e_of_morphism
from .errors import InputError, Rejected
from .linalg import Matrix
from .localization import localize_element
from .monoid import MonoidObject
from .oracle import (
    ClassicalMap,
    ClassicalRing,
    induced_ring_iso,
    oracle_fraction_field,
    oracle_ideal_membership,
    oracle_is_field,
    oracle_localize,
    oracle_quotient,
)
from .quotient import e_quotient_matches, quotient_ideal
from .scheme import check_cover, function_field, is_integral


class Bridge:
    """Classical shadow of ``A`` plus the coordinate change from E(A)."""

    def __init__(self, a: MonoidObject):
        if a.inst.kind != "finvect":
            raise InputError("the oracle bridge handles FinVect monoids only")
        self.monoid = a
        F = a.field
        n = a.carrier.total_dim
        self.ring = ClassicalRing.from_mult_matrix(F, a.mult.mat, a.unit.mat.col(0))
        E = a.end
        self.H = Matrix.from_columns(F, [h.mat.col(0) for h in E.hom1.basis], n) if n else Matrix.zeros(F, 0, 0)
        self.H_inv = self.H.inverse() if n else self.H

    def to_classical(self, x) -> tuple:
        F = self.monoid.field
        return (self.H @ Matrix.column(F, self.monoid.end.element(x))).col(0) if self.ring.dim else ()


@dataclass
class CrossCheckResult:
    counts: dict = dc_field(default_factory=dict)
    discrepancies: list = dc_field(default_factory=list)

    def add(self, kind, monoid, query, engine, oracle):
        self.counts[kind] = self.counts.get(kind, 0) + 1
        if engine != oracle:
            self.discrepancies.append({"kind": kind, "monoid": monoid, "query": query,
                                       "engine": engine, "oracle": oracle})

    def merge(self, other: "CrossCheckResult"):
        for k, v in other.counts.items():
            self.counts[k] = self.counts.get(k, 0) + v
        self.discrepancies.extend(other.discrepancies)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def cover_queries(a: MonoidObject) -> list[list]:
    """All subsets of the E(A) basis, plus singletons and pairs of nonzero elements
    when the ring is small enough to list (singletons only up to 27 elements,
    pairs up to 9)."""
    E = a.end
    n = E.dim
    basis = [E.basis_element(i) for i in range(n)]
    out = [[basis[i] for i in idx] for k in range(n + 1) for idx in combinations(range(n), k)]
    p = E.field.characteristic
    if p and p ** n <= 27:
        elems = [tuple(E.field(c) for c in v) for v in iproduct(range(p), repeat=n) if any(v)]
        out.extend([x] for x in elems)
        if p ** n <= 9:
            out.extend([x, y] for x, y in combinations(elems, 2))
    elif not p:
        one = E.one()
        extra = [E.sub(one, b) for b in basis] + [E.add(b, c) for b, c in combinations(basis, 2)]
        extra = [x for x in extra if not E.is_zero(x)]
        out.extend([x] for x in extra)
        out.extend([x, b] for x in extra for b in basis)
    return out


def compare_cover(bridge: Bridge, ts, result: CrossCheckResult, name=""):
    a = bridge.monoid
    E = a.end
    cert = check_cover(a, ts)
    if not cert.recheck(E):
        result.add("cover-certificate", name, ts, False, True)
    member, _ = oracle_ideal_membership(bridge.ring, [bridge.to_classical(t) for t in ts], bridge.ring.unit)
    result.add("cover", name, ts, cert.positive, member)


def compare_localization(bridge: Bridge, t, result: CrossCheckResult, name=""):
    a = bridge.monoid
    loc = localize_element(a, t)
    et = e_of_morphism(loc.structure)
    Et = loc.target.end
    oring, omap, notes = oracle_localize(bridge.ring, bridge.to_classical(t))
    same = (et.target.dim == oring.dim
            and induced_ring_iso(omap, et.matrix @ bridge.H_inv, Et.mul, Et.one()))
    result.add("localization", name, t, True, same)
    if "search_agrees" in notes:
        result.add("localization-search", name, t, True, notes["search_agrees"])


def compare_quotient(bridge: Bridge, gens, result: CrossCheckResult, name=""):
    a = bridge.monoid
    q = quotient_ideal(a, gens)
    ep = e_of_morphism(q.projection)
    Eq = q.target.end
    oring, omap = oracle_quotient(bridge.ring, [bridge.to_classical(g) for g in gens])
    same = ep.target.dim == oring.dim and induced_ring_iso(omap, ep.matrix @ bridge.H_inv, Eq.mul, Eq.one())
    result.add("quotient", name, gens, True, same)
    result.add("quotient-classical", name, gens, True, e_quotient_matches(q))


def compare_fraction_field(bridge: Bridge, result: CrossCheckResult, name=""):
    """Integral monoids only: E(F(A)) against the oracle fraction field.  Non-integral
    monoids are compared on the verdict alone."""
    a = bridge.monoid
    integral = is_integral(a).integral
    field_ok, _ = oracle_is_field(bridge.ring)
    result.add("integral-vs-field", name, None, integral, field_ok)
    if not integral:
        try:
            function_field(a)
        except Rejected:
            result.add("function-field-rejected", name, None, True, True)
        else:
            result.add("function-field-rejected", name, None, False, True)
        return
    E = a.end
    p = E.field.characteristic
    if p and p ** E.dim <= 27:
        samples = [tuple(E.field(c) for c in v) for v in iproduct(range(p), repeat=E.dim) if any(v)]
    else:
        samples = None
    ff = function_field(a, samples)
    oring, inverses = oracle_fraction_field(bridge.ring)
    ek = e_of_morphism(ff.localization.structure)
    ident = ClassicalMap(oring, oring, Matrix.identity(oring.field, oring.dim))
    same = ek.target.dim == oring.dim and induced_ring_iso(ident, ek.matrix @ bridge.H_inv, ff.ring.mul,
                                                            ff.ring.one())
    result.add("function-field", name, None, True, same)
    result.add("function-field-stable", name, None, True, all(s["same"] for s in ff.stability))
    if ff.exhaustive:
        result.add("function-field-inverses", name, None, len(ff.inverses), len(inverses))


def cross_check_monoid(a: MonoidObject, name: str = "", quotients: bool = True) -> CrossCheckResult:
    res = CrossCheckResult()
    bridge = Bridge(a)
    E = a.end
    for ts in cover_queries(a):
        compare_cover(bridge, ts, res, name)
    basis = [E.basis_element(i) for i in range(E.dim)]
    for t in basis:
        compare_localization(bridge, t, res, name)
    if quotients:
        for k in (1, 2):
            for gens in combinations(basis, k):
                compare_quotient(bridge, list(gens), res, name)
    compare_fraction_field(bridge, res, name)
    return res


def cross_check(items, quotients: bool = True) -> CrossCheckResult:
    """Run the battery over ``(name, monoid)`` pairs or corpus items."""
    total = CrossCheckResult()
    for item in items:
        name, a = (item.name, item.monoid) if hasattr(item, "monoid") else item
        total.merge(cross_check_monoid(a, name, quotients))
    return total


def discrepancy_table(result: CrossCheckResult) -> list[str]:
    lines = [f"{'kind':<24} {'monoid':<20} query / engine / oracle"]
    for d in result.discrepancies:
        lines.append(f"{d['kind']:<24} {d['monoid']:<20} {d['query']} / {d['engine']} / {d['oracle']}")
    return lines
