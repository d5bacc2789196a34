"""Quotient monoids A/tA, A/(t_1, ..., t_k)A and A/J for ideals J of E(A)."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .category import CMorphism
from .endring import EndRing, RingMap, e_of_morphism, quotient_ring, ring_iso_under
from .errors import InputError, SelfTestFailure
from .linalg import Matrix, same_column_space
from .localization import LocalizationResult, algebra_module, certify_open_immersion
from .monoid import (
    MonoidMorphism,
    MonoidObject,
    check_monoid,
    identity_morphism,
    quotient_module,
    relative_tensor,
)


@dataclass(frozen=True, eq=False)
class QuotientResult:
    source: MonoidObject
    target: MonoidObject
    projection: MonoidMorphism
    generators: tuple
    checks: dict = dc_field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.target.is_zero()


@dataclass(frozen=True)
class IdealHandle:
    ring: EndRing
    generators: tuple

    @property
    def proper(self) -> bool:
        return self.ring.ideal_membership(list(self.generators), self.ring.one()) is None

    def basis(self) -> list[tuple]:
        return self.ring.ideal_basis(list(self.generators))

    def contains(self, x) -> bool:
        return self.ring.ideal_membership(list(self.generators), x) is not None


def ideal(a: MonoidObject, generators) -> IdealHandle:
    E = a.end
    return IdealHandle(E, tuple(E.element(g) for g in generators))


def _descend_monoid(a: MonoidObject, p: CMorphism, name=None) -> MonoidObject:
    inst = a.inst
    try:
        mult = inst.factor_through_epi(p @ a.mult, inst.tensor_mor(p, p))
    except InputError as exc:
        raise SelfTestFailure(f"multiplication does not descend to the quotient: {exc}") from exc
    q = MonoidObject(p.target, mult, p @ a.unit, name)
    rep = check_monoid(q)
    if not rep.ok:
        raise SelfTestFailure(f"quotient fails the monoid axioms: {rep.violations[0]}")
    return q


def _check_e_quotient(proj: MonoidMorphism, gens) -> RingMap:
    """E(A/J) = E(A)/J: E(p) is onto with kernel the ideal generated by ``gens``."""
    ep = e_of_morphism(proj)
    E = proj.source.end
    if ep.matrix.rank() != ep.target.dim:
        raise SelfTestFailure("E(A) -> E(A/J) is not surjective")
    ker = ep.kernel()
    ideal_cols = E.ideal_basis(list(gens))
    F = E.field
    k = Matrix.from_columns(F, ker, E.dim) if ker else Matrix.zeros(F, E.dim, 0)
    j = Matrix.from_columns(F, ideal_cols, E.dim) if ideal_cols else Matrix.zeros(F, E.dim, 0)
    if not same_column_space(k, j):
        raise SelfTestFailure("kernel of E(A) -> E(A/J) differs from J")
    return ep


def quotient_element(a: MonoidObject, t) -> QuotientResult:
    """``A/tA``, the cokernel of the action of ``t``."""
    inst = a.inst
    E = a.end
    t = E.element(t)
    _, p = inst.cokernel(E.to_morphism(t))
    q = _descend_monoid(a, p, name=f"{a.name or 'A'}/t")
    proj = MonoidMorphism(a, q, p)
    if proj.violations():
        raise SelfTestFailure("A -> A/tA is not a monoid morphism")
    _check_e_quotient(proj, [t])
    return QuotientResult(a, q, proj, (t,), {"e_quotient": True})


def _tensor_route(a: MonoidObject, ts) -> CMorphism:
    """``A -> A/t_1A (x)_A ... (x)_A A/t_kA``, ``x -> x (1 (x) ... (x) 1)``."""
    inst = a.inst
    E = a.end
    reg = a.regular
    mods, ones = [], []
    for t in ts:
        _, p = inst.cokernel(E.to_morphism(t))
        mods.append(quotient_module(reg, p))
        ones.append(p @ a.unit)
    current, one = mods[0], ones[0]
    for m, o in zip(mods[1:], ones[1:]):
        rt = relative_tensor(current, m)
        one = rt.projection @ inst.tensor_mor(one, o)
        current = rt.module
    return current.action @ inst.tensor_mor(inst.identity(a.carrier), one)


def quotient_sequence(a: MonoidObject, ts) -> QuotientResult:
    """Iterated quotients, cross-checked against the relative tensor of the ``A/t_iA``."""
    inst = a.inst
    E = a.end
    ts = tuple(E.element(t) for t in ts)
    if not ts:
        return QuotientResult(a, a, identity_morphism(a), (), {"e_quotient": True})
    current = a
    comp = identity_morphism(a)
    for t in ts:
        image = e_of_morphism(comp)(t) if current is not a else t
        step = quotient_element(current, image)
        comp = step.projection.compose(comp)
        current = step.target
    if len(ts) > 1:
        u = _tensor_route(a, ts)
        _, k1 = inst.kernel(u)
        _, k2 = inst.kernel(comp.mor)
        if not u.is_epi() or u.target.dims != current.dims or not inst.subobject_equal(k1, k2):
            raise SelfTestFailure("iterated quotient disagrees with the tensor product of the A/t_iA")
    _check_e_quotient(comp, ts)
    return QuotientResult(a, current, comp, ts, {"e_quotient": True, "tensor_route": len(ts) > 1})


def quotient_ideal(a: MonoidObject, j, alternative=None) -> QuotientResult:
    """``A/J`` from a finite generating set; optionally compare with a second generating set."""
    if not isinstance(j, IdealHandle):
        j = ideal(a, j)
    res = quotient_sequence(a, j.generators)
    checks = dict(res.checks)
    if alternative is not None:
        if not isinstance(alternative, IdealHandle):
            alternative = ideal(a, alternative)
        same = j.ring.ideal_equal(list(j.generators), list(alternative.generators))
        other = quotient_sequence(a, alternative.generators)
        inst = a.inst
        _, k1 = inst.kernel(res.projection.mor)
        _, k2 = inst.kernel(other.projection.mor)
        iso = inst.subobject_equal(k1, k2)
        if same and not iso:
            raise SelfTestFailure("equal ideals give different quotients")
        checks["same_ideal"] = same
        checks["generator_independent"] = iso
    return QuotientResult(a, res.target, res.projection, res.generators, checks)


@dataclass
class BaseChangeReport:
    ok: bool
    left_dims: tuple
    right_dims: tuple
    extended_ideal: list


def base_change_quotient(q: QuotientResult, f) -> BaseChangeReport:
    """``A/J (x)_A A'`` against ``A'/J'`` with ``J'`` the extension of ``J`` along ``E(f)``."""
    if isinstance(f, LocalizationResult):
        f = f.structure
    elif not certify_open_immersion(f).positive:
        raise InputError("base change needs a certified open immersion")
    if f.source is not q.source and f.source.carrier != q.source.carrier:
        raise InputError("base change: morphism does not start at the quotiented monoid")
    inst = f.source.inst
    left_mod = algebra_module(q.projection)
    rt = relative_tensor(left_mod, algebra_module(f))
    u = rt.projection @ inst.tensor_mor(q.projection.mor @ q.source.unit, inst.identity(f.target.carrier))
    ef = e_of_morphism(f)
    ext = [ef(g) for g in q.generators]
    right = quotient_sequence(f.target, ext)
    _, k1 = inst.kernel(u)
    _, k2 = inst.kernel(right.projection.mor)
    ok = u.is_epi() and rt.module.carrier.dims == right.target.dims and inst.subobject_equal(k1, k2)
    if not ok:
        raise SelfTestFailure("A/J (x)_A A' is not A'/J' for a certified open immersion")
    return BaseChangeReport(ok, rt.module.carrier.dims, right.target.dims, ext)


def e_quotient_matches(q: QuotientResult) -> bool:
    """``E(A/J)`` against the classical quotient ``E(A)/J`` as rings under ``E(A)``."""
    ep = e_of_morphism(q.projection)
    classical = quotient_ring(q.source.end, list(q.generators))
    return ring_iso_under(ep, classical)


@dataclass
class StabilizationReport:
    index: int
    dims: list
    ideal_dims: list
    ideal_index: int
    bound: int


def _stable_index(values) -> int:
    idx = 0
    for k in range(1, len(values)):
        if values[k] != values[k - 1]:
            idx = k
    return idx


def chain_stabilization_check(a: MonoidObject, chain) -> StabilizationReport:
    """Stabilization of an ascending chain of submodules of ``A`` and of the matching ideals of E(A)."""
    inst = a.inst
    E = a.end
    idA = inst.identity(a.carrier)
    if not chain:
        raise InputError("empty chain")
    for k, i in enumerate(chain):
        if i.target != a.carrier or not i.is_mono():
            raise InputError(f"chain entry {k} is not a monomorphism into A")
        try:
            inst.factor_through_mono(a.mult @ inst.tensor_mor(idA, i), i)
        except InputError as exc:
            raise InputError(f"chain entry {k} is not an A-submodule") from exc
        if k and not inst.subobject_leq(chain[k - 1], i):
            raise InputError(f"chain entry {k - 1} is not contained in entry {k}")
    dims = [i.source.dims for i in chain]
    sizes = [i.source.total_dim for i in chain]
    ideals = []
    for i in chain:
        gens = [E.from_global(i @ h) for h in inst.global_sections(i.source)]
        if not E.ideal_contains(gens, [E.mul(g, E.basis_element(b)) for g in gens for b in range(E.dim)]):
            raise SelfTestFailure("global sections of a submodule are not an ideal of E(A)")
        ideals.append(len(gens))
    index = _stable_index(sizes)
    ideal_index = _stable_index(ideals)
    bound = a.carrier.total_dim
    if index > bound:
        raise SelfTestFailure(f"chain of submodules stabilizes at {index} > dim A = {bound}")
    if ideal_index > index:
        raise SelfTestFailure("ideal chain in E(A) stabilizes later than the submodule chain")
    return StabilizationReport(index, dims, ideals, ideal_index, bound)


def submodule_chain_from_elements(a: MonoidObject, ts) -> list[CMorphism]:
    """``t_1 A <= t_1 A + t_2 A <= ...`` as monomorphisms into ``A``."""
    inst = a.inst
    E = a.end
    out = []
    for k in range(1, len(ts) + 1):
        maps = [E.to_morphism(E.element(t)) for t in ts[:k]]
        total, _, proj = inst.direct_sum(*([a.carrier] * k))
        s = inst.zero_morphism(total, a.carrier)
        for m, p in zip(maps, proj):
            s = s + m @ p
        _, incl = inst.image(s)
        out.append(incl)
    return out
