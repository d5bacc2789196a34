"""Localization of monoids and modules at elements of E(A).

``A_t`` is the colimit of ``A -t-> A -t-> ...``; at finite dimension it is
``A / ker t^N`` for the first ``N`` where the kernels stop growing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .category import CMorphism
from .endring import EndRing, e_of_morphism
from .errors import InputError, SelfTestFailure
from .monoid import (
    ModuleObject,
    MonoidMorphism,
    MonoidObject,
    RelativeTensor,
    check_monoid,
    direct_sum_modules,
    is_module_morphism,
    module_cokernel,
    module_image,
    module_kernel,
    relative_tensor,
    restrict_scalars,
    tensor_over_A_mor,
    zero_module,
)


@dataclass(frozen=True, eq=False)
class LocalizationResult:
    source: MonoidObject
    target: MonoidObject
    structure: MonoidMorphism
    element: tuple
    index: int
    traces: dict = dc_field(default_factory=dict)
    truncated: bool = False
    generators: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.target.is_zero()


def _as_element(E: EndRing, t) -> tuple:
    return E.element(t)


def localize_element(a: MonoidObject, t) -> LocalizationResult:
    """``A_t`` with its induced multiplication and unit, and ``I_t: A -> A_t``."""
    inst = a.inst
    E = a.end
    t = _as_element(E, t)
    s = E.to_morphism(t)
    cc = inst.chain_colimit(s)
    q = cc.projection
    try:
        mult = inst.factor_through_epi(q @ a.mult, inst.tensor_mor(q, q))
    except InputError as exc:
        raise SelfTestFailure(f"multiplication does not descend to A_t: {exc}") from exc
    unit = q @ a.unit
    loc = MonoidObject(cc.obj, mult, unit, name=f"{a.name or 'A'}_t")
    rep = check_monoid(loc)
    if not rep.ok:
        raise SelfTestFailure(f"A_t fails the monoid axioms: {rep.violations[0]}")
    structure = MonoidMorphism(a, loc, q)
    if structure.violations():
        raise SelfTestFailure("I_t is not a monoid morphism")
    bound = max(a.dims)
    if not cc.truncated and cc.index > bound:
        raise SelfTestFailure(f"stabilization index {cc.index} exceeds dim A = {bound}")
    image = e_of_morphism(structure)(t)
    if not loc.end.is_unit(image):
        raise SelfTestFailure("E(I_t)(t) is not invertible in E(A_t)")
    return LocalizationResult(a, loc, structure, t, cc.index, cc.traces, cc.truncated, (t,))


@dataclass(frozen=True)
class MultSet:
    """Multiplicative set generated by finitely many elements of E(A)."""

    ring: EndRing
    generators: tuple

    def product(self) -> tuple:
        E = self.ring
        out = E.one()
        for g in self.generators:
            out = E.mul(out, g)
        return out

    def elements(self, max_degree: int = 2) -> list[tuple]:
        """Monomials of total degree at most ``max_degree``, starting with 1."""
        E = self.ring
        level = [E.one()]
        out = [E.one()]
        for _ in range(max_degree):
            nxt = []
            for x in level:
                for g in self.generators:
                    y = E.mul(x, g)
                    if y not in out and y not in nxt:
                        nxt.append(y)
            out.extend(nxt)
            level = nxt
        return out

    def contains_nilpotent(self) -> bool:
        E = self.ring
        return E.is_zero(E.power(self.product(), E.dim + 1)) and E.dim > 0


def mult_set(a: MonoidObject, generators) -> MultSet:
    E = a.end
    return MultSet(E, tuple(E.element(g) for g in generators))


def localize_multset(a: MonoidObject, s) -> LocalizationResult:
    """``A_S`` via the product of the generators, cross-checked against iterated localization."""
    if not isinstance(s, MultSet):
        s = mult_set(a, s)
    gens = s.generators
    res = localize_element(a, s.product())
    if len(gens) > 1:
        current = a
        composite = a.inst.identity(a.carrier)
        for g in gens:
            image = g
            if current is not a:
                image = e_of_morphism(MonoidMorphism(a, current, composite))(g)
            step = localize_element(current, image)
            composite = step.structure.mor @ composite
            current = step.target
        inst = a.inst
        _, k1 = inst.kernel(composite)
        _, k2 = inst.kernel(res.structure.mor)
        if not inst.subobject_equal(k1, k2):
            raise SelfTestFailure("iterated localization disagrees with localization at the product")
    return LocalizationResult(res.source, res.target, res.structure, res.element, res.index,
                              res.traces, res.truncated, gens)


# -- modules ---------------------------------------------------------------

def element_action(m: ModuleObject, t) -> CMorphism:
    """``t_M: M -> M``, the action of a global element ``t`` of the base."""
    inst = m.inst
    h = m.base.end.to_global(m.base.end.element(t))
    return m.action @ inst.tensor_mor(h, inst.identity(m.carrier))


@dataclass(frozen=True, eq=False)
class ModuleLocalization:
    module: ModuleObject
    structure: CMorphism
    tensor: RelativeTensor
    chain_projection: CMorphism
    index: int


def algebra_module(f: MonoidMorphism) -> ModuleObject:
    """The target of ``f`` as a module over its source."""
    return restrict_scalars(f, f.target.regular)


def base_change_module(m: ModuleObject, f: MonoidMorphism):
    """``M (x)_A B`` and the map ``M -> M (x)_A B``, ``x -> x (x) 1``."""
    inst = m.inst
    rt = relative_tensor(m, algebra_module(f))
    unit_map = rt.projection @ inst.tensor_mor(inst.identity(m.carrier), f.target.unit)
    return rt, unit_map


def localize_module(m: ModuleObject, t, loc: LocalizationResult | None = None) -> ModuleLocalization:
    """``M_t`` computed as ``M (x)_A A_t`` and as the colimit of ``t_M``; both must agree."""
    if loc is None:
        loc = localize_element(m.base, t)
    inst = m.inst
    rt, unit_map = base_change_module(m, loc.structure)
    cc = inst.chain_colimit(element_action(m, loc.element))
    _, k1 = inst.kernel(unit_map)
    _, k2 = inst.kernel(cc.projection)
    if rt.module.carrier.dims != cc.obj.dims or not inst.subobject_equal(k1, k2) or not unit_map.is_epi():
        raise SelfTestFailure("M (x)_A A_t and the colimit of t_M disagree")
    return ModuleLocalization(rt.module, unit_map, rt, cc.projection, cc.index)


def localized_morphism(u: CMorphism, lm: ModuleLocalization, ln: ModuleLocalization) -> CMorphism:
    return u.inst.factor_through_epi(ln.structure @ u, lm.structure)


# -- flatness and epimorphisms ---------------------------------------------

@dataclass(frozen=True, eq=False)
class ShortExact:
    """``0 -> M1 -f-> M2 -g-> M3 -> 0`` in A-Mod."""

    modules: tuple
    f: CMorphism
    g: CMorphism
    label: str = ""


def _is_exact(f: CMorphism, g: CMorphism) -> bool:
    inst = f.inst
    if not (g @ f).is_zero() or not f.is_mono() or not g.is_epi():
        return False
    _, im = inst.image(f)
    _, ker = inst.kernel(g)
    return inst.subobject_equal(im, ker)


def short_exact(m1, m2, m3, f, g, label="") -> ShortExact:
    if not _is_exact(f, g):
        raise InputError(f"probe {label or ''} is not short exact".replace("  ", " "))
    return ShortExact((m1, m2, m3), f, g, label)


def standard_probes(a: MonoidObject, elements=None) -> list[ShortExact]:
    """Split, image/cokernel and kernel/image sequences built from A and elements of E(A)."""
    inst = a.inst
    A = a.regular
    idA = inst.identity(a.carrier)
    probes = []
    zero = zero_module(a)
    probes.append(short_exact(zero, A, A, inst.zero_morphism(zero.carrier, a.carrier), idA, "0->0->A->A->0"))
    total, inj, proj = direct_sum_modules(A, A)
    probes.append(short_exact(A, total, A, inj[0], proj[1], "0->A->A+A->A->0"))
    E = a.end
    if elements is None:
        elements = [E.basis_element(i) for i in range(E.dim)]
    for i, t in enumerate(elements):
        s = E.to_morphism(t)
        img, incl = module_image(s, A)
        coker, p = module_cokernel(incl, A)
        probes.append(short_exact(img, A, coker, incl, p, f"0->tA->A->A/tA->0 (t=e{i})"))
        ker, kincl = module_kernel(s, A)
        corestricted = inst.factor_through_mono(s, incl)
        probes.append(short_exact(ker, A, img, kincl, corestricted, f"0->ker t->A->tA->0 (t=e{i})"))
    return probes


@dataclass
class FlatReport:
    ok: bool
    rows: list
    proved: bool = False


def verify_flat(f, probes=None, hard: bool = True) -> FlatReport:
    """Tensor each probe with ``B`` over ``A`` and test exactness again."""
    if isinstance(f, LocalizationResult):
        f = f.structure
    B = algebra_module(f)
    if probes is None:
        probes = standard_probes(f.source)
    rows = []
    ok = True
    for pr in probes:
        ts = [relative_tensor(m, B) for m in pr.modules]
        f2 = tensor_over_A_mor(pr.f, ts[0], ts[1])
        g2 = tensor_over_A_mor(pr.g, ts[1], ts[2])
        exact = _is_exact(f2, g2)
        rows.append({
            "probe": pr.label,
            "before": [m.carrier.dims for m in pr.modules],
            "after": [t.module.carrier.dims for t in ts],
            "exact": exact,
        })
        ok = ok and exact
    if hard and not ok:
        bad = next(r for r in rows if not r["exact"])
        raise SelfTestFailure(f"localization failed to preserve exactness of {bad['probe']}")
    return FlatReport(ok, rows)


@dataclass
class EpiReport:
    ok: bool
    dim_b: tuple
    dim_bb: tuple


def verify_epi(f: MonoidMorphism) -> EpiReport:
    """``B -> B (x)_A B``, ``b -> b (x) 1`` is an isomorphism."""
    Bm = algebra_module(f)
    rt, unit_map = base_change_module(Bm, f)
    return EpiReport(unit_map.is_iso(), f.target.dims, rt.module.carrier.dims)


@dataclass
class ImmersionCertificate:
    positive: bool
    epi: EpiReport
    flat: FlatReport
    basis: str
    notes: list


def certify_open_immersion(f, from_localization: bool = False, probes=None) -> ImmersionCertificate:
    if isinstance(f, LocalizationResult):
        f = f.structure
        from_localization = True
    epi = verify_epi(f)
    flat = verify_flat(f, probes, hard=from_localization)
    notes = ["finite presentation holds automatically: every object of the instance is finite dimensional"]
    if from_localization:
        basis = "proved: localization at an element is a flat epimorphism"
        if not epi.ok:
            raise SelfTestFailure("a localization failed the epimorphism test")
    else:
        basis = "probe-verified"
    return ImmersionCertificate(epi.ok and flat.ok, epi, flat, basis, notes)


# -- conservativity --------------------------------------------------------

@dataclass
class ConservativityReport:
    status: str  # "computed" or "rejected"
    global_iso: bool | None = None
    local_iso: list = dc_field(default_factory=list)
    rows: list = dc_field(default_factory=list)
    reason: str = ""


def _ker_coker_dims(u: CMorphism):
    inst = u.inst
    k, _ = inst.kernel(u)
    c, _ = inst.cokernel(u)
    return k.dims, c.dims


def conservativity_check(a: MonoidObject, ts, u: CMorphism, m: ModuleObject, n: ModuleObject) -> ConservativityReport:
    """``u`` is an isomorphism iff every localization ``u_{t_i}`` is, for a partition of unity ``ts``."""
    from .scheme import check_cover

    if m.base is not a or n.base is not a:
        raise InputError("both modules must be over the given monoid")
    if u.source != m.carrier or u.target != n.carrier or not is_module_morphism(u, m, n):
        raise InputError("u is not an A-linear map M -> N")
    cert = check_cover(a, ts)
    if not cert.positive:
        return ConservativityReport("rejected", reason="elements do not form a partition of unity")
    E = a.end
    rows = []
    local = []
    for t in cert.elements:
        loc = localize_element(a, t)
        lm = localize_module(m, t, loc)
        ln = localize_module(n, t, loc)
        ut = localized_morphism(u, lm, ln)
        kd, cd = _ker_coker_dims(ut)
        local.append(ut.is_iso())
        rows.append({"t": t, "ker": kd, "coker": cd, "iso": ut.is_iso()})
    glob = u.is_iso()
    if glob != all(local):
        raise SelfTestFailure("isomorphism is not detected by the localizations of a partition of unity")
    kd, cd = _ker_coker_dims(u)
    rows.insert(0, {"t": E.one(), "ker": kd, "coker": cd, "iso": glob, "global": True})
    return ConservativityReport("computed", glob, local, rows)


def zero_detection(m: ModuleObject, ts) -> tuple[bool, list[bool]]:
    """``(M == 0, [M_t == 0 for t in ts])``; for a partition of unity the two sides agree."""
    zeros = [localize_module(m, t).module.is_zero() for t in ts]
    return m.is_zero(), zeros
