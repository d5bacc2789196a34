"""Commutative monoid objects, their modules, and relative tensor products."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .category import CatInstance, CMorphism, CObject
from .errors import InputError
from .linalg import Matrix, kernel_basis


@dataclass(frozen=True, eq=False)
class MonoidObject:
    """Object ``A`` with multiplication ``A (x) A -> A`` and unit ``1 -> A``."""

    carrier: CObject
    mult: CMorphism
    unit: CMorphism
    name: str | None = None

    def __post_init__(self):
        inst = self.carrier.inst
        if self.mult.source != inst.tensor(self.carrier, self.carrier) or self.mult.target != self.carrier:
            raise InputError("multiplication must be a morphism A (x) A -> A", block=self.name)
        if self.unit.source != inst.unit() or self.unit.target != self.carrier:
            raise InputError("unit must be a morphism 1 -> A", block=self.name)

    @property
    def inst(self) -> CatInstance:
        return self.carrier.inst

    @property
    def field(self):
        return self.carrier.inst.field

    @property
    def dims(self):
        return self.carrier.dims

    def is_zero(self) -> bool:
        return self.carrier.is_zero()

    @cached_property
    def end(self):
        """The endomorphism ring, materialized once."""
        from .endring import end_ring

        return end_ring(self)

    @cached_property
    def regular(self) -> "ModuleObject":
        return ModuleObject(self, self.carrier, self.mult, name=self.name)

    def __repr__(self):
        return f"MonoidObject({self.name or ''} {self.carrier!r})"


@dataclass
class AxiomReport:
    ok: bool
    violations: list = dc_field(default_factory=list)


def _first_difference(f: CMorphism, g: CMorphism):
    inst = f.inst
    for u, a, b in zip(inst.opens, f.comps, g.comps):
        if a != b:
            for j in range(a.cols):
                if a.col(j) != b.col(j):
                    return u, j
    return None


def _decompose_index(j: int, dims: list[int]):
    out = []
    for d in reversed(dims):
        out.append(j % d)
        j //= d
    return tuple(reversed(out))


def check_monoid(a: MonoidObject) -> AxiomReport:
    """Associativity, commutativity and the unit law, as exact identities."""
    inst = a.inst
    A = a.carrier
    m, e = a.mult, a.unit
    idA = inst.identity(A)
    violations = []
    lhs = m @ inst.tensor_mor(m, idA)
    rhs = m @ inst.tensor_mor(idA, m) @ inst.associator(A, A, A)
    diff = _first_difference(lhs, rhs)
    if diff:
        u, j = diff
        violations.append({"axiom": "associativity", "open": u,
                           "witness": _decompose_index(j, [A.dim(u)] * 3)})
    diff = _first_difference(m @ inst.symmetry(A, A), m)
    if diff:
        u, j = diff
        violations.append({"axiom": "commutativity", "open": u, "witness": _decompose_index(j, [A.dim(u)] * 2)})
    diff = _first_difference(m @ inst.tensor_mor(e, idA), inst.left_unitor(A))
    if diff:
        u, j = diff
        violations.append({"axiom": "unit", "open": u, "witness": (j,)})
    return AxiomReport(not violations, violations)


# -- constructors ----------------------------------------------------------

def monoid(inst: CatInstance, carrier: CObject, mult, unit, name=None, check: bool = True) -> MonoidObject:
    """Build a monoid from component matrices and verify the axioms."""
    m = inst.morphism(inst.tensor(carrier, carrier), carrier, mult)
    e = inst.morphism(inst.unit(), carrier, unit)
    a = MonoidObject(carrier, m, e, name)
    if check:
        rep = check_monoid(a)
        if not rep.ok:
            raise InputError(f"monoid axioms fail: {rep.violations[0]}", block=name)
    return a


def mult_matrix_from_table(field, table) -> Matrix:
    """``table[i][j]`` is the coordinate vector of ``e_i e_j``."""
    n = len(table)
    cols = [table[i][j] for i in range(n) for j in range(n)]
    return Matrix.from_columns(field, [[field(x) for x in c] for c in cols], n)


def algebra(inst: CatInstance, table, unit, name=None, check: bool = True) -> MonoidObject:
    """FinVect monoid from structure constants."""
    F = inst.field
    n = len(table)
    A = inst.obj(n)
    return monoid(inst, A, mult_matrix_from_table(F, table) if n else Matrix.zeros(F, 0, 0),
                  Matrix.column(F, unit) if n else Matrix.zeros(F, 0, 1), name=name, check=check)


def unit_monoid(inst: CatInstance, name=None) -> MonoidObject:
    one = inst.unit()
    return MonoidObject(one, inst.left_unitor(one), inst.identity(one), name or "1")


def zero_monoid(inst: CatInstance, name=None) -> MonoidObject:
    z = inst.zero_object()
    return MonoidObject(z, inst.zero_morphism(inst.tensor(z, z), z), inst.zero_morphism(inst.unit(), z),
                        name or "0")


def product_monoid(*parts: MonoidObject, name=None) -> MonoidObject:
    """Componentwise product ``A_1 x ... x A_k``."""
    inst = parts[0].inst
    total, inj, proj = inst.direct_sum(*[p.carrier for p in parts])
    mult = inst.zero_morphism(inst.tensor(total, total), total)
    unit = inst.zero_morphism(inst.unit(), total)
    for p, i, q in zip(parts, inj, proj):
        mult = mult + i @ p.mult @ inst.tensor_mor(q, q)
        unit = unit + i @ p.unit
    return MonoidObject(total, mult, unit, name)


# -- monoid morphisms ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonoidMorphism:
    source: MonoidObject
    target: MonoidObject
    mor: CMorphism

    def violations(self) -> list[str]:
        inst = self.source.inst
        g = self.mor
        out = []
        if g @ self.source.mult != self.target.mult @ inst.tensor_mor(g, g):
            out.append("multiplicativity")
        if g @ self.source.unit != self.target.unit:
            out.append("unit")
        return out

    def compose(self, other: "MonoidMorphism") -> "MonoidMorphism":
        """``self`` after ``other``."""
        return MonoidMorphism(other.source, self.target, self.mor @ other.mor)


def monoid_morphism(source: MonoidObject, target: MonoidObject, mor) -> MonoidMorphism:
    inst = source.inst
    if not isinstance(mor, CMorphism):
        mor = inst.morphism(source.carrier, target.carrier, mor)
    g = MonoidMorphism(source, target, mor)
    bad = g.violations()
    if bad:
        raise InputError(f"not a monoid morphism: {', '.join(bad)} fails")
    return g


def identity_morphism(a: MonoidObject) -> MonoidMorphism:
    return MonoidMorphism(a, a, a.inst.identity(a.carrier))


# -- modules ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModuleObject:
    """Left module ``A (x) M -> M`` over a monoid."""

    base: MonoidObject
    carrier: CObject
    action: CMorphism
    name: str | None = None

    @property
    def inst(self):
        return self.carrier.inst

    def is_zero(self) -> bool:
        return self.carrier.is_zero()

    def __repr__(self):
        return f"ModuleObject({self.name or ''} {self.carrier!r})"


def check_module(m: ModuleObject) -> AxiomReport:
    inst = m.inst
    A = m.base.carrier
    act = m.action
    violations = []
    if act.source != inst.tensor(A, m.carrier) or act.target != m.carrier:
        return AxiomReport(False, [{"axiom": "shape"}])
    lhs = act @ inst.tensor_mor(m.base.mult, inst.identity(m.carrier))
    rhs = act @ inst.tensor_mor(inst.identity(A), act)
    if lhs != rhs:
        violations.append({"axiom": "associativity"})
    if act @ inst.tensor_mor(m.base.unit, inst.identity(m.carrier)) != inst.left_unitor(m.carrier):
        violations.append({"axiom": "unit"})
    return AxiomReport(not violations, violations)


def module(base: MonoidObject, carrier: CObject, action, name=None) -> ModuleObject:
    inst = base.inst
    if not isinstance(action, CMorphism):
        action = inst.morphism(inst.tensor(base.carrier, carrier), carrier, action)
    m = ModuleObject(base, carrier, action, name)
    rep = check_module(m)
    if not rep.ok:
        raise InputError(f"module axioms fail: {rep.violations[0]}", block=name)
    return m


def regular_module(a: MonoidObject) -> ModuleObject:
    """``A`` as a module over itself."""
    return a.regular


def zero_module(a: MonoidObject) -> ModuleObject:
    inst = a.inst
    z = inst.zero_object()
    return ModuleObject(a, z, inst.zero_morphism(inst.tensor(a.carrier, z), z), "0")


def restrict_scalars(f: MonoidMorphism, m: ModuleObject) -> ModuleObject:
    """A ``B``-module viewed as an ``A``-module along ``f: A -> B``."""
    inst = f.source.inst
    if m.base is not f.target and m.base.carrier != f.target.carrier:
        raise InputError("restrict_scalars: module is not over the target monoid")
    act = m.action @ inst.tensor_mor(f.mor, inst.identity(m.carrier))
    return ModuleObject(f.source, m.carrier, act, m.name)


def is_module_morphism(u: CMorphism, m: ModuleObject, n: ModuleObject) -> bool:
    inst = m.inst
    return u @ m.action == n.action @ inst.tensor_mor(inst.identity(m.base.carrier), u)


def submodule(m: ModuleObject, incl: CMorphism, name=None) -> ModuleObject:
    """Submodule along a monomorphism whose image is closed under the action."""
    inst = m.inst
    act = inst.factor_through_mono(m.action @ inst.tensor_mor(inst.identity(m.base.carrier), incl), incl)
    return ModuleObject(m.base, incl.source, act, name)


def quotient_module(m: ModuleObject, proj: CMorphism, name=None) -> ModuleObject:
    """Quotient along an epimorphism whose kernel is a submodule."""
    inst = m.inst
    act = inst.factor_through_epi(proj @ m.action, inst.tensor_mor(inst.identity(m.base.carrier), proj))
    return ModuleObject(m.base, proj.target, act, name)


def module_kernel(u: CMorphism, m: ModuleObject):
    k, incl = m.inst.kernel(u)
    return submodule(m, incl), incl


def module_cokernel(u: CMorphism, n: ModuleObject):
    c, proj = n.inst.cokernel(u)
    return quotient_module(n, proj), proj


def module_image(u: CMorphism, n: ModuleObject):
    _, incl = n.inst.image(u)
    return submodule(n, incl), incl


def direct_sum_modules(*ms: ModuleObject):
    inst = ms[0].inst
    A = ms[0].base.carrier
    total, inj, proj = inst.direct_sum(*[m.carrier for m in ms])
    act = inst.zero_morphism(inst.tensor(A, total), total)
    idA = inst.identity(A)
    for m, i, q in zip(ms, inj, proj):
        act = act + i @ m.action @ inst.tensor_mor(idA, q)
    return ModuleObject(ms[0].base, total, act), inj, proj


def hom_A(m1: ModuleObject, m2: ModuleObject) -> list[CMorphism]:
    """Basis of the ``A``-linear morphisms ``m1 -> m2``."""
    if m1.base is not m2.base and m1.base.carrier != m2.base.carrier:
        raise InputError("hom_A: modules over different monoids")
    inst = m1.inst
    F = inst.field
    basis = inst.hom_space(m1.carrier, m2.carrier)
    if not basis:
        return []
    idA = inst.identity(m1.base.carrier)
    cols = [(f @ m1.action - m2.action @ inst.tensor_mor(idA, f)).vec() for f in basis]
    nrows = len(cols[0])
    if nrows == 0:
        return basis
    K = kernel_basis(Matrix.from_columns(F, cols, nrows))
    return [inst.combination(c, basis) for c in K.columns()]


# -- relative tensor product -----------------------------------------------

@dataclass(frozen=True, eq=False)
class RelativeTensor:
    """``M (x)_A N`` with the coequalizing projection from ``M (x) N``."""

    module: ModuleObject
    projection: CMorphism
    left: ModuleObject
    right: ModuleObject


def relative_tensor(m1: ModuleObject, m2: ModuleObject) -> RelativeTensor:
    if m1.base is not m2.base and m1.base.carrier != m2.base.carrier:
        raise InputError("tensor_over_A: modules over different monoids")
    inst = m1.inst
    A = m1.base.carrier
    M, N = m1.carrier, m2.carrier
    idM, idN = inst.identity(M), inst.identity(N)
    right_action_on_m = m1.action @ inst.symmetry(M, A)
    balance = inst.tensor_mor(right_action_on_m, idN) - inst.tensor_mor(idM, m2.action)
    _, q = inst.cokernel(balance)
    act = inst.factor_through_epi(q @ inst.tensor_mor(m1.action, idN),
                                  inst.tensor_mor(inst.identity(A), q))
    mod = ModuleObject(m1.base, q.target, act)
    return RelativeTensor(mod, q, m1, m2)


def tensor_over_A(m1: ModuleObject, m2: ModuleObject) -> ModuleObject:
    return relative_tensor(m1, m2).module


def tensor_over_A_mor(u: CMorphism, t_src: RelativeTensor, t_dst: RelativeTensor,
                      v: CMorphism | None = None) -> CMorphism:
    """``u (x)_A v`` between two relative tensors (``v`` defaults to the identity)."""
    inst = u.inst
    if v is None:
        v = inst.identity(t_src.right.carrier)
    return inst.factor_through_epi(t_dst.projection @ inst.tensor_mor(u, v), t_src.projection)


def as_module_over(f: MonoidMorphism) -> ModuleObject:
    """The target monoid ``B`` as an ``A``-module along ``f``."""
    return restrict_scalars(f, f.target.regular)


def induced_iso(p1: CMorphism, p2: CMorphism) -> CMorphism | None:
    """For epimorphisms ``p1: X -> Y1`` and ``p2: X -> Y2``, the isomorphism
    ``h`` with ``h o p1 = p2`` when their kernels agree, else ``None``."""
    inst = p1.inst
    if p1.source != p2.source or p1.target.dims != p2.target.dims:
        return None
    _, k1 = inst.kernel(p1)
    _, k2 = inst.kernel(p2)
    if not inst.subobject_equal(k1, k2):
        return None
    h = inst.factor_through_epi(p2, p1)
    return h if h.is_iso() else None


def monoid_iso_under(p1: MonoidMorphism, p2: MonoidMorphism) -> MonoidMorphism | None:
    """Monoid isomorphism between two quotients of the same monoid, compatible with both maps."""
    h = induced_iso(p1.mor, p2.mor)
    if h is None:
        return None
    iso = MonoidMorphism(p1.target, p2.target, h)
    if iso.violations():
        return None
    return iso
