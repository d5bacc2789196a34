import pytest
from hypothesis import given, strategies as st

from monoidal_geometry import (
    InputError,
    Matrix,
    QQ,
    certify_open_immersion,
    conservativity_check,
    e_of_morphism,
    localize_element,
    localize_module,
    localize_multset,
    mult_set,
    verify_epi,
    verify_flat,
)
from monoidal_geometry.corpus import corpus_items, corpus_modules, sierpinski_split_monoid
from monoidal_geometry.crosscheck import Bridge, CrossCheckResult, compare_localization
from monoidal_geometry.localization import short_exact, standard_probes
from monoidal_geometry.monoid import (
    direct_sum_modules,
    identity_morphism,
    module_cokernel,
    module_image,
    monoid_morphism,
    zero_module,
    zero_monoid,
)
from monoidal_geometry.quotient import quotient_element

from conftest import F2, F3

ITEMS = corpus_items(F2, 3) + corpus_items(F3, 2) + corpus_items(QQ)


def elements_of(a):
    E = a.end
    basis = [E.basis_element(i) for i in range(E.dim)]
    return basis + [E.sub(E.one(), b) for b in basis]


def same_kernel(f, g):
    inst = f.inst
    _, k1 = inst.kernel(f)
    _, k2 = inst.kernel(g)
    return inst.subobject_equal(k1, k2)


# -- single elements -----------------------------------------------------------

def test_localize_at_one(dual):
    loc = localize_element(dual, dual.end.one())
    assert loc.target.dims == (2,)
    assert loc.structure.mor.is_iso() and loc.index == 0


def test_localize_dual_numbers_at_eps(dual):
    loc = localize_element(dual, (0, 1))
    assert loc.is_zero
    assert loc.traces["X"] == (2, 1, 0, 0)


def test_localize_product_at_idempotent(qxq):
    loc = localize_element(qxq, (1, 0))
    assert loc.target.dims == (1,)
    proj = Matrix.from_rows(QQ, [[1, 0]])
    inst = qxq.inst
    assert same_kernel(loc.structure.mor, inst.morphism(qxq.carrier, inst.obj(1), proj))
    assert loc.index == 1


def test_localized_element_becomes_invertible(qxq):
    loc = localize_element(qxq, (1, 0))
    image = loc.target.end.one()
    assert loc.target.end.is_unit(image)


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_stabilization_index_bounded(item):
    a = item.monoid
    for t in elements_of(a):
        loc = localize_element(a, t)
        assert loc.index <= max(a.dims)
        assert not loc.truncated


def test_localize_presheaf_monoid_at_idempotents():
    a = sierpinski_split_monoid()
    first = localize_element(a, (1, 0))
    second = localize_element(a, (0, 1))
    # (a, b) -> b survives on U; (a, b) -> a lives only over X
    assert first.target.dims == (0, 0, 1)
    assert second.target.dims == (0, 1, 1)


# -- multiplicative sets ---------------------------------------------------------

def test_multset_of_one_is_identity(qxq):
    loc = localize_multset(qxq, [qxq.end.one()])
    assert loc.target.dims == qxq.dims and loc.structure.mor.is_iso()


def test_empty_multset_is_identity(qxq):
    loc = localize_multset(qxq, [])
    assert loc.structure.mor.is_iso()


def test_multset_product_of_generators(qxqxq):
    loc = localize_multset(qxqxq, [(1, 1, 0), (1, 0, 1)])
    assert loc.target.dims == (1,)
    inst = qxqxq.inst
    first = inst.morphism(qxqxq.carrier, inst.obj(1), Matrix.from_rows(QQ, [[1, 0, 0]]))
    assert same_kernel(loc.structure.mor, first)


def test_multset_with_nilpotent_is_zero(dual):
    s = mult_set(dual, [(1, 0), (0, 1)])
    assert s.contains_nilpotent()
    assert localize_multset(dual, s).is_zero


def test_multset_elements_start_at_one(qxq):
    s = mult_set(qxq, [(2, 0)])
    assert s.elements()[0] == qxq.end.one()
    assert (QQ(4), QQ(0)) in s.elements(2)


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_localizing_twice_is_localizing_at_product(item):
    a = item.monoid
    E = a.end
    elems = elements_of(a)
    for s in elems:
        ls = localize_element(a, s)
        es = e_of_morphism(ls.structure)
        for t in elems:
            inner = localize_element(ls.target, es(t))
            direct = localize_element(a, E.mul(s, t))
            assert inner.target.dims == direct.target.dims
            assert same_kernel(inner.structure.mor @ ls.structure.mor, direct.structure.mor)


# -- modules -----------------------------------------------------------------------

def test_localize_module_at_one(qxq):
    m = corpus_modules(qxq)[1]
    lm = localize_module(m, qxq.end.one())
    assert lm.module.carrier.dims == m.carrier.dims


def test_localize_regular_module_is_A_t(qxq):
    lm = localize_module(qxq.regular, (1, 0))
    assert lm.module.carrier.dims == localize_element(qxq, (1, 0)).target.dims


def test_second_factor_module_dies_at_first_idempotent(qxq):
    E = qxq.end
    m, _ = module_cokernel(E.to_morphism((1, 0)), qxq.regular)  # A/e1A, the second factor
    assert m.carrier.dim() == 1
    assert localize_module(m, (1, 0)).module.is_zero()
    assert not localize_module(m, (0, 1)).module.is_zero()


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_both_module_localizations_agree(item):
    # localize_module raises SelfTestFailure if M (x)_A A_t and colim t_M differ
    a = item.monoid
    for m in corpus_modules(a):
        for t in elements_of(a):
            lm = localize_module(m, t)
            assert lm.structure.is_epi()


# -- flatness and epimorphisms -------------------------------------------------------

def test_trivial_probe_preserved(qxq):
    probes = standard_probes(qxq)
    rep = verify_flat(localize_element(qxq, (1, 0)), probes[:1])
    assert rep.ok and rep.rows[0]["probe"] == "0->0->A->A->0"


def test_dual_probe_at_unit_unchanged(dual):
    E = dual.end
    A = dual.regular
    img, incl = module_image(E.to_morphism((0, 1)), A)
    coker, p = module_cokernel(incl, A)
    probe = short_exact(img, A, coker, incl, p, "0->(eps)->A->A/eps->0")
    rep = verify_flat(localize_element(dual, E.one()), [probe])
    assert rep.ok
    assert rep.rows[0]["after"] == rep.rows[0]["before"] == [(1,), (2,), (1,)]


def test_dual_probe_at_eps_vanishes(dual):
    E = dual.end
    A = dual.regular
    img, incl = module_image(E.to_morphism((0, 1)), A)
    coker, p = module_cokernel(incl, A)
    probe = short_exact(img, A, coker, incl, p, "eps")
    rep = verify_flat(localize_element(dual, (0, 1)), [probe])
    assert rep.ok and rep.rows[0]["after"] == [(0,), (0,), (0,)]


def test_non_exact_probe_rejected(qxq):
    A = qxq.regular
    inst = qxq.inst
    with pytest.raises(InputError):
        short_exact(A, A, A, inst.identity(qxq.carrier), inst.identity(qxq.carrier), "bad")


def test_epi_identity(dual):
    assert verify_epi(identity_morphism(dual)).ok


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_every_localization_is_a_flat_epimorphism(item):
    a = item.monoid
    probes = standard_probes(a)
    assert len(probes) >= 3
    for t in elements_of(a):
        loc = localize_element(a, t)
        assert verify_epi(loc.structure).ok
        assert verify_flat(loc, probes).ok


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_quotient_projections_are_epimorphisms(item):
    a = item.monoid
    for t in elements_of(a):
        assert verify_epi(quotient_element(a, t).projection).ok


def test_diagonal_is_not_an_epimorphism(q, qxq):
    diag = monoid_morphism(q, qxq, Matrix.from_rows(QQ, [[1], [1]]))
    rep = verify_epi(diag)
    assert not rep.ok
    assert rep.dim_b == (2,) and rep.dim_bb == (4,)


def test_certify_localization(qxq):
    cert = certify_open_immersion(localize_element(qxq, (0, 1)))
    assert cert.positive and cert.basis.startswith("proved")


def test_certify_diagonal_negative(q, qxq):
    diag = monoid_morphism(q, qxq, Matrix.from_rows(QQ, [[1], [1]]))
    cert = certify_open_immersion(diag)
    assert not cert.positive and not cert.epi.ok and cert.basis == "probe-verified"


def test_certify_map_to_zero(qxq):
    z = zero_monoid(qxq.inst)
    f = monoid_morphism(qxq, z, Matrix.zeros(QQ, 0, 2))
    assert certify_open_immersion(f).positive


# -- conservativity ------------------------------------------------------------------

def swap_on_sum(a):
    total, inj, proj = direct_sum_modules(a.regular, a.regular)
    u = inj[0] @ proj[1] + inj[1] @ proj[0]
    return total, u


def test_conservative_unit_cover(qxq):
    total, u = swap_on_sum(qxq)
    rep = conservativity_check(qxq, [qxq.end.one()], u, total, total)
    assert rep.status == "computed" and rep.global_iso and rep.local_iso == [True]


def test_conservative_swap_on_partition(qxq):
    total, u = swap_on_sum(qxq)
    rep = conservativity_check(qxq, [(1, 0), (0, 1)], u, total, total)
    assert rep.global_iso and rep.local_iso == [True, True]


def test_conservative_detects_non_iso(qxq):
    A = qxq.regular
    u = qxq.end.to_morphism((1, 0))  # (x, y) -> (x, 0)
    rep = conservativity_check(qxq, [(1, 0), (0, 1)], u, A, A)
    assert rep.global_iso is False
    assert rep.local_iso == [True, False]
    second = rep.rows[2]
    assert second["coker"] == (1,)


def test_conservative_rejects_non_partition(qxq):
    A = qxq.regular
    u = qxq.inst.identity(qxq.carrier)
    rep = conservativity_check(qxq, [(1, 0), (2, 0)], u, A, A)
    assert rep.status == "rejected"


def test_conservative_rejects_non_linear_map(qxq):
    A = qxq.regular
    inst = qxq.inst
    swap = inst.morphism(qxq.carrier, qxq.carrier, Matrix.from_rows(QQ, [[0, 1], [1, 0]]))
    with pytest.raises(InputError):
        conservativity_check(qxq, [(1, 0), (0, 1)], swap, A, A)


def test_conservative_rejects_wrong_base(q, qxq):
    with pytest.raises(InputError):
        conservativity_check(qxq, [(1, 0), (0, 1)], q.inst.identity(q.carrier), q.regular, q.regular)


# -- E(A_t) against the classical localization ------------------------------------------

@given(st.sampled_from(ITEMS), st.data())
def test_end_ring_of_localization_matches_oracle(item, data):
    a = item.monoid
    E = a.end
    coeffs = data.draw(st.lists(st.integers(0, 2), min_size=E.dim, max_size=E.dim))
    t = E.element(coeffs)
    res = CrossCheckResult()
    compare_localization(Bridge(a), t, res, item.name)
    assert res.ok, res.discrepancies


def test_zero_module_localizes_to_zero(qxq):
    assert localize_module(zero_module(qxq), (1, 0)).module.is_zero()
