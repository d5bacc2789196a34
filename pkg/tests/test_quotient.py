from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from monoidal_geometry import (
    InputError,
    Matrix,
    QQ,
    base_change_quotient,
    chain_stabilization_check,
    ideal,
    localize_element,
    quotient_element,
    quotient_ideal,
    quotient_sequence,
)
from monoidal_geometry.corpus import corpus_items, sierpinski_split_monoid
from monoidal_geometry.crosscheck import Bridge, CrossCheckResult, compare_quotient
from monoidal_geometry.monoid import identity_morphism, monoid_morphism
from monoidal_geometry.quotient import e_quotient_matches, submodule_chain_from_elements

from conftest import F2, F3

ITEMS = corpus_items(F2, 3) + corpus_items(F3, 2) + corpus_items(QQ)


def kernels_equal(f, g):
    inst = f.inst
    _, k1 = inst.kernel(f)
    _, k2 = inst.kernel(g)
    return inst.subobject_equal(k1, k2)


def generator_sets(a, k_max=2):
    E = a.end
    basis = [E.basis_element(i) for i in range(E.dim)]
    return [list(g) for k in range(1, k_max + 1) for g in combinations(basis, k)]


# -- A/tA ---------------------------------------------------------------------------

def test_quotient_by_zero(dual):
    q = quotient_element(dual, (0, 0))
    assert q.target.dims == (2,) and q.projection.mor.is_iso()


def test_quotient_by_one(dual):
    assert quotient_element(dual, (1, 0)).is_zero


def test_quotient_dual_numbers_by_eps(dual):
    q = quotient_element(dual, (0, 1))
    assert q.target.dims == (1,)
    assert q.checks["e_quotient"]
    assert q.target.end.dim == 1
    assert e_quotient_matches(q)


def test_quotient_presheaf_monoid():
    a = sierpinski_split_monoid()
    q = quotient_element(a, (0, 1))
    # killing the U-component leaves the factor supported on X alone
    assert q.target.dims == (0, 0, 1)


# -- sequences ----------------------------------------------------------------------------

def test_empty_sequence(qxq):
    q = quotient_sequence(qxq, [])
    assert q.target is qxq


def test_sequence_leaves_third_factor(qxqxq):
    q = quotient_sequence(qxqxq, [(1, 0, 0), (0, 1, 0)])
    assert q.target.dims == (1,)
    assert q.checks["tensor_route"]
    inst = qxqxq.inst
    third = inst.morphism(qxqxq.carrier, inst.obj(1), Matrix.from_rows(QQ, [[0, 0, 1]]))
    assert kernels_equal(q.projection.mor, third)


def test_sequence_with_unit_is_zero(qxqxq):
    assert quotient_sequence(qxqxq, [(1, 0, 0), (1, 1, 1)]).is_zero


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_quotient_independent_of_generator_order(item):
    a = item.monoid
    for gens in generator_sets(a, 3):
        results = [quotient_sequence(a, list(p)) for p in permutations(gens)]
        first = results[0]
        for r in results[1:]:
            assert r.target.dims == first.target.dims
            assert kernels_equal(r.projection.mor, first.projection.mor)


# -- ideals --------------------------------------------------------------------------------

def test_zero_ideal(qxq):
    assert quotient_ideal(qxq, [(0, 0)]).target.dims == (2,)


def test_unit_ideal(qxq):
    assert quotient_ideal(qxq, [(1, 1)]).is_zero


def test_regenerated_ideal_gives_same_quotient(qxq):
    q = quotient_ideal(qxq, [(1, 0)], alternative=[(2, 0)])
    assert q.target.dims == (1,)
    assert q.checks["same_ideal"] and q.checks["generator_independent"]


def test_different_ideal_detected(qxq):
    q = quotient_ideal(qxq, [(1, 0)], alternative=[(0, 1)])
    assert not q.checks["same_ideal"] and not q.checks["generator_independent"]


def test_ideal_handle(qxq):
    j = ideal(qxq, [(3, 0)])
    assert j.proper
    assert j.contains((QQ(1), QQ(0))) and not j.contains((QQ(0), QQ(1)))
    assert len(j.basis()) == 1


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_end_ring_of_quotient(item):
    a = item.monoid
    bridge = Bridge(a)
    res = CrossCheckResult()
    for gens in generator_sets(a):
        q = quotient_ideal(a, gens)
        assert e_quotient_matches(q)
        assert q.target.end.dim == a.end.quotient_dim(gens)
        compare_quotient(bridge, gens, res, item.name)
    assert res.ok, res.discrepancies


@given(st.sampled_from(ITEMS), st.data())
def test_random_ideals_match_oracle(item, data):
    a = item.monoid
    E = a.end
    n = data.draw(st.integers(1, 2))
    gens = [E.element(data.draw(st.lists(st.integers(0, 2), min_size=E.dim, max_size=E.dim))) for _ in range(n)]
    res = CrossCheckResult()
    compare_quotient(Bridge(a), gens, res, item.name)
    assert res.ok, res.discrepancies


# -- base change ---------------------------------------------------------------------------

def test_base_change_along_identity(qxq):
    q = quotient_ideal(qxq, [(1, 0)])
    rep = base_change_quotient(q, identity_morphism(qxq))
    assert rep.ok and rep.left_dims == rep.right_dims == (1,)


def test_base_change_to_second_factor(qxq):
    q = quotient_ideal(qxq, [(1, 0)])
    rep = base_change_quotient(q, localize_element(qxq, (0, 1)))
    assert rep.ok and rep.left_dims == rep.right_dims == (1,)
    assert all(all(c == 0 for c in g) for g in rep.extended_ideal)


def test_base_change_to_first_factor(qxq):
    q = quotient_ideal(qxq, [(1, 0)])
    rep = base_change_quotient(q, localize_element(qxq, (1, 0)))
    assert rep.ok and rep.left_dims == rep.right_dims == (0,)


def test_base_change_rejects_uncertified(qxq, qxqxq):
    f = monoid_morphism(qxq, qxqxq, Matrix.from_rows(QQ, [[1, 0], [0, 1], [0, 1]]))
    q = quotient_ideal(qxq, [(1, 0)])
    with pytest.raises(InputError):
        base_change_quotient(q, f)


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_base_change_over_corpus(item):
    a = item.monoid
    E = a.end
    for gens in generator_sets(a):
        q = quotient_ideal(a, gens)
        for i in range(E.dim):
            assert base_change_quotient(q, localize_element(a, E.basis_element(i))).ok


# -- chain stabilization ---------------------------------------------------------------------

def test_constant_chain(qxq):
    ident = qxq.inst.identity(qxq.carrier)
    rep = chain_stabilization_check(qxq, [ident, ident, ident])
    assert rep.index == 0


def test_diagonal_chain_stabilizes_at_two(qxqxq):
    chain = submodule_chain_from_elements(qxqxq, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    rep = chain_stabilization_check(qxqxq, chain)
    assert [d[0] for d in rep.dims] == [1, 2, 3]
    assert rep.index == 2
    assert rep.ideal_dims == [1, 2, 3] and rep.ideal_index == 2


def test_padded_chain_reports_first_repeat(qxqxq):
    chain = submodule_chain_from_elements(qxqxq, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    padded = chain + [chain[-1], chain[-1]]
    rep = chain_stabilization_check(qxqxq, padded)
    assert rep.index == 2


def test_non_chain_rejected(qxqxq):
    chain = submodule_chain_from_elements(qxqxq, [(0, 1, 0), (1, 0, 0)])
    with pytest.raises(InputError):
        chain_stabilization_check(qxqxq, [chain[1], chain[0]])


def test_non_submodule_rejected(dual):
    inst = dual.inst
    line = inst.morphism(inst.obj(1), dual.carrier, Matrix.from_rows(QQ, [[1], [0]]))
    with pytest.raises(InputError):
        chain_stabilization_check(dual, [line])


@pytest.mark.parametrize("item", ITEMS, ids=lambda i: f"{i.monoid.field}-{i.name}")
def test_quotients_stay_noetherian(item):
    a = item.monoid
    for gens in generator_sets(a):
        q = quotient_ideal(a, gens).target
        if q.is_zero():
            continue
        E = q.end
        chain = submodule_chain_from_elements(q, [E.basis_element(i) for i in range(E.dim)])
        rep = chain_stabilization_check(q, chain)
        assert rep.index <= q.carrier.total_dim
