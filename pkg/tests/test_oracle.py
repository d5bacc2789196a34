from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from monoidal_geometry import InputError, Matrix, QQ
from monoidal_geometry.corpus import corpus_items
from monoidal_geometry.oracle import (
    ClassicalMap,
    ClassicalRing,
    induced_ring_iso,
    oracle_fraction_field,
    oracle_ideal_membership,
    oracle_is_field,
    oracle_localize,
    oracle_quotient,
    same_kernel,
)

from conftest import F2, F3

QXQ = ClassicalRing(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1])
DUAL_Q = ClassicalRing(QQ, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])
DUAL_F3 = ClassicalRing(F3, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])
SQRT2 = ClassicalRing(QQ, [[[1, 0], [0, 1]], [[0, 1], [2, 0]]], [1, 0])
F4 = ClassicalRing(F2, [[[1, 0], [0, 1]], [[0, 1], [1, 1]]], [1, 0])
F2XF2 = ClassicalRing(F2, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1])


def classical(item):
    a = item.monoid
    return ClassicalRing.from_mult_matrix(a.field, a.mult.mat, a.unit.mat.col(0))


SMALL = [classical(i) for i in corpus_items(F2, 3) + corpus_items(F3, 2)]


def test_non_commutative_table_rejected():
    with pytest.raises(InputError):
        ClassicalRing(QQ, [[[1, 0], [0, 1]], [[0, 0], [0, 1]]], [1, 0])


def test_from_mult_matrix_round_trip():
    mult = Matrix.from_rows(QQ, [[1, 0, 0, 0], [0, 0, 0, 1]])
    r = ClassicalRing.from_mult_matrix(QQ, mult, (1, 1))
    assert r.mul((1, 0), (0, 1)) == (0, 0) and r.mul((2, 3), (1, 1)) == (2, 3)


# -- localization ----------------------------------------------------------------

def test_localize_product_at_idempotent():
    loc, f, _ = oracle_localize(QXQ, (1, 0))
    assert loc.dim == 1
    assert f.matrix == Matrix.from_rows(QQ, [[1, 0]])


def test_localize_at_nilpotent_is_zero():
    loc, f, _ = oracle_localize(DUAL_Q, (0, 1))
    assert loc.dim == 0 and f.matrix.rows == 0


def test_localize_at_unit_is_identity():
    loc, f, _ = oracle_localize(SQRT2, (0, 1))
    assert loc.dim == 2 and f.matrix.rank() == 2


@pytest.mark.parametrize("r", SMALL, ids=lambda r: f"{r.field}-{r.dim}-{r.table}")
def test_localization_agrees_with_ideal_search(r):
    for i in range(r.dim):
        _, _, notes = oracle_localize(r, r.e(i))
        if "search_agrees" in notes:
            assert notes["search_agrees"]


# -- ideal membership ----------------------------------------------------------------

def test_unit_generates_the_unit_ideal_in_dual_f3():
    # (1 + x)(1 - x) = 1 - x^2 = 1, so 1 - x = (1, 2) is the cofactor
    member, coeffs = oracle_ideal_membership(DUAL_F3, [(1, 1)], DUAL_F3.unit)
    assert member and coeffs == [(1, 2)]


def test_x_plus_one_not_in_the_ideal_of_x():
    member, coeffs = oracle_ideal_membership(DUAL_F3, [(0, 1)], (1, 1))
    assert not member and coeffs is None


def test_membership_in_empty_ideal():
    assert oracle_ideal_membership(QXQ, [], (0, 0)) == (True, [])
    assert oracle_ideal_membership(QXQ, [], (1, 0))[0] is False


@given(st.sampled_from(SMALL), st.data())
def test_membership_coefficients_reconstruct_target(r, data):
    p = r.field.characteristic
    vec = st.lists(st.integers(0, p - 1), min_size=r.dim, max_size=r.dim).map(tuple)
    gens = data.draw(st.lists(vec, min_size=1, max_size=2))
    target = data.draw(vec)
    # for small rings the oracle also enumerates the ideal and asserts agreement
    member, coeffs = oracle_ideal_membership(r, gens, target)
    if member:
        total = r.zero()
        for s, g in zip(coeffs, gens):
            total = r.add(total, r.mul(s, tuple(r.field(c) for c in g)))
        assert total == tuple(r.field(c) for c in target)


# -- quotients ---------------------------------------------------------------------

def test_quotient_of_dual_numbers_by_x():
    q, f = oracle_quotient(DUAL_Q, [(0, 1)])
    assert q.dim == 1 and f.matrix == Matrix.from_rows(QQ, [[1, 0]])


def test_quotient_by_unit_is_zero():
    q, _ = oracle_quotient(SQRT2, [(0, 1)])
    assert q.dim == 0


def test_quotient_by_nothing():
    q, f = oracle_quotient(QXQ, [])
    assert q.dim == 2 and f.matrix == Matrix.identity(QQ, 2)


# -- fields -----------------------------------------------------------------------

def test_f4_is_a_field():
    assert oracle_is_field(F4) == (True, None)


def test_f2xf2_is_not_a_field():
    ok, wit = oracle_is_field(F2XF2)
    assert not ok and F2XF2.left_matrix(wit).rank() < 2


def test_sqrt2_is_a_field():
    assert oracle_is_field(SQRT2)[0]


def test_inverse_of_sqrt2():
    # x^2 = 2, so x^-1 = x/2
    _, inverses = oracle_fraction_field(SQRT2)
    assert inverses[(0, 1)] == (0, Fraction(1, 2))


def test_fraction_field_of_f4_has_all_inverses():
    _, inverses = oracle_fraction_field(F4)
    assert len(inverses) == 3 and inverses[(0, 1)] == (1, 1)


def test_fraction_field_rejects_non_domain():
    with pytest.raises(InputError):
        oracle_fraction_field(DUAL_Q)


# -- comparison helpers -------------------------------------------------------------

def test_same_kernel_up_to_row_operations():
    m = Matrix.from_rows(QQ, [[1, 1, 0]])
    assert same_kernel(m, Matrix.from_rows(QQ, [[2, 2, 0]]))
    assert not same_kernel(m, Matrix.from_rows(QQ, [[1, 0, 0]]))


def test_induced_iso_from_identity():
    f = ClassicalMap(QXQ, QXQ, Matrix.identity(QQ, 2))
    assert induced_ring_iso(f, Matrix.identity(QQ, 2), QXQ.mul, QXQ.unit)


def test_induced_map_must_preserve_unit():
    f = ClassicalMap(QXQ, QXQ, Matrix.identity(QQ, 2))
    # swapping coordinates is a ring map; scaling is not
    swap = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
    assert induced_ring_iso(f, swap, QXQ.mul, QXQ.unit)
    assert not induced_ring_iso(f, Matrix.from_rows(QQ, [[2, 0], [0, 1]]), QXQ.mul, QXQ.unit)
