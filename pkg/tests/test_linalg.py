from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

from monoidal_geometry import InputError, Matrix, PrimeField, QQ
from monoidal_geometry.fields import field_from_tag
from monoidal_geometry.linalg import chain_colimit, kernel_basis, kron, rref, solve

F2 = PrimeField(2)
F5 = PrimeField(5)


def M(F, rows, cols=None):
    return Matrix.from_rows(F, rows, cols)


def as_sympy(m):
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for x in m.entries()])


def rational_matrices(max_rows=4, max_cols=4):
    entry = st.integers(-3, 3).map(Fraction)
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: M(QQ, rows, c))))


def f5_matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, 4), min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: M(F5, rows, c))))


# -- fields ------------------------------------------------------------------

def test_rationals_stay_reduced():
    x = QQ("6/4")
    assert x == Fraction(3, 2) and x.denominator > 0
    assert QQ.to_text(Fraction(-6, 4)) == "-3/2"


def test_prime_field_values_in_range():
    F = PrimeField(7)
    assert F(-1) == 6
    assert F.inv(3) * 3 % 7 == 1
    assert F(Fraction(1, 2)) == 4


@pytest.mark.parametrize("bad", [1, 4, 2**31 + 11, "7"])
def test_prime_field_rejects_non_primes(bad):
    with pytest.raises(InputError):
        PrimeField(bad)


def test_field_tags():
    assert field_from_tag("Q") is QQ
    assert field_from_tag("F3") == PrimeField(3)
    with pytest.raises(InputError):
        field_from_tag("R")


# -- rref ------------------------------------------------------------------

def test_rref_identity():
    r, piv, rank = rref(Matrix.identity(QQ, 2))
    assert r == Matrix.identity(QQ, 2) and piv == [0, 1] and rank == 2


def test_rref_zero():
    z = Matrix.zeros(QQ, 3, 3)
    r, piv, rank = rref(z)
    assert r == z and piv == [] and rank == 0


def test_rref_rank_one_example():
    r, piv, rank = rref(M(QQ, [[2, 4], [1, 2]]))
    assert r == M(QQ, [[1, 2], [0, 0]])
    assert rank == 1 and piv == [0]


@given(rational_matrices())
def test_rref_matches_sympy(m):
    r, piv, rank = rref(m)
    ref, ref_piv = as_sympy(m).rref()
    assert as_sympy(r) == ref
    assert tuple(piv) == ref_piv and rank == len(ref_piv)


@given(rational_matrices())
def test_rref_idempotent(m):
    r, _, _ = rref(m)
    assert rref(r)[0] == r


@given(f5_matrices())
def test_rref_idempotent_mod_p(m):
    r, piv, rank = rref(m)
    assert rref(r)[0] == r and rank == len(piv)


# -- solve -----------------------------------------------------------------

def test_solve_identity_returns_b():
    b = M(QQ, [[1, 2], [3, 4]])
    assert solve(Matrix.identity(QQ, 2), b) == b


def test_solve_over_f2_is_one_of_the_enumerated_solutions():
    a, b = M(F2, [[1, 1]]), M(F2, [[1]])
    x = solve(a, b)
    valid = [v for v in product(range(2), repeat=2) if (v[0] + v[1]) % 2 == 1]
    assert x.col(0) in valid
    assert x.col(0) == (1, 0)


def test_solve_inconsistent():
    assert solve(Matrix.zeros(QQ, 2, 2), M(QQ, [[1], [0]])) is None


def test_solve_dimension_mismatch():
    with pytest.raises(InputError):
        solve(Matrix.identity(QQ, 2), M(QQ, [[1]]))


@given(rational_matrices(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_recovers_consistent_systems(a, xs):
    x0 = Matrix.column(QQ, xs[:a.cols])
    b = a @ x0
    x = solve(a, b)
    assert x is not None and a @ x == b


@given(f5_matrices(3, 3), st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_solve_mod_p_against_enumeration(a, bs):
    b = Matrix.column(F5, bs[:a.rows])
    x = solve(a, b)
    exists = any(a @ Matrix.column(F5, v) == b for v in product(range(5), repeat=a.cols))
    assert (x is not None) == exists
    if x is not None:
        assert a @ x == b


# -- kernels -----------------------------------------------------------------

def test_kernel_of_identity_is_empty():
    assert kernel_basis(Matrix.identity(QQ, 3)).cols == 0


def test_kernel_of_zero_is_everything():
    assert kernel_basis(Matrix.zeros(QQ, 3, 3)) == Matrix.identity(QQ, 3)


def test_kernel_example():
    k = kernel_basis(M(QQ, [[1, 2]]))
    assert k.cols == 1
    v = k.col(0)
    # up to scale the kernel is spanned by (-2, 1)
    assert v[0] * 1 == v[1] * -2 and v != (0, 0)


@given(rational_matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.cols == m.cols - m.rank()
    assert (m @ k).is_zero()
    assert k.cols == 0 or k.rank() == k.cols


@given(f5_matrices())
def test_rank_nullity_mod_p(m):
    k = kernel_basis(m)
    assert k.cols == m.cols - m.rank() and (m @ k).is_zero()


# -- kron ------------------------------------------------------------------

def test_kron_identities():
    assert kron(Matrix.identity(QQ, 2), Matrix.identity(QQ, 3)) == Matrix.identity(QQ, 6)


def test_kron_scalars():
    assert kron(M(QQ, [[2]]), M(QQ, [[3]])) == M(QQ, [[6]])


def test_kron_of_swaps_matches_basis_images():
    swap = M(QQ, [[0, 1], [1, 0]])
    # e_i (x) e_j sits at 2i + j and is sent to e_{1-i} (x) e_{1-j}
    expected = Matrix.zeros(QQ, 4, 4).to_list()
    for i, j in product(range(2), repeat=2):
        expected[2 * (1 - i) + (1 - j)][2 * i + j] = 1
    got = kron(swap, swap)
    assert got == M(QQ, expected)
    assert got.col(0) == (0, 0, 0, 1) and got.col(1) == (0, 0, 1, 0)


def test_kron_field_mismatch():
    with pytest.raises(InputError):
        kron(Matrix.identity(QQ, 1), Matrix.identity(F2, 1))


@given(rational_matrices(3, 3), rational_matrices(3, 3))
def test_rank_of_kron_is_product(a, b):
    assert kron(a, b).rank() == a.rank() * b.rank()


@given(rational_matrices(2, 2), rational_matrices(2, 2), rational_matrices(2, 2), rational_matrices(2, 2))
def test_kron_mixed_product(a, b, c, d):
    if a.cols != c.rows or b.cols != d.rows:
        return
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


# -- chain colimits ------------------------------------------------------------

def test_chain_colimit_identity():
    cc = chain_colimit(Matrix.identity(QQ, 3))
    assert cc.dim == 3 and cc.projection == Matrix.identity(QQ, 3) and cc.index == 0


def test_chain_colimit_nilpotent():
    cc = chain_colimit(M(QQ, [[0, 0], [1, 0]]))
    assert cc.dim == 0
    assert cc.rank_trace == (2, 1, 0, 0)


def test_chain_colimit_idempotent():
    cc = chain_colimit(M(QQ, [[1, 0], [0, 0]]))
    assert cc.dim == 1
    assert cc.projection @ Matrix.column(QQ, [0, 1]) == Matrix.zeros(QQ, 1, 1)
    assert cc.index == 1


def test_chain_colimit_rejects_non_square():
    with pytest.raises(InputError):
        chain_colimit(M(QQ, [[1, 0]]))


def test_chain_colimit_truncation_is_flagged():
    cc = chain_colimit(M(QQ, [[0, 0, 0], [1, 0, 0], [0, 1, 0]]), max_steps=1)
    assert cc.truncated


@given(rational_matrices(4, 4))
def test_chain_colimit_dimension_is_stable_rank(m):
    if not m.is_square():
        return
    cc = chain_colimit(m)
    n = m.rows
    assert cc.index <= n
    assert cc.dim == m.power(n).rank()
    # the projection kills exactly the eventual kernel
    assert (cc.projection @ kernel_basis(m.power(n))).is_zero()
    assert cc.projection.rank() == cc.dim
