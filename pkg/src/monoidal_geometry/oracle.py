"""Classical commutative-ring computations used to cross-check the categorical engine.

Nothing here touches monoid objects, localization, quotients or schemes; the
only shared code is the exact linear algebra.  Where the search space is small
(a prime field with p <= 3 and dimension <= 3) answers are also found by
exhaustive enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

import sympy

from .errors import InputError
from .linalg import Matrix, kernel_basis, rref, solve

EXHAUSTIVE_P = 3
EXHAUSTIVE_DIM = 3


class ClassicalRing:
    """A finite-dimensional commutative algebra given by its multiplication table."""

    def __init__(self, field, table, unit, check: bool = True):
        self.field = field
        self.dim = len(unit)
        self.table = [[tuple(field(c) for c in table[i][j]) for j in range(self.dim)] for i in range(self.dim)]
        self.unit = tuple(field(c) for c in unit)
        if check:
            problems = self.axiom_failures()
            if problems:
                raise InputError(f"not a commutative ring: {problems[0]}")

    @classmethod
    def from_mult_matrix(cls, field, mult: Matrix, unit) -> "ClassicalRing":
        """From a ``dim x dim^2`` multiplication matrix with the row-major pairing."""
        n = mult.rows
        table = [[mult.col(i * n + j) for j in range(n)] for i in range(n)]
        return cls(field, table, unit)

    def e(self, i):
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(self.dim))

    def zero(self):
        return (self.field.zero,) * self.dim

    def add(self, x, y):
        return tuple(self.field.add(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(self.field.sub(a, b) for a, b in zip(x, y))

    def scale(self, c, x):
        return tuple(self.field.mul(c, a) for a in x)

    def mul(self, x, y):
        F = self.field
        acc = [F.zero] * self.dim
        for i in range(self.dim):
            if x[i] == F.zero:
                continue
            for j in range(self.dim):
                if y[j] == F.zero:
                    continue
                c = F.mul(x[i], y[j])
                row = self.table[i][j]
                for k in range(self.dim):
                    acc[k] = F.add(acc[k], F.mul(c, row[k]))
        return tuple(acc)

    def axiom_failures(self) -> list[str]:
        out = []
        basis = [self.e(i) for i in range(self.dim)]
        for x in basis:
            if self.mul(self.unit, x) != x:
                out.append("unit")
                break
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                if self.mul(x, y) != self.mul(y, x):
                    out.append(f"commutativity ({i},{j})")
                for z in basis:
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                        out.append(f"associativity ({i},{j})")
                        break
        return out

    def left_matrix(self, x) -> Matrix:
        return Matrix.from_columns(self.field, [self.mul(x, self.e(j)) for j in range(self.dim)], self.dim)

    def elements(self):
        """All elements; only for prime fields."""
        return (tuple(v) for v in iproduct(range(self.field.characteristic), repeat=self.dim))

    def small(self) -> bool:
        F = self.field
        return 0 < F.characteristic <= EXHAUSTIVE_P and self.dim <= EXHAUSTIVE_DIM


@dataclass
class ClassicalMap:
    """``matrix`` takes coordinates of ``source`` to coordinates of ``target``."""

    source: ClassicalRing
    target: ClassicalRing
    matrix: Matrix


def _span_ring(r: ClassicalRing, cols: list, unit) -> tuple[ClassicalRing, Matrix]:
    """Subspace spanned by ``cols`` (closed under products) as a ring with the given unit."""
    F = r.field
    if not cols:
        return ClassicalRing(F, [], (), check=False), Matrix.zeros(F, r.dim, 0)
    B = Matrix.from_columns(F, cols, r.dim)

    def coords(v):
        x = solve(B, Matrix.column(F, v))
        if x is None:
            raise AssertionError("product leaves the subring")
        return x.col(0)

    n = len(cols)
    table = [[coords(r.mul(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    return ClassicalRing(F, table, coords(unit)), B


def _subspace_key(F, vectors, dim):
    if not vectors:
        return ()
    R, _, rank = rref(Matrix.from_rows(F, [list(v) for v in vectors], dim))
    return tuple(tuple(R[i, j] for j in range(dim)) for i in range(rank))


def _all_ideals(r: ClassicalRing):
    """Every ideal of a small ring, each as its list of elements."""
    F = r.field
    elems = list(r.elements())
    basis = [r.e(i) for i in range(r.dim)]
    seen = {}
    frontier = [()]
    seen[()] = {r.zero()}
    while frontier:
        nxt = []
        for key in frontier:
            members = seen[key]
            for v in elems:
                if v in members:
                    continue
                gens = list(key) + [v]
                span = _closure(r, [r.mul(g, b) for g in gens for b in basis] + gens)
                k = _subspace_key(F, list(span), r.dim)
                if k not in seen:
                    seen[k] = span
                    nxt.append(k)
        frontier = nxt
    return list(seen.values())


def _closure(r: ClassicalRing, gens) -> set:
    """Additive closure (all F_p-combinations) by breadth-first sums."""
    members = {r.zero()}
    frontier = [r.zero()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = r.add(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return members


def oracle_localize(r: ClassicalRing, t) -> tuple[ClassicalRing, ClassicalMap, dict]:
    """``R_t`` as the eventual image ``t^N R`` with unit the Fitting idempotent.

    Returns the ring, the map ``R -> R_t`` (``x -> e x``) and search notes.
    """
    F = r.field
    t = tuple(F(c) for c in t)
    L = r.left_matrix(t)
    power = Matrix.identity(F, r.dim)
    prev = None
    while True:
        power = power @ L
        rk = power.rank()
        if rk == prev:
            break
        prev = rk
    image = [tuple(c) for c in _column_basis(power)]
    kernel = [tuple(c) for c in kernel_basis(power).columns()]
    notes = {"rank": len(image)}
    if image:
        both = Matrix.from_columns(F, image + kernel, r.dim)
        split = solve(both, Matrix.column(F, r.unit)).col(0)
        e = r.zero()
        for c, v in zip(split[:len(image)], image):
            e = r.add(e, r.scale(c, v))
    else:
        e = r.zero()
    loc, B = _span_ring(r, image, e)
    cols = []
    for j in range(r.dim):
        v = r.mul(e, r.e(j))
        cols.append(solve(B, Matrix.column(F, v)).col(0) if image else ())
    M = Matrix.from_columns(F, cols, len(image)) if image else Matrix.zeros(F, 0, r.dim)
    if 0 < F.characteristic and F.characteristic ** r.dim <= 81:
        notes.update(_localize_by_search(r, t, kernel))
    return loc, ClassicalMap(r, loc, M), notes


def _column_basis(m: Matrix):
    _, pivots, _ = rref(m)
    return [m.col(j) for j in pivots]


def _localize_by_search(r: ClassicalRing, t, kernel) -> dict:
    """Among all ideals ``I`` with ``t`` invertible mod ``I``, the smallest one must be the
    kernel of ``R -> R_t``."""
    elems = list(r.elements())
    inverting = []
    for ideal in _all_ideals(r):
        one = r.unit
        if any(r.sub(r.mul(t, y), one) in ideal for y in elems):
            inverting.append(ideal)
    smallest = set.intersection(*inverting) if inverting else None
    universal = smallest is not None and any(ideal == smallest for ideal in inverting)
    expected = _closure(r, kernel)
    return {"search_ideals": len(inverting), "search_agrees": bool(universal and smallest == expected)}


def oracle_ideal_membership(r: ClassicalRing, gens, target):
    """``(member, coefficients)`` for ``target`` in the ideal generated by ``gens``."""
    F = r.field
    gens = [tuple(F(c) for c in g) for g in gens]
    target = tuple(F(c) for c in target)
    cols = [r.mul(r.e(b), g) for g in gens for b in range(r.dim)]
    if cols:
        sol = solve(Matrix.from_columns(F, cols, r.dim), Matrix.column(F, target))
    else:
        sol = None if any(c != F.zero for c in target) else Matrix.zeros(F, 0, 1)
    member = sol is not None
    coeffs = None
    if member and gens:
        v = sol.col(0)
        coeffs = [tuple(v[k * r.dim:(k + 1) * r.dim]) for k in range(len(gens))]
        total = r.zero()
        for s, g in zip(coeffs, gens):
            total = r.add(total, r.mul(s, g))
        assert total == target
    elif member:
        coeffs = []
    if r.small():
        exhaustive = target in _closure(r, cols)
        if exhaustive != member:
            raise AssertionError("linear and exhaustive ideal membership disagree")
    return member, coeffs


def oracle_quotient(r: ClassicalRing, gens) -> tuple[ClassicalRing, ClassicalMap]:
    """``R/(gens)`` on a complement of the ideal, with the projection."""
    F = r.field
    cols = [r.mul(r.e(b), tuple(F(c) for c in g)) for g in gens for b in range(r.dim)]
    span = _column_basis(Matrix.from_columns(F, cols, r.dim)) if cols else []
    # complement: standard basis vectors outside the span, greedily
    chosen = list(span)
    comp = []
    for i in range(r.dim):
        trial = chosen + [r.e(i)]
        if Matrix.from_columns(F, trial, r.dim).rank() == len(trial):
            chosen.append(r.e(i))
            comp.append(i)
    full = Matrix.from_columns(F, chosen, r.dim)
    inv = full.inverse()
    k = len(span)

    def proj(v):
        c = (inv @ Matrix.column(F, v)).col(0)
        return tuple(c[k:])

    n = len(comp)
    table = [[proj(r.mul(r.e(comp[i]), r.e(comp[j]))) for j in range(n)] for i in range(n)]
    q = ClassicalRing(F, table, proj(r.unit) if n else ())
    M = Matrix.from_columns(F, [proj(r.e(j)) for j in range(r.dim)], n) if n else Matrix.zeros(F, 0, r.dim)
    return q, ClassicalMap(r, q, M)


def _charpoly(r: ClassicalRing, x):
    L = r.left_matrix(x)
    F = r.field
    X = sympy.Symbol("X")
    if F.characteristic:
        M = sympy.Matrix(L.rows, L.cols, [int(c) for c in L.entries()])
        return sympy.Poly(M.charpoly(X).as_expr(), X, modulus=F.characteristic)
    M = sympy.Matrix(L.rows, L.cols, [sympy.Rational(c.numerator, c.denominator) for c in L.entries()])
    return sympy.Poly(M.charpoly(X).as_expr(), X, domain="QQ")


def oracle_is_field(r: ClassicalRing) -> tuple[bool, object]:
    """``(is_field, witness)``: an irreducible characteristic polynomial proves a field;
    a nonzero element with nonzero annihilator disproves it."""
    F = r.field
    if r.dim == 0:
        return False, None
    if F.characteristic and F.characteristic ** r.dim <= 10 ** 4:
        for x in r.elements():
            if any(x) and r.left_matrix(x).rank() < r.dim:
                return False, x
        return True, None
    for bound in range(1, 4):
        for cs in iproduct(range(-bound, bound + 1), repeat=r.dim):
            if not any(cs):
                continue
            x = tuple(F(c) for c in cs)
            if r.left_matrix(x).rank() < r.dim:
                return False, x
            if _charpoly(r, x).is_irreducible:
                return True, x
    raise AssertionError("field test undecided within the search budget")


def oracle_fraction_field(r: ClassicalRing) -> tuple[ClassicalRing, dict]:
    """A finite-dimensional domain is its own fraction field; returns it with inverses."""
    ok, _ = oracle_is_field(r)
    if not ok:
        raise InputError("not an integral domain")
    F = r.field
    if F.characteristic and F.characteristic ** r.dim <= 10 ** 4:
        elems = [x for x in r.elements() if any(x)]
        inverses = {}
        for x in elems:
            for y in elems:
                if r.mul(x, y) == r.unit:
                    inverses[x] = y
                    break
    else:
        inverses = {}
        for i in range(r.dim):
            x = r.e(i)
            y = solve(r.left_matrix(x), Matrix.column(F, r.unit)).col(0)
            inverses[x] = y
    for x, y in inverses.items():
        assert r.mul(x, y) == r.unit
    return r, inverses


def same_kernel(m1: Matrix, m2: Matrix) -> bool:
    """Whether two surjective coordinate maps out of one space have the same kernel."""
    if m1.cols != m2.cols or m1.rows != m2.rows:
        return False
    if m1.rank() != m1.rows or m2.rank() != m2.rows:
        return False
    k1, k2 = kernel_basis(m1), kernel_basis(m2)
    if k1.cols != k2.cols:
        return False
    return k1.cols == 0 or Matrix.from_columns(m1.field, k1.columns() + k2.columns(), m1.cols).rank() == k1.cols


def induced_ring_iso(f: ClassicalMap, g_matrix: Matrix, g_mul, g_unit) -> bool:
    """Check that ``h = g o f^{-1}`` (defined when kernels agree) is a unital ring map.

    ``g_mul`` multiplies coordinate tuples in the target of ``g``; ``g_unit`` is its unit.
    """
    F = f.source.field
    if not same_kernel(f.matrix, g_matrix):
        return False
    n = f.target.dim
    if n == 0:
        return True
    sec = []
    for i in range(n):
        x = solve(f.matrix, Matrix.column(F, f.target.e(i)))
        sec.append(x.col(0))
    h_cols = [(g_matrix @ Matrix.column(F, s)).col(0) for s in sec]
    H = Matrix.from_columns(F, h_cols, n)

    def h(v):
        return (H @ Matrix.column(F, v)).col(0)

    for i in range(n):
        for j in range(n):
            if h(f.target.mul(f.target.e(i), f.target.e(j))) != g_mul(h(f.target.e(i)), h(f.target.e(j))):
                return False
    return h(f.target.unit) == tuple(g_unit)

