"""Corpus of small monoids and presheaves for the property suites.

Prime-field mode enumerates every unital commutative structure-constant table
with ``e_0`` as the unit and keeps one table per invariant signature (counts of
idempotents, nilpotents, units and square-zero elements).  The rational mode
is a fixed list.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as iproduct

from .category import FiniteSpace, FinVect, Presheaf
from .errors import InputError
from .fields import QQ, PrimeField, field_from_tag
from .linalg import Matrix
from .monoid import (
    ModuleObject,
    MonoidObject,
    algebra,
    check_monoid,
    module_cokernel,
    monoid,
    product_monoid,
    zero_module,
)


@dataclass(frozen=True, eq=False)
class CorpusItem:
    name: str
    monoid: MonoidObject
    signature: tuple = ()


def _int_table(p, n, products):
    """Full table from the free products ``e_i e_j`` (``1 <= i <= j``)."""
    table = [[None] * n for _ in range(n)]
    unit = tuple(1 if k == 0 else 0 for k in range(n))
    for i in range(n):
        table[0][i] = table[i][0] = tuple(1 if k == i else 0 for k in range(n))
    it = iter(products)
    for i in range(1, n):
        for j in range(i, n):
            v = next(it)
            table[i][j] = table[j][i] = v
    return table, unit


def _mul(p, table, x, y):
    n = len(x)
    out = [0] * n
    for i in range(n):
        if x[i]:
            for j in range(n):
                if y[j]:
                    c = x[i] * y[j]
                    row = table[i][j]
                    for k in range(n):
                        out[k] += c * row[k]
    return tuple(v % p for v in out)


def _associative(p, table) -> bool:
    n = len(table)
    basis = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    for i in range(1, n):
        for j in range(1, n):
            xy = table[i][j]
            for k in range(1, n):
                if _mul(p, table, xy, basis[k]) != _mul(p, table, basis[i], table[j][k]):
                    return False
    return True


def _signature(p, table) -> tuple:
    n = len(table)
    elems = list(iproduct(range(p), repeat=n))
    one = tuple(1 if k == 0 else 0 for k in range(n))
    zero = (0,) * n
    idem = nil = units = sqz = 0
    for x in elems:
        x2 = _mul(p, table, x, x)
        if x2 == x:
            idem += 1
        if x2 == zero:
            sqz += 1
        y = x
        for _ in range(n):
            y = _mul(p, table, y, x)
        if y == zero:
            nil += 1
        if any(_mul(p, table, x, z) == one for z in elems):
            units += 1
    nil_dim = 0
    while p ** nil_dim < nil:
        nil_dim += 1
    return (n, idem, nil, units, sqz, nil_dim)


def _label(p, sig) -> str:
    n, idem, nil, _, sqz, nil_dim = sig
    comps = idem.bit_length() - 1
    fp = f"F{p}"
    if n == 1:
        return fp
    if nil_dim == 0:
        if comps == 1:
            return f"F{p ** n}"
        if comps == n:
            return "x".join([fp] * n)
        if n == 3 and comps == 2:
            return f"{fp}xF{p ** 2}"
    else:
        if n == 2:
            return f"{fp}[x]/(x^2)"
        if n == 3 and comps == 2:
            return f"{fp}x{fp}[x]/(x^2)"
        if n == 3 and comps == 1:
            return f"{fp}[x,y]/(x,y)^2" if sqz == p ** 2 else f"{fp}[x]/(x^3)"
    return f"{fp}-dim{n}-{idem}-{nil}"


def enumerate_tables(p: int, n: int):
    """All associative tables of dimension ``n`` over ``F_p`` (unit ``e_0``)."""
    if n == 1:
        yield [[(1,)]], (1,)
        return
    free = (n - 1) * n // 2
    vectors = list(iproduct(range(p), repeat=n))
    for products in iproduct(vectors, repeat=free):
        table, unit = _int_table(p, n, products)
        if _associative(p, table):
            yield table, unit


def prime_field_corpus(p: int, dim_max: int) -> list[CorpusItem]:
    if p not in (2, 3) or not 1 <= dim_max <= 3:
        raise InputError("exhaustive enumeration supports F2/F3 with dimension 1..3")
    inst = FinVect(PrimeField(p))
    out = []
    for n in range(1, dim_max + 1):
        seen = {}
        for table, unit in enumerate_tables(p, n):
            sig = _signature(p, table)
            if sig not in seen:
                seen[sig] = (table, unit)
        for sig, (table, unit) in sorted(seen.items()):
            label = _label(p, sig)
            out.append(CorpusItem(label, algebra(inst, table, unit, name=label), sig))
    return out


def _poly_algebra(inst, coeffs, name):
    """``k[x]/(f)`` for monic ``f`` with the given low-first coefficients (without the leading 1)."""
    F = inst.field
    n = len(coeffs)

    def reduce(v):
        v = list(v) + [F.zero] * (2 * n - len(v))
        for d in range(len(v) - 1, n - 1, -1):
            c = v[d]
            if c != F.zero:
                v[d] = F.zero
                for k in range(n):
                    v[d - n + k] = F.sub(v[d - n + k], F.mul(c, F(coeffs[k])))
        return tuple(v[:n])

    table = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [F.zero] * (i + j + 1)
            v[i + j] = F.one
            row.append(reduce(v))
        table.append(row)
    unit = tuple(F.one if k == 0 else F.zero for k in range(n))
    return algebra(inst, table, unit, name=name)


def rational_corpus() -> list[CorpusItem]:
    inst = FinVect(QQ)
    q = algebra(inst, [[[1]]], [1], name="Q")
    dual = _poly_algebra(inst, [0, 0], "Q[x]/(x^2)")
    items = [
        ("Q", q),
        ("QxQ", product_monoid(q, q, name="QxQ")),
        ("QxQxQ", product_monoid(q, q, q, name="QxQxQ")),
        ("Q[x]/(x^2)", dual),
        ("Q[x]/(x^3)", _poly_algebra(inst, [0, 0, 0], "Q[x]/(x^3)")),
        ("Q[x]/(x^2-2)", _poly_algebra(inst, [-2, 0], "Q[x]/(x^2-2)")),
        ("QxQ[x]/(x^2)", product_monoid(q, dual, name="QxQ[x]/(x^2)")),
    ]
    out = []
    for name, m in items:
        if not check_monoid(m).ok:
            raise AssertionError(f"curated algebra {name} fails the axioms")
        out.append(CorpusItem(name, m))
    return out


def corpus_generate(field, dim_max: int = 3) -> list[MonoidObject]:
    return [c.monoid for c in corpus_items(field, dim_max)]


def corpus_items(field, dim_max: int = 3) -> list[CorpusItem]:
    tag = field if isinstance(field, str) else field.tag
    F = field_from_tag(tag)
    if F.characteristic == 0:
        return [c for c in rational_corpus() if max(c.monoid.dims) <= dim_max]
    return prime_field_corpus(F.characteristic, dim_max)


def full_corpus(dim_max: int = 3) -> list[CorpusItem]:
    return corpus_items("F2", dim_max) + corpus_items("F3", dim_max) + corpus_items("Q", dim_max)


def corpus_modules(a: MonoidObject) -> list[ModuleObject]:
    """Up to three modules: ``A``, ``A/bA`` for the first basis element ``b`` of E(A) that is
    not a unit, and the zero module."""
    out = [a.regular]
    E = a.end
    for i in range(E.dim):
        b = E.basis_element(i)
        if not E.is_unit(b):
            q, _ = module_cokernel(E.to_morphism(b), a.regular)
            out.append(q)
            break
    out.append(zero_module(a))
    return out


# -- presheaves ------------------------------------------------------------

SPACES = {
    "point": FiniteSpace.point,
    "sierpinski": FiniteSpace.sierpinski,
    "discrete2": FiniteSpace.discrete_two,
    "chain3": lambda: FiniteSpace.chain(3),
}


def random_presheaf(inst, rng: random.Random, max_dim: int = 2):
    """A presheaf with random dimensions and random restrictions along covering pairs."""
    F = inst.field
    dims = {}
    for u in inst.opens:
        dims[u] = 0 if u == inst.empty else rng.randint(0, max_dim)
    res = {}
    for small, big in inst.covers:
        if dims[small] == 0 or dims[big] == 0:
            continue
        rows = [[F(rng.randint(-2, 2)) for _ in range(dims[big])] for _ in range(dims[small])]
        res[(big, small)] = Matrix.from_rows(F, rows, dims[big])
    return inst.obj(dims, res)


def presheaf_corpus(count: int = 24, seed: int = 0, field=QQ):
    """``count`` presheaves spread over spaces with at most three nonempty opens."""
    rng = random.Random(seed)
    names = list(SPACES)
    out = []
    for k in range(count):
        space = SPACES[names[k % len(names)]]()
        inst = Presheaf(space, field)
        out.append((space.name, random_presheaf(inst, rng)))
    return out


def sierpinski_split_monoid(field=QQ):
    """``A(X) = k x k``, ``A(U) = k``, restriction ``(a, b) -> b``."""
    inst = Presheaf(FiniteSpace.sierpinski(), field)
    F = field
    carrier = inst.obj({"empty": 0, "U": 1, "X": 2}, {("X", "U"): Matrix.from_rows(F, [[0, 1]], 2)})
    mult_x = Matrix.from_rows(F, [[1, 0, 0, 0], [0, 0, 0, 1]], 4)
    mult_u = Matrix.from_rows(F, [[1]], 1)
    mult = {"empty": Matrix.zeros(F, 0, 0), "U": mult_u, "X": mult_x}
    unit = {"empty": Matrix.zeros(F, 0, 0), "U": Matrix.from_rows(F, [[1]], 1),
            "X": Matrix.from_rows(F, [[1], [1]], 1)}
    return monoid(inst, carrier, mult, unit, name="A_sierpinski")
