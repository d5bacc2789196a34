"""Exact dense linear algebra over the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .fields import Field


class Matrix:
    """Immutable dense matrix; entries are stored row-major as nested tuples."""

    __slots__ = ("field", "rows", "cols", "data", "_hash")

    def __init__(self, field: Field, rows: int, cols: int, data):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows, cols: int | None = None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise InputError(f"ragged matrix: expected {cols} columns, got {len(r)}")
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, field: Field, values) -> "Matrix":
        return cls.from_rows(field, [[v] for v in values], 1)

    @classmethod
    def from_columns(cls, field: Field, columns, rows: int) -> "Matrix":
        columns = [tuple(c) for c in columns]
        return cls(field, rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(rows)))

    @classmethod
    def unit_vector(cls, field: Field, n: int, i: int) -> "Matrix":
        return cls(field, n, 1, tuple((field.one if k == i else field.zero,) for k in range(n)))

    # -- access -----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def entries(self) -> tuple:
        """Row-major flat tuple."""
        return tuple(x for r in self.data for x in r)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.data == other.data
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(self.field.to_text(x)) for x in r) for r in self.data)
        return f"Matrix<{self.field}>[{self.rows}x{self.cols}]({body})"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise InputError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} + {other.shape}")
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} - {other.shape}")
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(neg(a) for a in r) for r in self.data))

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(mul(c, a) for a in r) for r in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        z = F.zero
        ocols = other.columns()
        out = []
        if F.characteristic:
            p = F.characteristic
            for r in self.data:
                out.append(tuple(sum(a * b for a, b in zip(r, c)) % p for c in ocols))
        else:
            for r in self.data:
                out.append(tuple(sum((a * b for a, b in zip(r, c) if a and b), z) for c in ocols))
        return Matrix(F, self.rows, other.cols, tuple(out))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def power(self, n: int) -> "Matrix":
        if not self.is_square():
            raise InputError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        for _ in range(n):
            result = result @ self
        return result

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._check(m)
            if m.rows != self.rows:
                raise InputError("hstack row mismatch")
        data = tuple(sum((m.data[i] for m in mats), ()) for i in range(self.rows))
        return Matrix(self.field, self.rows, sum(m.cols for m in mats), data)

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._check(m)
            if m.cols != self.cols:
                raise InputError("vstack column mismatch")
        return Matrix(self.field, sum(m.rows for m in mats), self.cols, sum((m.data for m in mats), ()))

    def submatrix(self, rows, cols) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(self.field, len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    # -- derived linear algebra ------------------------------------------

    def rank(self) -> int:
        return rref(self)[2]

    def inverse(self) -> "Matrix | None":
        if not self.is_square():
            return None
        x = solve(self, Matrix.identity(self.field, self.rows))
        return x

    def to_list(self):
        return [[self.field.to_text(x) for x in r] for r in self.data]


def block_diag(field: Field, *mats: Matrix) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    z = field.zero
    data = []
    offset = 0
    for m in mats:
        for r in m.data:
            data.append((z,) * offset + r + (z,) * (cols - offset - m.cols))
        offset += m.cols
    return Matrix(field, rows, cols, tuple(data))


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    F = m.field
    rows = [list(r) for r in m.data]
    pivots: list[int] = []
    r = 0
    z = F.zero
    for c in range(m.cols):
        if r >= m.rows:
            break
        pivot = next((i for i in range(r, m.rows) if rows[i][c] != z), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        prow = rows[r]
        for i in range(m.rows):
            if i != r and rows[i][c] != z:
                f = rows[i][c]
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return Matrix(F, m.rows, m.cols, tuple(tuple(x) for x in rows)), pivots, r


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space; free variables get unit entries."""
    F = m.field
    R, pivots, rank = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    cols = []
    for f in free:
        v = [F.zero] * m.cols
        v[f] = F.one
        for i, p in enumerate(pivots):
            v[p] = F.neg(R.data[i][f])
        cols.append(v)
    return Matrix.from_columns(F, cols, m.cols)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``a @ x == b``, or ``None`` when no solution exists."""
    if a.rows != b.rows:
        raise InputError(f"solve: a has {a.rows} rows but b has {b.rows}")
    a._check(b)
    F = a.field
    aug = a.hstack(b)
    R, pivots, _ = rref(aug)
    if any(p >= a.cols for p in pivots):
        return None
    x = [[F.zero] * b.cols for _ in range(a.cols)]
    for i, p in enumerate(pivots):
        for j in range(b.cols):
            x[p][j] = R.data[i][a.cols + j]
    result = Matrix(F, a.cols, b.cols, tuple(tuple(r) for r in x))
    if a @ result != b:
        raise AssertionError("solve: re-multiplication check failed")
    return result


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; the basis vector e_i (x) e_j sits at index i*dim_b + j."""
    a._check(b)
    F = a.field
    mul = F.mul
    data = []
    for ra in a.data:
        for rb in b.data:
            data.append(tuple(mul(x, y) for x in ra for y in rb))
    return Matrix(F, a.rows * b.rows, a.cols * b.cols, tuple(data))


def column_space(m: Matrix) -> Matrix:
    """Canonical basis (columns) of the column space: the rref rows of m^T."""
    R, _, rank = rref(m.T)
    return Matrix.from_columns(m.field, R.data[:rank], m.rows)


def same_column_space(a: Matrix, b: Matrix) -> bool:
    return column_space(a) == column_space(b)


def contains_columns(big: Matrix, small: Matrix) -> bool:
    """Whether every column of ``small`` lies in the column space of ``big``."""
    if small.cols == 0:
        return True
    return solve(big, small) is not None


def cokernel_projection(f: Matrix) -> tuple[Matrix, Matrix]:
    """Projection ``Q`` onto ``target / im f`` and a coordinate section ``S``.

    The quotient basis is the image of the standard basis vectors that are not
    pivots of the row space of ``f^T``; ``Q @ S`` is the identity.
    """
    F = f.field
    n = f.rows
    R, pivots, rank = rref(f.T)
    pset = set(pivots)
    comp = [c for c in range(n) if c not in pset]
    q = len(comp)
    Q = [[F.zero] * n for _ in range(q)]
    for k, c in enumerate(comp):
        Q[k][c] = F.one
    for i, p in enumerate(pivots):
        for k, c in enumerate(comp):
            Q[k][p] = F.neg(R.data[i][c])
    S = [[F.zero] * q for _ in range(n)]
    for k, c in enumerate(comp):
        S[c][k] = F.one
    return Matrix(F, q, n, tuple(tuple(r) for r in Q)), Matrix(F, n, q, tuple(tuple(r) for r in S))


def right_inverse(p: Matrix) -> Matrix:
    """Section of a surjective matrix."""
    s = solve(p, Matrix.identity(p.field, p.rows))
    if s is None:
        raise InputError("right_inverse: matrix is not surjective")
    return s


@dataclass(frozen=True)
class ChainColimit:
    """Colimit of ``X -f-> X -f-> ...`` as ``X / ker f^N``."""

    dim: int
    projection: Matrix
    section: Matrix
    index: int
    rank_trace: tuple
    truncated: bool = False


def chain_colimit(f: Matrix, max_steps: int | None = None) -> ChainColimit:
    """Stabilize ``rank f^n``; the colimit is the quotient by the eventual kernel.

    ``max_steps`` caps the number of powers examined; if stabilization is not
    observed within the cap the result is marked ``truncated``.
    """
    if not f.is_square():
        raise InputError(f"chain_colimit needs a square matrix, got {f.shape}")
    n = f.rows
    cap = n + 1 if max_steps is None else max_steps
    power = Matrix.identity(f.field, n)
    trace = [n]
    index = None
    for k in range(1, cap + 1):
        nxt = power @ f
        r = nxt.rank()
        trace.append(r)
        if r == trace[-2]:
            index = k - 1
            break
        power = nxt
    truncated = index is None
    if truncated:
        index = len(trace) - 1
    elif index > n:
        raise AssertionError("chain_colimit: stabilization index exceeds dimension")
    K = kernel_basis(power)
    Q, S = cokernel_projection(K)
    return ChainColimit(Q.rows, Q, S, index, tuple(trace), truncated)
