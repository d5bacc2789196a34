"""Abelian symmetric monoidal categories with exact arithmetic.

Two instances are provided: ``FinVect(k)`` and ``Presheaf(P, k)`` on a finite
topological space given by its poset of opens.  Both share one representation:
an object stores a dimension for every open and a restriction matrix for every
strictly related pair of opens; FinVect is the case of a single open ``X``.

Tensor products use the row-major pairing convention of :func:`linalg.kron`,
under which associators and unitors are identity matrices and the symmetry is
a permutation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import InputError, SelfTestFailure
from .fields import Field
from .linalg import (
    Matrix,
    block_diag,
    chain_colimit as _chain_colimit,
    cokernel_projection,
    kernel_basis,
    kron,
    right_inverse,
    solve,
)


class FiniteSpace:
    """Finite poset of named opens with a top element (the whole space)."""

    def __init__(self, opens, inclusions=(), name: str | None = None):
        opens = list(opens)
        if len(set(opens)) != len(opens) or not opens:
            raise InputError("opens must be a nonempty list of distinct names")
        self.name = name
        le = {(u, u) for u in opens}
        for small, big in inclusions:
            if small not in opens or big not in opens:
                raise InputError(f"inclusion ({small!r}, {big!r}) names an unknown open")
            le.add((small, big))
        changed = True
        while changed:
            changed = False
            for (a, b) in list(le):
                for (c, d) in list(le):
                    if b == c and (a, d) not in le:
                        le.add((a, d))
                        changed = True
        for (a, b) in le:
            if a != b and (b, a) in le:
                raise InputError(f"inclusion relation is not antisymmetric: {a!r}, {b!r}")
        tops = [u for u in opens if all((v, u) in le for v in opens)]
        bottoms = [u for u in opens if all((u, v) in le for v in opens)]
        if len(tops) != 1:
            raise InputError("the space needs a unique top open")
        if len(bottoms) != 1:
            raise InputError("the space needs a unique bottom open (the empty set)")
        self._le = frozenset(le)
        self.top = tops[0]
        self.bottom = bottoms[0]
        # smaller opens first, the whole space last
        self.order = tuple(sorted(opens, key=lambda u: (sum((v, u) in le for v in opens), opens.index(u))))
        self.inclusions = tuple((a, b) for (a, b) in sorted(le, key=lambda p: (self.order.index(p[1]),
                                                                            self.order.index(p[0])))
                                if a != b)
        self.covers = tuple((a, b) for (a, b) in self.inclusions
                            if not any((a, c) in le and (c, b) in le and c not in (a, b) for c in opens))
        self.given_inclusions = tuple(tuple(p) for p in inclusions)

    def leq(self, a, b) -> bool:
        return (a, b) in self._le

    @property
    def empty(self):
        return self.bottom if len(self.order) > 1 else None

    def __eq__(self, other):
        return isinstance(other, FiniteSpace) and self.order == other.order and self._le == other._le

    def __hash__(self):
        return hash((self.order, self._le))

    def __repr__(self):
        return f"FiniteSpace({list(self.order)}, {list(self.inclusions)})"

    @classmethod
    def point(cls):
        return cls(["empty", "X"], [("empty", "X")], name="point")

    @classmethod
    def sierpinski(cls):
        return cls(["empty", "U", "X"], [("empty", "U"), ("U", "X")], name="sierpinski")

    @classmethod
    def discrete_two(cls):
        return cls(["empty", "a", "b", "X"], [("empty", "a"), ("empty", "b"), ("a", "X"), ("b", "X")],
                   name="discrete2")

    @classmethod
    def chain(cls, n: int):
        names = ["empty"] + [f"U{i}" for i in range(1, n)] + ["X"]
        return cls(names, list(zip(names, names[1:])), name=f"chain{n}")


@dataclass(frozen=True)
class CObject:
    """Per-open dimensions plus restriction matrices (one per strict inclusion)."""

    inst: "CatInstance"
    dims: tuple
    res: tuple = ()

    def dim(self, u=None) -> int:
        if u is None:
            u = self.inst.top
        return self.dims[self.inst.index[u]]

    def restriction(self, big, small) -> Matrix:
        if big == small:
            return Matrix.identity(self.inst.field, self.dim(big))
        return self.res[self.inst.pair_index[(small, big)]]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def __repr__(self):
        if self.inst.kind == "finvect":
            return f"CObject(dim={self.dims[0]})"
        return "CObject(" + ", ".join(f"{u}:{d}" for u, d in zip(self.inst.opens, self.dims)) + ")"


@dataclass(frozen=True, eq=False)
class CMorphism:
    """One matrix per open, natural with respect to the restrictions."""

    source: CObject
    target: CObject
    comps: tuple

    @property
    def inst(self) -> "CatInstance":
        return self.source.inst

    @property
    def mat(self) -> Matrix:
        """The single component of a FinVect morphism (or the top-open component)."""
        return self.comps[-1]

    def comp(self, u) -> Matrix:
        return self.comps[self.inst.index[u]]

    def __eq__(self, other):
        return (isinstance(other, CMorphism) and self.source == other.source
                and self.target == other.target and self.comps == other.comps)

    def __hash__(self):
        return hash(self.comps)

    def __matmul__(self, other: "CMorphism") -> "CMorphism":
        """Composition: ``(g @ f)(x) = g(f(x))``."""
        if other.target != self.source:
            raise InputError("composition of non-composable morphisms")
        return CMorphism(other.source, self.target, tuple(a @ b for a, b in zip(self.comps, other.comps)))

    def __add__(self, other: "CMorphism") -> "CMorphism":
        self._same_shape(other)
        return CMorphism(self.source, self.target, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other: "CMorphism") -> "CMorphism":
        self._same_shape(other)
        return CMorphism(self.source, self.target, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return CMorphism(self.source, self.target, tuple(-a for a in self.comps))

    def scale(self, c) -> "CMorphism":
        return CMorphism(self.source, self.target, tuple(a.scale(c) for a in self.comps))

    def _same_shape(self, other):
        if self.source != other.source or self.target != other.target:
            raise InputError("morphisms have different source or target")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def vec(self) -> tuple:
        return tuple(x for c in self.comps for x in c.entries())

    def is_mono(self) -> bool:
        return all(c.rank() == c.cols for c in self.comps)

    def is_epi(self) -> bool:
        return all(c.rank() == c.rows for c in self.comps)

    def is_iso(self) -> bool:
        return all(c.rows == c.cols and c.rank() == c.rows for c in self.comps)

    def __repr__(self):
        return f"CMorphism({self.source!r} -> {self.target!r})"


class CatInstance:
    """A computable abelian symmetric monoidal category."""

    def __init__(self, kind: str, field: Field, space: FiniteSpace | None = None):
        if kind not in ("finvect", "presheaf"):
            raise InputError(f"unknown instance kind {kind!r}")
        self.kind = kind
        self.field = field
        if kind == "finvect":
            space = None
            self.opens = ("X",)
            self.top = "X"
            self.empty = None
            self.pairs = ()
            self.covers = ()
        else:
            if space is None or len(space.order) < 2:
                raise InputError("a presheaf instance needs a space with at least the empty open and X")
            self.opens = space.order
            self.top = space.top
            self.empty = space.bottom
            self.pairs = space.inclusions
            self.covers = space.covers
        self.space = space
        self.index = {u: i for i, u in enumerate(self.opens)}
        self.pair_index = {p: i for i, p in enumerate(self.pairs)}

    def __eq__(self, other):
        return (isinstance(other, CatInstance) and self.kind == other.kind
                and self.field == other.field and self.space == other.space)

    def __hash__(self):
        return hash((self.kind, self.field, self.space))

    def __repr__(self):
        if self.kind == "finvect":
            return f"FinVect({self.field})"
        return f"Presheaf({self.space.name or list(self.opens)}, {self.field})"

    # -- objects ----------------------------------------------------------

    def obj(self, dims, res=None) -> CObject:
        """Build an object.  FinVect: ``obj(n)``.  Presheaf: ``obj({open: dim}, {(big, small): M})``."""
        F = self.field
        if self.kind == "finvect":
            if isinstance(dims, dict):
                dims = dims.get("X", 0)
            if isinstance(dims, (tuple, list)):
                (dims,) = dims
            if not isinstance(dims, int) or dims < 0:
                raise InputError(f"bad dimension {dims!r}")
            return CObject(self, (dims,), ())
        if isinstance(dims, dict):
            unknown = set(dims) - set(self.opens)
            if unknown:
                raise InputError(f"unknown opens {sorted(unknown)}")
            dims = tuple(int(dims.get(u, 0)) for u in self.opens)
        dims = tuple(dims)
        if len(dims) != len(self.opens) or any(d < 0 for d in dims):
            raise InputError(f"bad dimension vector {dims!r}")
        if dims[self.index[self.empty]] != 0:
            raise InputError("a presheaf must vanish on the empty open")
        res = dict(res or {})
        for key in res:
            big, small = key
            if (small, big) not in self.pair_index:
                raise InputError(f"restriction {big!r} -> {small!r} is not along an inclusion")
        mats = {}
        for small, big in self.covers:
            m = res.get((big, small))
            shape = (dims[self.index[small]], dims[self.index[big]])
            if m is None:
                if 0 in shape:
                    m = Matrix.zeros(F, *shape)
                else:
                    raise InputError(f"missing restriction {big!r} -> {small!r}")
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(F, m, shape[1])
            if m.shape != shape:
                raise InputError(f"restriction {big!r} -> {small!r} has shape {m.shape}, expected {shape}")
            mats[(small, big)] = m
        # non-cover inclusions: composite along a chain of covers, checked against supplied data
        def get(small, big):
            if (small, big) not in mats:
                mid = next(c for (c, b2) in self.covers if b2 == big and self.space.leq(small, c))
                mats[(small, big)] = get(small, mid) @ mats[(mid, big)]
            return mats[(small, big)]

        for small, big in self.pairs:
            get(small, big)
        for (big, small), m in res.items():
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(F, m, dims[self.index[big]])
            if mats[(small, big)] != m:
                raise InputError(f"restrictions are not functorial at {big!r} -> {small!r}")
        obj = CObject(self, dims, tuple(mats[p] for p in self.pairs))
        self.check_functorial(obj)
        return obj

    def check_functorial(self, x: CObject):
        for (w, v) in self.pairs:
            for u in self.opens:
                if u in (w, v) or not (self.space.leq(v, u)):
                    continue
                lhs = x.restriction(u, w)
                rhs = x.restriction(v, w) @ x.restriction(u, v)
                if lhs != rhs:
                    raise InputError(f"restrictions are not functorial: {u}->{v}->{w}")

    def zero_object(self) -> CObject:
        return CObject(self, (0,) * len(self.opens),
                       tuple(Matrix.zeros(self.field, 0, 0) for _ in self.pairs))

    def unit(self) -> CObject:
        F = self.field
        dims = tuple(0 if u == self.empty else 1 for u in self.opens)
        res = tuple(Matrix.identity(F, 1) if small != self.empty else Matrix.zeros(F, 0, 1)
                    for small, big in self.pairs)
        return CObject(self, dims, res)

    def constant(self, n: int) -> CObject:
        """Constant presheaf ``k^n`` (vanishing on the empty open)."""
        F = self.field
        dims = tuple(0 if u == self.empty else n for u in self.opens)
        res = tuple(Matrix.identity(F, n) if small != self.empty else Matrix.zeros(F, 0, n)
                    for small, big in self.pairs)
        return CObject(self, dims, res)

    # -- morphisms --------------------------------------------------------

    def morphism(self, source: CObject, target: CObject, comps) -> CMorphism:
        """Validated morphism.  ``comps`` is a Matrix (FinVect), a list, or ``{open: Matrix}``."""
        F = self.field
        if isinstance(comps, Matrix):
            comps = [comps]
        if isinstance(comps, dict):
            comps = [comps.get(u) for u in self.opens]
        comps = list(comps)
        if len(comps) != len(self.opens):
            raise InputError("a morphism needs one matrix per open")
        out = []
        for u, c in zip(self.opens, comps):
            shape = (target.dim(u), source.dim(u))
            if c is None:
                if 0 in shape:
                    c = Matrix.zeros(F, *shape)
                else:
                    raise InputError(f"missing component at open {u!r}")
            if not isinstance(c, Matrix):
                c = Matrix.from_rows(F, c, shape[1])
            if c.shape != shape:
                raise InputError(f"component at {u!r} has shape {c.shape}, expected {shape}")
            out.append(c)
        f = CMorphism(source, target, tuple(out))
        self.check_natural(f)
        return f

    def check_natural(self, f: CMorphism):
        for small, big in self.covers:
            lhs = f.target.restriction(big, small) @ f.comp(big)
            rhs = f.comp(small) @ f.source.restriction(big, small)
            if lhs != rhs:
                raise InputError(f"morphism is not natural at {big!r} -> {small!r}")

    def identity(self, x: CObject) -> CMorphism:
        return CMorphism(x, x, tuple(Matrix.identity(self.field, d) for d in x.dims))

    def zero_morphism(self, x: CObject, y: CObject) -> CMorphism:
        return CMorphism(x, y, tuple(Matrix.zeros(self.field, dy, dx) for dx, dy in zip(x.dims, y.dims)))

    def from_vec(self, x: CObject, y: CObject, vec) -> CMorphism:
        comps = []
        pos = 0
        for dx, dy in zip(x.dims, y.dims):
            n = dx * dy
            chunk = vec[pos:pos + n]
            pos += n
            comps.append(Matrix(self.field, dy, dx, tuple(tuple(chunk[i * dx:(i + 1) * dx]) for i in range(dy))))
        return CMorphism(x, y, tuple(comps))

    def combination(self, coeffs, basis, x: CObject | None = None, y: CObject | None = None) -> CMorphism:
        if not basis:
            return self.zero_morphism(x, y)
        total = self.zero_morphism(basis[0].source, basis[0].target)
        for c, b in zip(coeffs, basis):
            if c != self.field.zero:
                total = total + b.scale(c)
        return total

    # -- monoidal structure ----------------------------------------------

    def tensor(self, x: CObject, y: CObject) -> CObject:
        if x.inst != self or y.inst != self:
            raise InputError("tensor of objects from different instances")
        return CObject(self, tuple(a * b for a, b in zip(x.dims, y.dims)),
                       tuple(kron(a, b) for a, b in zip(x.res, y.res)))

    def tensor_mor(self, f: CMorphism, g: CMorphism) -> CMorphism:
        return CMorphism(self.tensor(f.source, g.source), self.tensor(f.target, g.target),
                         tuple(kron(a, b) for a, b in zip(f.comps, g.comps)))

    def tensor_many(self, *xs: CObject) -> CObject:
        out = xs[0]
        for x in xs[1:]:
            out = self.tensor(out, x)
        return out

    def symmetry(self, x: CObject, y: CObject) -> CMorphism:
        """``x (x) y -> y (x) x``."""
        F = self.field
        comps = []
        for dx, dy in zip(x.dims, y.dims):
            n = dx * dy
            rows = [[F.zero] * n for _ in range(n)]
            for i in range(dx):
                for j in range(dy):
                    rows[j * dx + i][i * dy + j] = F.one
            comps.append(Matrix(F, n, n, tuple(tuple(r) for r in rows)))
        return CMorphism(self.tensor(x, y), self.tensor(y, x), tuple(comps))

    def associator(self, x: CObject, y: CObject, z: CObject) -> CMorphism:
        """``(x (x) y) (x) z -> x (x) (y (x) z)``: the identity under row-major pairing."""
        src = self.tensor(self.tensor(x, y), z)
        dst = self.tensor(x, self.tensor(y, z))
        if src != dst:
            raise SelfTestFailure("associator: bracketings differ as objects")
        return self.identity(src)

    def left_unitor(self, x: CObject) -> CMorphism:
        """``1 (x) x -> x``."""
        src = self.tensor(self.unit(), x)
        return CMorphism(src, x, tuple(Matrix.identity(self.field, d) for d in x.dims))

    def right_unitor(self, x: CObject) -> CMorphism:
        """``x (x) 1 -> x``."""
        src = self.tensor(x, self.unit())
        return CMorphism(src, x, tuple(Matrix.identity(self.field, d) for d in x.dims))

    # -- abelian structure ------------------------------------------------

    def direct_sum(self, *xs: CObject):
        """Biproduct with its injections and projections."""
        F = self.field
        dims = tuple(sum(x.dims[k] for x in xs) for k in range(len(self.opens)))
        res = tuple(block_diag(F, *[x.res[k] for x in xs]) for k in range(len(self.pairs)))
        total = CObject(self, dims, res)
        injections, projections = [], []
        for idx, x in enumerate(xs):
            comps_in, comps_out = [], []
            for k in range(len(self.opens)):
                before = sum(y.dims[k] for y in xs[:idx])
                d = x.dims[k]
                after = dims[k] - before - d
                inj = Matrix.zeros(F, before, d).vstack(Matrix.identity(F, d), Matrix.zeros(F, after, d))
                comps_in.append(inj)
                comps_out.append(inj.T)
            injections.append(CMorphism(x, total, tuple(comps_in)))
            projections.append(CMorphism(total, x, tuple(comps_out)))
        return total, injections, projections

    def kernel(self, f: CMorphism):
        """Kernel object and its inclusion, computed open-wise."""
        bases = [kernel_basis(c) for c in f.comps]
        res = []
        for small, big in self.pairs:
            kb, ks = bases[self.index[big]], bases[self.index[small]]
            r = solve(ks, f.source.restriction(big, small) @ kb)
            if r is None:
                raise SelfTestFailure("kernel: restriction does not preserve the kernel")
            res.append(r)
        k = CObject(self, tuple(b.cols for b in bases), tuple(res))
        return k, CMorphism(k, f.source, tuple(bases))

    def cokernel(self, f: CMorphism):
        """Cokernel object and its projection, computed open-wise."""
        proj = [cokernel_projection(c) for c in f.comps]
        res = []
        for small, big in self.pairs:
            q_small = proj[self.index[small]][0]
            s_big = proj[self.index[big]][1]
            res.append(q_small @ f.target.restriction(big, small) @ s_big)
        c = CObject(self, tuple(q.rows for q, _ in proj), tuple(res))
        pi = CMorphism(f.target, c, tuple(q for q, _ in proj))
        if not (pi @ f).is_zero():
            raise SelfTestFailure("cokernel: projection does not kill the image")
        self.check_natural(pi)
        return c, pi

    def image(self, f: CMorphism):
        """Image as a subobject of the target, with its inclusion."""
        _, pi = self.cokernel(f)
        return self.kernel(pi)

    def factor_through_epi(self, g: CMorphism, p: CMorphism) -> CMorphism:
        """The unique ``h`` with ``h @ p == g`` for an epimorphism ``p``."""
        if g.source != p.source:
            raise InputError("factor_through_epi: g and p have different sources")
        comps = [gc @ right_inverse(pc) for gc, pc in zip(g.comps, p.comps)]
        h = CMorphism(p.target, g.target, tuple(comps))
        if h @ p != g:
            raise InputError("factor_through_epi: g does not vanish on the kernel of p")
        self.check_natural(h)
        return h

    def factor_through_mono(self, g: CMorphism, i: CMorphism) -> CMorphism:
        """The unique ``h`` with ``i @ h == g`` for a monomorphism ``i``."""
        if g.target != i.target:
            raise InputError("factor_through_mono: g and i have different targets")
        comps = []
        for gc, ic in zip(g.comps, i.comps):
            h = solve(ic, gc)
            if h is None:
                raise InputError("factor_through_mono: g does not land in the subobject")
            comps.append(h)
        h = CMorphism(g.source, i.source, tuple(comps))
        self.check_natural(h)
        return h

    def inverse(self, f: CMorphism) -> CMorphism:
        if not f.is_iso():
            raise InputError("inverse of a non-isomorphism")
        return CMorphism(f.target, f.source, tuple(c.inverse() for c in f.comps))

    def subobject_equal(self, i: CMorphism, j: CMorphism) -> bool:
        """Whether two monomorphisms into the same object have the same image."""
        from .linalg import same_column_space

        if i.target != j.target:
            return False
        return all(same_column_space(a, b) for a, b in zip(i.comps, j.comps))

    def subobject_leq(self, i: CMorphism, j: CMorphism) -> bool:
        from .linalg import contains_columns

        return all(contains_columns(b, a) for a, b in zip(i.comps, j.comps))

    def chain_colimit(self, f: CMorphism, max_steps: int | None = None):
        """Colimit of ``X -f-> X -f-> ...`` computed open-wise."""
        if f.source != f.target:
            raise InputError("chain colimit needs an endomorphism")
        parts = [_chain_colimit(c, max_steps) for c in f.comps]
        res = []
        for small, big in self.pairs:
            res.append(parts[self.index[small]].projection @ f.source.restriction(big, small)
                       @ parts[self.index[big]].section)
        c = CObject(self, tuple(p.dim for p in parts), tuple(res))
        pi = CMorphism(f.source, c, tuple(p.projection for p in parts))
        self.check_natural(pi)
        return ChainColimitResult(
            c, pi,
            index=max(p.index for p in parts),
            traces={u: p.rank_trace for u, p in zip(self.opens, parts)},
            truncated=any(p.truncated for p in parts),
        )

    # -- hom spaces -------------------------------------------------------

    def hom_space(self, x: CObject, y: CObject) -> list[CMorphism]:
        """Basis of ``Hom(x, y)``: open-wise matrices cut out by naturality."""
        if x.inst != self or y.inst != self:
            raise InputError("hom_space across instances")
        F = self.field
        offsets = []
        pos = 0
        for dx, dy in zip(x.dims, y.dims):
            offsets.append(pos)
            pos += dx * dy
        nvars = pos
        rows = []
        for small, big in self.covers:
            ib, is_ = self.index[big], self.index[small]
            ry = y.restriction(big, small)
            rx = x.restriction(big, small)
            dxb, dxs = x.dims[ib], x.dims[is_]
            dyb, dys = y.dims[ib], y.dims[is_]
            # (ry @ f_big - f_small @ rx)[i][j] = 0
            for i in range(dys):
                for j in range(dxb):
                    row = [F.zero] * nvars
                    for a in range(dyb):
                        row[offsets[ib] + a * dxb + j] = F.add(row[offsets[ib] + a * dxb + j], ry[i, a])
                    for b in range(dxs):
                        idx = offsets[is_] + i * dxs + b
                        row[idx] = F.sub(row[idx], rx[b, j])
                    rows.append(row)
        if rows:
            K = kernel_basis(Matrix.from_rows(F, rows, nvars))
        else:
            K = Matrix.identity(F, nvars)
        return [self.from_vec(x, y, col) for col in K.columns()]

    def global_sections(self, x: CObject) -> list[CMorphism]:
        return self.hom_space(self.unit(), x)


@dataclass(frozen=True)
class ChainColimitResult:
    obj: CObject
    projection: CMorphism
    index: int
    traces: dict = dc_field(default_factory=dict)
    truncated: bool = False


class MorphismBasis:
    """A list of linearly independent morphisms with coordinate extraction."""

    def __init__(self, basis: list[CMorphism], source: CObject, target: CObject):
        self.basis = list(basis)
        self.source = source
        self.target = target
        inst = source.inst
        n = sum(a * b for a, b in zip(source.dims, target.dims))
        self._mat = Matrix.from_columns(inst.field, [b.vec() for b in self.basis], n)
        if self._mat.rank() != len(self.basis):
            raise SelfTestFailure("MorphismBasis: basis is linearly dependent")

    def __len__(self):
        return len(self.basis)

    def coords(self, f: CMorphism):
        """Coordinates of ``f``, or ``None`` if ``f`` is outside the span."""
        x = solve(self._mat, Matrix.column(f.inst.field, f.vec()))
        return None if x is None else x.col(0)

    def combine(self, coeffs) -> CMorphism:
        inst = self.source.inst
        return inst.combination(coeffs, self.basis, self.source, self.target)


def FinVect(field: Field) -> CatInstance:
    return CatInstance("finvect", field)


def Presheaf(space: FiniteSpace, field: Field) -> CatInstance:
    return CatInstance("presheaf", field, space)


@dataclass
class InstanceReport:
    ok: bool
    probes: list
    notes: list


def verify_instance_conditions(inst: CatInstance, probes, max_steps: int | None = None) -> InstanceReport:
    """Check compactness of the unit on probe chains.

    Each probe is an endomorphism ``f`` (the chain ``X -f-> X -f-> ...``) or a
    pair ``(f, (C, pi))`` supplying a claimed colimit to compare against.
    ``Hom(1, colim)`` must agree with ``colim Hom(1, -)`` via ``phi -> pi @ phi``.
    """
    F = inst.field
    unit = inst.unit()
    rows = []
    ok = True
    for k, probe in enumerate(probes):
        claimed = None
        if isinstance(probe, tuple):
            probe, claimed = probe
        f = probe
        col = inst.chain_colimit(f, max_steps=max_steps)
        c_obj, pi = claimed if claimed is not None else (col.obj, col.projection)
        hx = MorphismBasis(inst.global_sections(f.source), unit, f.source)
        hc = inst.global_sections(c_obj)
        # f_* on Hom(1, X) in coordinates
        fstar = Matrix.from_columns(F, [hx.coords(f @ b) for b in hx.basis], len(hx)) if len(hx) else \
            Matrix.zeros(F, 0, 0)
        hom_col = _chain_colimit(fstar) if len(hx) else None
        hom_colim_dim = hom_col.dim if hom_col else 0
        # canonical comparison map colim Hom(1,X) -> Hom(1,C)
        hcb = MorphismBasis(hc, unit, c_obj) if hc else None
        images = [hcb.coords(pi @ b) if hcb else () for b in hx.basis]
        if len(hx) and hcb:
            cmp = Matrix.from_columns(F, images, len(hcb))
            cmp_rank = cmp.rank()
            killed = kernel_basis(cmp).cols
        else:
            cmp_rank = 0
            killed = len(hx)
        passed = (len(hc) == hom_colim_dim and cmp_rank == len(hc)
                  and killed == len(hx) - hom_colim_dim)
        ok = ok and passed
        rows.append({
            "probe": k,
            "pass": passed,
            "hom_of_colimit_dim": len(hc),
            "colimit_of_hom_dim": hom_colim_dim,
            "stabilization_index": col.index,
            "dimension_trace": {u: list(t) for u, t in col.traces.items()},
            "truncated": col.truncated,
        })
    notes = ["C2: every object is finite-dimensional, hence finitely presented (axiom of the instance)"]
    return InstanceReport(ok, rows, notes)
