"""
Gluing two copies of Spec(Q x Q)
================================

Two charts are identified along the open where the first idempotent is
inverted.  The result has three points: one shared, one private to each
chart.  A closed subscheme cut out by the second idempotent is the
shared point, and its local ring is Q.
"""

from monoidal_geometry import FinVect, QQ, algebra, product_monoid
from monoidal_geometry.scheme import QCIdealSheaf, build_glued, closed_subscheme, local_ring_at

vect = FinVect(QQ)
q = algebra(vect, [[[1]]], [1], name="Q")
qxq = product_monoid(q, q, name="QxQ")
e1, e2 = (1, 0), (0, 1)

x = build_glued([qxq, qxq], {(0, 1): e1, (1, 0): e1}, {(0, 1): vect.identity(qxq.carrier)},
                names=["U0", "U1"])
ring, _ = x.global_ring()
print("gluing valid:", x.report.valid, " global functions:", ring.dim)

y = closed_subscheme(x, QCIdealSheaf(x, {0: [e2], 1: [e2]}))
print("quotient charts:", [qu.target.dims for qu in y.quotients])
for row in y.base_change:
    print("  overlap", row["pair"], "base change", row["dims"], "ok" if row["ok"] else "FAILS")

lr = local_ring_at(x, y)
print("local ring dim", lr.ring.dim, " maximal ideal", lr.maximal_ideal, " locality", lr.locality)
