"""
Function fields and dominant maps
=================================

For an integral monoid the function field is the localization at every
nonzero element of E(A).  For finite-dimensional algebras that is the
algebra itself; the point of the computation is that it is stable under
shrinking to any principal open.
"""

from monoidal_geometry import FinVect, Matrix, PrimeField, QQ, algebra
from monoidal_geometry.errors import Rejected
from monoidal_geometry.monoid import monoid_morphism
from monoidal_geometry.report import plain
from monoidal_geometry.scheme import dominant_pullback, function_field

F2 = PrimeField(2)
f2 = algebra(FinVect(F2), [[[1]]], [1], name="F2")
f4 = algebra(FinVect(F2), [[[1, 0], [0, 1]], [[0, 1], [1, 1]]], [1, 0], name="F4")
sqrt2 = algebra(FinVect(QQ), [[[1, 0], [0, 1]], [[0, 1], [2, 0]]], [1, 0], name="Q(sqrt 2)")

ff = function_field(f4)
print("k(F4): dim", ff.ring.dim, " inverses", ff.inverses)

ff = function_field(sqrt2)
print("k(Q(sqrt 2)): dim", ff.ring.dim, " stable under", plain([row["t"] for row in ff.stability]))
print("inverse of sqrt 2:", plain(ff.ring.inverse((0, 1))))

dual = algebra(FinVect(QQ), [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])
try:
    function_field(dual)
except Rejected as exc:
    print("dual numbers:", exc.reason, "witness", plain(exc.witness))

# the inclusion F2 -> F4 is dominant and induces F2 -> F4 on function fields
f = monoid_morphism(f2, f4, Matrix.from_rows(F2, [[1], [0]]))
fm = dominant_pullback(f)
print("field map matrix:", fm.ring_map.matrix.to_list())
