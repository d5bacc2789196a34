"""
Dual numbers: localizing and quotienting
========================================

Q[x]/(x^2) as a commutative monoid in finite-dimensional Q-vector spaces.
Inverting the nilpotent x kills everything; dividing by it leaves Q.
"""

from monoidal_geometry import FinVect, QQ, algebra, localize_element, quotient_element
from monoidal_geometry.report import plain

# structure constants: e0 is the unit, e1 * e1 = 0
vect = FinVect(QQ)
dual = algebra(vect, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0], name="Q[x]/(x^2)")

E = dual.end
print("E(A) has dimension", E.dim, "with unit", plain(E.one()))
eps = E.element((0, 1))
print("eps * eps =", plain(E.mul(eps, eps)))

# A_eps is the colimit of A -> A -> ... along multiplication by eps
loc = localize_element(dual, eps)
print("rank trace of eps^n:", loc.traces["X"])
print("A_eps is zero:", loc.is_zero)

# inverting 1 changes nothing
print("A_1 dims:", localize_element(dual, E.one()).target.dims)

# A/eps A is one-dimensional and its endomorphism ring is Q
q = quotient_element(dual, eps)
print("A/eps A dims:", q.target.dims, " E(A/eps A) dim:", q.target.end.dim)
