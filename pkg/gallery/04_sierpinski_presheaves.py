"""
A monoid of presheaves on the Sierpinski space
==============================================

Opens are empty, U and X.  The monoid is k x k over X and k over U, with
restriction (a, b) -> b.  Its two idempotents cut out different opens,
and global sections are computed by solving the naturality equations.
"""

import random

from monoidal_geometry import Presheaf, FiniteSpace, QQ, localize_element
from monoidal_geometry.corpus import random_presheaf, sierpinski_split_monoid
from monoidal_geometry.scheme import is_integral

a = sierpinski_split_monoid()
print("dims over", a.inst.opens, "=", a.dims)
print("E(A) dim:", a.end.dim, " integral:", is_integral(a).integral)

for t in [(1, 0), (0, 1)]:
    loc = localize_element(a, t)
    print("localize at", t, "->", loc.target.dims)

# Hom(1, X) against X(top) on a few random presheaves
inst = Presheaf(FiniteSpace.chain(3), QQ)
rng = random.Random(7)
for _ in range(4):
    x = random_presheaf(inst, rng)
    print(x.dims, "global sections:", len(inst.global_sections(x)), " top:", x.dim(inst.top))
