"""The joint covariant J and its apolarity.

J_{n,m}(f, aux..) is a degree-m form apolar to f.  It comes out of a
bracket product through the umbral operator U, and also as a
determinant; the two agree exactly.
"""
from fractions import Fraction

from apolar import (
    BinaryForm,
    LinearChange,
    MomentFunctional,
    apolar_pairing,
    apolar_space_dim,
    covariant_J,
    covariant_J_det,
    form_from_moments,
    transform_form,
)
from apolar.ring import dehomogenize

M = MomentFunctional.from_builtin("hermite")
f = form_from_moments(M, 1, 3)
print("f =", f.to_poly())
g = covariant_J(f, [], 2)
print("J_{3,2}(f) =", g)
print("determinant path agrees:", g == covariant_J_det(f, [], 2))
print("{f, J} =", apolar_pairing(f, g))
# setting y0 = 1 gives the orthogonal polynomial, up to scale
print("J(x0, 1) =", dehomogenize(g))

# an arbitrary quintic with two auxiliary quartics (l = 2m - n = 3)
f5 = BinaryForm((1, Fraction(1, 2), -2, 3, 0, 1))
aux = [BinaryForm((2, -1, 1, Fraction(1, 3), 0)), BinaryForm((0, 1, 1, -1, 2))]
g5 = covariant_J(f5, aux, 4)
print("J_{5,4} =", g5)
print("apolar:", apolar_pairing(f5, g5).is_zero())

# covariance: J(phi f) = det(phi)^w J(f) o phi with w = C(2,2) + C(4,2)
phi = LinearChange(2, 1, -1, 3)
lhs = covariant_J(transform_form(f5, phi), [transform_form(a, phi) for a in aux], 4)
rhs = phi.substitute(g5).scale(phi.det**7)
print("covariant of index 7:", lhs == rhs)

for m in range(1, 6):
    print(f"dim of degree-{m} forms apolar to f5: {apolar_space_dim(f5, m)}")
