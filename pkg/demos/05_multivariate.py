"""Orthogonal polynomials in two variables from a product functional.

With a product of two moment tables the full system factors into
univariate orthogonal polynomials.  The generalized system p_(n,m)
needs auxiliary rows; here they come from non-symmetric tables.
"""
import itertools

from apolar import MomentFunctional, box_enumerate, gops_det, multi_gops_det, multi_ops_full, product_table
from apolar.multivar import multi_orthogonality

M = MomentFunctional({1: product_table("hermite", "laguerre")}, d=1)
print("box of (2, 1):", list(box_enumerate((2, 1))))
for n in itertools.product(range(3), repeat=2):
    if sum(n) == 0:
        continue
    p = multi_ops_full(M, n).poly
    lower = [k for k in box_enumerate(n) if k != n]
    orth = all(v == 0 for v in multi_orthogonality(M, p, lower).values())
    print(f"p_{n} = {p}    orthogonal to lower monomials: {orth}")

H = MomentFunctional.from_builtin("hermite")
L = MomentFunctional.from_builtin("laguerre")
print("univariate factors of p_(2,1):", gops_det(H, 2, 1).poly, "and", gops_det(L, 1, 1).poly)

G = MomentFunctional(
    {
        1: product_table("hermite", "hermite"),
        2: product_table("laguerre", "laguerre"),
        3: product_table("laguerre", "chebyshev1"),
        4: product_table("chebyshev1", "laguerre"),
    },
    d=1,
)
e = multi_gops_det(G, (2, 1), (1, 1))
print("p_((2,1),(1,1)) =", e.poly, " aux:", e.aux)
orth = multi_orthogonality(G, e.poly, box_enumerate((1, 0)))
print("E x0^h p for h <= (1,0):", {h: str(v) for h, v in orth.items()})

# d = 0 gives back the univariate construction
M0 = MomentFunctional.from_builtin("hermite")
print("d = 0 check:", multi_ops_full(M0, (3,)).poly == gops_det(M0, 3, 1).poly)
