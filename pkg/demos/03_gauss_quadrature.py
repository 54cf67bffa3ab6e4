"""Gauss quadrature from the roots of p_n, and what it integrates.

The nodes are the roots of p_n; weights come from an exact Cramer
ratio.  The rule reproduces moments through degree 2n - 1 and no
further.  Tensor rules then give discriminant moments.
"""
from apolar import MomentFunctional, discriminant_moment, gauss_rule, sylvester_decompose

for name in ("hermite", "laguerre"):
    M = MomentFunctional.from_builtin(name)
    rule = gauss_rule(M, 4)
    print(f"--- {name}, n = 4")
    for z, c in zip(rule.nodes, rule.weights):
        print(f"  node {z: .15f}  weight {c:.15f}")
    res = rule.residuals(M, 8)
    print("  max residual k <= 7:", max(res[k] for k in range(8)))
    print("  residual at k = 8:  ", res[8])

M = MomentFunctional.from_builtin("hermite")
for N, k, n in [(2, 1, 2), (3, 1, 3), (2, 2, 3)]:
    r = discriminant_moment(M, N, k, n)
    line = f"E Δ(x1..x{N})^{2 * k} = {r.exact}  (quadrature {r.quadrature:.12g})"
    if r.product_formula is not None:
        line += f"  n! c1..cn Δ(ζ)^2 = {r.product_formula:.12g}"
    print(line)

# Sylvester: a_k = sum c_i ζ_i^k for k < 2n, nodes from the J covariant
rep = sylvester_decompose(MomentFunctional.from_builtin("laguerre"), 3)
print("Sylvester nodes:", rep.rule.nodes)
print("max |a_k - sum c ζ^k|:", rep.max_residual)
