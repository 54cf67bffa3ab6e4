"""Classical orthogonal polynomials straight from a moment sequence.

Both constructions are shown: the Hankel determinant and the umbral
product of two Vandermonde polynomials.  They differ by (n-m+1)!.
"""
import math

from apolar import MomentFunctional, check_orthogonality, gops_det, gops_symbolic

for name in ("hermite", "laguerre", "uniform_pm1"):
    M = MomentFunctional.from_builtin(name)
    print(f"--- {name}")
    previous = []
    for n in range(1, 6):
        det_entry = gops_det(M, n, 1, monic=True)
        print(f"p_{n}(x0) = {det_entry.poly}")
        report = check_orthogonality(M, det_entry, previous)
        # E x0^k p_n vanishes for k < n and first fails at k = n
        assert report.orthogonal and report.first_nonorthogonal == n
        previous.append(det_entry)

# the symbolic formula carries an extra (n-m+1)!
M = MomentFunctional.from_builtin("hermite")
raw = gops_det(M, 4, 1).poly
sym = gops_symbolic(M, 4, 1).poly
print("symbolic / determinant =", math.factorial(4), sym == raw * math.factorial(4))

# generalized systems need auxiliary moment classes for the extra rows
M = MomentFunctional.from_builtin("hermite", {2: "laguerre", 3: "chebyshev1"})
for m in (1, 2, 3):
    e = gops_det(M, 4, m)
    rep = check_orthogonality(M, e)
    print(f"p_(4,{m}) = {e.poly}   orthogonal to x0^0..x0^{4 - m}: {rep.orthogonal}")
