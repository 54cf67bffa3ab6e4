"""Symmetrized products of differences, Schur functions and moments.

S_{α,k} symmetrizes prod (x_i - x0)^{α_i} Δ^k.  For even k it is a
monomial symmetric function times Δ^k, for odd k a Schur function
times Δ^{k+1} up to sign.  Under E0 these become covariants; two
special cases are transvectants and central moments.
"""
from apolar import MomentFunctional, verify_schur_monomial_identities
from apolar.covariants import form_from_moments, transvectant
from apolar.ops import X0
from apolar.ring import dehomogenize, x
from apolar.symfun import central_moment, p_alpha_k
from apolar.umbral import apply_E

for alpha, k in [((2, 1, 0), 0), ((2, 1, 0), 2), ((3, 1, 0), 1), ((4, 2, 1), 3)]:
    r = verify_schur_monomial_identities(alpha, k)
    print(f"α = {alpha}, k = {k}: {r.case} identity holds = {r.holds}, λ = {r.lam}, factor = {r.factor}")

M = MomentFunctional.from_builtin("laguerre")
f4, f3 = form_from_moments(M, 1, 4), form_from_moments(M, 1, 3)
t = dehomogenize(transvectant(f4, f3, 2))
print("{f4, f3}^2 (y0 = 1):", t)
print("equals P_{(2,1),2} / 2!:", t == p_alpha_k(M, (2, 1), 2, average=True))

for N in range(1, 7):
    P = p_alpha_k(M, (1,) * N, 0, average=True)
    value = apply_E(M, P.subs({X0: x(1)}), blocks=[1])
    print(f"N = {N}: E P = {value}, E (a - x0)^N = {central_moment(M, N)}")
