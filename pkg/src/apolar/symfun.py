"""Symmetric functions and the S_{α,k} / P_{α,k} family.

``S_{α,k} = sum_σ (x^α Δ^k)^σ`` with ``Δ = prod_{i<j} (x_j - x_i)``.  For
even k it is ``|stab α| m_α Δ^k``; for odd k it is
``(-1)^{N(N-1)/2} s_λ Δ^{k+1}`` with ``λ_i = α_i - (N - i)``.
``P_{α,k}(x0) = E0 S_{α,k}(x1 - x0, .., xN - x0)``.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .ring import Poly, PolyMatrix, VarId, det, permutations_with_sign, vandermonde, x
from .umbral import MomentFunctional, apply_E, apply_E0, apply_E_tilde, complete_homogeneous

__all__ = [
    "stab_order",
    "lambda_from_alpha",
    "monomial_sym",
    "schur",
    "schur_at",
    "s_alpha_k",
    "p_alpha_k",
    "p_alpha_k_unsymmetrized",
    "p_alpha_k_root_average",
    "central_moment",
    "IdentityReport",
    "verify_schur_monomial_identities",
    "TildeReport",
    "schur_average_tilde",
]


def _check_alpha(alpha: Sequence[int]) -> tuple:
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError(f"parts must be non-negative: {alpha}")
    if any(a < b for a, b in zip(alpha, alpha[1:])):
        raise ValueError(f"parts must be weakly decreasing: {alpha}")
    return alpha


def stab_order(alpha: Sequence[int]) -> int:
    """Order of the stabilizer of α: product of factorials of multiplicities."""
    return math.prod(math.factorial(c) for c in Counter(alpha).values())


def lambda_from_alpha(alpha: Sequence[int]) -> tuple:
    """``λ_i = α_i - (N - i)``; raises if some part is negative."""
    N = len(alpha)
    lam = tuple(a - (N - i) for i, a in enumerate(alpha, start=1))
    if any(l < 0 for l in lam) or any(a <= b for a, b in zip(alpha, alpha[1:])):
        raise ValueError(f"λ is undefined for α = {tuple(alpha)} (need α strictly decreasing with α_i >= N - i)")
    return lam


def _vars(N: int, vars_: Sequence[VarId] | None) -> list[VarId]:
    if vars_ is None:
        return [VarId(b) for b in range(1, N + 1)]
    if len(vars_) != N:
        raise ValueError(f"expected {N} variables, got {len(vars_)}")
    return list(vars_)


def _monomial(exps: Sequence[int], vars_: Sequence[VarId]) -> Poly:
    return Poly({tuple((v, e) for v, e in zip(vars_, exps) if e): 1})


def monomial_sym(alpha: Sequence[int], vars_: Sequence[VarId] | None = None) -> Poly:
    """m_α: the sum of the distinct monomials with exponent multiset α."""
    alpha = tuple(alpha)
    vars_ = _vars(len(alpha), vars_)
    return sum((_monomial(p, vars_) for p in set(itertools.permutations(alpha))), Poly.const(0))


def _alternant(exps: Sequence[int], vars_: Sequence[VarId]) -> Poly:
    # det(x_i^{exps_j})
    return det(PolyMatrix([[Poly.var(v) ** e for e in exps] for v in vars_]))


def schur(lam: Sequence[int], vars_: Sequence[VarId] | None = None) -> Poly:
    """Schur polynomial by the bialternant ``det(x_i^{λ_j+N-j}) / det(x_i^{N-j})``."""
    lam = tuple(lam)
    if any(a < b for a, b in zip(lam, lam[1:])) or any(l < 0 for l in lam):
        raise ValueError(f"not a partition: {lam}")
    N = len(lam)
    vars_ = _vars(N, vars_)
    num = _alternant([l + N - j for j, l in enumerate(lam, start=1)], vars_)
    den = _alternant([N - j for j in range(1, N + 1)], vars_)
    return num.exact_div(den)


def schur_at(lam: Sequence[int], values: Sequence) -> object:
    """``s_λ`` evaluated at the given values (floats or rationals).

    Uses the Jacobi-Trudi determinant ``det(h_{λ_i - i + j})``, which is
    valid for any number of values; λ is padded or must fit.
    """
    lam = [l for l in lam]
    while lam and lam[-1] == 0:
        lam.pop()
    if len(lam) > len(values):
        return 0
    L = len(lam)
    if L == 0:
        return 1
    H = [[complete_homogeneous(lam[i] - i + j, values) for j in range(L)] for i in range(L)]
    return _num_det(H)


def _num_det(a: list[list]) -> object:
    total = 0
    for perm, sign in permutations_with_sign(len(a)):
        term = sign
        for i, j in enumerate(perm):
            term = term * a[i][j]
            if not term:
                break
        total = total + term
    return total


@lru_cache(maxsize=64)
def _vandermonde_power(vars_: tuple, k: int) -> Poly:
    return vandermonde(list(vars_)) ** k


def s_alpha_k(alpha: Sequence[int], k: int, vars_: Sequence[VarId] | None = None) -> Poly:
    """``S_{α,k} = sum over σ of (x^α Δ^k)^σ``, by explicit symmetrization."""
    alpha = _check_alpha(alpha)
    N = len(alpha)
    vars_ = tuple(_vars(N, vars_))
    base = _monomial(alpha, vars_) * _vandermonde_power(vars_, k)
    total = Poly.const(0)
    for perm, _ in permutations_with_sign(N):
        total = total + base.subs({vars_[i]: Poly.var(vars_[perm[i]]) for i in range(N)})
    return total


def _shifted(p: Poly, N: int) -> Poly:
    return p.subs({VarId(b): x(b) - x(0) for b in range(1, N + 1)})


def _class_one(M: MomentFunctional, N: int) -> MomentFunctional:
    return M.with_classes({b: 1 for b in range(1, N + 1)})


def p_alpha_k(M: MomentFunctional, alpha: Sequence[int], k: int, average: bool = False) -> Poly:
    """``P_{α,k}(x0) = E0 S_{α,k}(x1 - x0, .., xN - x0)``.

    Blocks ``1..N`` share the class-1 moments.  With ``average=True`` the
    result is divided by N!, which gives ``E0 prod (x_i - x0)^{α_i} Δ^k``.
    """
    alpha = _check_alpha(alpha)
    N = len(alpha)
    S = _shifted(s_alpha_k(alpha, k), N)
    P = apply_E0(_class_one(M, N), S, blocks=range(1, N + 1))
    return P / math.factorial(N) if average else P


def p_alpha_k_unsymmetrized(M: MomentFunctional, alpha: Sequence[int], k: int) -> Poly:
    """``E0 prod (x_i - x0)^{α_i} Δ(x1..xN)^k``, which is ``P_{α,k} / N!``."""
    alpha = _check_alpha(alpha)
    N = len(alpha)
    vars_ = tuple(VarId(b) for b in range(1, N + 1))
    p = math.prod(((x(b) - x(0)) ** a for b, a in enumerate(alpha, start=1)), start=Poly.const(1))
    p = p * _vandermonde_power(vars_, k)
    return apply_E0(_class_one(M, N), p, blocks=range(1, N + 1))


def central_moment(M: MomentFunctional, N: int) -> Fraction:
    """``E (a - x0)^N`` with ``a = a_1 / a_0`` the mean."""
    a = M.moment(1, 1) / M.moment(1, 0)
    p = (Poly.const(a) - x(1)) ** N
    return apply_E(_class_one(M, 1), p, blocks=[1])


def p_alpha_k_root_average(
    M: MomentFunctional, alpha: Sequence[int], k: int, n: int, x0: Fraction
):
    """``P_{α,k}(x0)`` as an average over the roots of the classical ``p_n``.

    Even k: ``sum c_I |stab α| m_α(ζ_I - x0) Δ(ζ_I)^k``.  Odd k:
    ``sum c_I (-1)^{N(N-1)/2} s_λ(ζ_I - x0) Δ(ζ_I)^{k+1}``.  The sums run
    over all index tuples ``I`` of the n-point Gauss rule; exact when
    ``α_1 + k(N-1) <= 2n - 1``.
    """
    from .quadrature import gauss_rule

    alpha = _check_alpha(alpha)
    N = len(alpha)
    if alpha[0] + k * (N - 1) > 2 * n - 1:
        raise ValueError("per-variable degree exceeds 2n-1; the average is not exact")
    rule = gauss_rule(M, n)
    x0 = float(x0)
    vars_ = [VarId(b) for b in range(1, N + 1)]
    if k % 2 == 0:
        sym = monomial_sym(alpha, vars_).scale(stab_order(alpha))
        power = k
    else:
        sign = (-1) ** (N * (N - 1) // 2)
        sym = schur(lambda_from_alpha(alpha), vars_).scale(sign)
        power = k + 1
    parts = []
    for idx in itertools.product(range(rule.n), repeat=N):
        z = [rule.nodes[i] for i in idx]
        w = math.prod(rule.weights[i] for i in idx)
        d = math.prod(z[j] - z[i] for i in range(N) for j in range(i + 1, N)) ** power
        val = sym.evaluate({v: zi - x0 for v, zi in zip(vars_, z)})
        parts.append(w * float(val) * d)
    return math.fsum(parts)


@dataclass
class IdentityReport:
    alpha: tuple
    k: int
    N: int
    case: str
    holds: bool
    factor: int
    lam: tuple | None = None
    residual: Poly = field(default_factory=lambda: Poly.const(0))

    def to_json(self) -> dict:
        from .ring import poly_to_json

        return {
            "alpha": list(self.alpha),
            "k": self.k,
            "N": self.N,
            "case": self.case,
            "holds": self.holds,
            "factor": self.factor,
            "lambda": None if self.lam is None else list(self.lam),
            "residual": poly_to_json(self.residual),
        }


def verify_schur_monomial_identities(alpha: Sequence[int], k: int, N: int | None = None) -> IdentityReport:
    """Check the even or odd closed form of ``S_{α,k}`` exactly.

    Even ``k = 2h``: ``S = |stab α| m_α Δ^{2h}``.
    Odd ``k = 2h-1``: ``S = (-1)^{N(N-1)/2} s_λ Δ^{2h}``, ``λ_i = α_i - (N-i)``.
    """
    alpha = _check_alpha(alpha)
    if N is not None and N != len(alpha):
        raise ValueError(f"α has {len(alpha)} parts but N = {N}")
    N = len(alpha)
    vars_ = tuple(VarId(b) for b in range(1, N + 1))
    S = s_alpha_k(alpha, k, vars_)
    if k % 2 == 0:
        factor = stab_order(alpha)
        rhs = monomial_sym(alpha, vars_).scale(factor) * _vandermonde_power(vars_, k)
        lam, case = None, "even"
    else:
        lam = lambda_from_alpha(alpha)
        factor = (-1) ** (N * (N - 1) // 2)
        rhs = schur(lam, vars_).scale(factor) * _vandermonde_power(vars_, k + 1)
        case = "odd"
    residual = S - rhs
    return IdentityReport(alpha, k, N, case, residual.is_zero(), factor, lam, residual)


@dataclass
class TildeReport:
    """``Ẽ S_{α,1}`` next to ``s_λ(ζ)`` under two index conventions."""

    alpha: tuple
    n: int
    value: object
    candidates: dict
    matches: list

    def to_json(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "n": self.n,
            "value": float(self.value),
            "candidates": {k: float(v) for k, v in self.candidates.items()},
            "matches": self.matches,
        }


def schur_average_tilde(roots: Sequence, alpha: Sequence[int], tol: float = 1e-9) -> TildeReport:
    """Compare ``Ẽ S_{α,1}`` with scaled ``s_λ(ζ_1..ζ_n)``.

    Candidates combine the index conventions ``λ_i = α_i - (N - i)``
    ("A") and ``λ_i = α_i + i - 1`` ("B") with the factors 1/n!, 1/N!,
    1 and N!.  A convention whose λ is not a partition is skipped.  The
    report lists every candidate agreeing with the value within ``tol``.
    """
    alpha = _check_alpha(alpha)
    N = len(alpha)
    roots = list(roots)
    n = len(roots)
    value = apply_E_tilde(roots, s_alpha_k(alpha, 1))
    lams = {"A": tuple(a - (N - i) for i, a in enumerate(alpha, start=1)),
            "B": tuple(a + i - 1 for i, a in enumerate(alpha, start=1))}
    factors = {"1/n!": Fraction(1, math.factorial(n)), "1/N!": Fraction(1, math.factorial(N)),
               "1": Fraction(1), "N!": Fraction(math.factorial(N))}
    candidates, matches = {}, []
    for cname, lam in lams.items():
        if any(l < 0 for l in lam) or any(a < b for a, b in zip(lam, lam[1:])):
            continue
        s = schur_at(lam, roots)
        for fname, fac in factors.items():
            key = f"{cname}:{fname}"
            cand = s * (fac if isinstance(s, Fraction) or isinstance(s, int) else float(fac))
            candidates[key] = cand
            if abs(float(cand) - float(value)) <= tol * max(1.0, abs(float(value))):
                matches.append(key)
    return TildeReport(alpha, n, value, candidates, matches)
