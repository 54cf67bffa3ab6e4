"""Gauss quadrature from orthogonal-polynomial roots.

This is the only module that uses floating point.  Nodes come from a
balanced companion matrix with one Newton polish step.  Weights solve
``a_k = sum_i c_i zeta_i^k`` for ``k < n``, computed by the Cramer
(Lagrange) formula in exact arithmetic at the float nodes and, as a cross
check, by a numerical Vandermonde solve.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import matrix_balance

from .covariants import covariant_J, form_from_moments
from .ops import gops_det
from .ring import Kind, Poly, VarId, dehomogenize, vandermonde
from .umbral import MomentFunctional, apply_E

__all__ = [
    "DEFAULT_TOL",
    "NodesNotDistinctError",
    "QuadratureRule",
    "DiscriminantReport",
    "SylvesterReport",
    "real_roots",
    "weights_cramer",
    "weights_vandermonde",
    "gauss_rule",
    "tensor_quadrature",
    "discriminant_moment",
    "sylvester_decompose",
]

DEFAULT_TOL = 1e-9


class NodesNotDistinctError(ValueError):
    """Roots closer than the tolerance, or not real."""


def _horner(coeffs: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def real_roots(p: Poly, tol: float = DEFAULT_TOL) -> list[float]:
    """All roots of a univariate polynomial, which must be real and simple.

    Eigenvalues of the balanced companion matrix are refined by one Newton
    step whose residual is evaluated exactly at the float iterate.

    Raises:
        NodesNotDistinctError: if a root is not real or two roots are
            closer than ``tol`` (relative to their size).
    """
    vars_ = p.variables()
    if len(vars_) != 1:
        raise ValueError(f"expected a univariate polynomial, got {p}")
    coeffs = p.univariate_coeffs(vars_[0])
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("polynomial must have degree at least 1")
    lead = coeffs[-1]
    monic = [float(c / lead) for c in coeffs]
    if n == 1:
        eig = np.array([-monic[0]])
    else:
        comp = np.zeros((n, n))
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = [-c for c in monic[:-1]]
        balanced, _ = matrix_balance(comp)
        eig = np.linalg.eigvals(balanced)
    scale = max(1.0, float(np.max(np.abs(eig))))
    if np.max(np.abs(np.imag(eig))) > math.sqrt(tol) * scale:
        raise NodesNotDistinctError(f"polynomial has non-real roots: {np.sort_complex(eig)}")
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    roots = []
    for z in sorted(float(np.real(e)) for e in eig):
        t = Fraction(z)
        dp = _horner(deriv, t)
        if dp != 0:
            z = float(t - _horner(coeffs, t) / dp)
        roots.append(z)
    roots.sort()
    for a, b in zip(roots, roots[1:]):
        if b - a <= tol * max(1.0, abs(a), abs(b)):
            raise NodesNotDistinctError(f"nodes not distinct: {a!r} and {b!r}")
    return roots


def _poly_from_roots(roots: Sequence[Fraction]) -> list[Fraction]:
    coeffs = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return coeffs


def weights_cramer(M: MomentFunctional, nodes: Sequence[float]) -> list[float]:
    """``c_i = E Δ(ζ_1, .., x, .., ζ_n) / Δ(ζ_1, .., ζ_n)`` (x in slot i).

    The ratio reduces to ``E prod_{j != i} (x - ζ_j) / prod_{j != i} (ζ_i - ζ_j)``,
    evaluated exactly at the binary values of the float nodes.
    """
    exact = [Fraction(z) for z in nodes]
    if len(set(exact)) != len(exact):
        raise NodesNotDistinctError("coincident nodes")
    n = len(exact)
    moments = [M.moment(1, k) for k in range(n)]
    out = []
    for i, zi in enumerate(exact):
        others = exact[:i] + exact[i + 1:]
        num = sum((c * a for c, a in zip(_poly_from_roots(others), moments)), Fraction(0))
        den = math.prod((zi - zj for zj in others), start=Fraction(1))
        out.append(float(num / den))
    return out


def weights_vandermonde(M: MomentFunctional, nodes: Sequence[float]) -> list[float]:
    """Solve ``sum_i c_i ζ_i^k = a_k`` for ``k < n`` in double precision."""
    z = np.asarray(nodes, dtype=float)
    n = len(z)
    V = np.vander(z, n, increasing=True).T
    rhs = np.array([float(M.moment(1, k)) for k in range(n)])
    return [float(c) for c in np.linalg.solve(V, rhs)]


@dataclass
class QuadratureRule:
    """Nodes and weights; ``weights`` are the Cramer weights."""

    n: int
    nodes: list[float]
    weights: list[float]
    source: str = ""
    tol: float = DEFAULT_TOL
    weights_vandermonde: list[float] = field(default_factory=list)

    def moment(self, k: int) -> float:
        """``sum_i c_i ζ_i^k``."""
        return math.fsum(c * z**k for c, z in zip(self.weights, self.nodes))

    def apply(self, p: Poly) -> float:
        """``sum_i c_i p(ζ_i)`` for a univariate polynomial."""
        vars_ = p.variables()
        if not vars_:
            return float(p.constant_value()) * math.fsum(self.weights)
        if len(vars_) != 1:
            raise ValueError("rule applies to univariate polynomials")
        v = vars_[0]
        return math.fsum(c * float(p.evaluate({v: z})) for c, z in zip(self.weights, self.nodes))

    def residuals(self, M: MomentFunctional, up_to: int) -> dict[int, float]:
        """Relative residual ``|Σ c ζ^k - a_k| / max(1, |a_k|)`` for ``k <= up_to``."""
        out = {}
        for k in range(up_to + 1):
            a = M.moment(1, k)
            out[k] = abs(self.moment(k) - float(a)) / max(1.0, abs(float(a)))
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "source": self.source,
            "nodes": list(self.nodes),
            "weights": list(self.weights),
            "weights_vandermonde": list(self.weights_vandermonde),
        }


def _rule_from_poly(M: MomentFunctional, p: Poly, n: int, source: str, tol: float) -> QuadratureRule:
    nodes = real_roots(p, tol)
    if len(nodes) != n:
        raise NodesNotDistinctError(f"expected {n} nodes, found {len(nodes)}")
    rule = QuadratureRule(
        n, nodes, weights_cramer(M, nodes), source, tol, weights_vandermonde(M, nodes)
    )
    a0 = float(M.moment(1, 0))
    if abs(math.fsum(rule.weights) - a0) > tol * max(1.0, abs(a0)):
        raise ArithmeticError(f"weights sum to {math.fsum(rule.weights)}, expected {a0}")
    return rule


def gauss_rule(M: MomentFunctional, n: int, tol: float = DEFAULT_TOL) -> QuadratureRule:
    """The n-point Gauss rule: nodes are the roots of the classical ``p_n``.

    Exact on polynomials of degree at most ``2n - 1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    p = gops_det(M, n, 1).poly
    if p.total_degree() != n:
        raise NodesNotDistinctError(f"p_{n} has degree {p.total_degree()} < {n}")
    return _rule_from_poly(M, p, n, f"roots of p_({n},1), {M.tables[1].name}", tol)


def tensor_quadrature(M: MomentFunctional, rule: QuadratureRule, p: Poly) -> float:
    """``sum c_{i1} .. c_{iN} p(ζ_{i1}, .., ζ_{iN})`` over all index tuples.

    Every block of ``p`` must be a class-1 block with degree at most
    ``2n - 1`` in its variable; then the sum equals ``E p``.
    """
    if 0 in p.blocks():
        raise ValueError("block 0 is not integrated")
    vars_ = p.variables()
    for v in vars_:
        if v.kind != Kind.X or v.coord != 0:
            raise ValueError(f"unsupported variable {v}")
        if M.class_for(v.block) != 1:
            raise ValueError(f"block {v.block} is not in class 1")
        if p.degree_in(v) > 2 * rule.n - 1:
            raise ValueError(
                f"degree {p.degree_in(v)} in {v} exceeds 2n-1 = {2 * rule.n - 1}; exactness not guaranteed"
            )
    if not vars_:
        return float(p.constant_value())
    cf = [(float(c), mono) for mono, c in p.items()]
    parts = []
    for idx in itertools.product(range(rule.n), repeat=len(vars_)):
        w = math.prod(rule.weights[i] for i in idx)
        point = {v: rule.nodes[i] for v, i in zip(vars_, idx)}
        val = math.fsum(c * math.prod(point[v] ** e for v, e in m.items()) for c, m in cf)
        parts.append(w * val)
    return math.fsum(parts)


@dataclass
class DiscriminantReport:
    N: int
    k: int
    n: int
    exact: Fraction
    quadrature: float
    product_formula: float | None = None
    tol: float = DEFAULT_TOL

    @property
    def agree(self) -> bool:
        scale = max(1.0, abs(float(self.exact)))
        ok = abs(self.quadrature - float(self.exact)) <= self.tol * scale
        if self.product_formula is not None:
            ok = ok and abs(self.product_formula - float(self.exact)) <= self.tol * scale
        return ok

    def to_json(self) -> dict:
        from .ring import rational_to_str

        return {
            "N": self.N,
            "k": self.k,
            "n": self.n,
            "exact": rational_to_str(self.exact),
            "quadrature": self.quadrature,
            "product_formula": self.product_formula,
            "agree": self.agree,
        }


def discriminant_moment(
    M: MomentFunctional, N: int, k: int, n: int, tol: float = DEFAULT_TOL
) -> DiscriminantReport:
    """``E Δ(x1..xN)^{2k}`` exactly and by the n-point tensor Gauss rule.

    Requires ``2k(N-1) <= 2n-1``.  When ``k = 1`` and ``N = n`` the report
    also carries ``n! c_1 .. c_n Δ(ζ_1..ζ_n)^2``.
    """
    if N < 1 or k < 0 or n < 1:
        raise ValueError("need N >= 1, k >= 0, n >= 1")
    if 2 * k * (N - 1) > 2 * n - 1:
        raise ValueError(f"2k(N-1) = {2 * k * (N - 1)} exceeds 2n-1 = {2 * n - 1}")
    blocks = list(range(1, N + 1))
    Mc = M.with_classes({b: 1 for b in blocks})
    disc = vandermonde([VarId(b) for b in blocks]) ** (2 * k)
    exact = apply_E(Mc, disc, blocks=blocks)
    rule = gauss_rule(M, n, tol)
    if disc.is_constant():
        quad = float(disc.constant_value()) * math.fsum(rule.weights) ** N
    else:
        quad = tensor_quadrature(Mc, rule, disc)
    prod = None
    if k == 1 and N == n:
        z = rule.nodes
        d2 = math.prod((z[j] - z[i]) ** 2 for i in range(n) for j in range(i + 1, n))
        prod = math.factorial(n) * math.prod(rule.weights) * d2
    return DiscriminantReport(N, k, n, exact, quad, prod, tol)


@dataclass
class SylvesterReport:
    rule: QuadratureRule
    generator: Poly
    residuals: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def to_json(self) -> dict:
        return {
            "rule": self.rule.to_json(),
            "generator": str(self.generator),
            "residuals": {str(k): v for k, v in self.residuals.items()},
            "max_residual": self.max_residual,
        }


def sylvester_decompose(M: MomentFunctional, n: int, tol: float = DEFAULT_TOL) -> SylvesterReport:
    """Write the degree-(2n-1) moment form as a sum of n powers of linear forms.

    Nodes are the roots of ``J(f)(x0, 1)`` where ``f`` has coefficients
    ``a_0 .. a_{2n-1}``; weights come from the Cramer formula.  The report
    lists ``|a_k - sum c_i ζ_i^k|`` for ``k = 0 .. 2n-1``.
    """
    f = form_from_moments(M, 1, 2 * n - 1)
    g = dehomogenize(covariant_J(f, [], n))
    if g.total_degree() != n:
        raise NodesNotDistinctError(f"J(f) has degree {g.total_degree()} in x0, expected {n}")
    rule = _rule_from_poly(M, g, n, f"roots of J_(2n-1,n), n = {n}", tol)
    res = {}
    for k in range(2 * n):
        a = float(M.moment(1, k))
        res[k] = abs(rule.moment(k) - a)
    return SylvesterReport(rule, g, res)
