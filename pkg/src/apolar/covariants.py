"""Binary forms, brackets and the umbral operator U.

A binary form of degree n with coefficients ``a_0 .. a_n`` is the
polynomial ``sum_k C(n, k) (-1)^(n-k) a_k x0^(n-k) y0^k``.  The umbral
operator U sends ``x_i^k1 y_i^k2`` (with ``k1 + k2`` equal to the degree
of the form attached to block i) to ``a_k1`` and leaves block 0 alone.
Covariants are U applied to products of brackets ``[i j] = x_i y_j - x_j y_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence, Union

from .ring import (
    Kind,
    Poly,
    PolyMatrix,
    VarId,
    _block_of,
    _decode,
    _norm,
    det,
    rank,
    to_fraction,
    x,
    y,
)
from .umbral import MomentFunctional

__all__ = [
    "BinaryForm",
    "BracketProduct",
    "FormAssignment",
    "LinearChange",
    "bracket",
    "form_from_moments",
    "form_from_poly",
    "umbral_U",
    "apolar_pairing",
    "apolar_conditions",
    "apolar_space_dim",
    "covariant_J",
    "covariant_J_det",
    "j_determinant",
    "j_bracket_product",
    "transvectant",
    "hessian",
    "transform_form",
]


@dataclass(frozen=True)
class BinaryForm:
    """Coefficients ``a_0 .. a_n`` of a binary form of degree ``n``."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(to_fraction(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a form needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    d = 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def umbral_value(self, kx: tuple, ky: tuple):
        if kx[0] + ky[0] != self.degree:
            return 0
        return self.coeffs[kx[0]]

    def to_poly(self, block: int = 0) -> Poly:
        n = self.degree
        xb, yb = x(block), y(block)
        out = Poly.const(0)
        for k, a in enumerate(self.coeffs):
            if a:
                out = out + (xb ** (n - k) * yb**k).scale(math.comb(n, k) * (-1) ** (n - k) * a)
        return out

    def to_json(self) -> dict:
        from .ring import rational_to_str

        return {"degree": self.degree, "coeffs": [rational_to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "BinaryForm":
        coeffs = [str(c) for c in data["coeffs"]]
        if "degree" in data and int(data["degree"]) != len(coeffs) - 1:
            raise ValueError("degree does not match the number of coefficients")
        return cls(tuple(coeffs))


def form_from_moments(M: MomentFunctional, cls: int, n: int) -> BinaryForm:
    """The form whose coefficients are the moments ``a_{j0} .. a_{jn}``."""
    return BinaryForm(tuple(M.moment(cls, k) for k in range(n + 1)))


def form_from_poly(p: Poly, n: int) -> BinaryForm:
    """Read coefficients of a degree-n form in ``(x0, y0)`` off a polynomial."""
    x0, y0 = VarId(0, 0, Kind.X), VarId(0, 0, Kind.Y)
    allowed = {x0, y0}
    for mono, _ in p.items():
        if set(mono) - allowed or sum(mono.values()) != n:
            raise ValueError(f"not a binary form of degree {n} in (x0, y0): {p}")
    coeffs = []
    for k in range(n + 1):
        c = p.coefficient({x0: n - k, y0: k})
        coeffs.append(c / (math.comb(n, k) * (-1) ** (n - k)))
    return BinaryForm(tuple(coeffs))


def bracket(i: int, j: int, coord: int = 0) -> Poly:
    """``[i j] = x_i y_j - x_j y_i``."""
    return x(i, coord) * y(j, coord) - x(j, coord) * y(i, coord)


@dataclass(frozen=True)
class BracketProduct:
    """``prod [i j]^power``; a power may be a multi-degree for 2(d+1)-ary forms."""

    factors: tuple

    def __post_init__(self):
        norm = []
        for i, j, power in self.factors:
            if i == j:
                raise ValueError(f"bracket [{i} {j}] has equal indices")
            norm.append((int(i), int(j), power if isinstance(power, int) else tuple(power)))
        object.__setattr__(self, "factors", tuple(norm))

    def to_poly(self) -> Poly:
        return _bracket_poly(self.factors)

    def index(self):
        """Number of brackets not involving block 0 (the covariant index).

        Componentwise for multi-degree powers.
        """
        total = None
        for i, j, power in self.factors:
            if i == 0 or j == 0:
                continue
            if isinstance(power, int):
                total = (total or 0) + power
            else:
                total = tuple(a + b for a, b in zip(total, power)) if total else power
        return 0 if total is None else total


@lru_cache(maxsize=256)
def _bracket_poly(factors: tuple) -> Poly:
    out = Poly.const(1)
    for i, j, power in factors:
        if isinstance(power, int):
            out = out * bracket(i, j) ** power
        else:
            for c, pc in enumerate(power):
                if pc:
                    out = out * bracket(i, j, c) ** pc
    return out


@dataclass(frozen=True)
class FormAssignment:
    """Forms attached to classes, and the class of every non-zero block."""

    forms: Mapping[int, object]
    class_of: Mapping[int, int] = field(default_factory=dict)

    def form_for(self, block: int):
        try:
            cls = self.class_of[block]
        except KeyError:
            raise KeyError(f"block {block} has no class assignment") from None
        try:
            return self.forms[cls]
        except KeyError:
            raise KeyError(f"class {cls} has no assigned form") from None


def umbral_U(p: Union[Poly, BracketProduct], assign: FormAssignment) -> Poly:
    """Apply U: block 0 passes through, block i maps to a coefficient.

    A block whose total degree does not match its form's degree sends the
    whole monomial to zero.  Multi-degree forms (``d > 0``) are matched
    coordinate by coordinate.
    """
    if isinstance(p, BracketProduct):
        p = p.to_poly()
    out: dict = {}
    cache: dict = {}
    for mono, c in p._terms.items():
        coef = c
        kept = []
        by_block: dict[int, list] = {}
        for code, e in mono:
            by_block.setdefault(_block_of(code), []).append((code, e))
        for block, entries in by_block.items():
            if block == 0:
                kept.extend(entries)
                continue
            key = (block, tuple(entries))
            if key not in cache:
                form = assign.form_for(block)
                kx = [0] * (form.d + 1)
                ky = [0] * (form.d + 1)
                for code, e in entries:
                    v = _decode(code)
                    if v.coord > form.d:
                        raise ValueError(f"coordinate {v.coord} exceeds the form's d = {form.d}")
                    (ky if v.kind == Kind.Y else kx)[v.coord] = e
                cache[key] = form.umbral_value(tuple(kx), tuple(ky))
            coef = coef * cache[key]
            if not coef:
                break
        if not coef:
            continue
        kept_t = tuple(kept)
        out[kept_t] = out.get(kept_t, 0) + coef
    return Poly._raw({m: _norm(v) for m, v in out.items() if v})


def _as_form(g) -> BinaryForm | None:
    if isinstance(g, BinaryForm):
        return g
    if g.is_zero():
        return None
    return form_from_poly(g, g.total_degree())


def apolar_pairing(f: BinaryForm, g: Union[BinaryForm, Poly]) -> Poly:
    """{f, g} = U [1 0]^(n-m) [2 1]^m, a form of degree n - m in (x0, y0).

    ``g`` may be a form or a homogeneous polynomial in ``(x0, y0)``; the
    zero polynomial pairs to zero.
    """
    g = _as_form(g)
    if g is None:
        return Poly.const(0)
    n, m = f.degree, g.degree
    if n < m:
        raise ValueError(f"apolar pairing needs deg f >= deg g (got {n} < {m})")
    bp = BracketProduct(((1, 0, n - m), (2, 1, m)))
    return umbral_U(bp, FormAssignment({1: f, 2: g}, {1: 1, 2: 2}))


def _g_basis(m: int, k: int) -> Poly:
    # g(x1, y1) with coefficient vector e_k
    return (x(1) ** (m - k) * y(1) ** k).scale(math.comb(m, k) * (-1) ** (m - k))


def apolar_conditions(f: BinaryForm, m: int) -> list[list[Fraction]]:
    """Matrix of the linear conditions ``U(f) x1^k y1^(n-m-k) g(x1, y1) = 0``.

    Row k (0 <= k <= n - m), column i: the contribution of the i-th
    coefficient of g.
    """
    n = f.degree
    if m > n:
        raise ValueError("m must not exceed deg f")
    assign = FormAssignment({1: f}, {1: 1})
    rows = []
    for k in range(n - m + 1):
        shift = x(1) ** k * y(1) ** (n - m - k)
        row = [umbral_U(shift * _g_basis(m, i), assign).constant_value() for i in range(m + 1)]
        rows.append(row)
    return rows


def apolar_space_dim(f: BinaryForm, m: int) -> int:
    """Dimension of the space of degree-m forms apolar to ``f``."""
    return (m + 1) - rank(apolar_conditions(f, m))


def _check_j_args(f: BinaryForm, aux: Sequence[BinaryForm], m: int) -> int:
    n = f.degree
    if m > n or m < 1:
        raise ValueError(f"need 1 <= m <= deg f (m = {m}, n = {n})")
    l = 2 * m - n
    if l < 1:
        raise ValueError(f"need 2m - n >= 1 (got {l})")
    if len(aux) != l - 1:
        raise ValueError(f"expected {l - 1} auxiliary forms, got {len(aux)}")
    for g in aux:
        if g.degree != m:
            raise ValueError(f"auxiliary forms must have degree {m}")
    return l


def j_bracket_product(n: int, m: int) -> BracketProduct:
    """``prod_{1<=i<j<=n-m+1} [j i]  prod_{0<=i<j<=m} [j i]``."""
    first = [(j, i, 1) for j in range(1, n - m + 2) for i in range(1, j)]
    second = [(j, i, 1) for j in range(m + 1) for i in range(j)]
    return BracketProduct(tuple(first + second))


def _j_assignment(f: BinaryForm, aux: Sequence[BinaryForm], m: int) -> FormAssignment:
    n = f.degree
    class_of = {b: 1 for b in range(1, n - m + 2)}
    forms = {1: f}
    for t, g in enumerate(aux):
        class_of[n - m + 2 + t] = 2 + t
        forms[2 + t] = g
    return FormAssignment(forms, class_of)


def covariant_J(f: BinaryForm, aux: Sequence[BinaryForm], m: int) -> Poly:
    """The joint covariant J_{n,m}(f, aux...) by bracket expansion.

    Blocks ``1 .. n-m+1`` carry ``f``; the ``2m - n - 1`` blocks after
    them carry the auxiliary forms.  The result is zero or a degree-m
    form apolar to ``f``.
    """
    _check_j_args(f, aux, m)
    bp = j_bracket_product(f.degree, m)
    return umbral_U(bp, _j_assignment(f, aux, m))


def covariant_J_det(f: BinaryForm, aux: Sequence[BinaryForm], m: int) -> Poly:
    """J_{n,m} from the (m+1)x(m+1) Hankel-type determinant.

    Symmetrizing over the n-m+1 blocks of class 1 multiplies the
    determinant by (n-m+1)!, so that factor is applied here and the result
    equals :func:`covariant_J` exactly.  Use :func:`j_determinant` for the
    bare determinant.
    """
    return j_determinant(f, aux, m) * math.factorial(f.degree - m + 1)


def j_determinant(f: BinaryForm, aux: Sequence[BinaryForm], m: int) -> Poly:
    """The bare determinant: monomial row, Hankel rows of ``f``, aux rows."""
    _check_j_args(f, aux, m)
    n = f.degree
    top = [x(0) ** k * y(0) ** (m - k) for k in range(m + 1)]
    rows = [top]
    for k in range(n - m + 1):
        rows.append([f.coeff(k + j) for j in range(m + 1)])
    for g in aux:
        rows.append(list(g.coeffs))
    return det(PolyMatrix(rows))


def transvectant(f: BinaryForm, g: BinaryForm, k: int) -> Poly:
    """{f, g}^k = U [1 0]^(n-k) [2 0]^(m-k) [2 1]^k."""
    n, m = f.degree, g.degree
    if not 0 <= k <= min(n, m):
        raise ValueError(f"transvectant order {k} out of range for degrees {n}, {m}")
    bp = BracketProduct(((1, 0, n - k), (2, 0, m - k), (2, 1, k)))
    return umbral_U(bp, FormAssignment({1: f, 2: g}, {1: 1, 2: 2}))


def hessian(f: BinaryForm) -> Poly:
    """{f, f}^2, proportional to the Hessian determinant of f."""
    return transvectant(f, f, 2)


@dataclass(frozen=True)
class LinearChange:
    """(x0, y0) -> (c11 x0 + c12 y0, c21 x0 + c22 y0)."""

    c11: Fraction
    c12: Fraction
    c21: Fraction
    c22: Fraction

    def __post_init__(self):
        for name in ("c11", "c12", "c21", "c22"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.det == 0:
            raise ValueError("singular linear change of variables")

    @property
    def det(self) -> Fraction:
        return self.c11 * self.c22 - self.c12 * self.c21

    def substitute(self, p: Poly) -> Poly:
        """p(c11 x0 + c12 y0, c21 x0 + c22 y0)."""
        x0, y0 = x(0), y(0)
        return p.subs({
            VarId(0, 0, Kind.X): x0 * self.c11 + y0 * self.c12,
            VarId(0, 0, Kind.Y): x0 * self.c21 + y0 * self.c22,
        })


def transform_form(f: BinaryForm, phi: LinearChange) -> BinaryForm:
    """Coefficients of ``f(phi(x0, y0))`` in the signed binomial basis."""
    return form_from_poly(phi.substitute(f.to_poly()), f.degree)
