"""Generalized orthogonal polynomial systems from a moment functional.

``p_{nm}`` has degree at most n and satisfies ``E x0^k p_{nm} = 0`` for
``0 <= k <= n - m``.  With ``m = 1`` these are the classical orthogonal
polynomials; with ``m = n`` they are biorthogonal.  Two constructions are
provided: a Hankel-type determinant and an umbral product of Vandermonde
polynomials.  The second equals ``(n-m+1)!`` times the first.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ring import Kind, Poly, PolyMatrix, VarId, det, vandermonde, x
from .umbral import MissingMomentError, MomentFunctional, apply_E, apply_E0

__all__ = [
    "GopsEntry",
    "OrthogonalityReport",
    "DegenerateAuxWarning",
    "aux_classes_for",
    "gops_det",
    "gops_symbolic",
    "leading_coefficient",
    "check_orthogonality",
    "gops_table",
]

X0 = VarId(0, 0, Kind.X)


class DegenerateAuxWarning(UserWarning):
    """Raised when repeated determinant rows force a zero polynomial."""


@dataclass(frozen=True)
class GopsEntry:
    """One polynomial ``p_{nm}(x0)`` and how it was built."""

    n: int
    m: int
    poly: Poly
    path: str
    leading: Fraction
    aux_classes: tuple = ()

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    @property
    def full_degree(self) -> bool:
        """True when the polynomial really has degree n."""
        return self.leading != 0

    def coeffs(self) -> list[Fraction]:
        """Coefficients ``[c0, c1, ..., cn]`` in x0, padded to length n + 1."""
        cs = self.poly.univariate_coeffs(X0) if not self.poly.is_zero() else []
        return cs + [Fraction(0)] * (self.n + 1 - len(cs))


def _check_nm(n: int, m: int) -> None:
    if not (isinstance(n, int) and isinstance(m, int)) or not 1 <= m <= n:
        raise ValueError(f"need integers 1 <= m <= n (got n = {n}, m = {m})")


def aux_classes_for(M: MomentFunctional, m: int, aux_classes: Sequence[int] | None = None) -> tuple:
    """The m-1 classes feeding the auxiliary rows.

    Defaults to the smallest non-unit classes of ``M``.  When ``M`` has
    too few, class 1 fills the gap, which makes the result degenerate.
    """
    if aux_classes is not None:
        aux = tuple(int(c) for c in aux_classes)
        if len(aux) != m - 1:
            raise ValueError(f"expected {m - 1} auxiliary classes, got {len(aux)}")
        return aux
    others = sorted(c for c in M.tables if c != 1)[: m - 1]
    return tuple(others) + (1,) * (m - 1 - len(others))


def _rows(M: MomentFunctional, n: int, m: int, aux: tuple) -> list[list[Fraction]]:
    rows = [[M.moment(1, k + j) for j in range(n + 1)] for k in range(n - m + 1)]
    rows += [[M.moment(c, j) for j in range(n + 1)] for c in aux]
    return rows


def _degenerate(rows: list[list[Fraction]], n: int, m: int, aux: tuple) -> bool:
    seen: dict = {}
    for i, r in enumerate(rows):
        t = tuple(r)
        if t in seen:
            # row 0 of the determinant is the x0 row, so moment rows start at 1
            warnings.warn(
                f"p_({n},{m}): determinant rows {seen[t] + 1} and {i + 1} are equal "
                f"(auxiliary classes {aux}); the determinant is zero",
                DegenerateAuxWarning,
                stacklevel=3,
            )
            return True
        seen[t] = i
    return False


def _entry(n, m, poly: Poly, path: str, aux: tuple, monic: bool) -> GopsEntry:
    lead = poly.coefficient({X0: n}) if not poly.is_zero() else Fraction(0)
    if monic:
        if lead == 0:
            raise ZeroDivisionError(f"p_({n},{m}) has degree < {n}; cannot make it monic")
        poly = poly / lead
        lead = Fraction(1)
    return GopsEntry(n, m, poly, path, Fraction(lead), aux)


def gops_det(
    M: MomentFunctional,
    n: int,
    m: int,
    aux_classes: Sequence[int] | None = None,
    monic: bool = False,
) -> GopsEntry:
    """``p_{nm}`` as an (n+1)x(n+1) determinant.

    The top row is ``1, x0, .., x0^n``.  Below it come n-m+1 Hankel rows
    ``a_k .. a_{k+n}`` of class 1 and one moment row per auxiliary class.

    Examples:
        >>> from apolar.umbral import MomentFunctional
        >>> str(gops_det(MomentFunctional.from_builtin("hermite"), 2, 1).poly)
        'x0^2 - 1'
    """
    _check_nm(n, m)
    aux = aux_classes_for(M, m, aux_classes)
    rows = _rows(M, n, m, aux)
    if _degenerate(rows, n, m, aux):
        return GopsEntry(n, m, Poly.const(0), "determinantal", Fraction(0), aux)
    top = [x(0) ** j for j in range(n + 1)]
    poly = det(PolyMatrix([top] + rows))
    return _entry(n, m, poly, "determinantal", aux, monic)


def _block_classes(n: int, m: int, aux: tuple) -> dict[int, int]:
    class_of = {b: 1 for b in range(1, n - m + 2)}
    for t, c in enumerate(aux):
        class_of[n - m + 2 + t] = c
    return class_of


def gops_symbolic(
    M: MomentFunctional,
    n: int,
    m: int,
    aux_classes: Sequence[int] | None = None,
    monic: bool = False,
) -> GopsEntry:
    """``p_{nm} = E0 Δ(x1..x_{n-m+1}) Δ(x0, x1, .., xn)``.

    Blocks ``1 .. n-m+1`` use class 1 and blocks ``n-m+2 .. n`` use the
    auxiliary classes.  Equals ``(n-m+1)!`` times :func:`gops_det`.
    """
    _check_nm(n, m)
    aux = aux_classes_for(M, m, aux_classes)
    if _degenerate(_rows(M, n, m, aux), n, m, aux):
        return GopsEntry(n, m, Poly.const(0), "symbolic", Fraction(0), aux)
    Mc = M.with_classes(_block_classes(n, m, aux))
    first = vandermonde([VarId(b) for b in range(1, n - m + 2)])
    second = vandermonde([VarId(b) for b in range(n + 1)])
    poly = apply_E0(Mc, first * second, blocks=range(1, n + 1))
    return _entry(n, m, poly, "symbolic", aux, monic)


def leading_coefficient(
    M: MomentFunctional, n: int, m: int, aux_classes: Sequence[int] | None = None
) -> Fraction:
    """``E Δ(x1..x_{n-m+1}) Δ(x1..xn)``; non-zero iff ``p_{nm}`` has degree n.

    The x0^n coefficient of :func:`gops_symbolic` is ``(-1)^n`` times this.
    """
    _check_nm(n, m)
    aux = aux_classes_for(M, m, aux_classes)
    Mc = M.with_classes(_block_classes(n, m, aux))
    first = vandermonde([VarId(b) for b in range(1, n - m + 2)])
    second = vandermonde([VarId(b) for b in range(1, n + 1)])
    return apply_E(Mc, first * second, blocks=range(1, n + 1))


@dataclass
class OrthogonalityReport:
    """Exact residuals ``E x0^k p`` and, for m = 1, ``E p_j p_n``."""

    n: int
    m: int
    residuals: dict = field(default_factory=dict)
    first_nonorthogonal: int | None = None
    pairwise: dict = field(default_factory=dict)

    @property
    def orthogonal(self) -> bool:
        in_range = all(self.residuals[k] == 0 for k in range(self.n - self.m + 1))
        return in_range and all(v == 0 for v in self.pairwise.values())

    def to_json(self) -> dict:
        from .ring import rational_to_str

        return {
            "n": self.n,
            "m": self.m,
            "orthogonal": self.orthogonal,
            "residuals": {str(k): rational_to_str(v) for k, v in sorted(self.residuals.items())},
            "first_nonorthogonal": self.first_nonorthogonal,
            "pairwise": {str(k): rational_to_str(v) for k, v in sorted(self.pairwise.items())},
        }


def _E_of(M: MomentFunctional, coeffs: Sequence[Fraction], shift: int = 0) -> Fraction:
    return sum((c * M.moment(1, j + shift) for j, c in enumerate(coeffs) if c), Fraction(0))


def check_orthogonality(
    M: MomentFunctional,
    entry: GopsEntry,
    previous: Sequence[GopsEntry] = (),
    search_limit: int | None = None,
) -> OrthogonalityReport:
    """Check ``E x0^k p = 0`` for ``0 <= k <= n - m`` exactly.

    Orders beyond ``n - m`` are scanned (up to ``search_limit``, default
    ``n + 1``, or until moments run out) to locate the first non-zero
    residual.  For m = 1 entries, ``E p_j p_n`` is also checked against
    every classical entry in ``previous`` of lower degree.
    """
    n, m = entry.n, entry.m
    coeffs = entry.coeffs()
    report = OrthogonalityReport(n, m)
    limit = n + 1 if search_limit is None else search_limit
    for k in range(max(limit, n - m) + 1):
        try:
            r = _E_of(M, coeffs, k)
        except MissingMomentError:
            if k <= n - m:
                raise
            break
        report.residuals[k] = r
        if k > n - m and r != 0:
            report.first_nonorthogonal = k
            break
    if m == 1:
        for prev in previous:
            if prev.m != 1 or prev.n >= n:
                continue
            prod = prev.poly * entry.poly
            report.pairwise[prev.n] = _E_of(M, prod.univariate_coeffs(X0) if not prod.is_zero() else [])
    return report


def gops_table(
    M: MomentFunctional, max_n: int, path: str = "det", aux_classes: Sequence[int] | None = None
) -> dict[tuple[int, int], GopsEntry]:
    """Every ``p_{nm}`` with ``1 <= m <= n <= max_n``.

    ``aux_classes`` (if given) lists candidate classes; each entry uses the
    first m-1 of them.
    """
    build = {"det": gops_det, "sym": gops_symbolic}[path]
    table = {}
    for n in range(1, max_n + 1):
        for m in range(1, n + 1):
            aux = None if aux_classes is None else tuple(aux_classes)[: m - 1]
            table[(n, m)] = build(M, n, m, aux)
    return table
