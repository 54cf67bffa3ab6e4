"""Multi-index degrees, 2(d+1)-ary forms and multivariate orthogonal polynomials.

A multi-degree ``n = (n_0, .., n_d)`` is ordered componentwise.  Its box
``{k : 0 <= k <= n}`` has ``s(n) = prod (n_i + 1)`` elements, enumerated
in graded-lex order so that ``0`` comes first and ``n`` last.  Block ``b``
carries the variables ``x_{b,0} .. x_{b,d}`` (and their ``y`` partners).

The generalized system ``p_{nm}`` has degree n and is orthogonal to every
``x0^h`` with ``h <= n - m``; at ``d = 0`` it is the univariate ``p_{nm}``.
The full system ``p_n`` is orthogonal to every ``x0^k`` with ``k < n``.
"""
from __future__ import annotations

import itertools
import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .covariants import BracketProduct, FormAssignment, umbral_U
from .ops import DegenerateAuxWarning
from .ring import Kind, Poly, VarId, _encode, det_top_row, permutations_with_sign, rank, to_fraction
from .umbral import MomentFunctional, MomentTable, apply_E0

__all__ = [
    "MultiDegree",
    "BoxEnumeration",
    "box_enumerate",
    "rank_of",
    "MultiForm",
    "multiform_from_moments",
    "multiform_from_poly",
    "multi_monomial",
    "multi_apolar_pairing",
    "multi_apolar_conditions",
    "multi_apolar_space_dim",
    "MultiEntry",
    "multi_gops_det",
    "multi_gops_symbolic",
    "multi_ops_full",
    "multi_orthogonality",
    "multi_expectation",
]

MultiDegree = tuple


def _md(n) -> tuple:
    if isinstance(n, int):
        n = (n,)
    n = tuple(int(c) for c in n)
    if not n or any(c < 0 for c in n):
        raise ValueError(f"invalid multi-degree {n}")
    return n


def rank_of(n: Sequence[int]) -> int:
    """ρ(n) = n_0 + .. + n_d."""
    return sum(n)


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(i <= j for i, j in zip(a, b))


def _add(a, b) -> tuple:
    return tuple(i + j for i, j in zip(a, b))


def _sub(a, b) -> tuple:
    return tuple(i - j for i, j in zip(a, b))


@dataclass(frozen=True)
class BoxEnumeration:
    n: tuple
    order: tuple

    @property
    def s(self) -> int:
        """s(n), the number of elements."""
        return len(self.order)

    def index(self, k: Sequence[int]) -> int:
        return self.order.index(tuple(k))

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i: int) -> tuple:
        return self.order[i]

    def __len__(self) -> int:
        return len(self.order)


@lru_cache(maxsize=256)
def _box(n: tuple) -> tuple:
    pts = itertools.product(*(range(c + 1) for c in n))
    return tuple(sorted(pts, key=lambda k: (sum(k), k)))


def box_enumerate(n) -> BoxEnumeration:
    """All k with 0 <= k <= n in graded-lex order.

    Examples:
        >>> box_enumerate((1, 1)).order
        ((0, 0), (0, 1), (1, 0), (1, 1))
    """
    n = _md(n)
    return BoxEnumeration(n, _box(n))


def multi_monomial(block: int, k: Sequence[int], kind: Kind = Kind.X) -> Poly:
    """``x_b^k = prod_c x_{b,c}^{k_c}`` (or the y analogue)."""
    return Poly({tuple((VarId(block, c, kind), e) for c, e in enumerate(k) if e): 1})


@dataclass(frozen=True)
class MultiForm:
    """A 2(d+1)-ary form of multi-degree n, coefficients keyed by the box of n."""

    n: tuple
    coeffs: Mapping

    def __post_init__(self):
        n = _md(self.n)
        coeffs = {tuple(k): to_fraction(v) for k, v in dict(self.coeffs).items()}
        box = set(_box(n))
        if set(coeffs) != box:
            missing = box - set(coeffs)
            extra = set(coeffs) - box
            raise ValueError(f"coefficients must be keyed by the box of {n} (missing {sorted(missing)}, extra {sorted(extra)})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def d(self) -> int:
        return len(self.n) - 1

    @property
    def degree(self) -> tuple:
        return self.n

    def is_zero(self) -> bool:
        return not any(self.coeffs.values())

    def umbral_value(self, kx: tuple, ky: tuple):
        if _add(kx, ky) != self.n:
            return 0
        return self.coeffs[kx]

    def to_poly(self, block: int = 0) -> Poly:
        out = Poly.const(0)
        for k in _box(self.n):
            a = self.coeffs[k]
            if not a:
                continue
            c = math.prod(math.comb(ni, ki) for ni, ki in zip(self.n, k)) * (-1) ** rank_of(_sub(self.n, k))
            out = out + (multi_monomial(block, _sub(self.n, k)) * multi_monomial(block, k, Kind.Y)).scale(c * a)
        return out

    def to_json(self) -> dict:
        from .ring import rational_to_str

        return {
            "degree": list(self.n),
            "coeffs": {",".join(map(str, k)): rational_to_str(self.coeffs[k]) for k in _box(self.n)},
        }


def multiform_from_moments(M: MomentFunctional, cls: int, n) -> MultiForm:
    """The form with coefficients ``a_{cls,k}`` for k in the box of n."""
    n = _md(n)
    if len(n) != M.d + 1:
        raise ValueError(f"multi-degree {n} does not match d = {M.d}")
    return MultiForm(n, {k: M.moment(cls, k) for k in _box(n)})


def multiform_from_poly(p: Poly, n) -> MultiForm:
    """Read a form of multi-degree n in ``(x0, y0)`` off a polynomial."""
    n = _md(n)
    d = len(n) - 1
    coeffs = {k: Fraction(0) for k in _box(n)}
    for mono, c in p.items():
        kx, ky = [0] * (d + 1), [0] * (d + 1)
        for v, e in mono.items():
            if v.block != 0 or v.coord > d:
                raise ValueError(f"unexpected variable {v} for a form of degree {n}")
            (ky if v.kind == Kind.Y else kx)[v.coord] = e
        k = tuple(ky)
        if _add(kx, ky) != n:
            raise ValueError(f"term of wrong degree in a form of degree {n}")
        sign = math.prod(math.comb(ni, ki) for ni, ki in zip(n, k)) * (-1) ** rank_of(_sub(n, k))
        coeffs[k] = c / sign
    return MultiForm(n, coeffs)


def multi_apolar_pairing(f: MultiForm, g) -> Poly:
    """{f, g} = U [1 0]^(n-m) [2 1]^m with multi-degree bracket powers."""
    if isinstance(g, Poly):
        if g.is_zero():
            return Poly.const(0)
        raise TypeError("pass g as a MultiForm")
    if not _leq(g.n, f.n) or len(g.n) != len(f.n):
        raise ValueError(f"need deg g <= deg f componentwise (got {g.n} and {f.n})")
    bp = BracketProduct(((1, 0, _sub(f.n, g.n)), (2, 1, g.n)))
    return umbral_U(bp, FormAssignment({1: f, 2: g}, {1: 1, 2: 2}))


def multi_apolar_conditions(f: MultiForm, m) -> list[list[Fraction]]:
    """Rows ``U(f) x1^k y1^(n-m-k) g(x1, y1)`` for k in box(n-m), per basis g."""
    m = _md(m)
    if not _leq(m, f.n):
        raise ValueError(f"m = {m} exceeds n = {f.n}")
    diff = _sub(f.n, m)
    assign = FormAssignment({1: f}, {1: 1})
    basis = []
    for j in _box(m):
        g = MultiForm(m, {k: int(k == j) for k in _box(m)})
        basis.append(g.to_poly(1))
    rows = []
    for k in _box(diff):
        shift = multi_monomial(1, k) * multi_monomial(1, _sub(diff, k), Kind.Y)
        rows.append([umbral_U(shift * b, assign).constant_value() for b in basis])
    return rows


def multi_apolar_space_dim(f: MultiForm, m) -> int:
    """Dimension of the forms of degree m apolar to f; generically s(m) - s(n-m)."""
    m = _md(m)
    return len(_box(m)) - rank(multi_apolar_conditions(f, m))


# -- orthogonal polynomials -------------------------------------------------


@dataclass(frozen=True)
class MultiEntry:
    """A multivariate orthogonal polynomial in the block-0 variables."""

    n: tuple
    m: tuple | None
    poly: Poly
    path: str
    aux: tuple = ()
    degenerate: bool = False

    @property
    def leading(self) -> Fraction:
        """Coefficient of ``x0^n``."""
        return self.poly.coefficient({VarId(0, c): e for c, e in enumerate(self.n) if e})

    def coefficient(self, k: Sequence[int]) -> Fraction:
        return self.poly.coefficient({VarId(0, c): e for c, e in enumerate(k) if e})


def multi_expectation(M: MomentFunctional, p: Poly, cls: int = 1) -> Fraction:
    """E applied to a polynomial in the block-0 variables (moments of ``cls``)."""
    total = Fraction(0)
    for mono, c in p.items():
        k = [0] * (M.d + 1)
        for v, e in mono.items():
            if v.block != 0 or v.kind != Kind.X:
                raise ValueError(f"expected a polynomial in x0 only, found {v}")
            k[v.coord] = e
        total += c * M.moment(cls, tuple(k))
    return total


def multi_orthogonality(M: MomentFunctional, p: Poly, ks) -> dict:
    """``{k: E x0^k p}`` for each multi-index k."""
    return {tuple(k): multi_expectation(M, multi_monomial(0, k) * p) for k in ks}


def _random_table(box: tuple, seed: int, index: int) -> MomentTable:
    rng = random.Random(f"{seed}:{index}")
    values = {k: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for k in box}
    return MomentTable(values, d=len(box[0]) - 1, name=f"random{index}")


def _aux_tables(M: MomentFunctional, count: int, box: tuple, aux, seed: int) -> list[tuple[str, MomentTable]]:
    """Resolve auxiliary rows as (label, table) pairs.

    ``aux`` may be None (use the non-unit classes of M, then pseudo-random
    rows), a sequence of class numbers, or a sequence of explicit rows.
    """
    if aux is None:
        classes = sorted(c for c in M.tables if c != 1)[:count]
        out = [(f"class {c}", M.table(c)) for c in classes]
        out += [(f"random {i}", _random_table(box, seed, i)) for i in range(count - len(out))]
        return out
    aux = list(aux)
    if len(aux) != count:
        raise ValueError(f"expected {count} auxiliary rows, got {len(aux)}")
    out = []
    for i, a in enumerate(aux):
        if isinstance(a, int):
            out.append((f"class {a}", M.table(a)))
        elif isinstance(a, MomentTable):
            out.append((a.name, a))
        else:
            row = [to_fraction(v) for v in a]
            if len(row) != len(box):
                raise ValueError(f"auxiliary row {i} must have {len(box)} entries")
            out.append((f"row {i}", MomentTable(dict(zip(box, row)), d=len(box[0]) - 1, name=f"row{i}")))
    return out


def _warn_degenerate(label: str) -> None:
    warnings.warn(f"{label}: the determinant vanishes (repeated or dependent rows)", DegenerateAuxWarning, stacklevel=3)


def _check_nm(M: MomentFunctional, n, m) -> tuple[tuple, tuple]:
    n, m = _md(n), _md(m)
    if len(n) != M.d + 1 or len(m) != M.d + 1:
        raise ValueError(f"multi-degrees must have d + 1 = {M.d + 1} components")
    if not _leq(m, n) or not any(m):
        raise ValueError(f"need 0 < m <= n componentwise (n = {n}, m = {m})")
    return n, m


def multi_gops_det(M: MomentFunctional, n, m, aux_rows=None, seed: int = 0) -> MultiEntry:
    """Generalized multivariate ``p_{nm}`` as a determinant.

    Columns run over the box of n; the rows are the monomials ``x0^{k_j}``,
    then ``a_{k_j + h_i}`` for every h in the box of n - m, then
    ``s - r - 1`` auxiliary rows, where ``s = s(n) - 1`` and
    ``r = s(n - m) - 1``.
    """
    n, m = _check_nm(M, n, m)
    cols = _box(n)
    hs = _box(_sub(n, m))
    s, r = len(cols) - 1, len(hs) - 1
    aux = _aux_tables(M, s - r - 1, cols, aux_rows, seed)
    rows = [[M.moment(1, _add(k, h)) for k in cols] for h in hs]
    rows += [[t.get(k) for k in cols] for _, t in aux]
    labels = tuple(lbl for lbl, _ in aux)
    if len({tuple(r_) for r_ in rows}) < len(rows):
        _warn_degenerate(f"p_({n},{m})")
        return MultiEntry(n, m, Poly.const(0), "determinantal", labels, True)
    poly = det_top_row([multi_monomial(0, k) for k in cols], rows)
    if poly.is_zero():
        _warn_degenerate(f"p_({n},{m})")
    return MultiEntry(n, m, poly, "determinantal", labels, poly.is_zero())


@lru_cache(maxsize=64)
def _monomial_det(blocks: tuple, cols: tuple) -> Poly:
    # det(x_{blocks[i]}^{cols[j]}) by the Leibniz sum; every term is a distinct monomial
    terms = {}
    for perm, sign in permutations_with_sign(len(blocks)):
        mono = []
        for i, j in enumerate(perm):
            for c, e in enumerate(cols[j]):
                if e:
                    mono.append((_encode(VarId(blocks[i], c)), e))
        terms[tuple(sorted(mono))] = sign
    return Poly._raw(terms)


def multi_gops_symbolic(M: MomentFunctional, n, m, aux_rows=None, seed: int = 0) -> MultiEntry:
    """``E0 Δ_{n-m}(x_1..x_{r+1}) Δ_n(x_0..x_s)`` with blocks ``1..r+1`` in class 1.

    ``Δ_n`` is the determinant of the monomials ``x_i^k`` over the box of
    n, and ``Δ_{n-m}`` the same over the box of n - m.  Blocks
    ``r+2 .. s`` take the auxiliary rows.  Equals ``(r+1)!`` times
    :func:`multi_gops_det` with the same auxiliary rows.
    """
    n, m = _check_nm(M, n, m)
    cols = _box(n)
    hs = _box(_sub(n, m))
    s, r = len(cols) - 1, len(hs) - 1
    aux = _aux_tables(M, s - r - 1, cols, aux_rows, seed)
    tables = dict(M.tables)
    class_of = {b: 1 for b in range(1, r + 2)}
    base = max(tables) + 1
    for t, (_, table) in enumerate(aux):
        tables[base + t] = table
        class_of[r + 2 + t] = base + t
    Mc = MomentFunctional(tables, class_of, M.d)
    first = _monomial_det(tuple(range(1, r + 2)), hs)
    second = _monomial_det(tuple(range(s + 1)), cols)
    poly = apply_E0(Mc, first * second, blocks=range(1, s + 1))
    return MultiEntry(n, m, poly, "symbolic", tuple(lbl for lbl, _ in aux), poly.is_zero())


def multi_ops_full(M: MomentFunctional, n, path: str = "det") -> MultiEntry:
    """Full-system ``p_n``, orthogonal to every ``x0^k`` with ``k < n``.

    ``det``: top row ``x0^{k_j}`` over the box of n, then the rows
    ``a_{k_i + k_j}`` for every ``k_i`` in the box except n.
    ``sym``: ``E0 D(x_1..x_s) Δ_n(x_0..x_s)`` where D uses the box without
    n; equals ``s!`` times the determinant.
    """
    n = _md(n)
    if len(n) != M.d + 1:
        raise ValueError(f"multi-degree {n} does not match d = {M.d}")
    cols = _box(n)
    s = len(cols) - 1
    if path == "det":
        rows = [[M.moment(1, _add(ki, kj)) for kj in cols] for ki in cols[:-1]]
        poly = det_top_row([multi_monomial(0, k) for k in cols], rows)
    elif path == "sym":
        Mc = M.with_classes({b: 1 for b in range(1, s + 1)})
        first = _monomial_det(tuple(range(1, s + 1)), cols[:-1])
        second = _monomial_det(tuple(range(s + 1)), cols)
        poly = apply_E0(Mc, first * second, blocks=range(1, s + 1))
    else:
        raise ValueError(f"unknown path {path!r}")
    if poly.is_zero():
        _warn_degenerate(f"p_{n}")
    return MultiEntry(n, None, poly, "determinantal" if path == "det" else "symbolic", (), poly.is_zero())
