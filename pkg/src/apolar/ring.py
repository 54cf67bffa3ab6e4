"""Exact rational scalars and sparse multivariate polynomials.

Variables carry three labels: a *block* ``i`` (the subscript of ``x_i``),
a *coordinate* ``j`` for the multivariate arrays ``x_{ij}`` (always 0 in
the binary case) and a *kind*, ``X`` or ``Y``.  Polynomials are immutable
maps from monomials to rationals; zero coefficients are never stored, so
equality of polynomials is equality of maps.
"""
from __future__ import annotations

import itertools
import math
from enum import IntEnum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

__all__ = [
    "Kind",
    "VarId",
    "Poly",
    "PolyMatrix",
    "x",
    "y",
    "poly_arith",
    "vandermonde",
    "det",
    "det_cofactor",
    "det_bareiss",
    "dehomogenize",
    "rank",
    "det_rational",
    "det_top_row",
    "to_fraction",
    "rational_to_str",
    "parse_rational",
    "poly_to_json",
    "poly_from_json",
]


class Kind(IntEnum):
    X = 0
    Y = 1


class VarId(NamedTuple):
    block: int
    coord: int = 0
    kind: Kind = Kind.X

    def __str__(self) -> str:
        letter = "x" if self.kind == Kind.X else "y"
        if self.coord:
            return f"{letter}{self.block}_{self.coord}"
        return f"{letter}{self.block}"


# Variables are packed into one int so that monomials are tuples of ints.
# Integer order on codes equals tuple order on (block, coord, kind).
_COORD_BITS = 12
_MAX_COORD = 1 << _COORD_BITS


def _encode(v: VarId) -> int:
    block, coord, kind = v
    if block < 0 or not 0 <= coord < _MAX_COORD:
        raise ValueError(f"variable index out of range: {v!r}")
    return (block << (_COORD_BITS + 1)) | (coord << 1) | int(kind)


def _decode(code: int) -> VarId:
    return VarId(code >> (_COORD_BITS + 1), (code >> 1) & (_MAX_COORD - 1), Kind(code & 1))


def _block_of(code: int) -> int:
    return code >> (_COORD_BITS + 1)


Number = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[int, int], ...] sorted by variable code


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: exact paths must never see rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _norm(c: Number) -> Number:
    # ints are kept as ints: they are Rationals and much faster than Fractions
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    da = dict(a)
    for v, e in b:
        r = da.get(v, 0) - e
        if r < 0:
            return None
        if r:
            da[v] = r
        else:
            del da[v]
    return tuple(sorted(da.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Build polynomials from :func:`x`, :func:`y` and :meth:`Poly.const`
    with the usual operators::

        >>> p = (x(1) - x(0)) * (x(1) + x(0))
        >>> str(p)
        '-x0^2 + x1^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean: dict = {}
        if terms:
            for mono, coef in terms.items():
                key = self._canon_monomial(mono)
                c = to_fraction(coef) if not isinstance(coef, int) else coef
                c = _norm(clean.get(key, 0) + c)
                if c:
                    clean[key] = c
                else:
                    clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @staticmethod
    def _canon_monomial(mono) -> Monomial:
        if isinstance(mono, Mapping):
            items = mono.items()
        else:
            items = mono
        acc: dict[int, int] = {}
        for v, e in items:
            code = v if isinstance(v, int) and not isinstance(v, tuple) else _encode(VarId(*v))
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                acc[code] = acc.get(code, 0) + e
        return tuple(sorted(acc.items()))

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = _norm(to_fraction(c))
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: VarId) -> "Poly":
        return cls._raw({((_encode(v), 1),): 1})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, var: VarId) -> "Poly":
        """Univariate polynomial ``sum(coeffs[k] * var**k)``."""
        code = _encode(var)
        terms = {}
        for k, c in enumerate(coeffs):
            c = _norm(to_fraction(c))
            if c:
                terms[((code, k),) if k else ()] = c
        return cls._raw(terms)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial; raises if not constant."""
        if not self.is_constant():
            raise ValueError(f"polynomial is not constant: {self}")
        return Fraction(self._terms.get((), 0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterator[tuple[dict[VarId, int], Fraction]]:
        """Terms as ``({VarId: exponent}, coefficient)`` in canonical order."""
        for mono in sorted(self._terms, key=_graded_key):
            yield {_decode(v): e for v, e in mono}, Fraction(self._terms[mono])

    def coefficient(self, mono: Mapping[VarId, int]) -> Fraction:
        return Fraction(self._terms.get(self._canon_monomial(mono), 0))

    def variables(self) -> list[VarId]:
        codes = {v for mono in self._terms for v, _ in mono}
        return [_decode(c) for c in sorted(codes)]

    def blocks(self) -> list[int]:
        return sorted({_block_of(v) for mono in self._terms for v, _ in mono})

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(_mono_degree(m) for m in self._terms)

    def degree_in(self, v: VarId) -> int:
        code = _encode(v)
        if not self._terms:
            return -1
        return max((e for mono in self._terms for c, e in mono if c == code), default=0)

    def is_homogeneous(self) -> bool:
        return len({_mono_degree(m) for m in self._terms}) <= 1

    def univariate_coeffs(self, v: VarId) -> list[Fraction]:
        """Coefficient list ``[c0, c1, ...]`` of a polynomial in ``v`` only."""
        code = _encode(v)
        out: dict[int, Number] = {}
        for mono, c in self._terms.items():
            if any(w != code for w, _ in mono):
                raise ValueError(f"polynomial is not univariate in {v}")
            out[mono[0][1] if mono else 0] = c
        if not out:
            return []
        return [Fraction(out.get(k, 0)) for k in range(max(out) + 1)]

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = _norm(out.get(m, 0) + c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                c = _norm(to_fraction(other))
            except TypeError:
                return NotImplemented
            return self.scale(c)
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw({})
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                out[m] = get(m, 0) + ca * cb
        return Poly._raw({m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _norm(to_fraction(c))
        if not c:
            return Poly._raw({})
        return Poly._raw({m: _norm(v * c) for m, v in self._terms.items()})

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return self.exact_div(other)
        c = to_fraction(other)
        if c == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(1 / c)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, divisor: "Poly") -> "Poly":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise.

        Multivariate division with respect to the lexicographic order on
        the variables of both operands.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        codes = sorted({v for t in (self._terms, divisor._terms) for m in t for v, _ in m})
        index = {c: i for i, c in enumerate(codes)}

        def lex(m):
            vec = [0] * len(codes)
            for v, e in m:
                vec[index[v]] = e
            return tuple(vec)

        lead_d = max(divisor._terms, key=lex)
        lead_c = divisor._terms[lead_d]
        rem = dict(self._terms)
        quot: dict = {}
        while rem:
            lead_r = max(rem, key=lex)
            q_mono = _mono_div(lead_r, lead_d)
            if q_mono is None:
                raise ArithmeticError("division is not exact")
            q_coef = _norm(Fraction(rem[lead_r]) / lead_c)
            quot[q_mono] = q_coef
            for m, c in divisor._terms.items():
                mm = _mono_mul(m, q_mono)
                v = _norm(rem.get(mm, 0) - c * q_coef)
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Poly._raw(quot)

    # -- comparison -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        try:
            return self._terms == Poly.const(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution and evaluation -------------------------------------

    def map_monomials(self, fn) -> "Poly":
        """Rebuild the polynomial term by term.

        ``fn(monomial_dict)`` returns a ``(factor, new_monomial_dict)`` pair;
        coefficients are multiplied by ``factor``.  Used to implement
        moment substitutions.
        """
        out: dict = {}
        for mono, c in self._terms.items():
            factor, new = fn({_decode(v): e for v, e in mono})
            if not factor:
                continue
            key = self._canon_monomial(new)
            out[key] = out.get(key, 0) + c * factor
        return Poly._raw({m: _norm(v) for m, v in out.items() if v})

    def subs(self, mapping: Mapping[VarId, object]) -> "Poly":
        """Simultaneously substitute polynomials or rationals for variables."""
        repl = {_encode(v): Poly._coerce(p) for v, p in mapping.items()}
        powers: dict = {}

        def power(code, e):
            key = (code, e)
            if key not in powers:
                powers[key] = repl[code] ** e
            return powers[key]

        result = Poly._raw({})
        for mono, c in self._terms.items():
            kept = []
            term = Poly._raw({(): c})
            for code, e in mono:
                if code in repl:
                    term = term * power(code, e)
                else:
                    kept.append((code, e))
            if kept:
                term = term * Poly._raw({tuple(kept): 1})
            result = result + term
        return result

    def evaluate(self, point: Mapping[VarId, object]):
        """Evaluate at a point given for every variable of the polynomial.

        Exact when all values are rational; floats are accepted too and
        give a float.
        """
        values = {_encode(v): val for v, val in point.items()}
        total = 0
        for mono, c in self._terms.items():
            t = c
            for code, e in mono:
                try:
                    t = t * values[code] ** e
                except KeyError:
                    raise KeyError(f"no value for {_decode(code)}") from None
            total = total + t
        return total

    # -- display ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_graded_key):
            c = Fraction(self._terms[mono])
            factors = []
            for code, e in mono:
                name = str(_decode(code))
                factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


def _graded_key(mono: Monomial):
    return (_mono_degree(mono), mono)


def x(block: int, coord: int = 0) -> Poly:
    return Poly.var(VarId(block, coord, Kind.X))


def y(block: int, coord: int = 0) -> Poly:
    return Poly.var(VarId(block, coord, Kind.Y))


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def vandermonde(items: Sequence) -> Poly:
    """``prod_{i<j} (items[j] - items[i])``; later minus earlier.

    Items are :class:`VarId` or polynomials.  Repeated variables are an
    error, since the product would silently vanish.
    """
    ids = [v for v in items if isinstance(v, VarId)]
    if len(set(ids)) != len(ids):
        raise ValueError("vandermonde of repeated variables")
    polys = [Poly.var(v) if isinstance(v, VarId) else Poly._coerce(v) for v in items]
    result = Poly.const(1)
    for j in range(len(polys)):
        for i in range(j):
            result = result * (polys[j] - polys[i])
    return result


class PolyMatrix:
    """Rectangular matrix of polynomials, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: Iterable[Iterable]):
        data = [tuple(Poly._coerce(e) for e in row) for row in rows]
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged matrix")
        self.rows = len(data)
        self.cols = width
        self.entries = tuple(data)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]


def _as_rows(m) -> list[list[Poly]]:
    if not isinstance(m, PolyMatrix):
        m = PolyMatrix(m)
    if m.rows != m.cols:
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    return [list(r) for r in m.entries]


def det_cofactor(m) -> Poly:
    """Determinant by Laplace expansion along the first row."""
    return _cofactor(_as_rows(m))


def _cofactor(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Poly._raw({})
    for j, entry in enumerate(rows[0]):
        if entry.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = entry * _cofactor(minor)
        total = total - term if j % 2 else total + term
    return total


def _pivot_cost(p: Poly) -> tuple:
    return (not p.is_constant(), len(p), p.total_degree())


def det_bareiss(m) -> Poly:
    """Fraction-free elimination; every division is exact in the ring."""
    a = _as_rows(m)
    n = len(a)
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        candidates = [i for i in range(k, n) if not a[i][k].is_zero()]
        if not candidates:
            return Poly._raw({})
        # constant pivots keep every division a rescaling
        piv = min(candidates, key=lambda i: _pivot_cost(a[i][k]))
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = pk * a[i][j]
                if not aik.is_zero() and not a[k][j].is_zero():
                    num = num - aik * a[k][j]
                a[i][j] = num.exact_div(prev)
            a[i][k] = Poly._raw({})
        prev = pk
    result = a[n - 1][n - 1]
    return -result if sign < 0 else result


def det(m) -> Poly:
    """Exact determinant of a square polynomial matrix.

    Cofactor expansion up to 4x4, fraction-free elimination above; both
    routes give identical results.
    """
    rows = _as_rows(m)
    if len(rows) <= 4:
        return _cofactor(rows)
    return det_bareiss(rows)


def dehomogenize(p: Poly) -> Poly:
    """Set every ``Y``-kind variable to 1."""
    out: dict = {}
    for mono, c in p._terms.items():
        kept = tuple((v, e) for v, e in mono if not v & 1)
        out[kept] = out.get(kept, 0) + c
    return Poly._raw({m: _norm(c) for m, c in out.items() if c})


def rank(matrix: Sequence[Sequence]) -> int:
    """Rank over the rationals by Gaussian elimination."""
    rows = [[to_fraction(v) for v in r] for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def det_rational(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix by Gaussian elimination."""
    rows = [[to_fraction(v) for v in r] for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        pc = rows[c][c]
        result *= pc
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / pc
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return result


def det_top_row(top: Sequence, rows: Sequence[Sequence]) -> Poly:
    """Determinant with a polynomial first row and rational remaining rows.

    Expands along the first row; each cofactor is a rational determinant.
    """
    n = len(top)
    if len(rows) != n - 1 or any(len(r) != n for r in rows):
        raise ValueError("need n-1 rational rows of length n below a length-n top row")
    total = Poly.const(0)
    for j, entry in enumerate(top):
        minor = [[r[c] for c in range(n) if c != j] for r in rows]
        cof = det_rational(minor) if minor else Fraction(1)
        if cof:
            total = total + Poly._coerce(entry).scale(cof if j % 2 == 0 else -cof)
    return total


# -- serialization --------------------------------------------------------


def rational_to_str(q) -> str:
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def poly_to_json(p: Poly) -> list[dict]:
    """``[{"exp": [[block, coord, kind, power], ...], "coef": "p/q"}, ...]``."""
    out = []
    for mono, coef in p.items():
        exp = [[v.block, v.coord, v.kind.name, e] for v, e in mono.items()]
        out.append({"exp": exp, "coef": rational_to_str(coef)})
    return out


def poly_from_json(data: Iterable[Mapping]) -> Poly:
    terms: dict = {}
    for entry in data:
        mono = []
        for block, coord, kind, power in entry["exp"]:
            k = Kind[kind] if isinstance(kind, str) else Kind(kind)
            mono.append((VarId(int(block), int(coord), k), int(power)))
        key = Poly._canon_monomial(mono)
        terms[key] = terms.get(key, 0) + parse_rational(str(entry["coef"]))
    return Poly(terms)


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permutations_with_sign(n: int):
    for perm in itertools.permutations(range(n)):
        yield perm, permutation_sign(perm)
