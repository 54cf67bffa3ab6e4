"""Moment functionals acting on polynomials.

A :class:`MomentFunctional` assigns every block ``x_i`` to a class ``j`` and
replaces ``x_i^k`` by the moment ``a_{jk}``, multiplicatively across
distinct blocks.  Class 0 (the block ``x_0``) always shares its moments
with class 1.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .ring import Kind, Poly, _block_of, _decode, _norm, rational_to_str, to_fraction

__all__ = [
    "BUILTIN_NAMES",
    "MissingMomentError",
    "MomentTable",
    "MomentTableSpec",
    "MomentFunctional",
    "builtin_moments",
    "builtin_table",
    "product_table",
    "apply_E",
    "apply_E0",
    "apply_E_tilde",
    "complete_homogeneous",
    "load_moments",
    "moments_from_json",
    "moments_to_json",
]

BUILTIN_NAMES = ("hermite", "uniform_pm1", "laguerre", "chebyshev1")


class MissingMomentError(KeyError):
    """A moment was requested that the table does not provide."""

    def __init__(self, cls: int, order):
        self.cls = cls
        self.order = order
        super().__init__(f"missing moment of order {order} for class {cls}")

    def __str__(self) -> str:
        return self.args[0]


def _hermite(k: int, cache: list) -> Fraction:
    while len(cache) <= k:
        i = len(cache)
        cache.append(Fraction(1) if i == 0 else Fraction(0) if i == 1 else (i - 1) * cache[i - 2])
    return cache[k]


def _builtin_value(name: str, k: int, cache: list) -> Fraction:
    if name == "hermite":
        return _hermite(k, cache)
    if name == "uniform_pm1":
        return Fraction(2, k + 1) if k % 2 == 0 else Fraction(0)
    if name == "laguerre":
        return Fraction(math.factorial(k))
    if name == "chebyshev1":
        if k % 2:
            return Fraction(0)
        h = k // 2
        return Fraction(math.comb(2 * h, h), 4**h)
    raise ValueError(f"unknown builtin moment table {name!r}; choose from {BUILTIN_NAMES}")


class MomentTable:
    """Moments ``a_k`` of one class, indexed by ``k`` (or a multi-index).

    ``source`` is a finite sequence (``d == 0``), a mapping from
    multi-indices to values, or a callable producing any requested moment.
    Values are exact rationals.
    """

    def __init__(self, source, *, d: int = 0, name: str = "custom"):
        self.d = d
        self.name = name
        self._fn: Callable | None = None
        self._values: dict = {}
        if callable(source):
            self._fn = source
        elif isinstance(source, Mapping):
            for key, val in source.items():
                self._values[self._key(key)] = to_fraction(val)
        else:
            if d != 0:
                raise ValueError("sequence moment tables are univariate (d = 0)")
            for k, val in enumerate(source):
                self._values[(k,)] = to_fraction(val)
        self._cache: dict = {}

    def _key(self, k) -> tuple:
        if isinstance(k, int):
            k = (k,)
        elif isinstance(k, str):
            k = tuple(int(p) for p in k.split(","))
        k = tuple(int(v) for v in k)
        if len(k) != self.d + 1 or any(v < 0 for v in k):
            raise ValueError(f"bad moment index {k} for d = {self.d}")
        return k

    def get(self, k, cls: int = 1) -> Fraction:
        key = self._key(k)
        if key in self._values:
            return self._values[key]
        if self._fn is not None:
            if key not in self._cache:
                self._cache[key] = to_fraction(self._fn(key))
            return self._cache[key]
        raise MissingMomentError(cls, key if self.d else key[0])

    def __getitem__(self, k) -> Fraction:
        return self.get(k)

    def sequence(self, up_to: int) -> list[Fraction]:
        """``[a_0, ..., a_up_to]`` for a univariate table."""
        if self.d != 0:
            raise ValueError("sequence() needs a univariate table")
        return [self.get(k) for k in range(up_to + 1)]

    def is_finite(self) -> bool:
        return self._fn is None

    def known_indices(self) -> list[tuple]:
        return sorted(self._values)

    def __repr__(self) -> str:
        return f"MomentTable({self.name!r}, d={self.d})"


@dataclass(frozen=True)
class MomentTableSpec:
    name: str
    custom_moments: tuple | None = None


def builtin_table(name: str) -> MomentTable:
    cache: list = []
    _builtin_value(name, 0, cache)  # validates the name
    return MomentTable(lambda k: _builtin_value(name, k[0], cache), name=name)


def builtin_moments(spec: MomentTableSpec | str, up_to: int) -> list[Fraction]:
    """Exact moments ``a_0 .. a_up_to`` of a builtin or custom table.

    hermite: Gaussian density; uniform_pm1: Lebesgue measure on [-1, 1];
    laguerre: exp(-t) on [0, inf); chebyshev1: the arcsine law on [-1, 1].
    """
    if up_to < 0:
        raise ValueError("up_to must be non-negative")
    if isinstance(spec, str):
        spec = MomentTableSpec(spec)
    if spec.name == "custom":
        values = [to_fraction(v) for v in spec.custom_moments or ()]
        if len(values) <= up_to:
            raise MissingMomentError(1, len(values))
        return values[: up_to + 1]
    table = builtin_table(spec.name)
    return table.sequence(up_to)


def product_table(*factors: MomentTable | str) -> MomentTable:
    """Multivariate table with ``a_k = a_{k_0} a_{k_1} ... a_{k_d}``."""
    tables = [builtin_table(f) if isinstance(f, str) else f for f in factors]
    if not tables or any(t.d != 0 for t in tables):
        raise ValueError("product_table needs univariate factors")
    name = "x".join(t.name for t in tables)

    def value(k):
        out = Fraction(1)
        for t, ki in zip(tables, k):
            out *= t.get(ki)
        return out

    return MomentTable(value, d=len(tables) - 1, name=name)


@dataclass(frozen=True)
class MomentFunctional:
    """The functional E: moment tables per class and a block-to-class map.

    Blocks absent from ``class_of`` belong to class 1.  Block 0 is always
    in class 0, whose moments are those of class 1.
    """

    tables: Mapping[int, MomentTable]
    class_of: Mapping[int, int] = field(default_factory=dict)
    d: int = 0

    def __post_init__(self):
        tables = dict(self.tables)
        if 1 not in tables:
            raise ValueError("class 1 moments are required")
        if 0 in tables and tables[0] is not tables[1]:
            raise ValueError("class 0 shares the moments of class 1; do not pass it separately")
        tables.pop(0, None)
        for j, t in tables.items():
            if t.d != self.d:
                raise ValueError(f"class {j} table has d = {t.d}, functional has d = {self.d}")
        class_of = dict(self.class_of)
        if class_of.get(0, 0) != 0:
            raise ValueError("block 0 always belongs to class 0")
        class_of.pop(0, None)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "class_of", class_of)
        if tables[1].get((0,) * (self.d + 1)) == 0:
            raise ValueError("E 1 must be non-zero")

    @classmethod
    def from_builtin(cls, name: str, aux: Mapping[int, MomentTable | str] | None = None) -> "MomentFunctional":
        tables = {1: builtin_table(name)}
        for j, t in (aux or {}).items():
            tables[j] = builtin_table(t) if isinstance(t, str) else t
        return cls(tables)

    @classmethod
    def from_sequence(cls, moments: Sequence, aux: Mapping[int, Sequence] | None = None) -> "MomentFunctional":
        tables = {1: MomentTable(moments)}
        for j, seq in (aux or {}).items():
            tables[j] = seq if isinstance(seq, MomentTable) else MomentTable(seq)
        return cls(tables)

    def class_for(self, block: int) -> int:
        if block == 0:
            return 0
        return self.class_of.get(block, 1)

    def table(self, cls: int) -> MomentTable:
        try:
            return self.tables[1 if cls == 0 else cls]
        except KeyError:
            raise MissingMomentError(cls, "any") from None

    def moment(self, cls: int, k) -> Fraction:
        return self.table(cls).get(k, cls)

    def with_classes(self, class_of: Mapping[int, int]) -> "MomentFunctional":
        """Copy with some blocks reassigned to other classes."""
        merged = dict(self.class_of)
        merged.update(class_of)
        return MomentFunctional(self.tables, merged, self.d)

    def with_tables(self, tables: Mapping[int, MomentTable]) -> "MomentFunctional":
        merged = dict(self.tables)
        merged.update(tables)
        return MomentFunctional(merged, self.class_of, self.d)


def _split_blocks(mono: tuple) -> dict[int, list]:
    out: dict[int, list] = {}
    for code, e in mono:
        out.setdefault(_block_of(code), []).append((code, e))
    return out


def _block_moment(M: MomentFunctional, block: int, entries: list):
    k = [0] * (M.d + 1)
    for code, e in entries:
        v = _decode(code)
        if v.kind == Kind.Y:
            raise ValueError(f"E does not act on y-variables (found {v})")
        if v.coord > M.d:
            raise ValueError(f"coordinate {v.coord} exceeds d = {M.d}")
        k[v.coord] = e
    cls = M.class_for(block)
    return M.moment(cls, tuple(k))


def _apply(M: MomentFunctional, p: Poly, fixed: frozenset, blocks: Iterable[int] | None) -> Poly:
    universe = set(p.blocks()) if blocks is None else set(blocks)
    universe -= fixed
    zero = (0,) * (M.d + 1)
    # a block of the universe missing from a monomial contributes x_b^0 -> a_{c,0}
    base = {b: M.moment(M.class_for(b), zero) for b in universe}
    trivial = all(v == 1 for v in base.values())
    out: dict = {}
    cache: dict = {}
    for mono, c in p._terms.items():
        coef = c
        kept = []
        seen = set()
        for block, entries in _split_blocks(mono).items():
            if block in fixed:
                kept.extend(entries)
                continue
            if block not in universe:
                raise ValueError(f"block {block} is outside the declared block set")
            seen.add(block)
            key = (block, tuple(entries))
            if key not in cache:
                cache[key] = _block_moment(M, block, entries)
            coef = coef * cache[key]
            if not coef:
                break
        if not coef:
            continue
        if not trivial:
            for b in universe - seen:
                coef = coef * base[b]
        kept_t = tuple(kept)
        out[kept_t] = out.get(kept_t, 0) + coef
    return Poly._raw({m: _norm(v) for m, v in out.items() if v})


def apply_E(M: MomentFunctional, p: Poly, blocks: Iterable[int] | None = None) -> Fraction:
    """E p: every monomial maps to a product of per-block moments.

    E is the tensor product of the per-block functionals over a block set,
    by default the blocks occurring in ``p``.  A block of that set absent
    from a monomial contributes its zeroth moment, so ``E 1 = a_0`` for a
    one-block set and multiplicativity holds even when ``a_0 != 1``.
    """
    if 0 in p.blocks():
        raise ValueError("polynomial involves block 0; use apply_E0")
    return _apply(M, p, frozenset(), blocks).constant_value()


def apply_E0(
    M: MomentFunctional,
    p: Poly,
    fixed_blocks: Iterable[int] = (0,),
    blocks: Iterable[int] | None = None,
) -> Poly:
    """E_0 p: fixes the block-0 variables and applies E to all other blocks.

    ``fixed_blocks`` widens the set of untouched blocks, which lets a
    caller keep symbolic placeholders alongside ``x_0``.  ``blocks`` is
    the block set E acts on (see :func:`apply_E`).
    """
    return _apply(M, p, frozenset(fixed_blocks), blocks)


def complete_homogeneous(k: int, values: Sequence):
    """h_k(values), the sum of all degree-k monomials in ``values``."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    if not values:
        raise ValueError("h_k of an empty set of roots with k > 0")
    # h_k(z_1..z_j) = h_k(z_1..z_{j-1}) + z_j h_{k-1}(z_1..z_j)
    h = [1] + [0] * k
    for z in values:
        for i in range(1, k + 1):
            h[i] = h[i] + z * h[i - 1]
    return h[k]


def apply_E_tilde(roots: Sequence, p: Poly):
    """Replace each power ``x_i^k`` by ``h_k(roots)``, blockwise.

    Exact for rational roots; float roots give a float.
    """
    if 0 in p.blocks():
        raise ValueError("E-tilde does not act on block 0")
    roots = list(roots)
    cache: dict = {}
    total = 0
    for mono, c in p._terms.items():
        t = c
        for code, e in mono:
            if code & 1:
                raise ValueError("E-tilde does not act on y-variables")
            if e not in cache:
                cache[e] = complete_homogeneous(e, roots)
            t = t * cache[e]
        total = total + t
    return total


# -- JSON moment files ------------------------------------------------------


def _table_from_json(spec: Mapping, d: int) -> MomentTable:
    if "builtin" in spec:
        name = spec["builtin"]
        if d == 0:
            return builtin_table(name)
        return product_table(*([name] * (d + 1)))
    if "product" in spec:
        t = product_table(*spec["product"])
        if t.d != d:
            raise ValueError(f"product of {len(spec['product'])} tables does not match d = {d}")
        return t
    if "moments" in spec:
        moments = spec["moments"]
        if isinstance(moments, Mapping):
            return MomentTable({k: v for k, v in moments.items()}, d=d)
        if d != 0:
            raise ValueError("multivariate moments must be keyed by 'k0,k1,...'")
        return MomentTable([str(v) for v in moments])
    raise ValueError(f"class spec needs 'builtin', 'product' or 'moments': {spec}")


def moments_from_json(data: Mapping) -> MomentFunctional:
    """Build a functional from the JSON moment-file layout.

    ``{"d": 0, "classes": {"1": {"builtin": "hermite"}, "2": {"moments": ["1", "0", ...]}}}``;
    multivariate custom moments are keyed by comma-joined multi-indices.
    """
    d = int(data.get("d", 0))
    classes = data.get("classes")
    if not classes:
        raise ValueError("moment file has no classes")
    tables = {int(j): _table_from_json(spec, d) for j, spec in classes.items()}
    class_of = {int(b): int(c) for b, c in data.get("class_of", {}).items()}
    return MomentFunctional(tables, class_of, d)


def load_moments(source: str | Path) -> MomentFunctional:
    """A builtin name (``hermite``), or a path to a JSON moment file."""
    text = str(source)
    if text in BUILTIN_NAMES:
        return MomentFunctional.from_builtin(text)
    with open(source, encoding="utf-8") as fh:
        return moments_from_json(json.load(fh))


def moments_to_json(M: MomentFunctional, up_to: int) -> dict:
    """Serialize the tables with explicit moments through ``up_to``.

    Multivariate tables are written over the box ``k <= (up_to, ..., up_to)``.
    """
    import itertools

    classes = {}
    for j, t in sorted(M.tables.items()):
        if M.d == 0:
            classes[str(j)] = {"moments": [rational_to_str(t.get(k, j)) for k in range(up_to + 1)]}
        else:
            entries = {}
            for k in itertools.product(range(up_to + 1), repeat=M.d + 1):
                entries[",".join(map(str, k))] = rational_to_str(t.get(k, j))
            classes[str(j)] = {"moments": entries}
    out = {"d": M.d, "classes": classes}
    if M.class_of:
        out["class_of"] = {str(b): c for b, c in sorted(M.class_of.items())}
    return out
