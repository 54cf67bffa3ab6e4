import itertools
import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from apolar.covariants import BinaryForm, apolar_pairing
from apolar.multivar import (
    MultiForm,
    _box,
    _monomial_det,
    box_enumerate,
    multi_apolar_pairing,
    multi_apolar_space_dim,
    multi_gops_det,
    multi_gops_symbolic,
    multi_ops_full,
    multi_orthogonality,
    multiform_from_moments,
    multiform_from_poly,
    rank_of,
)
from apolar.ops import DegenerateAuxWarning, gops_det, gops_symbolic
from apolar.ring import Poly, VarId, x
from apolar.selfcheck import aux_fixture
from apolar.umbral import MomentFunctional, apply_E0, product_table


def product_fixture():
    """hermite x hermite in class 1, laguerre-based tables for the auxiliary rows."""
    return MomentFunctional(
        {
            1: product_table("hermite", "hermite"),
            2: product_table("laguerre", "laguerre"),
            3: product_table("laguerre", "chebyshev1"),
            4: product_table("chebyshev1", "laguerre"),
        },
        d=1,
    )


def sub(n, m):
    return tuple(a - b for a, b in zip(n, m))


def test_box_is_graded():
    assert list(box_enumerate((1, 1))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    b = box_enumerate((2, 1))
    assert b.s == 6 and b[0] == (0, 0) and b[-1] == (2, 1)
    assert [rank_of(k) for k in b] == sorted(rank_of(k) for k in b)


def test_d0_degeneration():
    M = aux_fixture("hermite")
    M0 = MomentFunctional(M.tables, d=0)
    for n in range(1, 5):
        for m in range(1, n + 1):
            assert multi_gops_det(M0, (n,), (m,)).poly == gops_det(M, n, m).poly
            assert multi_gops_symbolic(M0, (n,), (m,)).poly == gops_symbolic(M, n, m).poly
        assert multi_ops_full(M0, (n,)).poly == gops_det(M, n, 1).poly


def test_full_system_values():
    M = product_fixture()
    assert multi_ops_full(M, (1, 1)).poly == x(0) * x(0, 1) * -1
    assert multi_ops_full(M, (2, 0)).poly == x(0) ** 2 - 1
    assert multi_ops_full(M, (1, 1), path="sym").poly == x(0) * x(0, 1) * -6


@pytest.mark.parametrize("n", [n for n in itertools.product(range(4), repeat=2) if 0 < sum(n) <= 3])
def test_full_system_symbolic_scaling(n):
    M = product_fixture()
    s = len(_box(n)) - 1
    det = multi_ops_full(M, n).poly
    assert multi_ops_full(M, n, path="sym").poly == det * math.factorial(s)


@pytest.mark.parametrize("second", ["hermite", "uniform_pm1", "laguerre"])
def test_full_system_factorizes(second):
    M = MomentFunctional({1: product_table("hermite", second)}, d=1)
    M1 = MomentFunctional.from_builtin("hermite")
    M2 = MomentFunctional.from_builtin(second)
    for n in itertools.product(range(5), repeat=2):
        if sum(n) > 4:
            continue
        p = multi_ops_full(M, n).poly
        p0 = gops_det(M1, n[0], 1).poly if n[0] else Poly.const(1)
        p1 = gops_det(M2, n[1], 1).poly if n[1] else Poly.const(1)
        prod = p0 * p1.subs({VarId(0): x(0, 1)})
        key = {VarId(0, c): e for c, e in enumerate(n) if e}
        assert p == prod.scale(p.coefficient(key) / prod.coefficient(key))
        lower = [k for k in box_enumerate(n) if k != n]
        assert all(v == 0 for v in multi_orthogonality(M, p, lower).values())


GEN_PAIRS = [
    ((1, 1), (1, 0)),
    ((1, 1), (0, 1)),
    ((1, 1), (1, 1)),
    ((2, 1), (1, 0)),
    ((2, 1), (1, 1)),
    ((2, 1), (2, 1)),
]


@pytest.mark.parametrize("n, m", GEN_PAIRS)
def test_generalized_system(n, m):
    M = product_fixture()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateAuxWarning)
        d = multi_gops_det(M, n, m)
        s = multi_gops_symbolic(M, n, m)
    r = len(_box(sub(n, m))) - 1
    assert s.poly == d.poly * math.factorial(r + 1)
    orth = multi_orthogonality(M, d.poly, box_enumerate(sub(n, m)))
    assert all(v == 0 for v in orth.values())


@pytest.mark.parametrize("m", [(1, 1), (2, 1), (1, 2)])
def test_generalized_system_larger_box(m):
    # the symbolic side is a 9-block Leibniz sum here, so only the determinant is checked
    M = product_fixture()
    n = (2, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateAuxWarning)
        d = multi_gops_det(M, n, m)
    orth = multi_orthogonality(M, d.poly, box_enumerate(sub(n, m)))
    assert all(v == 0 for v in orth.values())


def test_generalized_system_nondegenerate_with_distinct_aux():
    M = product_fixture()
    e = multi_gops_det(M, (1, 1), (1, 1))
    assert not e.degenerate and e.leading != 0


def test_explicit_aux_rows():
    M = product_fixture()
    e = multi_gops_det(M, (1, 1), (1, 0), aux_rows=[[0, 1, 0, 2]])
    assert e.aux == ("row 0",) and not e.degenerate
    assert multi_orthogonality(M, e.poly, [(0, 0), (0, 1)]) == {(0, 0): 0, (0, 1): 0}
    with pytest.raises(ValueError):
        multi_gops_det(M, (1, 1), (1, 0), aux_rows=[[1, 2, 3, 4], [0, 1, 0, 2]])
    with pytest.raises(ValueError):
        multi_gops_det(M, (1, 1), (1, 0), aux_rows=[[1, 2, 3]])


def test_literal_starred_vandermonde_fails_orthogonality():
    # r blocks with columns h_1..h_r, the remaining blocks in auxiliary classes
    M = product_fixture()
    n, m = (1, 1), (1, 0)
    cols, hs = _box(n), _box(sub(n, m))
    s, r = len(cols) - 1, len(hs) - 1
    class_of = {b: 1 for b in range(1, r + 1)}
    class_of.update({b: 2 + t for t, b in enumerate(range(r + 1, s + 1))})
    Mc = MomentFunctional(M.tables, class_of, 1)
    literal = apply_E0(
        Mc,
        _monomial_det(tuple(range(1, r + 1)), hs[1:]) * _monomial_det(tuple(range(s + 1)), cols),
        blocks=range(1, s + 1),
    )
    assert multi_orthogonality(M, literal, [(0, 0)])[(0, 0)] != 0
    fixed = multi_gops_symbolic(M, n, m).poly
    assert multi_orthogonality(M, fixed, [(0, 0)])[(0, 0)] == 0


def test_wrong_dimensions_rejected():
    M = product_fixture()
    with pytest.raises(ValueError):
        multi_gops_det(M, (1, 1, 1), (1, 0, 0))
    with pytest.raises(ValueError):
        multi_gops_det(M, (1, 1), (2, 0))
    with pytest.raises(ValueError):
        multi_gops_det(M, (1, 1), (0, 0))


def test_multiform_round_trip():
    f = MultiForm((1, 2), {k: Fraction(i + 1, 2) for i, k in enumerate(box_enumerate((1, 2)))})
    assert multiform_from_poly(f.to_poly(), (1, 2)) == f


def test_d0_pairing_matches_binary():
    f = BinaryForm((1, 2, -1, 3))
    g = BinaryForm((2, 0, 1))
    fm = MultiForm((3,), {(k,): c for k, c in enumerate(f.coeffs)})
    gm = MultiForm((2,), {(k,): c for k, c in enumerate(g.coeffs)})
    assert multi_apolar_pairing(fm, gm) == apolar_pairing(f, g)


def _s(n):
    return len(box_enumerate(n))


md = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any)


@given(md.flatmap(lambda n: st.tuples(st.just(n), st.tuples(*(st.integers(0, c) for c in n)).filter(any))),
       st.integers(0, 10**6))
def test_apolar_dimension(nm, seed):
    import random

    n, m = nm
    rng = random.Random(seed)
    f = MultiForm(n, {k: Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for k in box_enumerate(n)})
    got = multi_apolar_space_dim(f, m)
    assert got >= max(0, _s(m) - _s(sub(n, m)))
    assert got <= _s(m)


def test_apolar_dimension_for_moment_form():
    M = MomentFunctional({1: product_table("laguerre", "laguerre")}, d=1)
    f = multiform_from_moments(M, 1, (2, 2))
    assert multi_apolar_space_dim(f, (2, 1)) == _s((2, 1)) - _s((0, 1))


def test_pairwise_orthogonality_of_full_system():
    from apolar.multivar import multi_expectation

    M = MomentFunctional({1: product_table("laguerre", "hermite")}, d=1)
    degrees = [n for n in itertools.product(range(3), repeat=2)]
    polys = {n: multi_ops_full(M, n).poly for n in degrees}
    incomparable = {}
    for a, b in itertools.combinations(degrees, 2):
        value = multi_expectation(M, polys[a] * polys[b])
        comparable = all(i <= j for i, j in zip(a, b)) or all(i >= j for i, j in zip(a, b))
        if comparable:
            assert value == 0, (a, b)
        else:
            incomparable[(a, b)] = value
    # reported only: for a product functional these happen to vanish as well
    print({k: str(v) for k, v in incomparable.items()})
