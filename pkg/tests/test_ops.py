import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from apolar.ops import (
    DegenerateAuxWarning,
    X0,
    check_orthogonality,
    gops_det,
    gops_symbolic,
    gops_table,
    leading_coefficient,
)
from apolar.ring import x
from apolar.selfcheck import aux_fixture, random_moment_fixture
from apolar.umbral import MomentFunctional


def test_hermite_values(hermite):
    assert gops_det(hermite, 2, 1).poly == x(0) ** 2 - 1
    assert gops_det(hermite, 3, 1).poly == x(0) * 6 - x(0) ** 3 * 2
    assert gops_det(hermite, 3, 1, monic=True).poly == x(0) ** 3 - x(0) * 3


def test_uniform_value(uniform):
    assert gops_det(uniform, 2, 1).poly == x(0) ** 2 * Fraction(4, 3) - Fraction(4, 9)


def test_leading_coefficient_sign(hermite):
    assert leading_coefficient(hermite, 2, 1) == 2
    assert leading_coefficient(hermite, 3, 1) == 12
    for n in range(1, 6):
        sym = gops_symbolic(hermite, n, 1)
        assert sym.poly.coefficient({X0: n}) == (-1) ** n * leading_coefficient(hermite, n, 1)


@pytest.mark.parametrize("name", ["hermite", "uniform_pm1", "laguerre", "chebyshev1"])
def test_scaling_law(name):
    M = aux_fixture(name)
    for n in range(1, 6):
        for m in range(1, n + 1):
            d = gops_det(M, n, m).poly
            assert not d.is_zero()
            assert gops_symbolic(M, n, m).poly == d * math.factorial(n - m + 1)


@given(st.integers(0, 10**6), st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_scaling_law_random_tables(seed, nm):
    n, m = nm
    M = random_moment_fixture(seed)
    d = gops_det(M, n, m).poly
    assert gops_symbolic(M, n, m).poly == d * math.factorial(n - m + 1)


@given(st.integers(0, 10**6), st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_orthogonality_random_tables(seed, nm):
    n, m = nm
    M = random_moment_fixture(seed)
    e = gops_det(M, n, m)
    assert check_orthogonality(M, e).orthogonal


@pytest.mark.parametrize("name", ["hermite", "uniform_pm1", "laguerre", "chebyshev1"])
def test_classical_system_is_pairwise_orthogonal(name):
    M = MomentFunctional.from_builtin(name)
    entries = [gops_det(M, n, 1) for n in range(1, 7)]
    for i, e in enumerate(entries):
        rep = check_orthogonality(M, e, entries[:i])
        assert rep.orthogonal
        assert rep.first_nonorthogonal == e.n
        assert len(rep.pairwise) == i


def test_missing_aux_classes_are_degenerate(hermite):
    with pytest.warns(DegenerateAuxWarning, match="rows"):
        e = gops_det(hermite, 3, 2)
    assert e.poly.is_zero() and not e.full_degree


def test_explicit_aux_classes():
    M = MomentFunctional.from_builtin("hermite", {2: "laguerre", 3: "uniform_pm1"})
    a = gops_det(M, 3, 2, aux_classes=[3])
    b = gops_det(M, 3, 2)
    assert a.aux_classes == (3,) and b.aux_classes == (2,)
    assert a.poly != b.poly
    with pytest.raises(ValueError):
        gops_det(M, 3, 2, aux_classes=[2, 3])


def test_biorthogonal_case_m_equals_n():
    M = aux_fixture("laguerre")
    e = gops_det(M, 4, 4)
    rep = check_orthogonality(M, e)
    assert rep.residuals[0] == 0
    assert rep.first_nonorthogonal == 1


def test_invalid_indices(hermite):
    with pytest.raises(ValueError):
        gops_det(hermite, 2, 3)
    with pytest.raises(ValueError):
        gops_symbolic(hermite, 0, 0)


def test_table_and_json(hermite):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateAuxWarning)
        table = gops_table(hermite, 3)
    assert set(table) == {(n, m) for n in range(1, 4) for m in range(1, n + 1)}
    assert table[(2, 1)].coeffs() == [-1, 0, 1]
    rep = check_orthogonality(hermite, table[(2, 1)]).to_json()
    assert rep["orthogonal"] and rep["residuals"]["0"] == "0"
