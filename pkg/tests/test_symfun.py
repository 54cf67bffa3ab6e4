import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from apolar.covariants import form_from_moments, transvectant
from apolar.ring import VarId, dehomogenize, x
from apolar.symfun import (
    central_moment,
    lambda_from_alpha,
    monomial_sym,
    p_alpha_k,
    p_alpha_k_root_average,
    p_alpha_k_unsymmetrized,
    s_alpha_k,
    schur,
    schur_at,
    schur_average_tilde,
    stab_order,
    verify_schur_monomial_identities,
)
from apolar.umbral import MomentFunctional, apply_E
from apolar.quadrature import gauss_rule
from apolar.ops import X0

V = [VarId(b) for b in (1, 2, 3)]


def test_small_schur_polynomials():
    assert schur((1, 0), V[:2]) == x(1) + x(2)
    assert schur((1, 1), V[:2]) == x(1) * x(2)
    assert schur((2, 0), V[:2]) == x(1) ** 2 + x(1) * x(2) + x(2) ** 2


def test_monomial_symmetric():
    assert monomial_sym((2, 0), V[:2]) == x(1) ** 2 + x(2) ** 2
    assert monomial_sym((1, 1, 0), V) == x(1) * x(2) + x(1) * x(3) + x(2) * x(3)


def test_stabilizer_and_lambda():
    assert stab_order((2, 2, 0)) == 2
    assert stab_order((1, 1, 1)) == 6
    assert lambda_from_alpha((4, 2, 0)) == (2, 1, 0)
    with pytest.raises(ValueError):
        lambda_from_alpha((1, 1, 0))


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3).map(lambda a: tuple(sorted(a, reverse=True))))
def test_schur_at_matches_polynomial(lam):
    vals = [Fraction(1, 2), Fraction(-2), Fraction(3)][: len(lam)]
    vars_ = V[: len(lam)]
    assert schur_at(lam, vals) == schur(lam, vars_).evaluate(dict(zip(vars_, vals)))


def _alphas(N, max_total=6):
    for a in itertools.combinations_with_replacement(range(max_total, -1, -1), N):
        if sum(a) <= max_total:
            yield a


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("k", [0, 2])
def test_even_identity(N, k):
    for alpha in _alphas(N):
        assert verify_schur_monomial_identities(alpha, k).holds


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 3])
def test_odd_identity(N, k):
    for alpha in _alphas(N):
        if all(a > b for a, b in zip(alpha, alpha[1:])) and alpha[-1] >= 0:
            r = verify_schur_monomial_identities(alpha, k)
            assert r.holds and r.factor == (-1) ** (N * (N - 1) // 2)


def test_odd_case_vanishes_on_repeated_parts():
    assert s_alpha_k((2, 2), 1).is_zero()


@pytest.mark.parametrize("name", ["hermite", "laguerre"])
@pytest.mark.parametrize("N", range(1, 7))
def test_central_moments(name, N):
    M = MomentFunctional.from_builtin(name)
    P = p_alpha_k(M, (1,) * N, 0, average=True)
    assert apply_E(M, P.subs({X0: x(1)}), blocks=[1]) == central_moment(M, N)
    assert p_alpha_k(M, (1,) * N, 0) == P * math.factorial(N)


def test_hermite_central_moments():
    M = MomentFunctional.from_builtin("hermite")
    assert [central_moment(M, N) for N in range(1, 7)] == [0, 1, 0, 3, 0, 15]


def test_symmetrization_matches_factor(laguerre):
    alpha, k = (2, 1), 1
    assert p_alpha_k(laguerre, alpha, k) == p_alpha_k_unsymmetrized(laguerre, alpha, k) * 2


@pytest.mark.parametrize("n, m, k", [(3, 2, 1), (4, 2, 2), (3, 3, 0), (4, 3, 3)])
def test_transvectant_link(n, m, k, laguerre):
    fn = form_from_moments(laguerre, 1, n)
    fm = form_from_moments(laguerre, 1, m)
    lhs = dehomogenize(transvectant(fn, fm, k))
    assert lhs == p_alpha_k(laguerre, (n - k, m - k), k, average=True)


@pytest.mark.parametrize("alpha, k", [((2, 0), 0), ((2, 1), 1), ((1, 1, 0), 0), ((3, 1), 1)])
def test_root_average(alpha, k, hermite):
    P = p_alpha_k(hermite, alpha, k)
    for x0 in (Fraction(0), Fraction(1, 2), Fraction(-2)):
        exact = float(P.evaluate({X0: x0}))
        assert p_alpha_k_root_average(hermite, alpha, k, 4, x0) == pytest.approx(exact, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("alpha", [(1, 0), (2, 0), (2, 1, 0), (3, 1, 0)])
def test_tilde_average_convention(alpha, hermite):
    roots = gauss_rule(hermite, len(alpha) + 1).nodes
    rep = schur_average_tilde(roots, alpha)
    assert "B:N!" in rep.matches
