from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from apolar.ring import Poly, x, y
from apolar.umbral import MomentFunctional

settings.register_profile("apolar", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("apolar")

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polys(draw, blocks=(0, 1, 2), max_terms=4, max_exp=3, with_y=False):
    """Small random polynomials in x_b (and optionally y_b)."""
    out = Poly.const(0)
    for _ in range(draw(st.integers(0, max_terms))):
        term = Poly.const(draw(small_fractions))
        for b in blocks:
            term = term * x(b) ** draw(st.integers(0, max_exp))
            if with_y:
                term = term * y(b) ** draw(st.integers(0, max_exp))
        out = out + term
    return out


@pytest.fixture
def hermite():
    return MomentFunctional.from_builtin("hermite")


@pytest.fixture
def uniform():
    return MomentFunctional.from_builtin("uniform_pm1")


@pytest.fixture
def laguerre():
    return MomentFunctional.from_builtin("laguerre")
