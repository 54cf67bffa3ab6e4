import json
from fractions import Fraction

import pytest
from hypothesis import given

from apolar.ring import VarId, x
from apolar.umbral import (
    MissingMomentError,
    MomentFunctional,
    MomentTable,
    apply_E,
    apply_E0,
    apply_E_tilde,
    builtin_moments,
    complete_homogeneous,
    load_moments,
    moments_from_json,
    moments_to_json,
    product_table,
)

from conftest import polys, small_fractions


def F(*vals):
    return [Fraction(v) for v in vals]


@pytest.mark.parametrize(
    "name, moments",
    [
        ("hermite", F(1, 0, 1, 0, 3, 0, 15)),
        ("uniform_pm1", F(2, 0, Fraction(2, 3), 0, Fraction(2, 5), 0, Fraction(2, 7))),
        ("laguerre", F(1, 1, 2, 6, 24, 120, 720)),
        ("chebyshev1", F(1, 0, Fraction(1, 2), 0, Fraction(3, 8), 0, Fraction(5, 16))),
    ],
)
def test_builtin_moments(name, moments):
    assert builtin_moments(name, 6) == moments


def test_E0_of_square(hermite):
    assert apply_E0(hermite, (x(1) - x(0)) ** 2) == x(0) ** 2 + 1


def test_E_factorizes_over_blocks(laguerre):
    assert apply_E(laguerre, x(1) ** 2 * x(2) ** 3) == 2 * 6


def test_absent_blocks_contribute_a0(uniform):
    # blocks 1 and 2 are both in play; block 2 only carries E 1 = 2
    assert apply_E(uniform, x(1) ** 2, blocks=[1, 2]) == Fraction(2, 3) * 2
    assert apply_E(uniform, x(1) ** 2) == Fraction(2, 3)


def test_block_outside_universe_rejected(hermite):
    with pytest.raises(ValueError):
        apply_E(hermite, x(3), blocks=[1])


@given(polys(blocks=(1, 2)), polys(blocks=(1, 2)), small_fractions)
def test_E_is_linear(p, q, c):
    M = MomentFunctional.from_builtin("laguerre")
    lhs = apply_E(M, p + q.scale(c), blocks=[1, 2])
    assert lhs == apply_E(M, p, blocks=[1, 2]) + c * apply_E(M, q, blocks=[1, 2])


@given(polys(blocks=(1, 2)))
def test_E_is_symmetric_under_swapping_same_class_blocks(p):
    M = MomentFunctional.from_builtin("hermite")
    swapped = p.subs({VarId(1): x(2), VarId(2): x(1)})
    assert apply_E(M, p, blocks=[1, 2]) == apply_E(M, swapped, blocks=[1, 2])


def test_classes_select_tables():
    M = MomentFunctional.from_builtin("hermite", {2: "laguerre"}).with_classes({2: 2})
    assert apply_E(M, x(1) ** 2 * x(2) ** 2) == 1 * 2


def test_finite_table_reports_missing_moment():
    M = MomentFunctional.from_sequence([1, 0, 1])
    with pytest.raises(MissingMomentError):
        apply_E(M, x(1) ** 5)


def test_functional_validation():
    with pytest.raises(ValueError):
        MomentFunctional.from_sequence([0, 1, 2])
    with pytest.raises(ValueError):
        MomentFunctional({2: MomentTable([1])})


def test_product_table():
    t = product_table("hermite", "laguerre")
    assert t.d == 1
    assert t.get((2, 3)) == 1 * 6


def test_complete_homogeneous():
    assert complete_homogeneous(2, [1, 2]) == 1 + 2 + 4
    assert complete_homogeneous(0, []) == 1


def test_E_tilde_uses_complete_homogeneous():
    roots = [Fraction(1), Fraction(2)]
    assert apply_E_tilde(roots, x(1) ** 2 * x(2)) == 7 * 3


def test_json_round_trip(tmp_path):
    M = MomentFunctional.from_builtin("hermite", {2: "laguerre"})
    data = moments_to_json(M, 8)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    back = load_moments(path)
    for j in (1, 2):
        assert [back.moment(j, k) for k in range(9)] == [M.moment(j, k) for k in range(9)]


def test_multivariate_json():
    data = {"d": 1, "classes": {"1": {"moments": {"0,0": "1", "1,0": "1/2", "0,1": "0"}}}}
    M = moments_from_json(data)
    assert M.moment(1, (1, 0)) == Fraction(1, 2)
