"""The twelve acceptance criteria, each at its stated tolerance and time bound.

Run with ``pytest -s tests/test_acceptance.py`` to see one line per criterion.
"""
import pytest

from apolar.selfcheck import CHECKS, run_check


@pytest.mark.parametrize("number", [num for num, *_ in CHECKS], ids=[f"criterion_{num:02d}" for num, *_ in CHECKS])
def test_criterion(number):
    result = run_check(number)
    print()
    print(result.line())
    assert result.passed, result.detail
