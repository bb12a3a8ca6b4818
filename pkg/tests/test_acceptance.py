"""Acceptance battery: every shipped criterion must hold at its stated bound.

One test (and one printed pass/fail line) per criterion; the measured value
and the bound travel with the assertion message so a failure is readable on
its own.
"""

import pytest

from polyosc.acceptance import ALL_CRITERIA


@pytest.mark.parametrize("criterion", ALL_CRITERIA, ids=[f.__name__ for f in ALL_CRITERIA])
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
