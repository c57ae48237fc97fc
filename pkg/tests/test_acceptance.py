"""Acceptance gate: one test and one printed PASS/FAIL line per criterion."""

import pytest

from wavestab import acceptance

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize(
    "criterion", acceptance.CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)]
)
def test_criterion(criterion):
    result = criterion()
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line


if __name__ == "__main__":
    for res in acceptance.run_all():
        print(res.line())
