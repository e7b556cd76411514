import numpy as np
import pytest

from tensor_paraproduct import UnitGridField

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def record(number, title, passed, detail):
        _ACCEPTANCE[number] = (title, bool(passed), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number} {'PASS' if passed else 'FAIL'}: {title} -- {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_field(rng, L, Lp=None):
    return UnitGridField(rng.uniform(-1.0, 1.0, (2**L, 2**(L if Lp is None else Lp))))
