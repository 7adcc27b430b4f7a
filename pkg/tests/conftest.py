import numpy as np
import pytest

from latcal import from_covers

BRIDGE = (["L", "R", "S"], [("L", "S"), ("R", "S")])
# two bottoms below two middles below two tops
NON_LATTICE = (
    list("abcdef"),
    [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "e"), ("c", "f"), ("d", "e"), ("d", "f")],
)


@pytest.fixture
def bridge():
    return from_covers(*BRIDGE)


@pytest.fixture
def non_lattice():
    return from_covers(*NON_LATTICE)


@pytest.fixture
def rng():
    return np.random.default_rng(20090717)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance_log(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(number, title):
        _ACCEPTANCE[number] = [title, "FAIL"]
        request.node.user_properties.append(("criterion", number))
        return lambda: _ACCEPTANCE[number].__setitem__(1, "PASS")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, verdict = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")
