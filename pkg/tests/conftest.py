import math

import pytest
from hypothesis import settings

from intelligent_states import nonlinearity as nl

# property tests draw the same examples on every run
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


def catalog_functions():
    return [
        nl.identity(),
        nl.harmonious(),
        nl.hydrogen(),
        nl.trapped_ion(0.1),
        nl.trapped_ion(0.2),
        nl.penson_solomon(0.9),
    ]


@pytest.fixture(params=catalog_functions(), ids=lambda f: f"{f.name}{dict(f.params)}")
def catalog_f(request):
    return request.param


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def explicit_laguerre(n, k, x):
    return math.fsum(
        (-1) ** j * math.comb(n + k, n - j) * x**j / math.factorial(j) for j in range(n + 1)
    )


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {label:<4s} {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
