import random

import pytest

from kacmoody.affine import AffineKacMoody

# lines recorded by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=["abelian:1", "abelian:3", "sl2", "su2", "abelian:1,sl2"])
def km_exact(request):
    return AffineKacMoody(request.param, "exact")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
