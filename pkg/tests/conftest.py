import sys

import numpy as np
import pytest

from fracent.chain import ChainSpec, QuenchSpec


@pytest.fixture
def massive_quench():
    return QuenchSpec.mass_quench(64, 1.5, 4.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def static(L, alpha, mass):
    return QuenchSpec.static(ChainSpec(L, alpha, mass))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
