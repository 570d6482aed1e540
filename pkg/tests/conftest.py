import numpy as np
import pytest

from softcone.geometry import DoubleCone, Point4
from softcone.profiles import DressingParams
from softcone.quadrature import QuadratureSpec
from softcone.testfields import BumpProfile, SeparableTerm, TestFieldPair

# one "criterion NN [PASS|FAIL] ..." line per acceptance test, echoed after
# the run summary so they are visible without -s
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def params():
    return DressingParams()


@pytest.fixture(scope="session")
def quad():
    return QuadratureSpec()


def make_field(t_center, position, *, channel="electric", direction=(0.0, 0.0, 1.0),
               halfwidth=0.5, radius=None):
    term = SeparableTerm(
        time=BumpProfile(t_center, halfwidth),
        space=BumpProfile(0.0, halfwidth),
        direction=direction,
        channel=channel,
        position=tuple(position),
    )
    if radius is None:
        radius = 2 * halfwidth + 1e-6
    support = DoubleCone(Point4(t_center, np.asarray(position, float)), radius)
    return TestFieldPair((term,), support)


@pytest.fixture(scope="session")
def forward_probe():
    """Single electric term well inside the forward lightcone."""
    return make_field(5.0, (0.0, 0.0, 0.0), radius=1.0)


def make_random_label(rng):
    """Random single-term local field near the origin (shared label shape)."""
    t_c = float(rng.uniform(-0.3, 0.3))
    pos = rng.uniform(-0.3, 0.3, 3)
    term = SeparableTerm(
        time=BumpProfile(t_c, 0.4, float(rng.uniform(0.5, 1.5))),
        space=BumpProfile(0.0, 0.4),
        direction=tuple(rng.normal(0.0, 1.0, 3)),
        channel="electric" if rng.uniform() < 0.5 else "magnetic",
        position=tuple(pos),
    )
    return TestFieldPair((term,), DoubleCone(Point4(t_c, pos.copy()), 0.81))
