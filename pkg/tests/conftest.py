import numpy as np
import pytest

from fracbessel.grids import MuVector, default_grid
from fracbessel.hankel import TransformPlan
from fracbessel.delsarte import ConvPlan

MU_CASES = {
    "mu0": (0.0,),
    "mu025": (0.25,),
    "mu2d": (0.3, 0.7),
}


@pytest.fixture(scope="session")
def setups():
    """Lazily built (mu, grid, TransformPlan, ConvPlan) per named case."""
    cache = {}

    def get(name, conv=False):
        if name not in cache:
            mu = MuVector(MU_CASES[name])
            grid = default_grid(mu.n)
            cache[name] = {"mu": mu, "grid": grid, "tplan": TransformPlan(mu, grid)}
        entry = cache[name]
        if conv and "cplan" not in entry:
            entry["cplan"] = ConvPlan(entry["mu"], entry["grid"])
        return entry

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
