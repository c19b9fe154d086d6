import math
import sys

import numpy as np
import pytest

from qgfilter import catalog


# Closed-form DtN values worked out by hand; independent of the linear solver.

def loop_dtn_exact(k, length, theta):
    return -2 * k * (math.cos(k * length) - math.cos(theta)) / math.sin(k * length)


def stub_dtn_exact(kappa, length, end):
    """Unit-Dirichlet derivative of one stub; ``kappa`` may be imaginary (evanescent)."""
    kappa = complex(kappa)
    if end == "dirichlet":
        val = -kappa * np.cos(kappa * length) / np.sin(kappa * length)
    else:
        val = kappa * np.sin(kappa * length) / np.cos(kappa * length)
    return val.real


@pytest.fixture
def flux_loop():
    return catalog.loop(1.0, 1.0)


@pytest.fixture
def dirichlet_stub():
    return catalog.stub(1.0, "dirichlet")


@pytest.fixture
def two_stubs():
    return catalog.star([1.0, 1.0], ["dirichlet", "dirichlet"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
