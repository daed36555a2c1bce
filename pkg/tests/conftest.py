import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from geomod import Domain, GeometricGraph, Kernel, UniformDensity, build_graph  # noqa: E402

import oracles  # noqa: E402

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Collects one verdict line per acceptance criterion; the lines are
    printed in the terminal summary."""
    def add(line: str):
        _ACCEPTANCE_LINES.append(line)
        print(line)
    return add


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def unit_interval():
    dom = Domain.interval(0.0, 1.0)
    return dom, UniformDensity(dom)


@pytest.fixture
def unit_square():
    dom = Domain.box([0.0, 0.0], [1.0, 1.0])
    return dom, UniformDensity(dom)


@pytest.fixture
def strip():
    dom = Domain.box([0.0, 0.0], [1.0, 4.0])
    return dom, UniformDensity(dom)


@pytest.fixture
def two_triangles():
    return GeometricGraph.from_dense(oracles.two_triangles())


@pytest.fixture
def three_points():
    dom = Domain.interval(-1.0, 2.0)
    rho = UniformDensity(dom)
    from geomod.domain import SampleCloud
    cloud = SampleCloud(np.array([[0.0], [0.5], [1.2]]), dom, rho, 0)
    return build_graph(cloud, Kernel("indicator", 1), 1.0)

