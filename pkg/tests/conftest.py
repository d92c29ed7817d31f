import functools

import numpy as np
import pytest

from sphquad import designs, rules
from sphquad.sphere import PointSet


@functools.lru_cache(maxsize=None)
def cached_design(t, n=None, seed=0):
    return designs.generate_design(t, n=n, seed=seed)


@pytest.fixture(scope="session")
def design():
    """Factory for generated designs, shared across the session."""
    return cached_design


@pytest.fixture(scope="session")
def design_rule():
    def make(t, n=None, seed=0):
        return rules.QuadratureRule.equal_weight(cached_design(t, n, seed).points, "design", t=t)

    return make


@pytest.fixture
def tetrahedron():
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return PointSet(v / np.sqrt(3.0))


@pytest.fixture
def octahedron():
    return PointSet(np.vstack([np.eye(3), -np.eye(3)]))


@pytest.fixture
def cube():
    v = np.array([[i, j, k] for i in (-1, 1) for j in (-1, 1) for k in (-1, 1)], dtype=float)
    return PointSet(v / np.sqrt(3.0))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
