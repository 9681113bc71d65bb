import time

import pytest

from membrane.initdata import make_family
from membrane.solver import SolverParams, run


@pytest.fixture(scope="session")
def datum():
    return make_family()


@pytest.fixture(scope="session")
def run_times():
    """Wall-clock seconds of the shared solver runs, keyed by grid size."""
    return {}


def _timed_run(datum, n, run_times):
    t0 = time.perf_counter()
    sol = run(datum, SolverParams(grid_n=n, cfl=0.4, snapshot_stride=1))
    run_times[n] = time.perf_counter() - t0
    return sol


@pytest.fixture(scope="session")
def sol512(datum, run_times):
    return _timed_run(datum, 512, run_times)


@pytest.fixture(scope="session")
def sol1024(datum, run_times):
    return _timed_run(datum, 1024, run_times)


@pytest.fixture(scope="session")
def sol2048(datum, run_times):
    return _timed_run(datum, 2048, run_times)
