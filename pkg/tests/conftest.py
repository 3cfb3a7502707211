import numpy as np
import pytest
from hypothesis import settings

from betaplane import GridSpec, RealField

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture
def grid64():
    return GridSpec(64, 2 * np.pi)


def random_field(grid, rng, mean_zero=False):
    v = rng.standard_normal((grid.n, grid.n))
    if mean_zero:
        v -= v.mean()
    return RealField(grid, v)


def smooth_random_field(grid, rng, kmax=6, mean_zero=True):
    """Band-limited random field whose spectrum stays far from the Nyquist line."""
    from betaplane.spectral import _forward, _inverse

    c = _forward(grid, rng.standard_normal((grid.n, grid.n)))
    kmag = grid.xi_abs / grid.dxi
    c *= kmag <= kmax
    if mean_zero:
        c[0, 0] = 0
    return RealField(grid, _inverse(grid, c))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
