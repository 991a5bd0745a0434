import numpy as np
import pytest

from phaseshape import GenConfig, lorenz_generate, rossler_generate

# Lines recorded by the acceptance tests; printed after the run so each
# criterion shows exactly one [PASS]/[FAIL] line regardless of capture.
_ACCEPTANCE_LINES = []


def _record(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="session")
def criterion_log():
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lorenz_default():
    """Default-IC Lorenz trajectory, N=5000, dt=0.01."""
    return lorenz_generate(GenConfig(n=5000))


@pytest.fixture(scope="session")
def rossler_default():
    """Default-IC Rossler trajectory, N=2000, dt=0.12."""
    return rossler_generate(GenConfig(n=2000))


@pytest.fixture(scope="session")
def lorenz_seeded():
    """Random-IC Lorenz trajectories, N=5000, seeds 0..4."""
    return {seed: lorenz_generate(GenConfig(n=5000, seed=seed)) for seed in range(5)}


@pytest.fixture(scope="session")
def noise_series():
    """Fixed white-noise draw used by several fixtures."""
    from phaseshape import TimeSeries

    return TimeSeries(np.random.default_rng(5).normal(size=2000))
