import numpy as np
import pytest
from hypothesis import strategies as st

from macregion.io import load_fixture
from macregion.model import make_model


@pytest.fixture(scope="session")
def adder():
    return load_fixture("adder")


@pytest.fixture(scope="session")
def xorstate():
    return load_fixture("xorstate")


@pytest.fixture(scope="session")
def blind():
    """Two states, binary inputs, output law independent of the inputs."""
    kernel = np.empty((2, 2, 2, 2))
    kernel[0] = [0.3, 0.7]
    kernel[1] = [0.9, 0.1]
    return make_model([0.4, 0.6], [0, 1], [0, 0], kernel)


def random_model(seed: int, max_states=3, max_inputs=3, max_outputs=3, sparse=True):
    """Random valid model; some kernel rows get exact zeros when ``sparse``."""
    rng = np.random.default_rng(seed)
    n_s = int(rng.integers(1, max_states + 1))
    xa, xb = (int(rng.integers(2, max_inputs + 1)) for _ in range(2))
    ny = int(rng.integers(2, max_outputs + 1))
    prior = rng.dirichlet(np.ones(n_s))
    kernel = rng.dirichlet(np.ones(ny), size=(n_s, xa, xb))
    if sparse:
        mask = rng.random(kernel.shape) < 0.3
        kernel = np.where(mask, 0.0, kernel)
        kernel[kernel.sum(axis=-1) == 0, 0] = 1.0
        kernel /= kernel.sum(axis=-1, keepdims=True)
    qa = rng.integers(0, n_s, size=n_s)
    qb = rng.integers(0, n_s, size=n_s)
    return make_model(prior, qa.tolist(), qb.tolist(), kernel)


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    lines = test_acceptance.report_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
