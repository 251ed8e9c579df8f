import numpy as np
import pytest

from dyca import dynsys

ACCEPTANCE_LINES = []


def random_spd(rng, n, shift=1.0):
    G = rng.standard_normal((n, n))
    return G @ G.T + shift * np.eye(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def rossler():
    return dynsys.simulate_rossler()


@pytest.fixture(scope="session")
def rossler_embedding(rossler):
    spec = dynsys.EmbeddingSpec(target_dim=25, mixing_seed=0, snr_db=15.0)
    return dynsys.embed(rossler, spec, noise_seed=0), dynsys.mixing_matrix(spec, 3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
