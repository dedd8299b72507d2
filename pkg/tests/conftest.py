import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_coeffs(rng, N):
    return rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)
