import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("ci")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240611, help="seed for randomized numpy tests")


@pytest.fixture
def rng(request):
    return np.random.default_rng(request.config.getoption("--seed"))
