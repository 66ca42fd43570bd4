import os

import pytest
from hypothesis import HealthCheck, settings

from chowfilt.genus2 import genus2_variety
from chowfilt.randomgen import default_variety

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("CHOWFILT_PROFILE", "default"))


@pytest.fixture(scope="session")
def v1():
    return default_variety(1)


@pytest.fixture(scope="session")
def v2():
    return default_variety(2)


@pytest.fixture(scope="session")
def g2():
    return genus2_variety()
