import functools

import numpy as np
import pytest

from neurophot.laser import YamadaParams, excitability_threshold


@functools.lru_cache(maxsize=None)
def restoring_threshold(dt=0.05):
    return excitability_threshold(YamadaParams.restoring(), dt=dt)


@pytest.fixture(scope="session")
def restoring():
    return YamadaParams.restoring()


@pytest.fixture(scope="session")
def kick_threshold():
    return restoring_threshold()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
