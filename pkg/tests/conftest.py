import numpy as np
import pytest

from tggfdr import DistributionSpec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[1.0, 2.0])
def spec(request):
    return DistributionSpec(gamma=request.param)
