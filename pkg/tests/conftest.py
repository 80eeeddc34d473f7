import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from wifipricing.market import LocalMarket

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def unit_market():
    return LocalMarket(n_users=1)


@pytest.fixture
def market_1000():
    return LocalMarket(n_users=1000)
