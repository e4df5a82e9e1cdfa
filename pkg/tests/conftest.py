from __future__ import annotations

import math

import numpy as np
import pytest

from worm_szego.domain import DomainParams, make_params


@pytest.fixture(scope="session")
def params() -> DomainParams:
    # beta = 2 pi: nu = 1/3, default h = 1/3
    return make_params(2.0 * math.pi)


@pytest.fixture(scope="session")
def params_3pi() -> DomainParams:
    return make_params(3.0 * math.pi)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(7)
