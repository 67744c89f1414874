import numpy as np
import pytest
from hypothesis import settings

from hornpol.fresnel import DielectricSlab
from hornpol.waveguide import RectangularGuide

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def guide():
    return RectangularGuide(800e-6, 400e-6)


@pytest.fixture
def slab():
    return DielectricSlab(3.416, 3.415e-3, 45.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
