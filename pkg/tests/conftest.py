import pytest

from arraytrack import ArrayConfig, ElementModel


@pytest.fixture
def ura44():
    "2.4 GHz 4x4 lattice at 0.05 m pitch (0.4 wavelengths), 42 degree envelope."
    return ArrayConfig(carrier_frequency=2.4e9, num_x=4, num_y=4,
                       spacing_x=0.05, spacing_y=0.05, scan_limit=42.0)


@pytest.fixture
def cosine_element():
    return ElementModel(kind="cosine_power", exponent=1.0)


@pytest.fixture
def isotropic_element():
    return ElementModel(kind="isotropic")
