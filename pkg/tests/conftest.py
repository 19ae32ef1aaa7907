import math

import pytest

from cogvlc.channel import AccessPoint, ReceiverModel
from cogvlc.network import Hall
from cogvlc.zones import IlluminationSpec, MobilitySpec


@pytest.fixture
def ap():
    """Table-1 cell: 60 degree LED, 64 subcarriers, 3.5 m drop."""
    return AccessPoint(theta=math.radians(60), d_v=3.5, p_cell=9.0, b_cell=20e6, n_cell=64)


@pytest.fixture
def rx():
    return ReceiverModel(a_d=1e-4, gamma=0.53, psi_c=math.pi / 2, g=1.0, n_noise=1e-21,
                         sigma_ratio=1.0, c_const=1.0)


@pytest.fixture
def illum():
    return IlluminationSpec(200.0, 800.0)


@pytest.fixture
def hall():
    return Hall(30.0, 10.0, 3.5)


@pytest.fixture
def mob():
    return MobilitySpec(epsilon=1.5, beta=0.4, b_ho=10e3, u_pu=2)
