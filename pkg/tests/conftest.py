import pytest

from twocoin import RngStream


@pytest.fixture
def rng():
    return RngStream(seed=20240, stream_id=0)
