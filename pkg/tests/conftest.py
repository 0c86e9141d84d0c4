"""Shared fixtures: the three reference configurations used across the suite."""

import pytest

from crvirtres import build_config


@pytest.fixture
def cfg_t1():
    """Single band, single channel, every rate 1.  Solvable by hand."""
    return build_config(
        bands=1,
        channels_per_band=1,
        min_channels=1,
        reserved=0,
        pu_arrival_rate=1.0,
        pu_service_rate=1.0,
        su_arrival_rate=1.0,
        su_service_rate=1.0,
    )


@pytest.fixture
def cfg_p1():
    """Default operating point: 4 bands of 5 channels, moderate secondary load."""
    return build_config(
        bands=4,
        channels_per_band=5,
        min_channels=2,
        reserved=0,
        pu_arrival_rate=1.3,
        pu_rate_per_channel=1.0,
        su_rate_per_channel=0.75,
        su_load=0.6,
    )


@pytest.fixture
def cfg_x1():
    """3x4 layout with a 2-channel reservation; exercises overflow states."""
    return build_config(
        bands=3,
        channels_per_band=4,
        min_channels=2,
        reserved=2,
        pu_arrival_rate=1.0,
        pu_service_rate=1.0,
        su_arrival_rate=1.0,
        su_service_rate=1.0,
    )
