from __future__ import annotations

import os

import pytest
from hypothesis import settings

from pubsim.config import SimConfig

settings.register_profile("default", deadline=None, max_examples=100)
settings.register_profile("ci", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def tiny_config(**overrides) -> SimConfig:
    """A few hundred researchers over a few years; runs in about a second."""
    base = dict(n_researchers=300, n_journals=6, rampup_years=1, run_years=3, seed=11)
    base.update(overrides)
    return SimConfig.desk(**base)


@pytest.fixture
def tiny():
    return tiny_config
