import os

import pytest
from hypothesis import settings

from src.group import parse_group
from src.multicast import build_butterfly
from src.settings import load_settings
from src.spectral import decompose

settings.register_profile("default", max_examples=50, deadline=None)
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def limits(monkeypatch):
    """Override settings for one test, e.g. ``limits(max_syndromes=8)``."""

    def apply(**overrides):
        for name, value in overrides.items():
            monkeypatch.setenv(f"PERMADD_{name.upper()}", str(value))
        load_settings.cache_clear()

    yield apply
    load_settings.cache_clear()


@pytest.fixture(scope="session")
def d15():
    return decompose(parse_group("C15"), 2)


@pytest.fixture(scope="session")
def d7():
    return decompose(parse_group("C7"), 2)


@pytest.fixture(scope="session")
def d33():
    return decompose(parse_group("C3xC3"), 2)


@pytest.fixture(scope="session")
def butterfly():
    return build_butterfly()
