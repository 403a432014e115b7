import pytest
from hypothesis import settings

from cbpv.subst import reset_fresh

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _fresh_names():
    reset_fresh()
    yield
