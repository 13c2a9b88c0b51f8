import pytest
from hypothesis import settings

from d4count.census import run_census

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")



@pytest.fixture(scope="session")
def census_1e4():
    return run_census(10**4, keep_records=True)
