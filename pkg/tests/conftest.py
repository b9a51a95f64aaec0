import pytest
from hypothesis import HealthCheck, settings

from torelli.fixtures import seed_curves
from torelli.mcg import orbit_universe
from torelli.complexes import UniverseData

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")


@pytest.fixture(scope="session")
def u2():
    """Genus-2 universe: mixed seeds, depth 2."""
    return orbit_universe(seed_curves("mixed", 2), 2, 40)


@pytest.fixture(scope="session")
def d2(u2):
    return UniverseData(u2)


@pytest.fixture(scope="session")
def u3():
    """Genus-3 universe with bounding pairs (chain seeds included)."""
    return orbit_universe(seed_curves("all", 3), 1, 60)


@pytest.fixture(scope="session")
def d3(u3):
    return UniverseData(u3)
