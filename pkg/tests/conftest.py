"""Shared fixtures: the standard splittings and a few small groups."""

import pytest
from hypothesis import HealthCheck
from hypothesis import settings as hypothesis_settings

from splitkit import suite
from splitkit.config import settings
from splitkit.presentation import cyclic_table, finite_group, free_group
from splitkit.surface_oracle import Slope, slope_splitting, torus_group

hypothesis_settings.register_profile(
    "splitkit",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
hypothesis_settings.load_profile("splitkit")


@pytest.fixture(autouse=True)
def restore_settings():
    """CLI runs write overrides into the process-wide settings."""
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture(scope="session")
def f2():
    return torus_group()


@pytest.fixture(scope="session")
def z_group():
    return free_group(["t"], "Z")


@pytest.fixture(scope="session")
def z4():
    return finite_group(["a"], cyclic_table(4, "a"), "Z4")


@pytest.fixture(scope="session")
def z_split():
    return suite.z_splitting()


@pytest.fixture(scope="session")
def dihedral():
    return suite.dihedral_splitting()


@pytest.fixture(scope="session")
def z4_amalgam():
    return suite.z4_amalgam_splitting()


@pytest.fixture(scope="session")
def f3_left():
    return suite.f3_left()


@pytest.fixture(scope="session")
def f3_right():
    return suite.f3_right()


@pytest.fixture(scope="session")
def genus2():
    return suite.genus2_splitting()


@pytest.fixture(scope="session")
def slope01():
    return slope_splitting(Slope(0, 1))


@pytest.fixture(scope="session")
def slope10():
    return slope_splitting(Slope(1, 0))


@pytest.fixture(scope="session")
def arc():
    return suite.arc_splitting()


@pytest.fixture(scope="session")
def all_suite():
    return {name: factory() for name, factory in suite.SUITE.items()}
