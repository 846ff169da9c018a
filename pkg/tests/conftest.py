"""Shared fixtures: the built-in example systems and constant-coefficient systems."""

import math

import pytest

from app.config.demos import DEMO_SPECS, DemoId
from app.config.settings import Settings
from app.services.coefficients import build_coefficients, loads_spec
from app.services.orbit_service import OrbitService

TWO_PI = 2.0 * math.pi

ONES = {"rho": "1", "kappa": "1", "mu": "1", "sigma": "1", "eta": "1"}


@pytest.fixture(scope="session")
def example1():
    return loads_spec(DEMO_SPECS[DemoId.EXAMPLE1], source="example1")


@pytest.fixture(scope="session")
def example2():
    return loads_spec(DEMO_SPECS[DemoId.EXAMPLE2], source="example2")


@pytest.fixture(scope="session")
def example3():
    return loads_spec(DEMO_SPECS[DemoId.EXAMPLE3], source="example3")


@pytest.fixture(scope="session")
def ones_s1():
    return build_coefficients("S1", TWO_PI, ONES)


@pytest.fixture(scope="session")
def ones_s2():
    return build_coefficients("S2", TWO_PI, {**ONES, "alpha": "1"})


@pytest.fixture(scope="session")
def ones_s3():
    return build_coefficients("S3", TWO_PI, {**ONES, "alpha": "1", "beta": "1"})


@pytest.fixture
def settings(tmp_path):
    return Settings(output_dir=str(tmp_path / "out"), _env_file=None)


@pytest.fixture
def service(settings):
    return OrbitService(settings)
