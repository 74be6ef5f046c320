import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cubic_bundles.exact_field import ProjValue, Scalar
from cubic_bundles.projectivity import ConstructionInput
from cubic_bundles.ruled_surface import CurveDivisor

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.register_profile("dev", deadline=None, max_examples=20)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR


@pytest.fixture
def two_sections_input() -> ConstructionInput:
    """Constants 1 and -1 with D1 = {0:1}, D2 = {1:1}."""
    return ConstructionInput(
        conductor=1,
        c0=ProjValue.of(0),
        c_inf=ProjValue.infinity(),
        constants=(ProjValue.of(1), ProjValue.of(-1)),
        divisors=(CurveDivisor.from_mapping({0: 1}), CurveDivisor.from_mapping({1: 1})),
    )


@pytest.fixture
def cube_roots_input() -> ConstructionInput:
    """Cube roots of unity with double points D_i = {i-1: 2}."""
    return ConstructionInput(
        conductor=3,
        c0=ProjValue.of(0),
        c_inf=ProjValue.infinity(),
        constants=tuple(ProjValue.of(Scalar.root_of_unity(3, j)) for j in range(3)),
        divisors=tuple(CurveDivisor.from_mapping({j: 2}) for j in range(3)),
    )
