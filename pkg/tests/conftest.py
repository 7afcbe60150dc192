from __future__ import annotations

from pathlib import Path

import pytest

from seccoh import parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

# the six scenarios every suite-wide criterion runs over
SUITE_NAMES = ("point_trivial", "z2_point", "z2_point_neg3", "z2_point_neg4",
               "circle", "four_point")


def load(name: str):
    return parse_scenario(SCENARIOS / f"{name}.json")


@pytest.fixture(scope="session")
def point_trivial():
    return load("point_trivial")


@pytest.fixture(scope="session")
def z2_point():
    return load("z2_point")


@pytest.fixture(scope="session")
def z2_point_neg3():
    return load("z2_point_neg3")


@pytest.fixture(scope="session")
def z2_point_neg4():
    return load("z2_point_neg4")


@pytest.fixture(scope="session")
def circle():
    return load("circle")


@pytest.fixture(scope="session")
def four_point():
    return load("four_point")


@pytest.fixture(scope="session")
def four_point_overlap():
    return load("four_point_overlap")


@pytest.fixture(scope="session")
def suite(point_trivial, z2_point, z2_point_neg3, z2_point_neg4, circle, four_point):
    return (point_trivial, z2_point, z2_point_neg3, z2_point_neg4, circle, four_point)


@pytest.fixture(scope="session")
def circle_refinements(circle):
    maps = circle.refinements["halves"]
    return maps["r"], maps["s"]
