import math
from pathlib import Path

import pytest

from flatcone import load_surface
from flatcone.cli import FIXTURES, resolve_surface_path

DATA = Path(__file__).parent / "data"


def fixture_surface(name: str, **kwargs):
    if (DATA / f"{name}.json").exists():
        return load_surface(DATA / f"{name}.json", **kwargs)
    return load_surface(resolve_surface_path(name), **kwargs)


@pytest.fixture(params=FIXTURES)
def any_fixture(request):
    return request.param, fixture_surface(request.param)


@pytest.fixture(scope="session")
def torus():
    return fixture_surface("torus")


@pytest.fixture(scope="session")
def marked_torus():
    return fixture_surface("torus", keep_marked_points=True)


@pytest.fixture(scope="session")
def octagon():
    return fixture_surface("octagon")


@pytest.fixture(scope="session")
def l_shape():
    return fixture_surface("l_shape")


@pytest.fixture(scope="session")
def halftrans():
    return fixture_surface("halftrans")


@pytest.fixture(scope="session")
def badangle():
    return fixture_surface("badangle")


def close(a, b, tol=1e-9):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
