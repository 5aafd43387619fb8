import pytest

from hypbergman import build_surface_model
from hypbergman.groups import congruence_cover


@pytest.fixture(scope="session")
def trivial():
    return build_surface_model("trivial")


@pytest.fixture(scope="session")
def parabolic():
    return build_surface_model("parabolic")


@pytest.fixture(scope="session")
def modular():
    return build_surface_model("modular")


@pytest.fixture(scope="session")
def bolza():
    return build_surface_model("bolza")


@pytest.fixture(scope="session")
def gamma2(modular):
    return congruence_cover(modular, 2)
