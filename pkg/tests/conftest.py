import pytest

from lagrangian_variety.chevalley import build_lie_algebra
from lagrangian_variety.rootdata import build_root_system


@pytest.fixture(scope="session")
def A1():
    return build_root_system("A1")


@pytest.fixture(scope="session")
def A2():
    return build_root_system("A2")


@pytest.fixture(scope="session")
def B2():
    return build_root_system("B2")


@pytest.fixture(scope="session")
def A1xA1():
    return build_root_system("A1xA1")


@pytest.fixture(scope="session")
def model_A1(A1):
    return build_lie_algebra(A1)


@pytest.fixture(scope="session")
def model_A2(A2):
    return build_lie_algebra(A2)


@pytest.fixture(scope="session")
def model_B2(B2):
    return build_lie_algebra(B2)
