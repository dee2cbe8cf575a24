import pytest

from semifields import fields as fd
from semifields import towers as tws


@pytest.fixture(scope="session")
def gf9():
    return fd.build_field(3, 2)


@pytest.fixture(scope="session")
def gf16():
    return fd.build_field(2, 4)


@pytest.fixture(scope="session")
def gf27():
    return fd.build_field(3, 3)


@pytest.fixture(scope="session")
def gf81():
    return fd.build_field(3, 4)


@pytest.fixture(scope="session")
def tw321():
    return tws.build_tower(3, 2, 1)


@pytest.fixture(scope="session")
def tw331():
    return tws.build_tower(3, 3, 1)


@pytest.fixture(scope="session")
def tw332():
    return tws.build_tower(3, 3, 2)


@pytest.fixture(scope="session")
def tw262():
    return tws.build_tower(2, 6, 2)
