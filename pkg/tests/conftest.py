import pytest

from gmbs.group import Group


@pytest.fixture(scope="session")
def g2():
    return Group([2])


@pytest.fixture(scope="session")
def g23():
    return Group([2, 3])


@pytest.fixture(scope="session")
def g24():
    return Group([2, 4])


@pytest.fixture(scope="session")
def g6():
    return Group([6])
