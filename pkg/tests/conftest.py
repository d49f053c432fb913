import pytest

from circlemethod import majorarc


@pytest.fixture(scope="session")
def zeros():
    return majorarc.load_zeros()
