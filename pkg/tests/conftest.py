import pytest

from modwd import make_ctx


@pytest.fixture(scope="session")
def ctx52():
    return make_ctx(5, 2)


@pytest.fixture(scope="session")
def ctx32():
    return make_ctx(3, 2)


@pytest.fixture(scope="session")
def ctx23():
    return make_ctx(2, 3)


@pytest.fixture(scope="session")
def ctx34():
    return make_ctx(3, 4)
