import pytest


@pytest.fixture(scope="module")
def db():
    yield {}


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2])
def test_slow(db, n):
    assert n in [1, 2]


def test_plain():
    assert True
