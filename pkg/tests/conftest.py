import pytest

from logrescale import LogBase


@pytest.fixture
def b11():
    return LogBase(0.1)


@pytest.fixture
def b14():
    return LogBase(0.4)
