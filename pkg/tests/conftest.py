import pytest

from helpers import make_dataset, two_sample_dataset


@pytest.fixture
def two_sample():
    return two_sample_dataset()


@pytest.fixture
def random_dataset():
    return make_dataset(seed=7)
