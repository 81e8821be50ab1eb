import pytest
from hypothesis import settings

from orlicz_mart import dyadic_filtration, running_example

settings.register_profile("repo", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("repo")


@pytest.fixture
def f_run():
    return running_example()


@pytest.fixture
def F2():
    return dyadic_filtration(2)
