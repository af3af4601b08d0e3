import pytest

from nnops import Domain, make_kernel, step_test_function

VARIANTS = ("logistic", "tanh", "ramp", "three", "power")
NONCOMPACT = ("logistic", "tanh", "power")


@pytest.fixture(scope="session")
def catalogue():
    """The five unit-scale catalogue kernels, alpha defaults."""
    return {v: make_kernel(v) for v in VARIANTS}


@pytest.fixture(scope="session")
def unit_domain():
    return Domain(0.0, 1.0)


@pytest.fixture(scope="session")
def step():
    return step_test_function()
