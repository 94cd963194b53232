import pytest

from dqsim import kernels


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    """Run the test once per available kernel backend."""
    with kernels.use_backend(request.param):
        yield request.param
