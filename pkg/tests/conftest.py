import pytest

from accesswalk import _kernel, synth


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Compile the numba kernels once so timed tests measure the algorithm,
    # not LLVM.
    _kernel.warmup()


@pytest.fixture(scope="session")
def p3():
    return synth.path_network(3)


@pytest.fixture(scope="session")
def c4():
    return synth.cycle_network(4)


@pytest.fixture(scope="session")
def star3():
    return synth.star_network(3)


@pytest.fixture(scope="session")
def grid3():
    return synth.grid_network(3, 3)


@pytest.fixture(scope="session")
def grid15():
    return synth.grid_network(15, 15)
