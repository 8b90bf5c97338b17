from pathlib import Path

import pytest

from lucasmonoid import build_generator_set, constants_bundle, from_preset

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fib():
    return build_generator_set(from_preset("fibonacci"))


@pytest.fixture(scope="session")
def mersenne():
    return build_generator_set(from_preset("mersenne"))


@pytest.fixture(scope="session")
def pell():
    return build_generator_set(from_preset("pell"))


@pytest.fixture(scope="session")
def fib_bundle(fib):
    return constants_bundle(fib)


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR
