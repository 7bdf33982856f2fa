import pytest

from authdesign.instances import bibd13_code, edf19_code, fano_code, split25_code


@pytest.fixture(scope="session")
def fano():
    return fano_code()


@pytest.fixture(scope="session")
def bibd13():
    return bibd13_code()


@pytest.fixture(scope="session")
def edf19():
    return edf19_code()


@pytest.fixture(scope="session")
def split25():
    return split25_code()
