import pytest

from quadfactor.modmath import primes_in


@pytest.fixture(scope="session")
def primes_1mod4_1e5() -> list[int]:
    return primes_in(5, 10**5, (4, 1))
