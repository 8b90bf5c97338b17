import random

import pytest

from lucasmonoid.errors import FactorizationError
from lucasmonoid.factorint import (
    PrimeFactorization,
    factorize,
    is_probable_prime,
    smallest_prime_factor,
)


def trial_factor(n: int) -> dict[int, int]:
    """Independent trial-division oracle (complete for n with spf <= sqrt(n))."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def test_spec_examples():
    assert factorize(4095).factors == {3: 2, 5: 1, 7: 1, 13: 1}
    assert factorize(1).factors == {}
    assert factorize(13).factors == {13: 1}


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(-5)


def test_matches_trial_division_oracle():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randrange(2, 10**9)
        assert factorize(n).factors == trial_factor(n)


def test_product_and_primality_certificates():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randrange(10**12, 10**15)
        f = factorize(n)
        assert f.n == n
        assert all(is_probable_prime(p) for p in f.factors)


def test_perfect_powers():
    assert factorize(2**64).factors == {2: 64}
    assert factorize(3**40).factors == {3: 40}
    p = 1000003  # prime just above the trial-division bound
    assert factorize(p**3).factors == {p: 3}


def test_semiprime_beyond_trial_bound():
    p, q = 1000003, 1000033
    assert factorize(p * q).factors == {p: 1, q: 1}


def test_large_lucas_value():
    n = 354224848179261915075  # 100th Fibonacci number
    f = factorize(n)
    assert f.n == n
    assert all(is_probable_prime(p) for p in f.factors)
    assert 5 in f.factors and f.factors[5] == 2


def test_mersenne_values():
    assert is_probable_prime(2**89 - 1)
    f = factorize(2**67 - 1)  # classic composite: 193707721 * 761838257287
    assert f.factors == {193707721: 1, 761838257287: 1}


def test_primality_against_sieve():
    limit = 20000
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    for n in range(limit):
        assert is_probable_prime(n) == bool(sieve[n])


def test_smallest_prime_factor():
    assert smallest_prime_factor(91) == 7
    assert smallest_prime_factor(97) == 97
    assert smallest_prime_factor(1000003 * 1000033) == 1000003
    with pytest.raises(ValueError):
        smallest_prime_factor(1)


def test_prime_factorization_type():
    f = PrimeFactorization({3: 2, 5: 1})
    assert f.n == 45
    assert f.primes() == [3, 5]
    assert list(f) == [(3, 2), (5, 1)]
