"""Integer primality testing and factorization for arbitrary-precision values.

Pipeline: trial division by all primes below 10**6, then perfect-power
detection, then Brent's variant of the rho method with Miller-Rabin
certificates.  Primality is deterministic below the 3.3e24 witness bound and
strongly probabilistic (40 fixed-derivation witnesses) beyond it, so every
result is reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import FactorizationError

TRIAL_DIVISION_BOUND = 10**6

# Deterministic Miller-Rabin witness set, valid for n < 3.317e24.
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_EXTRA_ROUNDS = 40

_small_primes: list[int] | None = None


def small_primes() -> list[int]:
    """All primes below 10**6, sieved once and cached."""
    global _small_primes
    if _small_primes is None:
        n = TRIAL_DIVISION_BOUND
        sieve = bytearray([1]) * n
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(n) + 1):
            if sieve[p]:
                sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
        _small_primes = [i for i, flag in enumerate(sieve) if flag]
    return _small_primes


def _miller_rabin_round(n: int, a: int, d: int, r: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin primality test.

    Deterministic for n below the 12-witness bound; beyond that, the fixed
    bases are followed by 40 witnesses drawn from a PRNG seeded by n itself,
    so the verdict is deterministic per input with error probability
    below 4**-40.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        if not _miller_rabin_round(n, a, d, r):
            return False
    if n < _MR_DETERMINISTIC_BOUND:
        return True
    rng = random.Random(n)
    for _ in range(_MR_EXTRA_ROUNDS):
        a = rng.randrange(2, n - 1)
        if not _miller_rabin_round(n, a, d, r):
            return False
    return True


def _brent_rho(n: int, rng: random.Random) -> int:
    """Find a nontrivial factor of odd composite n (Brent's cycle method)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # Backtrack one step at a time to recover the factor.
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # Cycle collapsed (rare); retry with fresh parameters.


def _perfect_power_root(n: int) -> tuple[int, int] | None:
    """Return (b, k) with b**k == n and k >= 2, or None."""
    for k in range(2, n.bit_length() + 1):
        b = round(n ** (1.0 / k))
        for cand in (b - 1, b, b + 1):
            if cand >= 2 and cand**k == n:
                return cand, k
    return None


@dataclass(frozen=True)
class PrimeFactorization:
    """Complete factorization as a prime -> exponent map."""

    factors: dict[int, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.factors.items():
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return sorted(self.factors)

    def __iter__(self):
        return iter(sorted(self.factors.items()))


def _factor_into(n: int, out: dict[int, int], rng: random.Random, depth: int = 0) -> None:
    if n == 1:
        return
    if depth > 64:
        raise FactorizationError(f"factorization recursion exhausted on {n}")
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    power = _perfect_power_root(n)
    if power is not None:
        b, k = power
        sub: dict[int, int] = {}
        _factor_into(b, sub, rng, depth + 1)
        for p, e in sub.items():
            out[p] = out.get(p, 0) + e * k
        return
    d = _brent_rho(n, rng)
    _factor_into(d, out, rng, depth + 1)
    _factor_into(n // d, out, rng, depth + 1)


def factorize(n: int) -> PrimeFactorization:
    """Complete prime factorization of n >= 1 with certified prime entries.

    n = 1 yields an empty map.  Raises FactorizationError if the backend
    cannot complete (never silently returns a partial factorization).
    """
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    original = n
    factors: dict[int, int] = {}
    if n == 1:
        return PrimeFactorization(factors)
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n > 1:
        if n < TRIAL_DIVISION_BOUND**2:
            # Below the square of the trial bound the cofactor must be prime.
            factors[n] = factors.get(n, 0) + 1
        else:
            _factor_into(n, factors, random.Random(n ^ 0x5DEECE66D))
    result = PrimeFactorization(factors)
    if result.n != original:
        raise FactorizationError(f"product of factors does not reproduce {original}")
    return result


def smallest_prime_factor(n: int) -> int:
    """Smallest prime factor of n >= 2.

    Trial division settles every n with a factor below 10**6; otherwise the
    full factorization is consulted.
    """
    if n < 2:
        raise ValueError(f"smallest_prime_factor requires n >= 2, got {n}")
    for p in small_primes():
        if p * p > n:
            return n
        if n % p == 0:
            return p
    if is_probable_prime(n):
        return n
    return factorize(n).primes()[0]
