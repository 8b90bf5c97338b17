"""Sequence terms, primitive divisors, and the generator set.

A prime p is a primitive divisor of the term v_n if p | v_n while
p does not divide v_1 ... v_{n-1}.  Every index outside {1, 2, 6, 12}
possesses one, so the generator set splits into a finite head (indices
up to 12 that have a primitive divisor) and the full tail from index 13 on.

For coprime (P, Q) the sequence is a strong divisibility sequence,
gcd(v_m, v_n) = v_{gcd(m, n)}, so the primitive part of v_n -- the product
of its primitive prime powers -- is obtained by stripping common factors
with v_{n/q} for the prime divisors q of n alone.  Witnesses are verified
independently by running the recurrence modulo the candidate prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf, log as mp_log, log1p as mp_log1p

from .errors import DomainError, LucasMonoidError
from .factorint import smallest_prime_factor
from .params import LucasParams

EXCEPTIONAL_INDICES = frozenset({1, 2, 6, 12})
HEAD_MAX_INDEX = 12
TAIL_MIN_INDEX = 13


@dataclass(frozen=True)
class LucasTerm:
    """One sequence term: exact integer plus its high-precision logarithm."""

    index: int
    value: int
    log_value: mpf


@dataclass(frozen=True)
class Generator:
    """A term admitted to the generator set, with a primitive-divisor witness."""

    term: LucasTerm
    primitive_prime: int

    @property
    def index(self) -> int:
        return self.term.index

    @property
    def value(self) -> int:
        return self.term.value


def _raw_values(params: LucasParams, n_max: int) -> list[int]:
    """[v_0, v_1, ..., v_n_max] by the recurrence (v_0 = 0, v_1 = 1)."""
    p, q = params.p_sum, params.q_prod
    seq = [0, 1]
    for _ in range(2, n_max + 1):
        seq.append(p * seq[-1] - q * seq[-2])
    return seq


def log_term_value(params: LucasParams, n: int) -> mpf:
    """log v_n from the closed form, without constructing the integer.

    log v_n = n log(phi) - log(phi - phibar) + log(1 - (phibar/phi)^n);
    the correction term decays geometrically in n.
    """
    if n < 1:
        raise DomainError(f"term index must be >= 1, got {n}")
    with mp.workprec(params.precision_bits + 16):
        ratio = params.phibar / params.phi
        return n * params.log_phi - params.log_root_gap + mp_log1p(-(ratio**n))


def lucas_term(params: LucasParams, n: int) -> LucasTerm:
    """Exact term via the recurrence; logarithm via the closed form."""
    if n < 1:
        raise DomainError(f"term index must be >= 1, got {n}")
    value = _raw_values(params, n)[n]
    return LucasTerm(index=n, value=value, log_value=log_term_value(params, n))


def closed_form_value(params: LucasParams, n: int) -> int:
    """(phi^n - phibar^n) / (phi - phibar) rounded from real arithmetic.

    Working precision scales with n so the rounding is exact.
    """
    if n < 1:
        raise DomainError(f"term index must be >= 1, got {n}")
    bits = int(n * math.log2(float(params.phi))) + 64
    with mp.workprec(max(bits, params.precision_bits)):
        val = (params.phi**n - params.phibar**n) / params.root_gap
        out = int(mp.nint(val))
    return out


def primitive_part(params: LucasParams, n: int, seq: list[int] | None = None) -> int:
    """Product of the primitive prime powers of v_n.

    Strips every prime shared with an earlier term; by strong divisibility
    it suffices to cancel against v_{n/q} for the primes q | n.
    """
    if n < 1:
        raise DomainError(f"term index must be >= 1, got {n}")
    if seq is None:
        seq = _raw_values(params, n)
    w = seq[n]
    if n == 1 or w == 1:
        return 1
    for q in range(2, n + 1):
        if n % q == 0 and all(q % r for r in range(2, math.isqrt(q) + 1)):
            d = n // q
            g = math.gcd(w, seq[d])
            while g > 1:
                w //= g
                g = math.gcd(w, seq[d])
    return w


def has_primitive_divisor(params: LucasParams, n: int, seq: list[int] | None = None) -> bool:
    return primitive_part(params, n, seq) > 1


def divides_some_earlier_term(params: LucasParams, p: int, n: int) -> bool:
    """True if the prime p divides v_j for some 1 <= j < n.

    Runs the recurrence modulo p; used to verify witnesses independently of
    the gcd-stripping route.
    """
    a, b = 0, 1 % p
    pp, qq = params.p_sum % p, params.q_prod % p
    for _ in range(1, n):
        if b == 0:
            return True
        a, b = b, (pp * b - qq * a) % p
    return False


def primitive_divisor(params: LucasParams, n: int, seq: list[int] | None = None) -> int | None:
    """Smallest primitive prime divisor of v_n, or None if there is none.

    The smallest prime factor of the primitive part is the witness; it is
    cross-checked against the modular-recurrence test.  Absence is only
    reported when the primitive part is 1; a factorization failure raises.
    """
    part = primitive_part(params, n, seq)
    if part == 1:
        if n not in EXCEPTIONAL_INDICES:
            raise LucasMonoidError(
                f"primitive divisor unexpectedly missing at index {n}"
            )
        return None
    p = smallest_prime_factor(part)
    if divides_some_earlier_term(params, p, n):
        raise LucasMonoidError(f"witness {p} for index {n} divides an earlier term")
    return p


class GeneratorSet:
    """The generator set of a parameter pair.

    Immutable after construction.  The head (indices <= 12 with a primitive
    divisor) is materialized eagerly; tail generators are built on demand and
    cached.  Cached recomputation is idempotent, so concurrent use is safe.
    """

    def __init__(self, params: LucasParams):
        self.params = params
        seq = _raw_values(params, HEAD_MAX_INDEX)
        head = []
        for n in range(1, HEAD_MAX_INDEX + 1):
            if seq[n] > 1 and has_primitive_divisor(params, n, seq):
                witness = primitive_divisor(params, n, seq)
                head.append(
                    Generator(
                        term=LucasTerm(n, seq[n], log_term_value(params, n)),
                        primitive_prime=witness,
                    )
                )
        self.f0: tuple[Generator, ...] = tuple(sorted(head, key=lambda g: g.value))
        for g in self.f0:
            if g.value < 2:
                raise LucasMonoidError("generator below 2")
        with mp.workprec(params.precision_bits + 16):
            ideal_13 = TAIL_MIN_INDEX * params.log_phi - params.log_root_gap
            self.v0: mpf = min(
                min(mp_log(mpf(g.value)) for g in self.f0),
                ideal_13,
            )
        self._head_by_index = {g.index: g for g in self.f0}
        self._tail_cache: dict[int, Generator] = {}
        self._value_cache: list[int] = list(seq)

    # -- term access -------------------------------------------------------

    def term_value(self, n: int) -> int:
        """Exact v_n (cached, extended on demand)."""
        if n < 1:
            raise DomainError(f"term index must be >= 1, got {n}")
        cache = self._value_cache
        p, q = self.params.p_sum, self.params.q_prod
        while len(cache) <= n:
            cache.append(p * cache[-1] - q * cache[-2])
        return cache[n]

    def log_value(self, n: int) -> mpf:
        return log_term_value(self.params, n)

    def generator(self, n: int) -> Generator:
        """The generator of index n (head entry, or lazily built tail term)."""
        if n in self._head_by_index:
            return self._head_by_index[n]
        if n <= HEAD_MAX_INDEX:
            raise DomainError(f"index {n} is not in the generator set")
        cached = self._tail_cache.get(n)
        if cached is None:
            witness = primitive_divisor(self.params, n)
            cached = Generator(
                term=LucasTerm(n, self.term_value(n), self.log_value(n)),
                primitive_prime=witness,
            )
            self._tail_cache[n] = cached
        return cached

    def generator_indices(self) -> list[int]:
        """Head indices in ascending order (tail indices are 13, 14, ...)."""
        return [g.index for g in self.f0]

    # -- enumeration support -------------------------------------------------

    def value_index_pairs_upto(self, x: int) -> list[tuple[int, int]]:
        """All (value, index) generator pairs with value <= x, ascending."""
        if x < 1:
            raise DomainError(f"bound must be >= 1, got {x}")
        pairs = [(g.value, g.index) for g in self.f0 if g.value <= x]
        n = TAIL_MIN_INDEX
        while True:
            v = self.term_value(n)
            if v > x:
                break
            pairs.append((v, n))
            n += 1
        return pairs

    def values_upto(self, x: int) -> list[int]:
        return [v for v, _ in self.value_index_pairs_upto(x)]

    # -- analytic support ----------------------------------------------------

    def log_values_iter(self):
        """Yield (index, log value) for every generator, ascending by value."""
        for g in self.f0:
            yield g.index, g.term.log_value
        n = TAIL_MIN_INDEX
        while True:
            yield n, self.log_value(n)
            n += 1

    def float_log_array(self, count: int) -> np.ndarray:
        """First `count` generator logs as float64 (for vectorized kernels)."""
        out = np.empty(count)
        it = self.log_values_iter()
        for i in range(count):
            _, lv = next(it)
            out[i] = float(lv)
        return out

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "P": self.params.p_sum,
            "Q": self.params.q_prod,
            "precision_bits": self.params.precision_bits,
            "v0": mp.nstr(self.v0, 30),
            "f0": [
                {
                    "index": g.index,
                    "value": str(g.value),
                    "primitive_divisor": str(g.primitive_prime),
                }
                for g in self.f0
            ],
        }


def build_generator_set(params: LucasParams) -> GeneratorSet:
    return GeneratorSet(params)


def v0_bound(gens: GeneratorSet) -> mpf:
    """min over the head logs and the idealized index-13 log."""
    return gens.v0
