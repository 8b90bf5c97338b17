import random

import pytest

from lucasmonoid.errors import DomainError, MembershipError, ResourceCapError
from lucasmonoid.monoid import (
    Factorization,
    Omega,
    contains,
    count_upto,
    enumerate_upto,
    factorize_element,
    histogram,
    omega,
    stat_arrays,
    weighted_sum,
)

PAPER_PREFIX = [1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 13, 15, 16, 18, 20, 21, 24, 25, 26,
                27, 30, 32, 34]


def dp_membership(gens, limit: int) -> bytearray:
    """Brute-force divisibility DP over the generator values."""
    reach = bytearray(limit + 1)
    reach[1] = 1
    for v in gens.values_upto(limit):
        for m in range(v, limit + 1, v):
            if reach[m // v]:
                reach[m] = 1
    return reach


def count_factorizations(n: int, values: list[int], i0: int = 0) -> int:
    """Exhaustive multiset search over nondecreasing generator values."""
    if n == 1:
        return 1
    total = 0
    for i in range(i0, len(values)):
        v = values[i]
        if v > n:
            break
        if n % v == 0:
            total += count_factorizations(n // v, values, i)
    return total


# -- enumeration ------------------------------------------------------------------


def test_enumerate_paper_prefix(fib):
    assert [e.value for e in enumerate_upto(fib, 12)] == PAPER_PREFIX[:10]
    els = enumerate_upto(fib, 34)
    assert [e.value for e in els] == PAPER_PREFIX
    assert [e.value for e in els[-3:]] == [30, 32, 34]


def test_enumerate_bottom(fib):
    only = enumerate_upto(fib, 1)
    assert len(only) == 1 and only[0].value == 1
    assert only[0].factorization.indices == ()


def test_count_examples(fib):
    assert count_upto(fib, 34) == 23
    assert count_upto(fib, 10) == 9
    assert count_upto(fib, 1) == 1


def test_count_matches_enumerate(fib, mersenne):
    for gens in (fib, mersenne):
        for x in (1, 2, 100, 12345):
            assert count_upto(gens, x) == len(enumerate_upto(gens, x))


def test_count_threads_agree(fib):
    assert count_upto(fib, 10**6, threads=2) == count_upto(fib, 10**6)


def test_no_duplicates_strictly_increasing(fib, mersenne):
    for gens in (fib, mersenne):
        vals = [e.value for e in enumerate_upto(gens, 10**4)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_enumerated_elements_consistent(fib):
    for e in enumerate_upto(fib, 2000):
        assert contains(fib, e.value)
        assert factorize_element(fib, e.value) == e.factorization
        prod = 1
        for idx in e.factorization.indices:
            prod *= fib.generator(idx).value
        assert prod == e.value


def test_closure_under_products(fib):
    x = 10**5
    els = enumerate_upto(fib, x)
    values = {e.value: e for e in els}
    rng = random.Random(5)
    checked = 0
    while checked < 60:
        a, b = rng.choice(els), rng.choice(els)
        if a.value * b.value > x:
            continue
        prod = values[a.value * b.value]
        merged = tuple(sorted(a.factorization.indices + b.factorization.indices))
        assert prod.factorization.indices == merged
        checked += 1


# -- membership -------------------------------------------------------------------


def test_contains_examples(fib):
    assert contains(fib, 7) is False
    assert contains(fib, 26) is True
    assert contains(fib, 1) is True


def test_contains_against_dp(fib, mersenne):
    limit = 10**5
    for gens in (fib, mersenne):
        reach = dp_membership(gens, limit)
        member = {e.value for e in enumerate_upto(gens, limit)}
        for n in range(1, limit + 1):
            assert bool(reach[n]) == (n in member)
            assert contains(gens, n) == bool(reach[n])


# -- factorization ------------------------------------------------------------------


def test_factorize_element_examples(fib):
    f26 = factorize_element(fib, 26)
    assert f26.indices == (3, 7)
    assert [fib.generator(i).value for i in f26.indices] == [2, 13]
    assert factorize_element(fib, 16).indices == (3, 3, 3, 3)
    assert factorize_element(fib, 1).indices == ()
    with pytest.raises(MembershipError):
        factorize_element(fib, 7)


def test_unique_factorization_exhaustive(fib, mersenne):
    for gens in (fib, mersenne):
        values = gens.values_upto(5000)
        for e in enumerate_upto(gens, 5000):
            assert count_factorizations(e.value, values) == 1


def test_omega_examples(fib):
    f12 = factorize_element(fib, 12)  # 12 = 2 * 2 * 3
    assert omega(f12) == 2 and Omega(f12) == 3
    empty = Factorization(())
    assert omega(empty) == 0 and Omega(empty) == 0
    f26 = factorize_element(fib, 26)
    assert omega(f26) == 2 and Omega(f26) == 2


def test_omega_le_Omega(fib):
    for e in enumerate_upto(fib, 3000):
        assert omega(e.factorization) <= Omega(e.factorization)


def test_factorization_type_rejects_unsorted():
    with pytest.raises(DomainError):
        Factorization((4, 3))


# -- weighted sums and histograms -----------------------------------------------------


def test_weighted_sum_examples(fib):
    assert float(weighted_sum(fib, 10, 1.0, "omega", "smoothed")) == pytest.approx(4.2, abs=1e-12)
    assert float(weighted_sum(fib, 34, 1.0, "omega", "sharp")) == 23
    assert float(weighted_sum(fib, 1, 1.7, "Omega", "sharp")) == 1


def test_weighted_sum_hand_oracle(fib):
    # direct sum over the enumerated elements
    u = 1.2
    x = 300
    expected = sum(u ** omega(e.factorization) * (1 - e.value / x)
                   for e in enumerate_upto(fib, x))
    got = float(weighted_sum(fib, x, u, "omega", "smoothed"))
    assert got == pytest.approx(expected, rel=1e-12)
    expected_sharp = sum(u ** Omega(e.factorization) for e in enumerate_upto(fib, x))
    assert float(weighted_sum(fib, x, u, "Omega", "sharp")) == pytest.approx(
        expected_sharp, rel=1e-12)


def test_weighted_sum_validation(fib):
    with pytest.raises(DomainError):
        weighted_sum(fib, 10, -1.0, "omega", "sharp")
    with pytest.raises(DomainError):
        weighted_sum(fib, 10, 1.0, "zeta", "sharp")
    with pytest.raises(DomainError):
        weighted_sum(fib, 0, 1.0, "omega", "sharp")


def test_histogram_x10(fib):
    assert histogram(fib, 10, "Omega").counts == {0: 1, 1: 3, 2: 4, 3: 1}
    # elements 2, 3, 4, 5, 8, 9 all use a single generator; 6 and 10 use two
    assert histogram(fib, 10, "omega").counts == {0: 1, 1: 6, 2: 2}
    assert histogram(fib, 1, "omega").counts == {0: 1}
    assert histogram(fib, 1, "Omega").counts == {0: 1}


def test_histogram_totals(fib):
    for x in (10, 100, 10**4, 10**6):
        assert histogram(fib, x, "omega").total == count_upto(fib, x)
        assert histogram(fib, x, "Omega").total == count_upto(fib, x)


def test_stat_arrays_match_enumeration(fib):
    om, Om = stat_arrays(fib, 3000)
    els = enumerate_upto(fib, 3000)
    assert len(om) == len(els)
    assert sorted(om) == sorted(omega(e.factorization) for e in els)
    assert sorted(Om) == sorted(Omega(e.factorization) for e in els)


# -- resource guard ----------------------------------------------------------------


def test_resource_cap(fib):
    with pytest.raises(ResourceCapError):
        enumerate_upto(fib, 10**6, cap=100)
    with pytest.raises(ResourceCapError):
        count_upto(fib, 10**6, cap=100)
    with pytest.raises(ResourceCapError):
        stat_arrays(fib, 10**6, cap=100)
