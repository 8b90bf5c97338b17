import math
import random

import pytest
from mpmath import mp, mpf

from lucasmonoid.errors import DomainError
from lucasmonoid.factorint import factorize
from lucasmonoid.params import LucasParams, from_preset
from lucasmonoid.sequence import (
    build_generator_set,
    closed_form_value,
    has_primitive_divisor,
    log_term_value,
    lucas_term,
    primitive_divisor,
    primitive_part,
    _raw_values,
    v0_bound,
)

PARAM_GRID = [(1, -1), (2, -1), (3, 2), (1, -2), (3, -1), (5, 2), (4, 1), (7, 3)]


def valid_random_params(seed: int, count: int = 3) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = rng.randrange(1, 21)
        q = rng.randrange(-20, 21)
        try:
            LucasParams(p, q)
        except DomainError:
            continue
        out.append((p, q))
    return out


# -- parameter validation -----------------------------------------------------


@pytest.mark.parametrize("p,q", [(0, 1), (-1, -1), (2, 0), (2, -2), (1, 1), (2, 1)])
def test_degenerate_params_rejected(p, q):
    with pytest.raises(DomainError):
        LucasParams(p, q)


def test_root_identities():
    for p, q in PARAM_GRID:
        params = LucasParams(p, q)
        assert params.phi > abs(params.phibar) > 0
        with mp.workprec(300):
            assert abs(params.phi + params.phibar - p) < mpf(2) ** -240
            assert abs(params.phi * params.phibar - q) < mpf(2) ** -230


def test_presets():
    assert from_preset("fibonacci").p_sum == 1
    assert from_preset("pell").q_prod == -1
    assert from_preset("mersenne").phi == 2
    with pytest.raises(DomainError):
        from_preset("nope")


# -- terms ---------------------------------------------------------------------


def test_term_examples():
    assert lucas_term(from_preset("fibonacci"), 10).value == 55
    assert lucas_term(from_preset("pell"), 1).value == 1
    # direct-exponentiation oracle for the Mersenne case
    assert lucas_term(from_preset("mersenne"), 5).value == 2**5 - 1
    with pytest.raises(DomainError):
        lucas_term(from_preset("fibonacci"), 0)


def test_recurrence_matches_closed_form():
    for p, q in PARAM_GRID:
        params = LucasParams(p, q)
        seq = _raw_values(params, 500)
        for n in list(range(1, 30)) + [100, 250, 500]:
            assert closed_form_value(params, n) == seq[n]


def test_log_value_geometric_agreement():
    # |log v_l - (l log phi - log(phi - phibar))| vanishes geometrically
    for name in ("fibonacci", "pell", "mersenne"):
        params = from_preset(name)
        for ell in (80, 120, 200):
            lv = log_term_value(params, ell)
            ideal = ell * params.log_phi - params.log_root_gap
            assert abs(lv - ideal) < 1e-9


def test_log_value_matches_exact_log():
    params = from_preset("fibonacci")
    seq = _raw_values(params, 60)
    with mp.workprec(260):
        for n in (3, 10, 25, 60):
            assert abs(log_term_value(params, n) - mp.log(seq[n])) < mpf(2) ** -200


# -- primitive divisors ---------------------------------------------------------


def test_primitive_divisor_examples():
    fib = from_preset("fibonacci")
    assert primitive_divisor(fib, 7) == 13
    assert primitive_divisor(fib, 12) is None
    assert primitive_divisor(fib, 6) is None
    assert primitive_divisor(fib, 1) is None
    assert primitive_divisor(fib, 2) is None  # v_2 = 1
    mers = from_preset("mersenne")
    # 13 | 2^12 - 1 and the multiplicative order of 2 mod 13 is 12
    assert pow(2, 12, 13) == 1 and all(pow(2, j, 13) != 1 for j in range(1, 12))
    assert primitive_divisor(mers, 12) == 13


def brute_force_primitive(params, n: int, seq) -> int | None:
    """Oracle: factor v_n completely, test each prime against all earlier terms."""
    for p in sorted(factorize(seq[n]).factors):
        if all(seq[j] % p for j in range(1, n)):
            return p
    return None


@pytest.mark.parametrize("name", ["fibonacci", "mersenne", "pell"])
def test_primitive_divisor_against_brute_force(name):
    params = from_preset(name)
    seq = _raw_values(params, 40)
    for n in range(1, 41):
        assert primitive_divisor(params, n, seq) == brute_force_primitive(params, n, seq)


@pytest.mark.parametrize("name", ["fibonacci", "mersenne", "pell"])
def test_witness_property_to_60(name):
    params = from_preset(name)
    seq = _raw_values(params, 60)
    for n in range(3, 61):
        p = primitive_divisor(params, n, seq)
        if p is None:
            assert n in (6, 12)
            continue
        assert seq[n] % p == 0
        assert all(seq[j] % p for j in range(1, n))


def test_carmichael_presence_13_to_300():
    pairs = [(1, -1), (2, -1), (3, 2), (1, -2), (5, 2)]
    for p, q in pairs:
        params = LucasParams(p, q)
        seq = _raw_values(params, 300)
        for n in range(13, 301):
            assert has_primitive_divisor(params, n, seq), (p, q, n)


def test_primitive_part_multiplicity():
    # a prime dividing an earlier term is stripped entirely, even at higher power
    fib = from_preset("fibonacci")
    seq = _raw_values(fib, 12)
    assert primitive_part(fib, 6, seq) == 1  # v_6 = 8 = 2^3, 2 | v_3
    assert primitive_part(fib, 12, seq) == 1  # v_12 = 144 = 2^4 3^2


# -- generator set ---------------------------------------------------------------


def test_f0_fibonacci(fib):
    assert [g.value for g in fib.f0] == [2, 3, 5, 13, 21, 34, 55, 89]
    assert [g.index for g in fib.f0] == [3, 4, 5, 7, 8, 9, 10, 11]


def test_f0_mersenne(mersenne):
    assert [g.value for g in mersenne.f0] == [3, 7, 15, 31, 127, 255, 511, 1023, 2047, 4095]


def test_f0_brute_force_random_params():
    for p, q in valid_random_params(2024, 3):
        params = LucasParams(p, q)
        gens = build_generator_set(params)
        seq = _raw_values(params, 12)
        expected = [
            n
            for n in range(1, 13)
            if seq[n] > 1 and brute_force_primitive(params, n, seq) is not None
        ]
        assert [g.index for g in gens.f0] == expected
        assert all(g.value >= 2 for g in gens.f0)


def test_v1_never_a_generator(fib, mersenne, pell):
    for gens in (fib, mersenne, pell):
        assert 1 not in {g.index for g in gens.f0}
        assert all(g.value >= 2 for g in gens.f0)


def test_v0_values(fib, mersenne):
    # min over head logs and the idealized index-13 log
    assert abs(float(v0_bound(fib)) - math.log(2)) < 1e-12
    assert abs(float(v0_bound(mersenne)) - math.log(3)) < 1e-12
    for gens in (fib, mersenne):
        assert float(v0_bound(gens)) <= math.log(min(g.value for g in gens.f0)) + 1e-15


def test_v0_is_min_of_all_candidates(fib):
    params = fib.params
    candidates = [mp.log(mpf(g.value)) for g in fib.f0]
    candidates.append(13 * params.log_phi - params.log_root_gap)
    assert abs(v0_bound(fib) - min(candidates)) < mpf(2) ** -200


def test_tail_generator_materialization(fib):
    g13 = fib.generator(13)
    assert g13.value == 233 and g13.primitive_prime == 233
    g14 = fib.generator(14)
    assert g14.value == 377 and g14.primitive_prime == 29
    assert fib.generator(14) is g14  # cached
    with pytest.raises(DomainError):
        fib.generator(6)


def test_value_pairs_and_logs(fib):
    pairs = fib.value_index_pairs_upto(400)
    assert pairs[0] == (2, 3) and pairs[-1] == (377, 14)
    assert [v for v, _ in pairs] == sorted(v for v, _ in pairs)
    logs = fib.float_log_array(12)
    assert logs[0] == pytest.approx(math.log(2), abs=1e-14)
    assert logs[8] == pytest.approx(math.log(233), abs=1e-12)
    assert all(a < b for a, b in zip(logs, logs[1:]))


def test_json_serialization(fib):
    d = fib.to_json_dict()
    assert d["P"] == 1 and d["Q"] == -1
    assert [int(e["value"]) for e in d["f0"]] == [2, 3, 5, 13, 21, 34, 55, 89]
    assert all(int(e["primitive_divisor"]) > 1 for e in d["f0"])
