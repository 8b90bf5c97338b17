"""Enumeration, membership, and factor statistics of the product monoid.

Primitive divisors force unique factorization over the generator set, so a
depth-first search over nondecreasing generator indices visits every element
of the monoid exactly once.  All counting walks share that search; statistics
(number of distinct factors, total multiplicity) ride along with the stack
frames instead of being recomputed.
"""

from __future__ import annotations

import weakref
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from .errors import DomainError, MembershipError, ResourceCapError
from .sequence import GeneratorSet

DEFAULT_ELEMENT_CAP = 10**8


@dataclass(frozen=True)
class Factorization:
    """Multiset of generator indices, stored nondecreasing with repeats."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a > b for a, b in zip(self.indices, self.indices[1:])):
            raise DomainError("factorization indices must be nondecreasing")

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class MonoidElement:
    value: int
    factorization: Factorization


@dataclass(frozen=True)
class Histogram:
    """Exact distribution of a factor statistic over the monoid up to x."""

    kind: str  # "omega" or "Omega"
    x: int
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def omega(f: Factorization) -> int:
    """Number of distinct generator indices."""
    return len(set(f.indices))


def Omega(f: Factorization) -> int:
    """Total number of generator factors, counted with multiplicity."""
    return len(f.indices)


def _check_bound(x: int) -> None:
    if x < 1:
        raise DomainError(f"bound must be >= 1, got {x}")


def enumerate_upto(
    gens: GeneratorSet, x: int, cap: int = DEFAULT_ELEMENT_CAP
) -> list[MonoidElement]:
    """All monoid elements <= x, ascending, each carrying its factorization."""
    _check_bound(x)
    values = gens.value_index_pairs_upto(x)
    out: list[tuple[int, tuple[int, ...]]] = []
    path: list[int] = []

    def walk(prod: int, lo: int) -> None:
        out.append((prod, tuple(path)))
        if len(out) > cap:
            raise ResourceCapError(f"element cap {cap} exceeded at x = {x}")
        for i in range(lo, len(values)):
            v, idx = values[i]
            nxt = prod * v
            if nxt > x:
                break
            path.append(idx)
            walk(nxt, i)
            path.pop()

    walk(1, 0)
    out.sort(key=lambda t: t[0])
    return [MonoidElement(v, Factorization(ix)) for v, ix in out]


def _count_subtree(gen_values: list[int], x: int, prod: int, lo: int, cap: int) -> int:
    count = 0
    stack = [(prod, lo)]
    while stack:
        p, i0 = stack.pop()
        count += 1
        if count > cap:
            raise ResourceCapError(f"element cap {cap} exceeded at x = {x}")
        for i in range(i0, len(gen_values)):
            nxt = p * gen_values[i]
            if nxt > x:
                break
            stack.append((nxt, i))
    return count


def count_upto(
    gens: GeneratorSet, x: int, cap: int = DEFAULT_ELEMENT_CAP, threads: int = 1
) -> int:
    """Number of monoid elements <= x, without storing them.

    With threads > 1 the independent first-generator subtrees are counted in
    parallel worker processes.
    """
    _check_bound(x)
    values = gens.values_upto(x)
    if threads <= 1 or len(values) < 2:
        return _count_subtree(values, x, 1, 0, cap)
    jobs = [(values, x, values[i], i, cap) for i in range(len(values))]
    total = 1  # the empty product
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for sub in pool.map(_count_subtree_star, jobs):
            total += sub
            if total > cap:
                raise ResourceCapError(f"element cap {cap} exceeded at x = {x}")
    return total


def _count_subtree_star(args) -> int:
    return _count_subtree(*args)


_membership_caches: "weakref.WeakKeyDictionary[GeneratorSet, dict]" = (
    weakref.WeakKeyDictionary()
)


def _membership_state(gens: GeneratorSet) -> dict:
    state = _membership_caches.get(gens)
    if state is None:
        state = {"memo": {1: True}, "values": [], "bound": 0}
        _membership_caches[gens] = state
    return state


def contains(gens: GeneratorSet, n: int) -> bool:
    """Membership test by memoized recursive divisibility.

    n belongs to the monoid iff some generator divides it with a member
    cofactor; uniqueness of factorization makes the search order irrelevant.
    """
    if n < 1:
        raise DomainError(f"membership requires n >= 1, got {n}")
    state = _membership_state(gens)
    if n > state["bound"]:
        state["values"] = gens.values_upto(n)
        state["bound"] = n
    memo: dict[int, bool] = state["memo"]
    values: list[int] = state["values"]

    def member(m: int) -> bool:
        known = memo.get(m)
        if known is not None:
            return known
        result = False
        for v in values:
            if v > m:
                break
            if m % v == 0 and member(m // v):
                result = True
                break
        memo[m] = result
        return result

    return member(n)


def factorize_element(gens: GeneratorSet, n: int) -> Factorization:
    """The unique factorization of a monoid element into generator indices."""
    if n < 1:
        raise DomainError(f"factorization requires n >= 1, got {n}")
    if not contains(gens, n):
        raise MembershipError(f"{n} is not an element of the monoid")
    pairs = gens.value_index_pairs_upto(n) if n > 1 else []
    indices: list[int] = []
    m = n
    pos = 0
    while m > 1:
        for i in range(pos, len(pairs)):
            v, idx = pairs[i]
            if v > m:
                break
            if m % v == 0 and contains(gens, m // v):
                indices.append(idx)
                m //= v
                pos = i  # factors are emitted in nondecreasing index order
                break
        else:  # pragma: no cover - contradicts membership
            raise MembershipError(f"no generator divides {m}")
    return Factorization(tuple(indices))


def weighted_sum(
    gens: GeneratorSet,
    x: int,
    u,
    statistic: str = "omega",
    weight: str = "sharp",
    cap: int = DEFAULT_ELEMENT_CAP,
) -> mpf:
    """Sum of u**statistic(n) over monoid elements n <= x.

    weight="smoothed" multiplies each term by (1 - n/x).  The sum is finite,
    so any u > 0 is admissible here; the admissibility windows of the
    asymptotic machinery live in the dirichlet module.
    """
    _check_bound(x)
    if statistic not in ("omega", "Omega"):
        raise DomainError(f"unknown statistic {statistic!r}")
    if weight not in ("sharp", "smoothed"):
        raise DomainError(f"unknown weight {weight!r}")
    if not u > 0:
        raise DomainError(f"u must be positive, got {u}")
    distinct = statistic == "omega"
    smoothed = weight == "smoothed"
    with mp.workprec(gens.params.precision_bits):
        uu = mpf(u)
        xx = mpf(x)
        powers: dict[int, mpf] = {0: mpf(1)}

        def u_pow(k: int) -> mpf:
            got = powers.get(k)
            if got is None:
                got = powers[k] = u_pow(k - 1) * uu
            return got

        values = gens.value_index_pairs_upto(x)
        total = mpf(0)
        count = 0
        # stack entries: (product, slot, last index, statistic value)
        stack = [(1, 0, -1, 0)]
        while stack:
            prod, i0, last, stat = stack.pop()
            count += 1
            if count > cap:
                raise ResourceCapError(f"element cap {cap} exceeded at x = {x}")
            term = u_pow(stat)
            if smoothed:
                term = term * (1 - prod / xx)
            total += term
            for i in range(i0, len(values)):
                v, idx = values[i]
                nxt = prod * v
                if nxt > x:
                    break
                bump = 1 if (not distinct or idx != last) else 0
                stack.append((nxt, i, idx, stat + bump))
        return total


def histogram(
    gens: GeneratorSet, x: int, kind: str, cap: int = DEFAULT_ELEMENT_CAP
) -> Histogram:
    """Exact distribution of omega or Omega over the monoid up to x."""
    _check_bound(x)
    if kind not in ("omega", "Omega"):
        raise DomainError(f"unknown statistic {kind!r}")
    om, Om = stat_arrays(gens, x, cap)
    data = om if kind == "omega" else Om
    return Histogram(kind=kind, x=x, counts=dict(Counter(int(v) for v in data)))


def stat_arrays(
    gens: GeneratorSet, x: int, cap: int = DEFAULT_ELEMENT_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """(omega, Omega) for every element <= x, in search order.

    Values are not stored, so this scales to bounds around 1e14.
    """
    _check_bound(x)
    values = [v for v, _ in gens.value_index_pairs_upto(x)]
    oms: list[int] = []
    Oms: list[int] = []
    stack = [(1, 0, -1, 0, 0)]
    while stack:
        prod, i0, last, om, Om = stack.pop()
        oms.append(om)
        Oms.append(Om)
        if len(oms) > cap:
            raise ResourceCapError(f"element cap {cap} exceeded at x = {x}")
        for i in range(i0, len(values)):
            nxt = prod * values[i]
            if nxt > x:
                break
            stack.append((nxt, i, i, om + (1 if i != last else 0), Om + 1))
    return np.array(oms, dtype=np.int64), np.array(Oms, dtype=np.int64)
