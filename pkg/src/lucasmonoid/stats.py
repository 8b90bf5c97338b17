"""Empirical distributions of the factor-count statistics and the
Monte Carlo limit law.

The distinct-factor count, normalized as (omega - a1 sqrt(L)) /
(sqrt(a2) L^(1/4)) with L = log x, is compared against the standard normal.
The with-multiplicity count, normalized as
(Omega - (a1/2) sqrt(L) log L - b1 sqrt(L)) / (b2 sqrt(L)), is compared
against Monte Carlo draws of the limit sum over generators m of
(X_m - 1/log m) with X_m exponential of rate log m.

The stated Gaussian limit integral for the distinct-factor law is written
against the standard normal CDF; a lower limit of 0 instead of -infinity in
a source display is treated as a typo and not reproduced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import DEFAULT_PRECISION, ConstantsBundle, Precision, constants_bundle
from .errors import ConfigError, DomainError
from .monoid import DEFAULT_ELEMENT_CAP, stat_arrays
from .sequence import GeneratorSet

DEFAULT_SEED = 20260810
DEFAULT_TAIL_VAR_TARGET = 1e-4

_erf_vec = np.vectorize(math.erf)


def normal_cdf(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + _erf_vec(np.asarray(z, dtype=float) / math.sqrt(2.0)))


def skewness(values: np.ndarray) -> float:
    v = np.asarray(values, dtype=float)
    m = v.mean()
    s2 = v.var()
    if s2 == 0:
        return 0.0
    return float(np.mean((v - m) ** 3) / s2**1.5)


def ks_statistic(sample, reference) -> float:
    """Kolmogorov-Smirnov sup-distance of empirical CDFs.

    `reference` is either a callable CDF or a second sample.
    """
    a = np.sort(np.asarray(sample, dtype=float))
    if a.size == 0:
        raise DomainError("KS statistic requires a nonempty sample")
    if callable(reference):
        cdf = np.asarray(reference(a), dtype=float)
        i = np.arange(1, a.size + 1, dtype=float)
        return float(
            max(
                np.max(np.abs(i / a.size - cdf)),
                np.max(np.abs((i - 1) / a.size - cdf)),
            )
        )
    b = np.sort(np.asarray(reference, dtype=float))
    if b.size == 0:
        raise DomainError("KS statistic requires a nonempty reference sample")
    grid = np.concatenate([a, b])
    grid.sort(kind="mergesort")
    ca = np.searchsorted(a, grid, side="right") / a.size
    cb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(ca - cb)))


@dataclass(frozen=True)
class EmpiricalSummary:
    """Moments of the normalized statistic over the monoid up to x."""

    kind: str
    x: int
    n_elements: int
    mean: float
    variance: float
    skewness: float
    ks_distance_to_reference: float
    raw_mean: float

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "x": self.x,
            "n_elements": self.n_elements,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "ks_distance_to_reference": self.ks_distance_to_reference,
            "raw_mean": self.raw_mean,
        }


def normalized_omega(gens: GeneratorSet, x: int, bundle: ConstantsBundle | None = None,
                     cap: int = DEFAULT_ELEMENT_CAP) -> np.ndarray:
    """Normalized distinct-factor values for every element <= x."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    if bundle is None:
        bundle = constants_bundle(gens)
    om, _ = stat_arrays(gens, x, cap)
    if x == 1:
        return np.zeros(1)
    L = math.log(x)
    center = float(bundle.a1) * math.sqrt(L)
    scale = math.sqrt(float(bundle.a2)) * L**0.25
    return (om - center) / scale


def normalized_Omega(gens: GeneratorSet, x: int, bundle: ConstantsBundle | None = None,
                     cap: int = DEFAULT_ELEMENT_CAP) -> np.ndarray:
    """Normalized with-multiplicity values for every element <= x (x >= 16)."""
    if x < 16:
        raise DomainError(f"Omega normalization needs x >= 16, got {x}")
    if bundle is None:
        bundle = constants_bundle(gens)
    _, Om = stat_arrays(gens, x, cap)
    L = math.log(x)
    center = float(bundle.a1) / 2 * math.sqrt(L) * math.log(L) + float(bundle.b1) * math.sqrt(L)
    scale = float(bundle.b2) * math.sqrt(L)
    return (Om - center) / scale


def omega_summary(gens: GeneratorSet, x: int, bundle: ConstantsBundle | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> EmpiricalSummary:
    """Summary of the normalized distinct-factor count against N(0, 1)."""
    if bundle is None:
        bundle = constants_bundle(gens)
    z = normalized_omega(gens, x, bundle, cap)
    om_raw_mean = float(z.mean() * (math.sqrt(float(bundle.a2)) * math.log(x) ** 0.25)
                        + float(bundle.a1) * math.sqrt(math.log(x))) if x > 1 else 0.0
    return EmpiricalSummary(
        kind="omega",
        x=x,
        n_elements=int(z.size),
        mean=float(z.mean()),
        variance=float(z.var()),
        skewness=skewness(z),
        ks_distance_to_reference=ks_statistic(z, normal_cdf),
        raw_mean=om_raw_mean,
    )


def Omega_summary(gens: GeneratorSet, x: int, reference_draws: np.ndarray | None = None,
                  bundle: ConstantsBundle | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> EmpiricalSummary:
    """Summary of the normalized with-multiplicity count.

    The reference CDF is the empirical CDF of limit-law draws; when none are
    supplied, a default-seeded sample is drawn.
    """
    if bundle is None:
        bundle = constants_bundle(gens)
    z = normalized_Omega(gens, x, bundle, cap)
    if reference_draws is None:
        reference_draws = sample_limit_law(gens, LimitLawConfig()).draws
    L = math.log(x)
    raw_mean = float(
        z.mean() * float(bundle.b2) * math.sqrt(L)
        + float(bundle.a1) / 2 * math.sqrt(L) * math.log(L)
        + float(bundle.b1) * math.sqrt(L)
    )
    return EmpiricalSummary(
        kind="Omega",
        x=x,
        n_elements=int(z.size),
        mean=float(z.mean()),
        variance=float(z.var()),
        skewness=skewness(z),
        ks_distance_to_reference=ks_statistic(z, reference_draws),
        raw_mean=raw_mean,
    )


# ---------------------------------------------------------------------------
# limit-law Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitLawConfig:
    """Sampler controls; truncation_M = None derives the cutoff from the
    tail-variance target (the omitted summands are centered, so truncation
    only biases the variance)."""

    truncation_M: int | None = None
    n_samples: int = 100_000
    rng_seed: int = DEFAULT_SEED
    tail_var_target: float = DEFAULT_TAIL_VAR_TARGET


@dataclass(frozen=True)
class LimitLawSample:
    draws: np.ndarray
    config: LimitLawConfig
    truncation_M: int
    truncated_variance: float


def tail_variance_bound(gens: GeneratorSet, first_excluded_log: float) -> float:
    """Upper bound for sum of 1/log(m)^2 over generators beyond a log cutoff.

    First excluded term plus an integral comparison with step log(phi).
    """
    lv = float(first_excluded_log)
    logphi = float(gens.params.log_phi)
    return 1.0 / lv**2 + 1.0 / (logphi * lv)


def limit_law_logs(gens: GeneratorSet, config: LimitLawConfig) -> np.ndarray:
    """float64 generator logs for the truncated limit sum, tail-checked."""
    logphi = float(gens.params.log_phi)
    if config.truncation_M is not None:
        logs = gens.float_log_array(config.truncation_M)
        if tail_variance_bound(gens, logs[-1] + logphi) > config.tail_var_target:
            raise ConfigError(
                f"truncation_M = {config.truncation_M} leaves tail variance above "
                f"{config.tail_var_target}"
            )
        return logs
    head = [float(g.term.log_value) for g in gens.f0]
    gap = float(gens.params.log_root_gap)
    ratio = float(gens.params.phibar / gens.params.phi)
    logs = list(head)
    j = 13
    while True:
        lv = j * logphi - gap
        if abs(ratio) ** j > 1e-18:
            lv += math.log1p(-(ratio**j))
        logs.append(lv)
        if tail_variance_bound(gens, lv + logphi) < config.tail_var_target:
            return np.array(logs)
        j += 1


def sample_limit_law(gens: GeneratorSet, config: LimitLawConfig | None = None) -> LimitLawSample:
    """Draws of the truncated centered sum over generators of
    (X_m - 1/log m), X_m exponential with rate log m.

    Counter-based Philox stream keyed by rng_seed; identical configs give
    identical draws.
    """
    if config is None:
        config = LimitLawConfig()
    if config.n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    logs = limit_law_logs(gens, config)
    inv = 1.0 / logs
    rng = np.random.Generator(np.random.Philox(config.rng_seed))
    acc = np.zeros(config.n_samples)
    block = 512
    for i0 in range(0, inv.size, block):
        w = inv[i0 : i0 + block]
        E = rng.standard_exponential((w.size, config.n_samples))
        acc += w @ E - w.sum()
    return LimitLawSample(
        draws=acc,
        config=config,
        truncation_M=int(logs.size),
        truncated_variance=float(np.sum(inv**2)),
    )


# ---------------------------------------------------------------------------
# moment generating function check
# ---------------------------------------------------------------------------


def mgf_check(
    gens: GeneratorSet,
    x: int,
    t_grid,
    mode: str = "omega",
    bundle: ConstantsBundle | None = None,
    cap: int = DEFAULT_ELEMENT_CAP,
) -> list[tuple[float, float, float]]:
    """Empirical E[exp(t Z)] of the normalized statistic vs its limit.

    omega mode: reference exp(t^2/2); the window keeps the implied raw
    argument u = exp(t / (sqrt(a2) L^(1/4))) inside (0, 2).
    Omega mode: reference is the truncated limit-law MGF
    prod exp(-t/log m)/(1 - t/log m); window |t| <= v0/2.
    """
    if bundle is None:
        bundle = constants_bundle(gens)
    if mode == "omega":
        z = normalized_omega(gens, x, bundle, cap)
        L = math.log(x)
        raw_scale = math.sqrt(float(bundle.a2)) * L**0.25
        rows = []
        for t in t_grid:
            if abs(t) / raw_scale >= math.log(2.0):
                raise DomainError(
                    f"t = {t} pushes u = exp(t/{raw_scale:.4f}) outside (0, 2)"
                )
            emp = float(np.mean(np.exp(t * z)))
            rows.append((float(t), emp, math.exp(t * t / 2.0)))
        return rows
    if mode == "Omega":
        z = normalized_Omega(gens, x, bundle, cap)
        v0 = float(gens.v0)
        logs = limit_law_logs(gens, LimitLawConfig())
        rows = []
        for t in t_grid:
            if abs(t) > v0 / 2.0:
                raise DomainError(f"|t| must be at most v0/2 = {v0 / 2:.4f}, got {t}")
            emp = float(np.mean(np.exp(t * z)))
            ref = float(np.exp(np.sum(-t / logs - np.log1p(-t / logs))))
            rows.append((float(t), emp, ref))
        return rows
    raise DomainError(f"unknown mode {mode!r}")
