"""Special functions and the analytic constants of the counting theorems.

The central object is the zeta-like series over generator logarithms,

    L(s, v) = sum over generators m of (log m - v)^(-s),

which continues meromorphically via the Hurwitz zeta function: the tail
logs sit geometrically close to the arithmetic progression
j*log(phi) - log(phi - phibar), so

    L(s, v) = zeta(s, alpha(v)) / log(phi)^s  +  head sum  +  tail correction,

with alpha(v) = 13 - (log(phi - phibar) + v)/log(phi).  Everything else in
this module (the saddle scale a(u), the constants b, c(u), kappa1, and the
limit-law normalizers) is assembled from that decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import (
    mp,
    mpf,
    mpc,
    bernoulli,
    expm1,
    factorial,
    gamma,
    log as mp_log,
    log1p,
    loggamma,
    power,
    psi,
    sqrt as mp_sqrt,
)

from .errors import ConfigError, DomainError, PoleError
from .sequence import GeneratorSet, TAIL_MIN_INDEX


@dataclass(frozen=True)
class Precision:
    """Error targets for series evaluation."""

    target_rel_err: float = 1e-30
    max_series_terms: int = 10**6
    em_order: int = 8  # number of even Bernoulli corrections in Euler-Maclaurin

    def __post_init__(self) -> None:
        if not self.target_rel_err > 0:
            raise DomainError("target_rel_err must be positive")
        if self.max_series_terms < 1:
            raise DomainError("max_series_terms must be >= 1")
        if self.em_order < 1:
            raise DomainError("em_order must be >= 1")

    def working_bits(self, base_bits: int = 0) -> int:
        return max(base_bits, int(-math.log2(self.target_rel_err)) + 64)


DEFAULT_PRECISION = Precision()


def _is_nonpositive_int(z) -> bool:
    if isinstance(z, mpc) and z.imag != 0:
        return False
    x = mpf(z.real) if isinstance(z, mpc) else mpf(z)
    return x <= 0 and x == mp.floor(x)


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------


def hurwitz_zeta(s, alpha, precision: Precision = DEFAULT_PRECISION):
    """Hurwitz zeta sum_{k>=0} (k + alpha)^(-s), continued in s.

    Euler-Maclaurin with adaptive shift: the defining sum is taken to a shift
    N, then the integral term, the half term, and em_order even-indexed
    Bernoulli corrections are added.  N is doubled until the last correction
    drops below the error target.
    """
    with mp.workprec(precision.working_bits()):
        s = mpc(s) if isinstance(s, complex) else mp.convert(s)
        alpha = mpc(alpha) if isinstance(alpha, complex) else mp.convert(alpha)
        if s == 1:
            raise PoleError("Hurwitz zeta has a pole at s = 1")
        if _is_nonpositive_int(alpha):
            raise DomainError(f"alpha must avoid 0, -1, -2, ...; got {alpha}")
        tol = mpf(precision.target_rel_err)
        M = precision.em_order
        re_alpha = alpha.real if isinstance(alpha, mpc) else alpha
        base = max(int(2 * abs(s)) + 20, int(2 - re_alpha) + 4, 8)
        N = base
        for _ in range(8):
            head = mpf(0)
            for k in range(N):
                head += power(k + alpha, -s)
            na = N + alpha
            total = head + power(na, 1 - s) / (s - 1) + power(na, -s) / 2
            rise = s
            pw = power(na, -s - 1)
            na2 = power(na, -2)
            last = mpf(0)
            for j in range(1, M + 1):
                term = bernoulli(2 * j) / factorial(2 * j) * rise * pw
                total += term
                last = abs(term)
                rise *= (s + 2 * j - 1) * (s + 2 * j)
                pw *= na2
            if last <= tol * (abs(total) + tol):
                return total
            N *= 2
        raise ConfigError("Euler-Maclaurin shift failed to meet the error target")


def hurwitz_zeta_sderiv_at0(alpha, precision: Precision = DEFAULT_PRECISION):
    """d/ds of the Hurwitz zeta at s = 0: log Gamma(alpha) - log(2 pi)/2."""
    with mp.workprec(precision.working_bits()):
        alpha = mpc(alpha) if isinstance(alpha, complex) else mp.convert(alpha)
        re_alpha = alpha.real if isinstance(alpha, mpc) else alpha
        if not re_alpha > 0:
            raise DomainError(f"alpha must have positive real part, got {alpha}")
        return loggamma(alpha) - mp_log(2 * mp.pi) / 2


def polylog(order, w, precision: Precision = DEFAULT_PRECISION):
    """Polylogarithm sum_{j>=1} w^j / j^order for |w| < 1, by direct series."""
    with mp.workprec(precision.working_bits()):
        order = mp.convert(order)
        w = mp.convert(w)
        if not abs(w) < 1:
            raise DomainError(f"polylog series requires |w| < 1, got |w| = {abs(w)}")
        if w == 0:
            return mpf(0)
        tol = mpf(precision.target_rel_err)
        acc = mpf(0)
        wj = mpf(1) if not isinstance(w, mpc) else mpc(1)
        for j in range(1, precision.max_series_terms + 1):
            wj *= w
            term = wj * power(j, -order)
            acc += term
            if abs(term) <= tol * (abs(acc) + tol) and j > 4:
                return acc
        raise ConfigError("polylog series did not converge within max_series_terms")


def riemann_zeta(s, precision: Precision = DEFAULT_PRECISION):
    return hurwitz_zeta(s, 1, precision)


def f_star(s, u, precision: Precision = DEFAULT_PRECISION):
    """Mellin kernel (zeta(s+1) - Li_{s+1}(1 - u)) * Gamma(s).

    Defined for |1 - u| < 1 and s away from the nonpositive integers, where
    Gamma has its poles.
    """
    with mp.workprec(precision.working_bits()):
        s = mpc(s) if isinstance(s, complex) else mp.convert(s)
        u = mp.convert(u)
        if not abs(1 - u) < 1:
            raise DomainError(f"require |1 - u| < 1, got u = {u}")
        if _is_nonpositive_int(s):
            raise PoleError(f"Gamma factor has a pole at s = {s}")
        li = polylog(s + 1, 1 - u, precision) if u != 1 else mpf(0)
        return (riemann_zeta(s + 1, precision) - li) * gamma(s)


# ---------------------------------------------------------------------------
# the generator-log zeta function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaDecomposition:
    """Three-part value of the continued series L(s, v).

    hurwitz_part carries the arithmetic-progression tail via the Hurwitz
    zeta, f0_part the finite head sum, and tail_correction the geometrically
    convergent difference between true tail logs and the progression.
    """

    hurwitz_part: object
    f0_part: object
    tail_correction: object

    @property
    def total(self):
        return self.hurwitz_part + self.f0_part + self.tail_correction


def _check_v(gens: GeneratorSet, v) -> None:
    if not abs(mp.convert(v)) < gens.v0:
        raise DomainError(f"|v| must be below v0 = {gens.v0}, got {v}")


def alpha_of_v(gens: GeneratorSet, v):
    """alpha(v) = 13 - (log(phi - phibar) + v)/log(phi); real part positive."""
    _check_v(gens, v)
    params = gens.params
    with mp.workprec(params.precision_bits + 16):
        v = mpc(v) if isinstance(v, complex) else mp.convert(v)
        a = TAIL_MIN_INDEX - (params.log_root_gap + v) / params.log_phi
        re_a = a.real if isinstance(a, mpc) else a
        if not re_a > 0:
            raise DomainError(f"alpha(v) must have positive real part, got {a}")
        return a


def _work_bits(gens: GeneratorSet, precision: Precision) -> int:
    return precision.working_bits(gens.params.precision_bits)


def log_zeta(gens: GeneratorSet, s, v=0, precision: Precision = DEFAULT_PRECISION) -> LambdaDecomposition:
    """The continued series L(s, v) = sum (log m - v)^(-s) over generators.

    Meromorphic in s with one simple pole at s = 1 (residue 1/log phi).
    For Re s > 1 the value agrees with the defining Dirichlet-type series.
    """
    with mp.workprec(_work_bits(gens, precision)):
        s = mpc(s) if isinstance(s, complex) else mp.convert(s)
        if s == 1:
            raise PoleError("simple pole at s = 1")
        v = mpc(v) if isinstance(v, complex) else mp.convert(v)
        _check_v(gens, v)
        params = gens.params
        logphi = params.log_phi
        a = alpha_of_v(gens, v)
        hur = power(logphi, -s) * hurwitz_zeta(s, a, precision)
        head = mpf(0)
        for g in gens.f0:
            head += power(g.term.log_value - v, -s)
        tol = mpf(precision.target_rel_err)
        scale = abs(hur) + abs(head) + 1
        tail = mpf(0)
        j = TAIL_MIN_INDEX
        while True:
            lattice = (j - TAIL_MIN_INDEX + a) * logphi  # = j log phi - log gap - v
            eps = gens.log_value(j) - (j * logphi - params.log_root_gap)
            term = power(lattice, -s) * expm1(-s * log1p(eps / lattice))
            tail += term
            if abs(term) <= tol * scale and j >= TAIL_MIN_INDEX + 8:
                break
            j += 1
            if j - TAIL_MIN_INDEX > precision.max_series_terms:
                raise ConfigError("tail correction did not converge")
        return LambdaDecomposition(hur, head, tail)


def log_zeta_at0(gens: GeneratorSet, v=0):
    """Closed form of L(0, v): |head| - 25/2 + (log(phi-phibar) + v)/log(phi)."""
    _check_v(gens, v)
    params = gens.params
    with mp.workprec(params.precision_bits + 16):
        v = mpc(v) if isinstance(v, complex) else mp.convert(v)
        return len(gens.f0) - mpf(25) / 2 + (params.log_root_gap + v) / params.log_phi


def log_zeta_sderiv_at0(gens: GeneratorSet, v=0, precision: Precision = DEFAULT_PRECISION):
    """d/ds of L(s, v) at s = 0, from the three-part decomposition.

    Head and tail are differentiated termwise; the Hurwitz part contributes
    -log(log phi) (1/2 - alpha(v)) + log Gamma(alpha(v)) - log(2 pi)/2.
    The tail terms decay geometrically and are truncated at the error target.
    """
    with mp.workprec(_work_bits(gens, precision)):
        v = mpc(v) if isinstance(v, complex) else mp.convert(v)
        _check_v(gens, v)
        params = gens.params
        logphi = params.log_phi
        a = alpha_of_v(gens, v)
        part_hz = -mp_log(logphi) * (mpf(1) / 2 - a) + loggamma(a) - mp_log(2 * mp.pi) / 2
        part_head = mpf(0)
        for g in gens.f0:
            part_head -= mp_log(g.term.log_value - v)
        tol = mpf(precision.target_rel_err)
        part_tail = mpf(0)
        j = TAIL_MIN_INDEX
        while True:
            lattice = (j - TAIL_MIN_INDEX + a) * logphi
            eps = gens.log_value(j) - (j * logphi - params.log_root_gap)
            term = -log1p(eps / lattice)
            part_tail += term
            if abs(term) <= tol and j >= TAIL_MIN_INDEX + 8:
                break
            j += 1
            if j - TAIL_MIN_INDEX > precision.max_series_terms:
                raise ConfigError("tail of the s-derivative did not converge")
        return part_hz + part_head + part_tail


def tail_reciprocal_log_sum(gens: GeneratorSet, precision: Precision = DEFAULT_PRECISION):
    """sum_{k>=1} (1/log v_{k+13} - 1/(k log phi)), convergence accelerated.

    Splitting 1/log v_{k+13} against 1/((k + alpha(0)) log phi) leaves a
    geometrically small residue; the split-off harmonic-like part is the
    digamma value -(psi(1 + alpha(0)) + gamma)/log(phi).
    """
    with mp.workprec(_work_bits(gens, precision)):
        params = gens.params
        logphi = params.log_phi
        beta = alpha_of_v(gens, mpf(0))
        main = (-psi(0, 1 + beta) - mp.euler) / logphi
        tol = mpf(precision.target_rel_err)
        corr = mpf(0)
        k = 1
        while True:
            term = 1 / gens.log_value(k + TAIL_MIN_INDEX) - 1 / ((k + beta) * logphi)
            corr += term
            if abs(term) <= tol and k >= 8:
                break
            k += 1
            if k > precision.max_series_terms:
                raise ConfigError("reciprocal-log tail did not converge")
        return main + corr


def kappa1(gens: GeneratorSet, precision: Precision = DEFAULT_PRECISION):
    """Coefficient of the linear-in-v term of d/ds L(s, v) at s = 0.

    kappa1 = (gamma - log log phi)/log phi + sum over head of 1/log m
             + 1/log v_13 + tail reciprocal-log sum.
    """
    with mp.workprec(_work_bits(gens, precision)):
        params = gens.params
        logphi = params.log_phi
        total = (mp.euler - mp_log(logphi)) / logphi
        for g in gens.f0:
            total += 1 / g.term.log_value
        total += 1 / gens.log_value(TAIL_MIN_INDEX)
        total += tail_reciprocal_log_sum(gens, precision)
        return total


# ---------------------------------------------------------------------------
# saddle-point constants
# ---------------------------------------------------------------------------


def a_of_u(gens: GeneratorSet, u, precision: Precision = DEFAULT_PRECISION):
    """Saddle scale a(u) = (pi^2/6 - Li_2(1 - u)) / log(phi), for u in (0, 2)."""
    with mp.workprec(_work_bits(gens, precision)):
        u = mp.convert(u)
        if not (0 < u < 2):
            raise DomainError(f"a(u) requires u in (0, 2), got {u}")
        li = polylog(2, 1 - u, precision) if u != 1 else mpf(0)
        return (mp.pi**2 / 6 - li) / gens.params.log_phi


def b_const(gens: GeneratorSet):
    """The r-power exponent b = -|head| + 25/2 - log(phi-phibar)/log(phi)."""
    with mp.workprec(gens.params.precision_bits + 16):
        return -log_zeta_at0(gens, 0)


def c_of_u(gens: GeneratorSet, u, precision: Precision = DEFAULT_PRECISION):
    """c(u) = L(0,0) log(u) + d/ds L(s,0)|_{s=0}, analytic for |1-u| < 1."""
    with mp.workprec(_work_bits(gens, precision)):
        u = mp.convert(u)
        if not abs(1 - u) < 1:
            raise DomainError(f"c(u) requires |1 - u| < 1, got {u}")
        return log_zeta_at0(gens, 0) * mp_log(u) + log_zeta_sderiv_at0(gens, 0, precision)


def big_B(gens: GeneratorSet, v):
    """B(v) = -L(0, v); satisfies B(0) - B(v) = v / log(phi)."""
    return -log_zeta_at0(gens, v)


def big_C(gens: GeneratorSet, v, precision: Precision = DEFAULT_PRECISION):
    """C(v) = d/ds L(s, v) at s = 0."""
    return log_zeta_sderiv_at0(gens, v, precision)


@dataclass(frozen=True)
class ConstantsBundle:
    """Every theorem constant for one parameter pair.

    b1 is computed by two algebraically equivalent routes (the normalized
    statement formula and kappa1-based assembly); both are kept so the
    rearrangement can be checked.
    """

    log_phi: mpf
    A: mpf
    b: mpf
    k1: mpf
    kappa1: mpf
    a1: mpf
    a2: mpf
    b1_statement: mpf
    b1_proof: mpf
    b2: mpf
    achieved_precision: float

    @property
    def b1(self) -> mpf:
        return self.b1_statement

    @property
    def b1_route_difference(self) -> mpf:
        return self.b1_statement - self.b1_proof


def constants_bundle(gens: GeneratorSet, precision: Precision = DEFAULT_PRECISION) -> ConstantsBundle:
    """Evaluate all constants of the three limit theorems.

    k1 = (|head| - 13)/2 + log(phi-phibar)/(2 log phi) must satisfy the exact
    identity k1 = -(2b + 1)/4; it is asserted here to 1e-12.
    """
    with mp.workprec(_work_bits(gens, precision)):
        params = gens.params
        logphi = params.log_phi
        nf0 = len(gens.f0)
        k1 = mpf(nf0 - 13) / 2 + params.log_root_gap / (2 * logphi)
        b = b_const(gens)
        if abs(k1 + (2 * b + 1) / 4) > mpf("1e-12"):
            raise ConfigError("exponent identity k1 = -(2b+1)/4 violated")
        A = mp.pi**2 / (6 * logphi)
        a1 = mp_sqrt(6 / logphi) / mp.pi
        a2 = (mp.pi**2 - 6) / (2 * mp.pi**3) * mp_sqrt(6 / logphi)
        b2 = mp_sqrt(6 * logphi) / mp.pi
        kap = kappa1(gens, precision)
        b1_proof = (kap - mp_log(A) / (2 * logphi)) / mp_sqrt(A)
        head_sum = sum(1 / g.term.log_value for g in gens.f0)
        bracket = (
            (2 * mp.euler - mp_log(mp.pi**2 * logphi / 6)) / (2 * logphi)
            + head_sum
            + 1 / gens.log_value(TAIL_MIN_INDEX)
            + tail_reciprocal_log_sum(gens, precision)
        )
        b1_statement = mp_sqrt(6 * logphi) / mp.pi * bracket
        return ConstantsBundle(
            log_phi=logphi,
            A=A,
            b=b,
            k1=k1,
            kappa1=kap,
            a1=a1,
            a2=a2,
            b1_statement=b1_statement,
            b1_proof=b1_proof,
            b2=b2,
            achieved_precision=float(precision.target_rel_err),
        )
