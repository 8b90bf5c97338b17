"""Sequence parameters (P, Q) and the derived real roots.

The sequence is defined by the integer pair P = phi + phibar and
Q = phi * phibar, where phi > |phibar| > 0 are distinct real roots of
X^2 - P X + Q.  Terms are (phi^n - phibar^n) / (phi - phibar).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from mpmath import mp, mpf, sqrt as mp_sqrt, log as mp_log

from .errors import DomainError

DEFAULT_PRECISION_BITS = 256

PRESETS: dict[str, tuple[int, int]] = {
    "fibonacci": (1, -1),
    "pell": (2, -1),
    "mersenne": (3, 2),
}


@dataclass(frozen=True)
class LucasParams:
    """Validated parameter pair with high-precision roots.

    Rejected at construction: P <= 0, Q = 0, gcd(P, Q) != 1, and
    P^2 <= 4Q (complex or repeated roots).
    """

    p_sum: int
    q_prod: int
    precision_bits: int = DEFAULT_PRECISION_BITS
    phi: mpf = field(init=False, repr=False, compare=False)
    phibar: mpf = field(init=False, repr=False, compare=False)
    log_phi: mpf = field(init=False, repr=False, compare=False)
    log_root_gap: mpf = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        p, q = self.p_sum, self.q_prod
        if not isinstance(p, int) or not isinstance(q, int):
            raise DomainError("P and Q must be integers")
        if p <= 0:
            raise DomainError(f"P must be positive, got {p}")
        if q == 0:
            raise DomainError("Q must be nonzero")
        if math.gcd(p, q) != 1:
            raise DomainError(f"P and Q must be coprime, got gcd = {math.gcd(p, q)}")
        if p * p <= 4 * q:
            raise DomainError(f"P^2 - 4Q must be positive, got {p * p - 4 * q}")
        if self.precision_bits < 64:
            raise DomainError("precision_bits must be at least 64")
        with mp.workprec(self.precision_bits + 16):
            disc = mp_sqrt(mpf(p) * p - 4 * q)
            phi = (p + disc) / 2
            phibar = (p - disc) / 2
            # Standing hypothesis phi > |phibar| > 0 must hold after root
            # extraction; it follows from P >= 1 and Q != 0.
            if not (phi > abs(phibar) > 0):
                raise DomainError("roots violate phi > |phibar| > 0")
            if abs(phi + phibar - p) > mpf(2) ** (-self.precision_bits + 8):
                raise DomainError("root sum does not reproduce P")
            if abs(phi * phibar - q) > abs(mpf(q)) * mpf(2) ** (-self.precision_bits + 8):
                raise DomainError("root product does not reproduce Q")
            object.__setattr__(self, "phi", phi)
            object.__setattr__(self, "phibar", phibar)
            object.__setattr__(self, "log_phi", mp_log(phi))
            object.__setattr__(self, "log_root_gap", mp_log(phi - phibar))

    @property
    def root_gap(self) -> mpf:
        """phi - phibar, the denominator of the closed form."""
        return self.phi - self.phibar


def from_preset(name: str, precision_bits: int = DEFAULT_PRECISION_BITS) -> LucasParams:
    try:
        p, q = PRESETS[name.lower()]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return LucasParams(p, q, precision_bits)
