"""Free factorization monoid of a Lucas sequence.

Exact enumeration and factorization over the primitive-divisor generator
set, the analytic constants of the counting and limit theorems, numerical
verification of the generating-function machinery, and Monte Carlo sampling
of the with-multiplicity limit law.
"""

from .analytic import (
    ConstantsBundle,
    LambdaDecomposition,
    Precision,
    a_of_u,
    alpha_of_v,
    b_const,
    big_B,
    big_C,
    c_of_u,
    constants_bundle,
    f_star,
    hurwitz_zeta,
    hurwitz_zeta_sderiv_at0,
    kappa1,
    log_zeta,
    log_zeta_at0,
    log_zeta_sderiv_at0,
    polylog,
    riemann_zeta,
)
from .dirichlet import (
    EvalConfig,
    SaddleData,
    D_central_check,
    c_of_u_numeric,
    central_expansion_check,
    decay_profile,
    log_D,
    log_d,
    mellin_perron_integral,
    saddle_data,
    saddle_r,
)
from .errors import (
    ConfigError,
    DomainError,
    FactorizationError,
    LucasMonoidError,
    MembershipError,
    PoleError,
    ResourceCapError,
    ToleranceError,
)
from .factorint import PrimeFactorization, factorize, is_probable_prime
from .monoid import (
    Factorization,
    Histogram,
    MonoidElement,
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
from .params import LucasParams, PRESETS, from_preset
from .sequence import (
    Generator,
    GeneratorSet,
    LucasTerm,
    build_generator_set,
    closed_form_value,
    has_primitive_divisor,
    lucas_term,
    primitive_divisor,
    primitive_part,
    v0_bound,
)
from .stats import (
    EmpiricalSummary,
    LimitLawConfig,
    LimitLawSample,
    Omega_summary,
    ks_statistic,
    mgf_check,
    normalized_Omega,
    normalized_omega,
    omega_summary,
    sample_limit_law,
    skewness,
)

__version__ = "0.1.0"
