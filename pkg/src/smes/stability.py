"""Stability bounds and step selection for Forward Euler and SMFE.

SMFE applied to ``X' = A X`` gives ``X <- A_delta X`` with
``A_delta = (I + delta (1 - N eps) A)(I + delta eps A)^N``, so it is stable
iff ``|1 + delta (1 - N eps) lam| * |1 + delta eps lam|^N < 1`` for every
eigenvalue ``lam`` of ``A``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, StabilityError
from .model import check_small_steps, step_count


@dataclass(frozen=True)
class ScalarSps:
    """``x' = a x + b z``, ``eps z' = c x + d z`` with scalar ``x`` and ``z``."""

    a: float
    b: float
    c: float
    d: float
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon!r}")

    def matrix(self) -> np.ndarray:
        e = self.epsilon
        return np.array([[self.a, self.b], [self.c / e, self.d / e]])

    def is_asymptotically_stable(self) -> bool:
        return all(v.real < 0 for v in scalar_eigenvalues(self))


@dataclass(frozen=True)
class StabilityReport:
    fem_delta_max: Optional[float]
    smfe_condition_values: list
    n_min: Optional[int]
    cost_evals: Optional[int]
    stable: bool


def fem_max_delta(eigs: Sequence[complex]) -> float:
    """Largest Forward Euler step keeping ``|1 + delta lam| < 1`` for all ``lam``.

    The bound for one eigenvalue is ``-2 Re(lam) / |lam|^2``.
    """
    eigs = [complex(v) for v in eigs]
    if not eigs:
        raise StabilityError("no eigenvalues given")
    bad = [v for v in eigs if not v.real < 0]
    if bad:
        raise StabilityError(f"not strictly stable: eigenvalues with Re >= 0: {bad}")
    return min(-2.0 * v.real / abs(v) ** 2 for v in eigs)


def smfe_condition(lam: complex, delta: float, n_small: int, epsilon: float) -> float:
    """``|1 + delta (1 - N eps) lam| * |1 + delta eps lam|^N``."""
    lam = complex(lam)
    big = abs(1 + delta * (1.0 - n_small * epsilon) * lam)
    small = abs(1 + delta * epsilon * lam)
    if n_small == 0:
        return big
    if small == 0.0:
        return 0.0
    # log form keeps |.|^N from overflowing for large N
    log_value = n_small * math.log(small) + (math.log(big) if big > 0 else -math.inf)
    return math.exp(log_value) if log_value < 700 else math.inf


def smfe_stable(eigs: Sequence[complex], delta: float, n_small: int, epsilon: float,
                t_end: Optional[float] = None) -> StabilityReport:
    """Evaluate the SMFE stability product for each eigenvalue.

    ``n_min`` is filled in when the eigenvalue with the most negative real
    part is fast (``|Re| > 1/sqrt(eps)``) and the small-step rule applies;
    ``cost_evals`` when ``t_end`` is given.
    """
    check_small_steps(n_small, epsilon)
    eigs = [complex(v) for v in eigs]
    values = [smfe_condition(v, delta, n_small, epsilon) for v in eigs]
    try:
        fem_dmax = fem_max_delta(eigs)
    except StabilityError:
        fem_dmax = None
    n_min = None
    if eigs:
        fastest = min(eigs, key=lambda v: v.real)
        if abs(fastest.real) > 1.0 / math.sqrt(epsilon):
            try:
                n_min = min_small_steps(epsilon * fastest, delta, epsilon)
            except StabilityError:
                n_min = None
    cost = cost_estimate(delta, n_small, t_end) if t_end is not None else None
    return StabilityReport(fem_dmax, values, n_min, cost, all(v < 1 for v in values))


def min_small_steps(lambda_tilde: complex, delta: float, epsilon: float) -> int:
    """Smallest ``N`` with ``N > -ln(delta |lt| / eps) / ln|1 + delta lt|``.

    ``lt`` is the scaled fast eigenvalue ``eps * lambda_fast``.
    """
    lt = complex(lambda_tilde)
    r = abs(1 + delta * lt)
    if not r < 1:
        raise StabilityError(
            f"macro step unstable for the scaled fast mode: |1 + delta*lambda_tilde| = {r:g} >= 1"
        )
    ratio = delta * abs(lt) / epsilon
    if not ratio > 1:
        raise StabilityError(
            f"delta*|lambda_tilde|/eps = {ratio:g} <= 1; the small-step rule needs delta >> eps"
        )
    if r == 0.0:
        return 1
    bound = -math.log(ratio) / math.log(r)
    return math.floor(bound) + 1


def scalar_eigenvalues(sys: ScalarSps) -> tuple:
    """``(eps a + d +- sqrt((eps a - d)^2 + 4 eps b c)) / (2 eps)``."""
    e, a, b, c, d = sys.epsilon, sys.a, sys.b, sys.c, sys.d
    root = cmath.sqrt((e * a - d) ** 2 + 4 * e * b * c)
    return ((e * a + d + root) / (2 * e), (e * a + d - root) / (2 * e))


def appendix_fem_delta(sys: ScalarSps, corrected: bool = True) -> float:
    """Closed-form Forward Euler step bound for the scalar test system.

    ``corrected=False`` evaluates ``(2 eps^2 a + 2 eps d) / (eps^2 a + 2 eps b c + d)``
    exactly as printed; it only agrees with the eigenvalue bound when
    ``d = -1``.  The default evaluates
    ``-2 eps (eps a + d) / (eps^2 a^2 + 2 eps b c + d^2)``, which follows
    from expanding the squared-modulus condition without dropping the
    squares on ``a`` and ``d``.
    """
    e, a, b, c, d = sys.epsilon, sys.a, sys.b, sys.c, sys.d
    if corrected:
        num = -2 * e * (e * a + d)
        den = e * e * a * a + 2 * e * b * c + d * d
    else:
        num = 2 * e * e * a + 2 * e * d
        den = e * e * a + 2 * e * b * c + d
    if den == 0:
        raise StabilityError("closed-form step bound has a zero denominator")
    return num / den


def deadbeat_delta(lambda_tilde: complex, slow_eigs: Sequence[complex]) -> Optional[float]:
    """Step ``delta = -1/lt`` that annihilates a single real fast mode.

    Returns None when ``lt`` is not real and negative or when some slow
    eigenvalue would violate ``|1 + delta lam| < 1``.
    """
    lt = complex(lambda_tilde)
    if lt.imag != 0 or not lt.real < 0:
        return None
    delta = -1.0 / lt.real
    if all(abs(1 + delta * complex(v)) < 1 for v in slow_eigs):
        return delta
    return None


def cost_estimate(delta: float, n_small: int, t_end: float) -> int:
    """Right-hand-side evaluations of SMFE: ``(N + 1) * T / delta``."""
    return (int(n_small) + 1) * step_count(t_end, delta)
