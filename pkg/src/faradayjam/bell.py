"""CHSH statistic, its reduction under arm rotation, and Gaussian significance."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import NormalDist

from .errors import DomainError, NoAttackRequired
from .polarization import CoincidenceCounts, estimate_correlation

BELL_LIMIT = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
ALGEBRAIC_MAX = 4.0

_STD_NORMAL = NormalDist()
_E_TOL = 1e-9


@dataclass(frozen=True)
class ChshEstimate:
    s_value: float
    sigma: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.s_value <= ALGEBRAIC_MAX:
            raise DomainError(f"S must lie in [0, 4], got {self.s_value}")
        if not self.sigma >= 0.0:
            raise DomainError(f"sigma must be >= 0, got {self.sigma}")


class ThresholdMode(enum.Enum):
    SIGMA_MULTIPLE = "sigma"
    P_VALUE = "p"


@dataclass(frozen=True)
class SecurityThreshold:
    """Violation level below which Alice and Bob stop trusting the channel.

    The two modes are related through the one-sided Gaussian tail, so a
    threshold of p = 0.05 corresponds to k = 1.645 standard deviations.
    """

    mode: ThresholdMode
    value: float

    def __post_init__(self):
        if self.mode is ThresholdMode.SIGMA_MULTIPLE and not self.value > 0:
            raise DomainError(f"sigma multiple must be > 0, got {self.value}")
        if self.mode is ThresholdMode.P_VALUE and not 0.0 < self.value < 1.0:
            raise DomainError(f"p-value threshold must lie in (0, 1), got {self.value}")

    @classmethod
    def sigmas(cls, k: float) -> "SecurityThreshold":
        return cls(ThresholdMode.SIGMA_MULTIPLE, k)

    @classmethod
    def p_value(cls, p: float) -> "SecurityThreshold":
        return cls(ThresholdMode.P_VALUE, p)

    @property
    def k(self) -> float:
        if self.mode is ThresholdMode.SIGMA_MULTIPLE:
            return self.value
        return _STD_NORMAL.inv_cdf(1.0 - self.value)

    @property
    def p(self) -> float:
        if self.mode is ThresholdMode.P_VALUE:
            return self.value
        return _STD_NORMAL.cdf(-self.value)

    def target_s(self, sigma: float) -> float:
        return BELL_LIMIT + self.k * sigma


def chsh(e_ab: float, e_ab_prime: float, e_a_prime_b: float, e_a_prime_b_prime: float) -> float:
    for e in (e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime):
        if not abs(e) <= 1.0 + _E_TOL:
            raise DomainError(f"correlation outside [-1, 1]: {e}")
    return abs(e_ab - e_ab_prime + e_a_prime_b + e_a_prime_b_prime)


def chsh_from_correlations(corr: dict[str, float]) -> float:
    return chsh(corr["ab"], corr["ab_prime"], corr["a_prime_b"], corr["a_prime_b_prime"])


def chsh_from_counts(counts: dict[str, CoincidenceCounts]) -> tuple[float, float]:
    """S estimated from sampled coincidences, with its combined standard error.

    The four settings are sampled independently, so errors add in quadrature.
    """
    est = {k: estimate_correlation(c) for k, c in counts.items()}
    s = chsh_from_correlations({k: e for k, (e, _) in est.items()})
    return s, math.sqrt(sum(se * se for _, se in est.values()))


def jammed_s(s: float, alpha: float) -> float:
    if not 0.0 <= s <= ALGEBRAIC_MAX:
        raise DomainError(f"S must lie in [0, 4], got {s}")
    return s * abs(math.cos(2.0 * alpha))


def jammed_estimate(est: ChshEstimate, alpha: float) -> ChshEstimate:
    # rotation does not touch the instrumentation, so sigma is kept
    return ChshEstimate(jammed_s(est.s_value, alpha), est.sigma)


def violation_sigmas(est: ChshEstimate) -> float:
    if est.sigma <= 0.0:
        raise DomainError("violation in standard deviations needs sigma > 0")
    return (est.s_value - BELL_LIMIT) / est.sigma


def p_insecure(est: ChshEstimate) -> float:
    """One-sided Gaussian probability that the true S does not exceed 2."""
    return _STD_NORMAL.cdf(-violation_sigmas(est))


def is_trusted(est: ChshEstimate, threshold: SecurityThreshold) -> bool:
    return violation_sigmas(est) > threshold.k


def required_alpha(est: ChshEstimate, threshold: SecurityThreshold) -> float:
    """Smallest arm rotation that pulls ``est`` down onto the threshold."""
    if est.s_value <= BELL_LIMIT:
        raise DomainError(f"S = {est.s_value} does not violate the Bell-CHSH inequality")
    target = threshold.target_s(est.sigma)
    if target >= est.s_value:
        raise NoAttackRequired(
            f"S = {est.s_value} is already at or below the target {target:.4f}"
        )
    return alpha_for_target(est.s_value, target)


def alpha_for_target(s: float, target: float) -> float:
    if not 0.0 <= target <= s:
        raise DomainError(f"target {target} must lie in [0, S={s}]")
    return 0.5 * math.acos(target / s)
