"""Attack feasibility: field-length products, QBER impact and table reproduction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from . import bell
from .bell import ChshEstimate, SecurityThreshold
from .errors import DomainError
from .faraday import MediumSpec


@dataclass(frozen=True)
class ExperimentRecord:
    label: str
    distance_km: float
    estimate: ChshEstimate

    def __post_init__(self):
        if not self.distance_km >= 0:
            raise DomainError(f"{self.label}: distance must be >= 0")


@dataclass(frozen=True)
class AttackPlan:
    alpha: float  # rad
    s_tilde: float
    b0l_min: float  # T m
    verdet: float  # rad/(T m)
    medium: MediumSpec
    threshold: SecurityThreshold

    @property
    def qber_increase(self) -> float:
        return qber_increase(self.alpha)


def b0l_min(alpha: float, verdet: float) -> float:
    """Minimum field-length product (T m) for a rotation ``alpha``."""
    if not verdet > 0:
        raise DomainError(f"Verdet constant must be > 0, got {verdet}")
    if not alpha > 0:
        raise DomainError(f"rotation angle must be > 0, got {alpha}")
    return alpha / verdet


def plan_attack(exp: ExperimentRecord, threshold: SecurityThreshold, medium: MediumSpec) -> AttackPlan:
    """Cheapest rotation and field for pushing ``exp`` onto ``threshold``.

    Raises :class:`~faradayjam.errors.NoAttackRequired` when the experiment
    is already untrusted at this threshold.
    """
    alpha = bell.required_alpha(exp.estimate, threshold)
    v = medium.verdet()
    return AttackPlan(
        alpha=alpha,
        s_tilde=bell.jammed_s(exp.estimate.s_value, alpha),
        b0l_min=b0l_min(alpha, v),
        verdet=v,
        medium=medium,
        threshold=threshold,
    )


def qber_increase(alpha: float) -> float:
    return math.sin(alpha) ** 2


def total_qber(baseline: float, alpha: float) -> float:
    """Baseline and rotation-induced errors combined as independent bit flips."""
    if not 0.0 <= baseline <= 0.5:
        raise DomainError(f"baseline QBER must lie in [0, 0.5], got {baseline}")
    q = baseline + (1.0 - 2.0 * baseline) * qber_increase(alpha)
    return min(max(q, 0.0), 0.5)


# --- table reproduction -------------------------------------------------------

def round_half_away(x: float, places: int = 2) -> float:
    """Decimal rounding of the shortest repr of ``x``, ties away from zero."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class TableRow:
    ref: str
    distance_km: float
    s_meas: float
    sigma: float
    s_tilde: float
    alpha: float
    b0l_min: float


def reproduce_table(
    experiments: Sequence[ExperimentRecord],
    threshold: SecurityThreshold,
    medium: MediumSpec,
    places: int = 2,
) -> list[TableRow]:
    """Rows at printed precision.

    Each intermediate (target S, rotation angle, Verdet constant) is rounded
    to ``places`` decimals before it is used downstream, the way a hand
    calculation from printed values proceeds.
    """
    v = round_half_away(medium.verdet(), places)
    rows = []
    for exp in experiments:
        est = exp.estimate
        s_tilde = round_half_away(threshold.target_s(est.sigma), places)
        alpha = round_half_away(bell.alpha_for_target(est.s_value, s_tilde), places)
        rows.append(
            TableRow(
                ref=exp.label,
                distance_km=exp.distance_km,
                s_meas=est.s_value,
                sigma=est.sigma,
                s_tilde=s_tilde,
                alpha=alpha,
                b0l_min=round_half_away(b0l_min(alpha, v), places),
            )
        )
    return rows


def reproduce_tables(
    experiments: Sequence[ExperimentRecord],
    thresholds: Sequence[SecurityThreshold],
    medium: MediumSpec,
) -> list[tuple[SecurityThreshold, list[TableRow]]]:
    return [(t, reproduce_table(experiments, t, medium)) for t in thresholds]
