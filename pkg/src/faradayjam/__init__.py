"""Faraday-rotation jamming of polarization-based quantum key distribution.

Submodules:

``polarization``  Bell states, analyzers, correlations, Monte Carlo coincidences
``bell``          CHSH, jammed S, Gaussian significance, required rotation
``faraday``       electron density, Verdet constants, Faraday and Kerr estimates
``planner``       field-length products, QBER impact, feasibility tables
``dynamics``      attack schedules versus realignment countermeasures
``reporting``     report rendering and plot-ready data
``cli``           the ``faradayjam`` command
"""

from .bell import (
    ChshEstimate,
    SecurityThreshold,
    chsh,
    jammed_s,
    p_insecure,
    required_alpha,
    violation_sigmas,
)
from .errors import ConfigError, DomainError, NoAttackRequired, NoCountermeasure
from .faraday import (
    CONSTANTS,
    Constituent,
    FieldRegion,
    MediumSpec,
    electron_density,
    faraday_angle,
    verdet_dielectric,
    verdet_fiber,
)
from .planner import AttackPlan, ExperimentRecord, b0l_min, plan_attack, qber_increase, total_qber
from .polarization import EntangledState, MeasurementSettings, correlation

__version__ = "0.1.0"
