"""Bell states, linear-polarization analyzers and their correlation functions.

Angles are analyzer dial settings in radians, measured in the plane transverse
to propagation. A rotation ``alpha`` applied to Alice's arm is represented by
shifting her effective analyzer angle by ``+alpha``; physically this is the
same as rotating the polarization of her photons by ``-alpha``.

The relative sign inside Phi+/- and Psi+/- is carried on the state for
notational fidelity only. Correlations depend on the family alone: Phi gives
``+cos 2(a - b)`` and Psi gives ``-cos 2(a - b)``. For Phi- and Psi+, whose
physical correlation runs as ``cos 2(a + b)``, this amounts to reading Bob's
analyzer in a mirrored frame (``b -> -b``); the explicit state-vector route
below makes that concrete.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError


class Family(enum.Enum):
    PHI = "phi"
    PSI = "psi"


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class EntangledState:
    family: Family = Family.PHI
    sign: Sign = Sign.PLUS

    @property
    def correlation_sign(self) -> int:
        return 1 if self.family is Family.PHI else -1

    @property
    def mirrored_bob_frame(self) -> bool:
        return (self.family is Family.PHI) == (self.sign is Sign.MINUS)

    @classmethod
    def parse(cls, text: str) -> "EntangledState":
        """Parse names such as ``"phi+"``, ``"PSI-"`` or ``"phi_minus"``."""
        t = text.strip().lower().replace("_", "")
        for fam in Family:
            if t.startswith(fam.value):
                rest = t[len(fam.value):]
                if rest in ("+", "plus", ""):
                    return cls(fam, Sign.PLUS)
                if rest in ("-", "minus"):
                    return cls(fam, Sign.MINUS)
        raise DomainError(f"unknown Bell state {text!r}")

    def __str__(self) -> str:
        return f"{self.family.value}{self.sign.value}"


PHI_PLUS = EntangledState(Family.PHI, Sign.PLUS)
PHI_MINUS = EntangledState(Family.PHI, Sign.MINUS)
PSI_PLUS = EntangledState(Family.PSI, Sign.PLUS)
PSI_MINUS = EntangledState(Family.PSI, Sign.MINUS)
BELL_STATES = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)


@dataclass(frozen=True)
class BasisPair:
    primary_angle: float
    secondary_angle: float

    def reduced(self) -> "BasisPair":
        """Both angles folded into [0, pi); polarizers are pi-periodic."""
        return BasisPair(self.primary_angle % math.pi, self.secondary_angle % math.pi)


# Bases saturating the Tsirelson bound for Phi+.
TSIRELSON_ALICE = BasisPair(0.0, math.pi / 4)
TSIRELSON_BOB = BasisPair(math.pi / 8, 3 * math.pi / 8)

JOINT_SETTINGS = ("ab", "ab_prime", "a_prime_b", "a_prime_b_prime")


@dataclass(frozen=True)
class MeasurementSettings:
    alice: BasisPair = TSIRELSON_ALICE
    bob: BasisPair = TSIRELSON_BOB
    arm_rotation_alpha: float = 0.0

    def joint_angles(self) -> dict[str, tuple[float, float]]:
        """Effective (alice, bob) analyzer angles for each joint setting."""
        a = self.alice.primary_angle + self.arm_rotation_alpha
        a2 = self.alice.secondary_angle + self.arm_rotation_alpha
        b, b2 = self.bob.primary_angle, self.bob.secondary_angle
        return {
            "ab": (a, b),
            "ab_prime": (a, b2),
            "a_prime_b": (a2, b),
            "a_prime_b_prime": (a2, b2),
        }


@dataclass(frozen=True)
class CoincidenceCounts:
    n_same: int
    n_diff: int

    def __post_init__(self):
        if self.n_same < 0 or self.n_diff < 0:
            raise DomainError("coincidence counts must be non-negative")

    @property
    def total(self) -> int:
        return self.n_same + self.n_diff


def _check_finite(*angles: float) -> None:
    for x in angles:
        if not math.isfinite(x):
            raise DomainError(f"angle must be finite, got {x!r}")


def correlation(state: EntangledState, a: float, b: float, visibility: float = 1.0) -> float:
    """Quantum correlation E(a, b) for analyzers at angles ``a`` and ``b``.

    ``visibility`` scales the ideal correlation and models a state that
    reaches only ``visibility * 2*sqrt(2)`` at the Tsirelson bases.
    """
    _check_finite(a, b)
    if not 0.0 <= visibility <= 1.0:
        raise DomainError(f"visibility must lie in [0, 1], got {visibility}")
    return state.correlation_sign * visibility * math.cos(2.0 * (a - b))


def same_outcome_probability(state: EntangledState, a: float, b: float, visibility: float = 1.0) -> float:
    return 0.5 * (1.0 + correlation(state, a, b, visibility))


def apply_arm_rotation(settings: MeasurementSettings, alpha: float) -> MeasurementSettings:
    _check_finite(alpha)
    return replace(settings, arm_rotation_alpha=settings.arm_rotation_alpha + alpha)


def settings_correlations(
    state: EntangledState, settings: MeasurementSettings, visibility: float = 1.0
) -> dict[str, float]:
    return {k: correlation(state, a, b, visibility) for k, (a, b) in settings.joint_angles().items()}


# --- explicit two-photon state route -------------------------------------

_H = np.array([1.0, 0.0])
_V = np.array([0.0, 1.0])


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    # columns are the images of |H> and |V>
    return np.array([[c, -s], [s, c]])


def _analyzer(theta: float) -> np.ndarray:
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return np.array([[c, s], [s, -c]])


def state_vector(state: EntangledState, photon_rotation: float = 0.0) -> np.ndarray:
    """Two-photon amplitude vector (Alice (x) Bob) with Alice's photon rotated."""
    r = _rotation(photon_rotation)
    h_a, v_a = r @ _H, r @ _V
    s = 1.0 if state.sign is Sign.PLUS else -1.0
    if state.family is Family.PHI:
        psi = np.kron(h_a, _H) + s * np.kron(v_a, _V)
    else:
        psi = np.kron(h_a, _V) + s * np.kron(v_a, _H)
    return psi / math.sqrt(2.0)


def state_vector_correlation(state: EntangledState, a: float, b: float, alpha: float = 0.0) -> float:
    """E(a, b) from the expectation of the analyzer observables.

    Alice's photon is rotated by ``-alpha`` and her analyzer is left at ``a``.
    Phi- and Psi+ are read with Bob's analyzer mirrored.
    """
    _check_finite(a, b, alpha)
    psi = state_vector(state, -alpha)
    b_frame = -b if state.mirrored_bob_frame else b
    op = np.kron(_analyzer(a), _analyzer(b_frame))
    return float(psi @ op @ psi)


# --- Monte Carlo ----------------------------------------------------------

def sample_coincidences(
    state: EntangledState,
    settings: MeasurementSettings,
    n_pairs: int,
    seed: int,
    visibility: float = 1.0,
) -> dict[str, CoincidenceCounts]:
    """Draw ``n_pairs`` same/different outcomes for each joint setting.

    Each joint setting gets its own child stream spawned from ``seed``, so
    settings can be sampled independently or in parallel with identical results.
    """
    if n_pairs < 1:
        raise DomainError(f"n_pairs must be >= 1, got {n_pairs}")
    streams = np.random.SeedSequence(seed).spawn(len(JOINT_SETTINGS))
    out = {}
    for ss, (key, (a, b)) in zip(streams, settings.joint_angles().items()):
        p = same_outcome_probability(state, a, b, visibility)
        n_same = int(np.random.default_rng(ss).binomial(n_pairs, min(max(p, 0.0), 1.0)))
        out[key] = CoincidenceCounts(n_same, n_pairs - n_same)
    return out


def estimate_correlation(counts: CoincidenceCounts) -> tuple[float, float]:
    """Empirical correlation and its binomial standard error."""
    n = counts.total
    if n < 1:
        raise DomainError("cannot estimate a correlation from zero pairs")
    p = counts.n_same / n
    return 2.0 * p - 1.0, 2.0 * math.sqrt(p * (1.0 - p) / n)
