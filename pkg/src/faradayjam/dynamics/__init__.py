"""Time-domain simulation of a jamming campaign against polarization realignment.

The attacker applies a piecewise-constant rotation; Alice and Bob either do
nothing, realign on a QBER trigger (channel down for a fixed window), or run
a continuous slew-rate-limited tracker. The step loop lives in a compiled
extension when one is built, with a pure-Python twin as fallback; set
``FARADAYJAM_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .. import bell
from ..bell import ChshEstimate, SecurityThreshold
from ..errors import DomainError, NoCountermeasure
from ..faraday import FieldRegion, faraday_angle
from . import _kernel_py

try:
    if os.environ.get("FARADAYJAM_PURE_PYTHON"):
        raise ImportError("pure-Python kernel requested")
    from ._kernel import run_timeline as _compiled_run
except ImportError:
    _compiled_run = None

BACKEND = "compiled" if _compiled_run is not None else "python"
_run_timeline = _compiled_run or _kernel_py.run_timeline

DEFAULT_REALIGN_S = 5.0
DEFAULT_MAX_SLEW = 40.0 * math.pi  # rad/s


def available_backends() -> dict[str, object]:
    out = {"python": _kernel_py.run_timeline}
    if _compiled_run is not None:
        out["compiled"] = _compiled_run
    return out


class ChannelState(enum.IntEnum):
    SECURE = _kernel_py.SECURE
    JAMMED = _kernel_py.JAMMED
    REALIGNING = _kernel_py.REALIGNING


class CountermeasureKind(enum.Enum):
    NONE = _kernel_py.NONE
    TRIGGERED_REALIGNMENT = _kernel_py.TRIGGERED
    CONTINUOUS_TRACKER = _kernel_py.TRACKER


class Criterion(enum.Enum):
    QBER = "qber"
    CHSH = "chsh"


@dataclass(frozen=True)
class FieldSchedule:
    segments: tuple[tuple[float, float], ...]  # (start_s, alpha_rad)
    total_duration: float

    def __post_init__(self):
        segs = tuple((float(t), float(a)) for t, a in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise DomainError("schedule needs at least one segment")
        if segs[0][0] != 0.0:
            raise DomainError(f"first segment must start at t = 0, got {segs[0][0]}")
        starts = [t for t, _ in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise DomainError("segment start times must be strictly increasing")
        if not self.total_duration > starts[-1]:
            raise DomainError("total duration must extend past the last segment start")
        if not all(math.isfinite(a) for _, a in segs):
            raise DomainError("segment rotations must be finite")

    @classmethod
    def constant(cls, alpha: float, duration: float) -> "FieldSchedule":
        return cls(((0.0, alpha),), duration)

    @classmethod
    def square_wave(cls, low: float, high: float, half_period: float, duration: float) -> "FieldSchedule":
        """Alternate ``low`` and ``high``, switching every ``half_period``."""
        if not half_period > 0:
            raise DomainError("half period must be > 0")
        n = int(math.ceil(duration / half_period - 1e-9))
        return cls(tuple((i * half_period, low if i % 2 == 0 else high) for i in range(n)), duration)

    @classmethod
    def from_regions(
        cls, verdet: float, segments: Sequence[tuple[float, FieldRegion]], duration: float
    ) -> "FieldSchedule":
        return cls(tuple((t, faraday_angle(verdet, r)) for t, r in segments), duration)

    def shortest_segment(self) -> float:
        ends = [t for t, _ in self.segments[1:]] + [self.total_duration]
        return min(e - t for (t, _), e in zip(self.segments, ends))

    def alpha_at(self, t: np.ndarray) -> np.ndarray:
        starts = np.array([s for s, _ in self.segments])
        values = np.array([a for _, a in self.segments])
        # tolerate float noise in t = k * dt landing just shy of a boundary
        idx = np.searchsorted(starts, np.asarray(t) + 1e-9 * self.shortest_segment(), side="right") - 1
        return values[np.clip(idx, 0, len(values) - 1)]


@dataclass(frozen=True)
class CountermeasureModel:
    kind: CountermeasureKind
    baseline_qber: float = 0.025
    qber_trigger: float = 0.05
    realign_duration: float = DEFAULT_REALIGN_S
    max_slew: float = DEFAULT_MAX_SLEW
    criterion: Criterion = Criterion.QBER
    chsh: ChshEstimate | None = None
    chsh_threshold: SecurityThreshold | None = None

    def __post_init__(self):
        if not 0.0 <= self.baseline_qber < 0.5:
            raise DomainError(f"baseline QBER must lie in [0, 0.5), got {self.baseline_qber}")
        if not self.baseline_qber < self.qber_trigger < 0.5:
            raise DomainError(f"QBER trigger must lie in (baseline, 0.5), got {self.qber_trigger}")
        if not self.realign_duration > 0:
            raise DomainError("realignment duration must be > 0")
        if not self.max_slew > 0:
            raise DomainError("tracker slew rate must be > 0")
        if self.criterion is Criterion.CHSH and (self.chsh is None or self.chsh_threshold is None):
            raise DomainError("the CHSH criterion needs a CHSH estimate and a threshold")

    @classmethod
    def triggered(cls, realign_duration: float = DEFAULT_REALIGN_S, **kw) -> "CountermeasureModel":
        return cls(CountermeasureKind.TRIGGERED_REALIGNMENT, realign_duration=realign_duration, **kw)

    @classmethod
    def tracker(cls, max_slew: float = DEFAULT_MAX_SLEW, **kw) -> "CountermeasureModel":
        return cls(CountermeasureKind.CONTINUOUS_TRACKER, max_slew=max_slew, **kw)

    @classmethod
    def none(cls, **kw) -> "CountermeasureModel":
        return cls(CountermeasureKind.NONE, **kw)


class Sample(NamedTuple):
    t: float
    alpha_applied: float
    compensation: float
    residual_alpha: float
    qber: float
    state: ChannelState


@dataclass(frozen=True, eq=False)
class JammingTimeline:
    t: np.ndarray
    alpha_applied: np.ndarray
    compensation: np.ndarray
    residual_alpha: np.ndarray
    qber: np.ndarray
    state: np.ndarray
    time_step: float

    def __len__(self) -> int:
        return len(self.t)

    @property
    def total_duration(self) -> float:
        return len(self.t) * self.time_step

    @property
    def availability(self) -> float:
        return availability(self)

    def samples(self) -> Iterator[Sample]:
        for row in zip(self.t, self.alpha_applied, self.compensation, self.residual_alpha, self.qber, self.state):
            yield Sample(*map(float, row[:5]), ChannelState(int(row[5])))

    def state_durations(self) -> dict[ChannelState, float]:
        counts = np.bincount(self.state, minlength=len(ChannelState))
        return {s: counts[s.value] * self.time_step for s in ChannelState}


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def simulate(
    schedule: FieldSchedule,
    counter: CountermeasureModel,
    time_step: float,
    backend: str | None = None,
) -> JammingTimeline:
    """Step the channel forward at fixed ``time_step`` over the schedule.

    A triggered realignment marks the channel REALIGNING for exactly
    ``realign_duration`` and then snaps the compensation to whatever rotation
    is applied at that moment.
    """
    if not time_step > 0:
        raise DomainError(f"time step must be > 0, got {time_step}")
    if time_step > schedule.shortest_segment() / 10 * (1 + 1e-9):
        raise DomainError(
            f"time step {time_step} exceeds a tenth of the shortest segment ({schedule.shortest_segment()})"
        )
    run = available_backends()[backend] if backend else _run_timeline
    n = int(round(schedule.total_duration / time_step))
    t = np.arange(n) * time_step
    alpha = np.ascontiguousarray(schedule.alpha_at(t), dtype=np.float64)

    s_value, s_floor = 0.0, 0.0
    criterion = 0
    if counter.criterion is Criterion.CHSH:
        criterion = 1
        s_value = counter.chsh.s_value
        s_floor = counter.chsh_threshold.target_s(counter.chsh.sigma)
    realign_steps = max(1, int(round(counter.realign_duration / time_step)))

    comp, resid, qber, state = run(
        alpha, float(time_step), counter.kind.value, counter.baseline_qber, counter.qber_trigger,
        realign_steps, counter.max_slew, criterion, s_value, s_floor,
    )
    return JammingTimeline(
        t=_frozen(t),
        alpha_applied=_frozen(alpha),
        compensation=_frozen(np.asarray(comp)),
        residual_alpha=_frozen(np.asarray(resid)),
        qber=_frozen(np.asarray(qber)),
        state=_frozen(np.asarray(state, dtype=np.int8)),
        time_step=float(time_step),
    )


def availability(timeline: JammingTimeline) -> float:
    """Fraction of the timeline spent SECURE."""
    if len(timeline) == 0:
        raise DomainError("availability of an empty timeline")
    return float(np.count_nonzero(timeline.state == ChannelState.SECURE)) / len(timeline)


def min_toggle_period(counter: CountermeasureModel, alpha_target: float) -> float:
    """Toggle period below which the countermeasure can no longer keep up."""
    if counter.kind is CountermeasureKind.NONE:
        raise NoCountermeasure("no countermeasure is active; any static field suffices")
    if not alpha_target >= 0:
        raise DomainError(f"target rotation must be >= 0, got {alpha_target}")
    if counter.kind is CountermeasureKind.TRIGGERED_REALIGNMENT:
        return counter.realign_duration
    return alpha_target / counter.max_slew


def chsh_jammed(counter: CountermeasureModel, residual: float) -> bool:
    """CHSH-criterion verdict for one residual rotation (reference for the kernel)."""
    est = bell.jammed_estimate(counter.chsh, residual)
    return bell.violation_sigmas(est) <= counter.chsh_threshold.k
