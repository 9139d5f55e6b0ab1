"""Scenario configuration: YAML documents resolved against the preset registries.

Wavelengths are given in nm and distances in km, matching how results are
usually quoted; everything is converted to SI on the way in. Inline mappings
may name a ``preset`` and override any of its fields.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from . import presets
from .bell import SecurityThreshold
from .dynamics import CountermeasureKind, CountermeasureModel, Criterion, FieldSchedule
from .errors import ConfigError, DomainError
from .faraday import FieldRegion, MediumSpec
from .planner import ExperimentRecord
from .polarization import PHI_PLUS, EntangledState
from .reporting import FORMATS


class Mode(enum.Enum):
    VERDET = "verdet"
    PLAN = "plan"
    CHSH_SIM = "chsh-sim"
    QBER = "qber"
    DYNAMICS = "dynamics"
    TABLES = "tables"
    FIGURE1 = "figure1"


@dataclass
class ScenarioConfig:
    mode: Mode
    media: list[MediumSpec] = field(default_factory=list)
    experiments: list[ExperimentRecord] = field(default_factory=list)
    thresholds: list[SecurityThreshold] = field(default_factory=list)
    field_region: FieldRegion = field(default_factory=lambda: FieldRegion(1.0, 1.0))
    alphas: list[float] | None = None
    baseline_qber: float = 0.025
    state: EntangledState = PHI_PLUS
    visibility: float = 1.0
    n_pairs: int = 1_000_000
    seed: int = 0
    grid: int = 241
    schedule: FieldSchedule | None = None
    countermeasure: CountermeasureModel | None = None
    time_step: float | None = None
    output_format: str = "csv"
    output_path: Path | None = None


def _num(d: Mapping, key: str, default=None, *, cast=float, where: str = "") -> Any:
    if key not in d:
        if default is None:
            raise ConfigError(f"{where or 'config'}: missing required key {key!r}")
        return default
    try:
        v = cast(d[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where or 'config'}: {key!r} is not a number ({d[key]!r})") from exc
    if isinstance(v, float) and not math.isfinite(v):
        raise ConfigError(f"{where or 'config'}: {key!r} must be finite")
    return v


def _mapping(v: Any, where: str) -> Mapping:
    if not isinstance(v, Mapping):
        raise ConfigError(f"{where}: expected a mapping, got {type(v).__name__}")
    return v


def resolve_medium(ref: Any) -> MediumSpec:
    if isinstance(ref, str):
        return presets.get_medium(ref)
    d = dict(_mapping(ref, "medium"))
    name = d.pop("preset", None)
    if name is not None:
        base = presets.medium_entry(name)
        base.update(d)
        d, label = base, name
    else:
        label = str(d.get("name", "inline"))
    return presets.medium_from_dict(label, d)


def resolve_experiment(ref: Any) -> ExperimentRecord:
    if isinstance(ref, str):
        return presets.get_experiment(ref)
    d = dict(_mapping(ref, "experiment"))
    name = d.pop("preset", None)
    if name is not None:
        base = presets.experiment_entry(name)
        base.update(d)
        d = base
    return presets.experiment_from_dict(str(d.get("label", name or "inline")), d)


def parse_threshold(ref: Any) -> SecurityThreshold:
    if isinstance(ref, (int, float)) and not isinstance(ref, bool):
        return SecurityThreshold.sigmas(float(ref))
    d = _mapping(ref, "threshold")
    if ("k" in d) == ("p" in d):
        raise ConfigError("threshold: give exactly one of 'k' (sigmas) or 'p' (p-value)")
    if "k" in d:
        return SecurityThreshold.sigmas(_num(d, "k", where="threshold"))
    return SecurityThreshold.p_value(_num(d, "p", where="threshold"))


def parse_schedule(d: Mapping, medium: MediumSpec | None) -> FieldSchedule:
    d = _mapping(d, "schedule")
    duration = _num(d, "duration_s", where="schedule")
    if "segments" in d:
        segs = d["segments"]
        if not isinstance(segs, list) or not all(isinstance(s, (list, tuple)) and len(s) == 2 for s in segs):
            raise ConfigError("schedule.segments: expected a list of [start_s, alpha_rad] pairs")
        return FieldSchedule(tuple((float(t), float(a)) for t, a in segs), duration)
    if "square_wave" in d:
        sq = _mapping(d["square_wave"], "schedule.square_wave")
        return FieldSchedule.square_wave(
            _num(sq, "low", where="square_wave"),
            _num(sq, "high", where="square_wave"),
            _num(sq, "half_period_s", where="square_wave"),
            duration,
        )
    if "field_segments" in d:
        if medium is None:
            raise ConfigError("schedule.field_segments needs a medium to convert fields to rotations")
        segs = [(float(t), FieldRegion(float(b0), float(length))) for t, b0, length in d["field_segments"]]
        return FieldSchedule.from_regions(medium.verdet(), segs, duration)
    raise ConfigError("schedule: expected one of 'segments', 'square_wave' or 'field_segments'")


_KINDS = {
    "none": CountermeasureKind.NONE,
    "triggered": CountermeasureKind.TRIGGERED_REALIGNMENT,
    "tracker": CountermeasureKind.CONTINUOUS_TRACKER,
}


def parse_countermeasure(d: Mapping, experiment: ExperimentRecord | None) -> CountermeasureModel:
    d = _mapping(d, "countermeasure")
    kind = str(d.get("kind", "triggered")).lower()
    if kind not in _KINDS:
        raise ConfigError(f"countermeasure.kind: expected one of {', '.join(_KINDS)}, got {kind!r}")
    where = "countermeasure"
    kw: dict[str, Any] = dict(
        baseline_qber=_num(d, "baseline_qber", 0.025, where=where),
        qber_trigger=_num(d, "qber_trigger", 0.05, where=where),
        realign_duration=_num(d, "realign_duration_s", 5.0, where=where),
        max_slew=_num(d, "max_slew_rad_s", 40 * math.pi, where=where),
    )
    crit = str(d.get("criterion", "qber")).lower()
    try:
        kw["criterion"] = Criterion(crit)
    except ValueError as exc:
        raise ConfigError(f"countermeasure.criterion: expected qber or chsh, got {crit!r}") from exc
    if kw["criterion"] is Criterion.CHSH:
        if experiment is None:
            raise ConfigError("the CHSH criterion needs an experiment to supply S and sigma")
        kw["chsh"] = experiment.estimate
        kw["chsh_threshold"] = parse_threshold(d.get("chsh_threshold", {"k": 1.7}))
    return CountermeasureModel(_KINDS[kind], **kw)


def load_document(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from exc
    if doc is None:
        return {}
    return dict(_mapping(doc, str(path)))


def build_config(doc: Mapping[str, Any], mode: Mode | None = None) -> ScenarioConfig:
    """Validate a parsed document into a :class:`ScenarioConfig`."""
    doc = dict(doc)
    if "scenario" in doc:
        scenario = dict(presets.get_scenario(doc.pop("scenario")))
        scenario.update(doc)
        doc = scenario
    doc_mode = doc.get("mode")
    if doc_mode is not None:
        try:
            doc_mode = Mode(str(doc_mode).lower().replace("_", "-"))
        except ValueError as exc:
            raise ConfigError(f"unknown mode {doc.get('mode')!r}") from exc
        if mode is not None and doc_mode is not mode:
            raise ConfigError(f"config mode {doc_mode.value!r} conflicts with command {mode.value!r}")
    mode = mode or doc_mode
    if mode is None:
        raise ConfigError("no mode given")

    cfg = ScenarioConfig(mode=mode)
    try:
        if "medium" in doc:
            m = doc["medium"]
            cfg.media = [resolve_medium(x) for x in m] if isinstance(m, list) else [resolve_medium(m)]
        if "experiment" in doc:
            e = doc["experiment"]
            cfg.experiments = [resolve_experiment(x) for x in e] if isinstance(e, list) else [resolve_experiment(e)]
        if "threshold" in doc:
            t = doc["threshold"]
            cfg.thresholds = [parse_threshold(x) for x in t] if isinstance(t, list) else [parse_threshold(t)]
        if "field" in doc:
            f = _mapping(doc["field"], "field")
            cfg.field_region = FieldRegion(_num(f, "b0_T", where="field"), _num(f, "length_m", where="field"))
        if "alphas" in doc:
            a = doc["alphas"]
            a = a if isinstance(a, list) else [a]
            cfg.alphas = [float(x) for x in a]
        if "alpha" in doc:
            cfg.alphas = [float(doc["alpha"])]
        cfg.baseline_qber = _num(doc, "baseline_qber", cfg.baseline_qber)
        if "state" in doc:
            cfg.state = EntangledState.parse(str(doc["state"]))
        cfg.visibility = _num(doc, "visibility", cfg.visibility)
        cfg.grid = _num(doc, "grid", cfg.grid, cast=int)
        mc = _mapping(doc.get("monte_carlo", {}), "monte_carlo")
        cfg.n_pairs = _num(mc, "n_pairs", cfg.n_pairs, cast=int, where="monte_carlo")
        cfg.seed = _num(mc, "seed", cfg.seed, cast=int, where="monte_carlo")
        exp0 = cfg.experiments[0] if cfg.experiments else None
        med0 = cfg.media[0] if cfg.media else None
        if "schedule" in doc:
            cfg.schedule = parse_schedule(doc["schedule"], med0)
        if "countermeasure" in doc:
            cfg.countermeasure = parse_countermeasure(doc["countermeasure"], exp0)
        if "time_step_s" in doc:
            cfg.time_step = _num(doc, "time_step_s")
        out = _mapping(doc.get("output", {}), "output")
        cfg.output_format = str(out.get("format", cfg.output_format)).lower()
        if "path" in out and out["path"] is not None:
            cfg.output_path = Path(str(out["path"]))
    except DomainError as exc:
        raise ConfigError(f"invalid value: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    if cfg.output_format not in FORMATS:
        raise ConfigError(f"output.format must be one of {', '.join(FORMATS)}, got {cfg.output_format!r}")
    if cfg.n_pairs < 1:
        raise ConfigError(f"monte_carlo.n_pairs must be >= 1, got {cfg.n_pairs}")
    if cfg.seed < 0:
        raise ConfigError(f"monte_carlo.seed must be >= 0, got {cfg.seed}")
    if cfg.grid < 2:
        raise ConfigError(f"grid must be >= 2, got {cfg.grid}")
    if not 0.0 <= cfg.baseline_qber <= 0.5:
        raise ConfigError(f"baseline_qber must lie in [0, 0.5], got {cfg.baseline_qber}")
    if not 0.0 <= cfg.visibility <= 1.0:
        raise ConfigError(f"visibility must lie in [0, 1], got {cfg.visibility}")
    if cfg.alphas is not None and not all(math.isfinite(a) for a in cfg.alphas):
        raise ConfigError("alphas must be finite")
    if cfg.mode is Mode.DYNAMICS:
        if cfg.schedule is None or cfg.countermeasure is None:
            raise ConfigError("dynamics mode needs 'schedule' and 'countermeasure'")
        if cfg.time_step is None:
            cfg.time_step = cfg.schedule.shortest_segment() / 10
        if not cfg.time_step > 0:
            raise ConfigError(f"time_step_s must be > 0, got {cfg.time_step}")
