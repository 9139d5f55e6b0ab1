"""Built-in medium and experiment registries, shipped as YAML data files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Any, Mapping

import yaml

from .bell import ChshEstimate
from .errors import ConfigError, DomainError, UnknownPresetError
from .faraday import Constituent, MediumKind, MediumSpec
from .planner import ExperimentRecord

NM = 1e-9

# Rows of the fiber feasibility tables, in printed order.
TABLE_EXPERIMENTS = ("takesue-d0", "takesue-d20", "trapateau-d0", "trapateau-d20")


@lru_cache(maxsize=None)
def _load(name: str) -> dict[str, Any]:
    text = resources.files("faradayjam.data").joinpath(name).read_text(encoding="utf-8")
    return yaml.safe_load(text)


def medium_from_dict(name: str, d: Mapping[str, Any]) -> MediumSpec:
    try:
        kind = MediumKind(d["kind"])
        return MediumSpec(
            name=name,
            kind=kind,
            wavelength_m=float(d["wavelength_nm"]) * NM,
            constituents=tuple(
                Constituent(c["name"], float(c["f"]), int(c["y"]), float(c["mu"]), float(c["m"]))
                for c in d.get("constituents", ())
            ),
            n=float(d["n"]) if "n" in d else None,
            fiber_a=float(d["fiber_a"]) if "fiber_a" in d else None,
            verdet_direct=float(d["verdet"]) if "verdet" in d else None,
            description=str(d.get("description", "")).strip(),
        )
    except DomainError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"medium {name!r}: malformed entry ({exc})") from exc


def experiment_from_dict(name: str, d: Mapping[str, Any]) -> ExperimentRecord:
    try:
        return ExperimentRecord(
            label=str(d.get("label", name)),
            distance_km=float(d["distance_km"]),
            estimate=ChshEstimate(float(d["s_meas"]), float(d["sigma"])),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"experiment {name!r}: malformed entry ({exc})") from exc


def medium_names() -> list[str]:
    return list(_load("media.yaml"))


def experiment_names() -> list[str]:
    return list(_load("experiments.yaml"))


def get_medium(name: str) -> MediumSpec:
    media = _load("media.yaml")
    if name not in media:
        raise UnknownPresetError(f"unknown medium preset {name!r}; known: {', '.join(media)}")
    return medium_from_dict(name, media[name])


def get_experiment(name: str) -> ExperimentRecord:
    exps = _load("experiments.yaml")
    if name not in exps:
        raise UnknownPresetError(f"unknown experiment {name!r}; known: {', '.join(exps)}")
    return experiment_from_dict(name, exps[name])


def table_experiments() -> list[ExperimentRecord]:
    return [get_experiment(n) for n in TABLE_EXPERIMENTS]


def _entry(filename: str, what: str, name: str) -> dict[str, Any]:
    table = _load(filename)
    if name not in table:
        raise UnknownPresetError(f"unknown {what} preset {name!r}; known: {', '.join(table)}")
    return dict(table[name])


def medium_entry(name: str) -> dict[str, Any]:
    return _entry("media.yaml", "medium", name)


def experiment_entry(name: str) -> dict[str, Any]:
    return _entry("experiments.yaml", "experiment", name)


def get_scenario(name: str) -> dict[str, Any]:
    return _entry("scenarios.yaml", "scenario", name)


def scenario_names() -> list[str]:
    return list(_load("scenarios.yaml"))
