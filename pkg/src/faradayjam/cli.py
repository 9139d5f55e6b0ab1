"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 domain error, 4 I/O error.
Reports go to ``--out`` (or stdout); diagnostics always go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from . import bell, planner, presets
from .bell import SecurityThreshold, ThresholdMode
from .config import Mode, ScenarioConfig, build_config, load_document
from .dynamics import BACKEND, ChannelState, simulate
from .errors import ConfigError, DomainError, FaradayJamError
from .faraday import faraday_angle
from .polarization import (
    JOINT_SETTINGS,
    MeasurementSettings,
    apply_arm_rotation,
    estimate_correlation,
    sample_coincidences,
    settings_correlations,
)
from .reporting import FORMATS, Report, figure1_data, figure1_report, table_report

log = logging.getLogger("faradayjam")

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4

DEFAULT_TABLE_THRESHOLDS = (SecurityThreshold.p_value(0.05), SecurityThreshold.p_value(0.006))
DEFAULT_FIBER = "fiber-1550nm-cruz"


def _threshold_label(t: SecurityThreshold) -> str:
    prefix = "k" if t.mode is ThresholdMode.SIGMA_MULTIPLE else "p"
    return f"{prefix}={t.value!r}"


def _verdet_report(cfg: ScenarioConfig) -> Report:
    media = cfg.media or [presets.get_medium(n) for n in presets.medium_names()]
    region = cfg.field_region
    rep = Report(("medium", "wavelength_m", "verdet_rad_per_T_m", "b0_T", "length_m", "faraday_angle_rad"))
    for m in media:
        v = m.verdet()
        rep.add(m.name, m.wavelength_m, v, region.B0, region.L, faraday_angle(v, region))
    return rep


def _plan_report(cfg: ScenarioConfig) -> Report:
    exps = cfg.experiments or [presets.get_experiment(n) for n in presets.experiment_names()]
    thresholds = cfg.thresholds or [SecurityThreshold.sigmas(1.7)]
    media = cfg.media or [presets.get_medium(DEFAULT_FIBER)]
    rep = Report((
        "ref", "distance_m", "s_meas", "sigma", "threshold_k", "s_tilde", "alpha_rad",
        "medium", "verdet_rad_per_T_m", "b0l_min_T_m", "qber_increase",
    ))
    for e in exps:
        for t in thresholds:
            for m in media:
                p = planner.plan_attack(e, t, m)
                rep.add(
                    e.label, e.distance_km * 1e3, e.estimate.s_value, e.estimate.sigma, t.k,
                    p.s_tilde, p.alpha, m.name, p.verdet, p.b0l_min, p.qber_increase,
                )
    return rep


def _chsh_sim_report(cfg: ScenarioConfig) -> Report:
    # every angle is sampled from the same seed (common random numbers)
    rep = Report(
        ("alpha_rad", "n_pairs", "seed")
        + tuple(f"e_{k}" for k in JOINT_SETTINGS)
        + ("s_hat", "s_stderr", "s_analytic")
    )
    for alpha in cfg.alphas or [0.0]:
        settings = apply_arm_rotation(MeasurementSettings(), alpha)
        counts = sample_coincidences(cfg.state, settings, cfg.n_pairs, cfg.seed, cfg.visibility)
        e_hat = [estimate_correlation(counts[k])[0] for k in JOINT_SETTINGS]
        s_hat, s_se = bell.chsh_from_counts(counts)
        s_an = bell.chsh_from_correlations(settings_correlations(cfg.state, settings, cfg.visibility))
        rep.add(alpha, cfg.n_pairs, cfg.seed, *e_hat, s_hat, s_se, s_an)
    return rep


def _qber_report(cfg: ScenarioConfig) -> Report:
    rep = Report(("alpha_rad", "baseline_qber", "qber_increase", "total_qber"))
    for a in cfg.alphas or [0.0]:
        rep.add(a, cfg.baseline_qber, planner.qber_increase(a), planner.total_qber(cfg.baseline_qber, a))
    return rep


def _dynamics_report(cfg: ScenarioConfig) -> Report:
    tl = simulate(cfg.schedule, cfg.countermeasure, cfg.time_step)
    durations = tl.state_durations()
    log.info(
        "availability=%.6f secure_s=%.6g jammed_s=%.6g realigning_s=%.6g backend=%s",
        tl.availability, durations[ChannelState.SECURE], durations[ChannelState.JAMMED],
        durations[ChannelState.REALIGNING], BACKEND,
    )
    rep = Report(("t_s", "alpha_applied_rad", "compensation_rad", "residual_rad", "qber", "state"))
    for s in tl.samples():
        rep.add(s.t, s.alpha_applied, s.compensation, s.residual_alpha, s.qber, s.state.name)
    return rep


def _tables_report(cfg: ScenarioConfig) -> Report:
    exps = cfg.experiments or presets.table_experiments()
    thresholds = cfg.thresholds or list(DEFAULT_TABLE_THRESHOLDS)
    medium = cfg.media[0] if cfg.media else presets.get_medium(DEFAULT_FIBER)
    tables = planner.reproduce_tables(exps, thresholds, medium)
    return table_report([(_threshold_label(t), rows) for t, rows in tables])


def _figure1_report(cfg: ScenarioConfig) -> Report:
    exp = cfg.experiments[0] if cfg.experiments else presets.get_experiment("yin1")
    if cfg.alphas:
        alpha = cfg.alphas[0]
    else:
        t = cfg.thresholds[0] if cfg.thresholds else SecurityThreshold.sigmas(1.7)
        alpha = bell.required_alpha(exp.estimate, t)
    return figure1_report(figure1_data(exp.estimate, alpha, cfg.grid))


_DISPATCH = {
    Mode.VERDET: _verdet_report,
    Mode.PLAN: _plan_report,
    Mode.CHSH_SIM: _chsh_sim_report,
    Mode.QBER: _qber_report,
    Mode.DYNAMICS: _dynamics_report,
    Mode.TABLES: _tables_report,
    Mode.FIGURE1: _figure1_report,
}


def build_report(cfg: ScenarioConfig) -> Report:
    return _DISPATCH[cfg.mode](cfg)


def write_output(text: str, path: Path | None) -> None:
    """Write ``text`` to ``path`` atomically, or to stdout when no path is set."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent if str(path.parent) else ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_scenario(cfg: ScenarioConfig) -> int:
    """Compute the report for ``cfg`` and write it; returns the exit status."""
    try:
        text = build_report(cfg).render(cfg.output_format)
    except ConfigError as exc:
        _diagnose(exc)
        return EXIT_CONFIG
    except DomainError as exc:
        _diagnose(exc)
        return EXIT_DOMAIN
    try:
        write_output(text, cfg.output_path)
    except OSError as exc:
        print(f"faradayjam: error [IO01]: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _diagnose(exc: FaradayJamError) -> None:
    print(f"faradayjam: error [{exc.code}]: {exc}", file=sys.stderr)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="faradayjam",
        description="Faraday-rotation jamming of polarization QKD: physics, statistics and planning.",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="verb", required=True)
    helps = {
        Mode.VERDET: "Verdet constants and Faraday angles for media",
        Mode.PLAN: "minimum rotation and field-length product to jam an experiment",
        Mode.CHSH_SIM: "Monte Carlo Bell test with a rotated arm",
        Mode.QBER: "QBER added by a polarization rotation",
        Mode.DYNAMICS: "attack schedule versus realignment countermeasure timeline",
        Mode.TABLES: "fiber feasibility tables at printed precision",
        Mode.FIGURE1: "Gaussian densities of S before and after jamming",
    }
    for mode, text in helps.items():
        s = sub.add_parser(mode.value, help=text)
        s.add_argument("--config", type=Path, help="YAML scenario document")
        s.add_argument("--preset", help="medium (verdet, plan, tables), experiment (figure1) or scenario (dynamics)")
        s.add_argument("--experiment", action="append", help="experiment preset; repeatable")
        s.add_argument("--seed", type=int, help="Monte Carlo seed")
        s.add_argument("--n-pairs", type=int, help="pairs per joint setting (chsh-sim)")
        s.add_argument("--alpha", type=float, action="append", help="rotation in rad; repeatable")
        s.add_argument("--threshold-k", type=float, action="append", help="trust threshold in sigmas; repeatable")
        s.add_argument("--threshold-p", type=float, action="append", help="trust threshold as p-value; repeatable")
        s.add_argument("--out", type=Path, help="output file (default stdout)")
        s.add_argument("--format", choices=FORMATS, help="report format (default csv)")
    return p


_PRESET_KEY = {
    Mode.VERDET: "medium",
    Mode.PLAN: "medium",
    Mode.TABLES: "medium",
    Mode.FIGURE1: "experiment",
    Mode.DYNAMICS: "scenario",
}


def _document(args: argparse.Namespace, mode: Mode) -> dict:
    doc = load_document(args.config) if args.config else {}
    if args.preset:
        if mode not in _PRESET_KEY:
            raise ConfigError(f"{mode.value} takes no --preset")
        doc[_PRESET_KEY[mode]] = args.preset
    if args.experiment:
        doc["experiment"] = args.experiment
    if args.alpha:
        doc.pop("alpha", None)
        doc["alphas"] = args.alpha
    thresholds = [{"k": k} for k in args.threshold_k or ()] + [{"p": p} for p in args.threshold_p or ()]
    if thresholds:
        doc["threshold"] = thresholds
    mc = dict(doc.get("monte_carlo") or {})
    if args.seed is not None:
        mc["seed"] = args.seed
    if args.n_pairs is not None:
        mc["n_pairs"] = args.n_pairs
    if mc:
        doc["monte_carlo"] = mc
    out = dict(doc.get("output") or {})
    if args.out is not None:
        out["path"] = str(args.out)
    if args.format is not None:
        out["format"] = args.format
    if out:
        doc["output"] = out
    return doc


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    level = logging.INFO if args.verbose or args.verb == Mode.DYNAMICS.value else logging.WARNING
    logging.basicConfig(format="faradayjam: %(message)s", stream=sys.stderr)
    log.setLevel(level)
    mode = Mode(args.verb)
    try:
        cfg = build_config(_document(args, mode), mode)
    except ConfigError as exc:
        _diagnose(exc)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"faradayjam: error [IO01]: {exc}", file=sys.stderr)
        return EXIT_IO
    return run_scenario(cfg)


if __name__ == "__main__":
    sys.exit(main())
