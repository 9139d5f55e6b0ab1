"""Report tables and their CSV, JSON-lines and aligned-text renderings.

Formatting is fully determined by the row values: floats are written with
their shortest round-trip repr unless a column carries a fixed format, lines
end in ``\\n`` and the decimal separator is always ``.``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .bell import BELL_LIMIT, TSIRELSON_BOUND, ChshEstimate, jammed_s
from .errors import DomainError
from .planner import TableRow

FORMATS = ("csv", "jsonl", "text")


def _default_fmt(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def fixed(places: int) -> Callable[[Any], str]:
    return lambda v: f"{float(v):.{places}f}"


@dataclass
class Report:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    formats: dict[str, Callable[[Any], str]] = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        for c, v in zip(self.columns, values):
            if isinstance(v, float) and not math.isfinite(v):
                raise DomainError(f"column {c}: non-finite value {v}")
        self.rows.append(tuple(values))

    def formatted(self) -> list[list[str]]:
        fmts = [self.formats.get(c, _default_fmt) for c in self.columns]
        return [[f(v) for f, v in zip(fmts, row)] for row in self.rows]

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return to_csv(self)
        if fmt == "jsonl":
            return to_jsonl(self)
        if fmt == "text":
            return to_text(self)
        raise ValueError(f"unknown format {fmt!r}")


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    w.writerows(report.formatted())
    return buf.getvalue()


def _json_value(v: Any) -> Any:
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def to_jsonl(report: Report) -> str:
    lines = [
        json.dumps({c: _json_value(v) for c, v in zip(report.columns, row)}, sort_keys=False)
        for row in report.rows
    ]
    return "".join(line + "\n" for line in lines)


def to_text(report: Report) -> str:
    cells = [list(report.columns)] + report.formatted()
    widths = [max(len(r[i]) for r in cells) for i in range(len(report.columns))]
    out = []
    for i, r in enumerate(cells):
        out.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


# --- feasibility tables -------------------------------------------------------

TABLE_COLUMNS = ("threshold", "ref", "distance_m", "s_meas", "sigma", "s_tilde", "alpha_rad", "b0l_min_T_m")


def table_report(tables: Sequence[tuple[str, Sequence[TableRow]]]) -> Report:
    two = fixed(2)
    rep = Report(
        TABLE_COLUMNS,
        formats={
            "distance_m": fixed(0),
            "s_meas": two,
            "sigma": two,
            "s_tilde": two,
            "alpha_rad": two,
            "b0l_min_T_m": two,
        },
    )
    for label, rows in tables:
        for r in rows:
            rep.add(label, r.ref, r.distance_km * 1e3, r.s_meas, r.sigma, r.s_tilde, r.alpha, r.b0l_min)
    return rep


# --- Gaussian densities behind the shifted-S picture ------------------------

@dataclass(frozen=True)
class FigurePoint:
    s: float
    density_original: float
    density_jammed: float
    marker: str = ""


def gaussian_pdf(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    z = (x - mu) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def figure1_data(est: ChshEstimate, alpha: float, grid: int = 241) -> list[FigurePoint]:
    """Normal densities of measured S before and after a rotation ``alpha``.

    The grid spans at least [1.8, 3.0] and is widened to cover six standard
    deviations around both means; the Bell limit and the Tsirelson bound are
    inserted as marked points.
    """
    if grid < 2:
        raise DomainError(f"grid needs at least 2 points, got {grid}")
    if not est.sigma > 0:
        raise DomainError("densities need sigma > 0")
    mu, sd = est.s_value, est.sigma
    mu_j = jammed_s(mu, alpha)
    lo = min(1.8, mu - 6 * sd, mu_j - 6 * sd)
    hi = max(3.0, mu + 6 * sd, mu_j + 6 * sd)
    xs = np.linspace(lo, hi, grid)
    markers = {BELL_LIMIT: "bell_limit", TSIRELSON_BOUND: "tsirelson_bound"}
    xs = np.unique(np.concatenate([xs, list(markers)]))
    f0 = gaussian_pdf(xs, mu, sd)
    f1 = gaussian_pdf(xs, mu_j, sd)
    return [FigurePoint(float(x), float(a), float(b), markers.get(float(x), "")) for x, a, b in zip(xs, f0, f1)]


def figure1_report(points: Sequence[FigurePoint]) -> Report:
    rep = Report(("s", "density_original", "density_jammed", "marker"))
    for p in points:
        rep.add(p.s, p.density_original, p.density_jammed, p.marker)
    return rep
