"""Parse scaling CSVs and render one log-log panel per (target, h) series.

The input format is the `scaling-v1` CSV emitted by the `twoisland scaling`
command: one row per (eps, N, target, h) with `bound_total`, an optional
`exact_distance` (empty above the exact-solve cutoff) and a `theory_slope`
column.  Unknown schema versions are rejected rather than guessed at.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SUPPORTED_SCHEMAS = ("scaling-v1",)
REQUIRED_COLUMNS = ("schema", "kind", "eps", "target", "h", "N",
                    "exact_distance", "bound_total", "theory_slope")


class SchemaError(ValueError):
    """Unknown schema version or missing columns."""


class EmptySelectionError(ValueError):
    """The panel filters matched no rows."""


@dataclass
class SeriesRow:
    kind: str
    eps: float
    target: str
    h: str
    n: int
    bound_total: float
    exact_distance: Optional[float]
    theory_slope: float


@dataclass
class PanelReport:
    """What one panel shows, including the annotation that was drawn."""

    kind: str
    eps: float
    target: str
    h: str
    n_points: int
    fitted_slope: Optional[float]
    distance_slope: Optional[float]
    theory_slope: float
    annotation: str
    insufficient_points: bool = False


@dataclass
class FigureReport:
    out_path: str
    panels: List[PanelReport] = field(default_factory=list)


def read_scaling_csv(path) -> List[SeriesRow]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"CSV not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"missing columns: {', '.join(missing)}")
        rows = []
        for record in reader:
            schema = record["schema"]
            if schema not in SUPPORTED_SCHEMAS:
                raise SchemaError(
                    f"unsupported schema {schema!r}; this tool reads "
                    f"{', '.join(SUPPORTED_SCHEMAS)}")
            exact = record["exact_distance"]
            rows.append(SeriesRow(
                kind=record["kind"],
                eps=float(record["eps"]),
                target=record["target"],
                h=record["h"],
                n=int(record["N"]),
                bound_total=float(record["bound_total"]),
                exact_distance=float(exact) if exact else None,
                theory_slope=float(record["theory_slope"]),
            ))
    return rows


def _fit_slope(ns: Sequence[int], values: Sequence[float]) -> Optional[float]:
    pairs = [(n, v) for n, v in zip(ns, values) if v is not None and v > 0]
    if len(pairs) < 2:
        return None
    xs = np.log([p[0] for p in pairs])
    ys = np.log([p[1] for p in pairs])
    return float(np.polyfit(xs, ys, 1)[0])


def _slope_annotation(slope: Optional[float]) -> str:
    if slope is None:
        return "insufficient points for a slope fit"
    return f"fit slope = {slope:.2f}"


def render_scaling_figure(
    csv_path,
    out_path,
    targets: Optional[Sequence[str]] = None,
    hs: Optional[Sequence[str]] = None,
    eps_values: Optional[Sequence[float]] = None,
    dpi: int = 150,
) -> FigureReport:
    """Render one panel per (kind, eps, target, h) series in the CSV.

    Each panel shows bound totals (line) and exact distances (markers) on
    log-log axes, the fitted bound slope, and a dashed reference line with
    the theoretical slope.  Returns a report with the fitted slopes so
    callers can check what was annotated.
    """
    rows = read_scaling_csv(csv_path)
    if targets:
        rows = [r for r in rows if r.target in set(targets)]
    if hs:
        rows = [r for r in rows if r.h in set(hs)]
    if eps_values is not None:
        wanted = set(eps_values)
        rows = [r for r in rows if any(math.isclose(r.eps, e) for e in wanted)]
    if not rows:
        raise EmptySelectionError("no rows match the requested panels")

    groups: Dict[Tuple[str, float, str, str], List[SeriesRow]] = {}
    for r in rows:
        groups.setdefault((r.kind, r.eps, r.target, r.h), []).append(r)
    keys = sorted(groups)

    ncols = min(4, len(keys))
    nrows = (len(keys) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(4.2 * ncols, 3.4 * nrows))
    report = FigureReport(out_path=str(out_path))
    for k, key in enumerate(keys):
        ax = axes[k // ncols][k % ncols]
        series = sorted(groups[key], key=lambda r: r.n)
        kind, eps, target, h = key
        ns = [r.n for r in series]
        bounds = [r.bound_total for r in series]
        dists = [r.exact_distance for r in series]
        theory = series[0].theory_slope
        ax.loglog(ns, bounds, "o-", color="tab:blue", label="bound total")
        exact_pairs = [(n, d) for n, d in zip(ns, dists) if d is not None and d > 0]
        if exact_pairs:
            ax.loglog(*zip(*exact_pairs), "s", color="tab:red",
                      label="exact distance")
        slope = _fit_slope(ns, bounds)
        dist_slope = _fit_slope(ns, dists)
        annotation = _slope_annotation(slope)
        if slope is not None:
            # dashed reference with the theoretical slope through the first point
            ref = [bounds[0] * (n / ns[0]) ** theory for n in ns]
            ax.loglog(ns, ref, "--", color="gray",
                      label=f"reference slope {theory:.2f}")
        ax.annotate(annotation, xy=(0.03, 0.05), xycoords="axes fraction",
                    fontsize=9)
        ax.set_title(f"{kind} eps={eps:g} {target} h={h}", fontsize=10)
        ax.set_xlabel("N")
        ax.set_ylabel("value")
        ax.legend(fontsize=7, loc="upper right")
        report.panels.append(PanelReport(
            kind=kind, eps=eps, target=target, h=h,
            n_points=len(ns), fitted_slope=slope, distance_slope=dist_slope,
            theory_slope=theory, annotation=annotation,
            insufficient_points=slope is None,
        ))
    for k in range(len(keys), nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.tight_layout()
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return report
