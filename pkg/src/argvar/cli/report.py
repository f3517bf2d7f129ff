"""Report files: full JSON, flat CSV, slack plot data and a static SVG scatter."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

CSV_COLUMNS = ("name", "lhs", "rhs", "slack", "holds", "epsilon", "D", "gamma_length", "kappa")


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, so equal reports give equal bytes)."""
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def _as_list(reports):
    return reports if isinstance(reports, (list, tuple)) else [reports]


def _rows(reports):
    for idx, rep in enumerate(_as_list(reports)):
        d = rep if isinstance(rep, dict) else rep.to_dict()
        for rec in d["records"]:
            yield idx, rec


def write_csv(reports, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for _, rec in _rows(reports):
            w.writerow(["" if rec.get(c) is None else rec[c] for c in CSV_COLUMNS])


def read_csv(path) -> list[dict]:
    """Rows of a report CSV with numbers and booleans restored (empty cells become None)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rec = {}
            for k, v in row.items():
                if v == "":
                    rec[k] = None
                elif k == "name":
                    rec[k] = v
                elif k == "holds":
                    rec[k] = v == "True"
                else:
                    rec[k] = float(v)
            out.append(rec)
    return out


def log_ratio(rec) -> float | None:
    """``log10(rhs / lhs)``; None when the record failed or ``lhs <= 0``."""
    lhs = rec.get("lhs")
    if rec.get("status", "ok") != "ok" or lhs is None or not lhs > 0:
        return None
    if rec.get("log10_rhs") is not None:
        return rec["log10_rhs"] - math.log10(lhs)
    rhs = rec.get("rhs")
    if rhs is None or not rhs > 0:
        return None
    return math.log10(rhs / lhs)


def plot_points(reports):
    return [(idx, rec["name"], y) for idx, rec in _rows(reports) if (y := log_ratio(rec)) is not None]


def write_plot_data(reports, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("scenario_index", "name", "log10_rhs_over_lhs"))
        for row in plot_points(reports):
            w.writerow(row)


def write_svg(reports, path, width=640, height=360):
    """Minimal scatter of ``log10(rhs/lhs)`` against the scenario index."""
    pts = plot_points(reports)
    pad = 40
    xs = [p[0] for p in pts] or [0]
    ys = [p[2] for p in pts] or [0.0]
    x0, x1 = min(xs), max(max(xs), min(xs) + 1)
    y0, y1 = min(min(ys), 0.0), max(max(ys), 1.0)

    def sx(x):
        return pad + (width - 2 * pad) * (x - x0) / (x1 - x0)

    def sy(y):
        return height - pad - (height - 2 * pad) * (y - y0) / (y1 - y0)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{pad}" y1="{sy(0):.1f}" x2="{width - pad}" y2="{sy(0):.1f}" stroke="#999"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
             f'<text x="{pad}" y="{pad - 10}" font-size="12">log10(rhs/lhs), max {y1:.3g}</text>',
             f'<text x="{width - pad}" y="{height - 10}" font-size="12" text-anchor="end">scenario</text>']
    for x, _, y in pts:
        color = "#c00" if y < 0 else "#036"
        parts.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="2" fill="{color}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def emit_report(reports, fmt: str, out) -> list[Path]:
    """Write a report (or a list of reports) to ``out`` plus slack plot files beside it.

    ``fmt="json"`` writes the nested reports, ``fmt="csv"`` one row per
    check.  ``<stem>_slack.csv`` holds ``(scenario index, name,
    log10(rhs/lhs))`` for records with positive ``lhs`` and
    ``<stem>_slack.svg`` draws them.  Returns the written paths.
    """
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        items = [r if isinstance(r, dict) else r.to_dict() for r in _as_list(reports)]
        out.write_text(dumps(items if isinstance(reports, (list, tuple)) else items[0]))
    elif fmt == "csv":
        write_csv(reports, out)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    plot = out.with_name(out.stem + "_slack.csv")
    svg = out.with_name(out.stem + "_slack.svg")
    write_plot_data(reports, plot)
    write_svg(reports, svg)
    return [out, plot, svg]
