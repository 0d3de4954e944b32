"""Report serialization: JSON array, summary CSV and two-column plot data."""
from __future__ import annotations

import csv
import io
import json
import os
import re
from pathlib import Path

FORMATS = ("json", "csv", "plotdata")
CSV_COLUMNS = ("check_id", "pass", "margin", "runtime")


def _as_dicts(reports):
    return [r if isinstance(r, dict) else r.to_json() for r in reports]


def render_json(reports) -> str:
    return json.dumps(_as_dicts(reports), indent=2, sort_keys=True, allow_nan=False) + "\n"


def render_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in _as_dicts(reports):
        w.writerow([r["check_id"], "true" if r["pass"] else "false", repr(_num(r["margin"])),
                    repr(_num(r["runtime"]))])
    return buf.getvalue()


def _num(x):
    return float(x) if isinstance(x, str) else x


def _slug(text):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text)


def render_plotdata(reports) -> dict[str, str]:
    """One ``x y`` text file per named series, keyed by ``<check_id>.<series>.dat``."""
    files = {}
    for r in _as_dicts(reports):
        for name, pts in sorted(r.get("series", {}).items()):
            lines = ["# x y"] + [f"{repr(_num(x))} {repr(_num(y))}" for x, y in pts]
            files[f"{_slug(r['check_id'])}.{_slug(name)}.dat"] = "\n".join(lines) + "\n"
    return files


def _write(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def emit_report(reports, format: str, path) -> list[Path]:
    """Write ``reports`` in ``format``; returns the files written.

    For ``plotdata`` ``path`` is a directory that receives one file per
    series.  Output bytes depend only on the reports.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to emit")
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; choose from {FORMATS}")
    path = Path(path)
    if format == "json":
        _write(path, render_json(reports))
        return [path]
    if format == "csv":
        _write(path, render_csv(reports))
        return [path]
    path.mkdir(parents=True, exist_ok=True)
    out = []
    for name, text in render_plotdata(reports).items():
        _write(path / name, text)
        out.append(path / name)
    return out


def load_reports(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a JSON array of reports")
    return data
