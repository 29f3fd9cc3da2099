"""CSV, SVG and JSON writers plus run manifests.

CSV is the canonical format. Floats are written with 12 significant digits
and missing values as empty cells, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np


def fmt(value):
    """Fixed 12-significant-digit formatting; NaN and None become empty cells."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    value = float(value)
    if not math.isfinite(value):
        return "" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    text = f"{value:.12g}"
    return "0" if text == "-0" else text


@dataclass
class Table:
    """Named columns of equal length with ``key=value`` metadata."""

    columns: dict
    meta: dict = field(default_factory=dict)
    title: str = ""

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns have different lengths: {lengths}")

    def __len__(self):
        return len(next(iter(self.columns.values()), ()))

    def to_csv(self):
        buf = io.StringIO()
        if self.meta:
            buf.write("# " + " ".join(f"{k}={fmt(v) if not isinstance(v, str) else v}"
                                      for k, v in self.meta.items()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in zip(*self.columns.values()):
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self):
        def clean(v):
            if isinstance(v, str) or v is None:
                return v
            v = float(v)
            return v if math.isfinite(v) else None

        return {
            "title": self.title,
            "meta": self.meta,
            "columns": {k: [clean(v) for v in col] for k, col in self.columns.items()},
        }


def curve_table(curve):
    """Table view of a :class:`~spdc_hom.hom.HomCurve`."""
    return Table({curve.x_label: curve.x, curve.y_label: curve.y}, meta=curve.header())


# SVG -------------------------------------------------------------------------

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def svg_plot(x, series, x_label, y_label, title="", width=640, height=400):
    """A minimal line plot: one polyline per series, axes, ticks and labels.

    ``series`` maps a legend label to y values sampled on ``x``. NaN values
    break a line into separate polylines.
    """
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([y[np.isfinite(y)] for y in ys.values()] + [np.array([])])
    x_lo, x_hi = float(np.nanmin(x)), float(np.nanmax(x))
    y_lo, y_hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    left, right, top, bottom = 70, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return top + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(t):.2f}" y1="{top + ph}" x2="{px(t):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{fmt(t)}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{left - 4}" y1="{py(t):.2f}" x2="{left}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{py(t) + 4:.2f}" text-anchor="end">{fmt(t)}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2})">{escape(y_label)}</text>')
    if title:
        out.append(f'<text x="{left + pw / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i, (label, y) in enumerate(ys.items()):
        color = _COLORS[i % len(_COLORS)]
        ok = np.isfinite(y) & np.isfinite(x)
        for seg in np.split(np.arange(len(y)), np.flatnonzero(np.diff(ok.astype(int))) + 1):
            seg = seg[ok[seg]]
            if seg.size < 2:
                continue
            pts = " ".join(f"{px(x[j]):.2f},{py(y[j]):.2f}" for j in seg)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        if len(ys) > 1:
            ly = top + 14 * (i + 1)
            out.append(f'<text x="{left + pw - 6}" y="{ly}" text-anchor="end" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def table_svg(table, x_column, y_label=None):
    series = {k: v for k, v in table.columns.items() if k != x_column and _numeric(v)}
    return svg_plot(table.columns[x_column], series, x_column, y_label or ", ".join(series), table.title)


def _numeric(values):
    return all(v is None or isinstance(v, (int, float, np.integer, np.floating)) for v in values)


# manifests -------------------------------------------------------------------


def version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=_json_default)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def config_hash(command, setup_dict, options):
    payload = canonical_json({"command": command, "setup": setup_dict, "options": options})
    return hashlib.sha256(payload.encode()).hexdigest()


def write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def write_json(path, data):
    return write_text(path, json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n")


def write_manifest(outdir, stem, command, setup, options, outputs):
    """Record how a set of files was produced next to them."""
    setup_dict = setup.to_dict()
    manifest = {
        "command": command,
        "setup": setup_dict,
        "options": options,
        "outputs": sorted(str(Path(p).name) for p in outputs),
        "version": version(),
        "config_hash": config_hash(command, setup_dict, options),
    }
    return write_json(Path(outdir) / f"{stem}.manifest.json", manifest)
