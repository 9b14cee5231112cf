"""Serialisation of curves, circle boundaries and lines (JSON, CSV, SVG)."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

import numpy as np

from .curves import PolyCurve

SIG_DIGITS = 12


def fmt(x: float) -> str:
    return f"{float(x):.{SIG_DIGITS}g}"


def rounded(obj):
    """Copy of a JSON-ready structure with every float cut to 12 significant digits."""
    if isinstance(obj, (float, np.floating)):
        return float(fmt(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return rounded(obj.tolist())
    if isinstance(obj, dict):
        return {k: rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(rounded(obj), indent=2)


# -- curves ---------------------------------------------------------------------

def curve_to_json(c: PolyCurve) -> str:
    return dumps(c.as_array())


def curve_from_json(text: str) -> PolyCurve:
    return PolyCurve.from_array(np.asarray(json.loads(text), dtype=float))


def curve_to_csv(c: PolyCurve) -> str:
    return points_to_csv(c.as_array())


def points_to_csv(V) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x1", "x2"])
    for x1, x2 in np.asarray(V, dtype=float):
        w.writerow([fmt(x1), fmt(x2)])
    return buf.getvalue()


def curve_from_csv(text: str) -> PolyCurve:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != ["x1", "x2"]:
        raise ValueError("curve CSV must start with the header 'x1,x2'")
    return PolyCurve.from_array(np.array([[float(a), float(b)] for a, b in rows[1:]]))


def labelled_to_csv(groups: Iterable[tuple[str, np.ndarray]], label: str = "piece_label") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([label, "x1", "x2"])
    for name, pts in groups:
        for x1, x2 in np.asarray(pts, dtype=float):
            w.writerow([name, fmt(x1), fmt(x2)])
    return buf.getvalue()


def labelled_from_csv(text: str) -> dict[str, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    out: dict[str, list] = {}
    for name, a, b in rows[1:]:
        out.setdefault(name, []).append((float(a), float(b)))
    return {k: np.array(v) for k, v in out.items()}


# -- SVG --------------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#e377c2", "#17becf", "#bcbd22")


def svg_document(polylines: Sequence[tuple[str, np.ndarray]], size: int = 480,
                 markers: Sequence[np.ndarray] = ()) -> str:
    """An SVG of the ideal diamond with one ``<polyline>`` per labelled point list.

    The viewBox is ``[-1, 1]^2``; the vertical axis is flipped so x2 points up.
    """
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="-1.05 -1.05 2.1 2.1">',
        '<g transform="scale(1,-1)">',
        '<polygon points="1,0 0,1 -1,0 0,-1" fill="none" stroke="#888" stroke-width="0.006"/>',
        '<line x1="-1" y1="0" x2="1" y2="0" stroke="#ddd" stroke-width="0.003"/>',
        '<line x1="0" y1="-1" x2="0" y2="1" stroke="#ddd" stroke-width="0.003"/>',
    ]
    for k, (name, pts) in enumerate(polylines):
        coords = " ".join(f"{fmt(a)},{fmt(b)}" for a, b in np.asarray(pts, dtype=float))
        colour = _PALETTE[k % len(_PALETTE)]
        parts.append(f'<polyline data-label="{name}" points="{coords}" fill="none" '
                     f'stroke="{colour}" stroke-width="0.008"/>')
    for x in markers:
        parts.append(f'<circle cx="{fmt(x[0])}" cy="{fmt(x[1])}" r="0.012" fill="black"/>')
    parts += ["</g>", "</svg>", ""]
    return "\n".join(parts)
