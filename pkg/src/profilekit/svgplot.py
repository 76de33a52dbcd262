"""Deterministic SVG emission for profile curves, matrices, and reports.

Everything is built by string assembly from the input table alone: no
timestamps, no library state, so identical inputs give byte-identical files.
Coordinates are written with two decimals, value annotations with four
significant digits.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

PLOT_KINDS = ("curve", "stackplot", "pie", "heatmap", "scatter")

MARGIN = 40.0

PALETTE = (
    "#4878a8",
    "#ee854a",
    "#6acc64",
    "#d65f5f",
    "#956cb4",
    "#8c613c",
    "#dc7ec0",
    "#797979",
    "#d5bb67",
    "#82c6e2",
)
OTHER_COLOR = "#c7c7c7"


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    width: int = 640
    height: int = 480
    top_k: int = 5

    def __post_init__(self) -> None:
        if self.kind not in PLOT_KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if self.width <= 2 * MARGIN or self.height <= 2 * MARGIN:
            raise ValueError(f"viewport {self.width}x{self.height} is too small")
        if self.top_k < 1:
            raise ValueError("top_k must be at least 1")


def read_table(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows:
        raise ValueError(f"{path} holds no table")
    return rows[0], rows[1:]


def emit_svg(spec: PlotSpec, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    if not rows:
        raise ValueError("no data rows to plot")
    if spec.kind == "curve":
        return _curve_svg(spec, header, rows)
    if spec.kind == "scatter":
        return _scatter_svg(spec, header, rows)
    if spec.kind == "stackplot":
        return _stackplot_svg(spec, header, rows)
    if spec.kind == "pie":
        return _pie_svg(spec, rows)
    return _heatmap_svg(spec, header, rows)


def write_svg(
    spec: PlotSpec,
    header: Sequence[str],
    rows: Sequence[Sequence[str]],
    path: str | Path,
) -> None:
    Path(path).write_text(emit_svg(spec, header, rows))


def _open_svg(spec: PlotSpec) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>',
    ]


def _close_svg(parts: list[str]) -> str:
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _span(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(values.min()), float(values.max())
    if hi - lo == 0.0:
        lo, hi = lo - 0.5, hi + 0.5  # a flat series still needs a finite scale
    return lo, hi


def _numeric_columns(
    header: Sequence[str], rows: Sequence[Sequence[str]], expected: int
) -> np.ndarray:
    if len(header) < expected:
        raise ValueError(f"table needs at least {expected} columns, has {len(header)}")
    try:
        return np.array([[float(cell) for cell in row] for row in rows])
    except ValueError as exc:
        raise ValueError(f"non-numeric table cell: {exc}") from exc


def _axes(spec: PlotSpec, xlo: float, xhi: float, ylo: float, yhi: float) -> list[str]:
    left, right = MARGIN, spec.width - MARGIN
    top, bottom = MARGIN, spec.height - MARGIN
    parts = [
        f'<line x1="{left:.2f}" y1="{bottom:.2f}" x2="{right:.2f}" y2="{bottom:.2f}" '
        'stroke="#333333" stroke-width="1"/>',
        f'<line x1="{left:.2f}" y1="{top:.2f}" x2="{left:.2f}" y2="{bottom:.2f}" '
        'stroke="#333333" stroke-width="1"/>',
        f'<text x="{left:.2f}" y="{bottom + 16:.2f}" font-family="monospace" '
        f'font-size="11" text-anchor="middle">{xlo:.4g}</text>',
        f'<text x="{right:.2f}" y="{bottom + 16:.2f}" font-family="monospace" '
        f'font-size="11" text-anchor="middle">{xhi:.4g}</text>',
        f'<text x="{left - 6:.2f}" y="{bottom + 4:.2f}" font-family="monospace" '
        f'font-size="11" text-anchor="end">{ylo:.4g}</text>',
        f'<text x="{left - 6:.2f}" y="{top + 4:.2f}" font-family="monospace" '
        f'font-size="11" text-anchor="end">{yhi:.4g}</text>',
    ]
    return parts


def _to_px(
    spec: PlotSpec, x: np.ndarray, y: np.ndarray, xlim: tuple[float, float], ylim: tuple[float, float]
) -> tuple[np.ndarray, np.ndarray]:
    xlo, xhi = xlim
    ylo, yhi = ylim
    px = MARGIN + (x - xlo) / (xhi - xlo) * (spec.width - 2 * MARGIN)
    py = spec.height - MARGIN - (y - ylo) / (yhi - ylo) * (spec.height - 2 * MARGIN)
    return px, py


def _curve_svg(spec: PlotSpec, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    data = _numeric_columns(header, rows, expected=2)
    x, y = data[:, 0], data[:, 1]
    xlim, ylim = _span(x), _span(y)
    px, py = _to_px(spec, x, y, xlim, ylim)
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    parts = _open_svg(spec)
    parts += _axes(spec, *xlim, *ylim)
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="{PALETTE[0]}" stroke-width="2"/>'
    )
    return _close_svg(parts)


def _scatter_svg(spec: PlotSpec, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    data = _numeric_columns(header, rows, expected=2)
    x, y = data[:, 0], data[:, 1]
    xlim, ylim = _span(x), _span(y)
    px, py = _to_px(spec, x, y, xlim, ylim)
    parts = _open_svg(spec)
    parts += _axes(spec, *xlim, *ylim)
    parts += [
        f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{PALETTE[0]}" fill-opacity="0.75"/>'
        for a, b in zip(px, py)
    ]
    return _close_svg(parts)


def stack_layers(
    channel_names: Sequence[str], channels: np.ndarray, top_k: int
) -> tuple[list[str], np.ndarray]:
    """Pick the top_k channels by mean value and fold the rest into 'other'.

    Returns (names, cumulative edges) where edges has one more column than
    names and edges[:, -1] equals the per-row channel sum.
    """
    means = channels.mean(axis=0)
    ranked = np.argsort(-means, kind="stable")
    keep = ranked[: min(top_k, channels.shape[1])]
    names = [channel_names[i] for i in keep]
    layers = [channels[:, i] for i in keep]
    rest = np.setdiff1d(np.arange(channels.shape[1]), keep)
    if rest.size:
        names.append("other")
        layers.append(channels[:, rest].sum(axis=1))
    edges = np.zeros((channels.shape[0], len(layers) + 1))
    np.cumsum(np.stack(layers, axis=1), axis=1, out=edges[:, 1:])
    return names, edges


def _stackplot_svg(
    spec: PlotSpec, header: Sequence[str], rows: Sequence[Sequence[str]]
) -> str:
    data = _numeric_columns(header, rows, expected=2)
    x, channels = data[:, 0], data[:, 1:]
    names, edges = stack_layers(list(header[1:]), channels, spec.top_k)
    xlim = _span(x)
    ylim = (0.0, 1.0)
    parts = _open_svg(spec)
    parts += _axes(spec, *xlim, *ylim)
    for k, name in enumerate(names):
        color = OTHER_COLOR if name == "other" else PALETTE[k % len(PALETTE)]
        px_fwd, py_top = _to_px(spec, x, edges[:, k + 1], xlim, ylim)
        px_bwd, py_bot = _to_px(spec, x[::-1], edges[::-1, k], xlim, ylim)
        ring = " ".join(
            f"{a:.2f},{b:.2f}"
            for a, b in zip(np.concatenate([px_fwd, px_bwd]), np.concatenate([py_top, py_bot]))
        )
        parts.append(f'<polygon points="{ring}" fill="{color}" stroke="none"/>')
        parts.append(
            f'<rect x="{spec.width - MARGIN + 6:.2f}" y="{MARGIN + 16 * k:.2f}" '
            f'width="10" height="10" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{spec.width - MARGIN + 20:.2f}" y="{MARGIN + 16 * k + 9:.2f}" '
            f'font-family="monospace" font-size="10">{_escape(name)}</text>'
        )
    return _close_svg(parts)


def _pie_svg(spec: PlotSpec, rows: Sequence[Sequence[str]]) -> str:
    labels = [row[0] for row in rows]
    counts = np.array([float(row[1]) for row in rows])
    if np.any(counts < 0):
        raise ValueError("pie counts must be non-negative")
    total = float(counts.sum())
    if total <= 0:
        raise ValueError("pie needs a positive total count")
    cx, cy = spec.width / 2.0, spec.height / 2.0
    radius = min(spec.width, spec.height) / 2.0 - MARGIN
    parts = _open_svg(spec)
    angle = -0.5 * np.pi  # start at 12 o'clock, sweep clockwise
    for k, (label, count) in enumerate(zip(labels, counts)):
        frac = count / total
        color = PALETTE[k % len(PALETTE)]
        if frac >= 1.0:
            parts.append(
                f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius:.2f}" fill="{color}"/>'
            )
        elif frac > 0.0:
            end = angle + 2.0 * np.pi * frac
            x1, y1 = cx + radius * np.cos(angle), cy + radius * np.sin(angle)
            x2, y2 = cx + radius * np.cos(end), cy + radius * np.sin(end)
            large = 1 if frac > 0.5 else 0
            parts.append(
                f'<path d="M {cx:.2f},{cy:.2f} L {x1:.2f},{y1:.2f} '
                f'A {radius:.2f},{radius:.2f} 0 {large} 1 {x2:.2f},{y2:.2f} Z" '
                f'fill="{color}"/>'
            )
            angle = end
        parts.append(
            f'<rect x="{spec.width - MARGIN - 60:.2f}" y="{MARGIN + 16 * k:.2f}" '
            f'width="10" height="10" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{spec.width - MARGIN - 46:.2f}" y="{MARGIN + 16 * k + 9:.2f}" '
            f'font-family="monospace" font-size="10">{_escape(label)} '
            f"({count:.4g})</text>"
        )
    return _close_svg(parts)


def _ramp(frac: float) -> str:
    # white at 0 to a medium blue at 1; dark annotations stay readable
    lo = (255, 255, 255)
    hi = (47, 111, 183)
    rgb = tuple(round(a + (b - a) * frac) for a, b in zip(lo, hi))
    return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"


def _heatmap_svg(spec: PlotSpec, header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    col_names = list(header[1:])
    row_names = [row[0] for row in rows]
    values = np.array([[float(cell) for cell in row[1:]] for row in rows])
    if values.shape != (len(row_names), len(col_names)):
        raise ValueError(f"ragged heatmap table of shape {values.shape}")
    lo, hi = _span(values)
    left, top = 2 * MARGIN, 2 * MARGIN
    cell_w = (spec.width - left - MARGIN) / values.shape[1]
    cell_h = (spec.height - top - MARGIN) / values.shape[0]
    parts = _open_svg(spec)
    for j, name in enumerate(col_names):
        parts.append(
            f'<text x="{left + (j + 0.5) * cell_w:.2f}" y="{top - 8:.2f}" '
            f'font-family="monospace" font-size="11" text-anchor="middle">'
            f"{_escape(name)}</text>"
        )
    for i, name in enumerate(row_names):
        parts.append(
            f'<text x="{left - 8:.2f}" y="{top + (i + 0.5) * cell_h + 4:.2f}" '
            f'font-family="monospace" font-size="11" text-anchor="end">'
            f"{_escape(name)}</text>"
        )
        for j in range(values.shape[1]):
            frac = (values[i, j] - lo) / (hi - lo)
            parts.append(
                f'<rect x="{left + j * cell_w:.2f}" y="{top + i * cell_h:.2f}" '
                f'width="{cell_w:.2f}" height="{cell_h:.2f}" fill="{_ramp(frac)}" '
                'stroke="#ffffff" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{left + (j + 0.5) * cell_w:.2f}" '
                f'y="{top + (i + 0.5) * cell_h + 4:.2f}" font-family="monospace" '
                f'font-size="11" text-anchor="middle">{values[i, j]:.4g}</text>'
            )
    return _close_svg(parts)


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
