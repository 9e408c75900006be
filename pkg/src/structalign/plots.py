"""Minimal deterministic SVG line and scatter plots.

CSV files are the data contract; these renderings exist for quick visual
inspection only, so they carry axes, ticks, and labels and nothing else.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .manifest import atomic_write_text

__all__ = ["svg_line_plot", "svg_scatter_plot"]

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _scale(values: np.ndarray, lo_px: float, hi_px: float, invert=False):
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        hi = lo + 1.0
    if invert:
        lo_px, hi_px = hi_px, lo_px

    def to_px(v):
        return lo_px + (v - lo) / (hi - lo) * (hi_px - lo_px)

    return to_px, lo, hi


def _frame(xlabel: str, ylabel: str, x_lo, x_hi, y_lo, y_hi, invert_y: bool):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="black"/>',
        f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 12}" text-anchor="middle" '
        f'font-size="14">{xlabel}</text>',
        f'<text x="16" y="{(_MT + _H - _MB) / 2}" text-anchor="middle" '
        f'font-size="14" transform="rotate(-90 16 {(_MT + _H - _MB) / 2})">{ylabel}</text>',
        f'<text x="{_ML}" y="{_H - _MB + 18}" text-anchor="middle" '
        f'font-size="12">{_fmt(x_lo)}</text>',
        f'<text x="{_W - _MR}" y="{_H - _MB + 18}" text-anchor="middle" '
        f'font-size="12">{_fmt(x_hi)}</text>',
    ]
    y_bottom, y_top = (y_hi, y_lo) if invert_y else (y_lo, y_hi)
    parts.append(
        f'<text x="{_ML - 6}" y="{_H - _MB + 4}" text-anchor="end" '
        f'font-size="12">{_fmt(y_bottom)}</text>'
    )
    parts.append(
        f'<text x="{_ML - 6}" y="{_MT + 4}" text-anchor="end" '
        f'font-size="12">{_fmt(y_top)}</text>'
    )
    return parts


def _prepare(xs, ys, invert_y):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise ValidationError("plot needs two equal-length coordinate arrays (>= 2 points)")
    x_px, x_lo, x_hi = _scale(xs, _ML, _W - _MR)
    y_px, y_lo, y_hi = _scale(ys, _H - _MB, _MT, invert=invert_y)
    return xs, ys, x_px, y_px, x_lo, x_hi, y_lo, y_hi


def svg_line_plot(xs, ys, path, xlabel="", ylabel="", invert_y=False) -> None:
    """Render a polyline; ``invert_y`` flips the axis (used for DBI curves)."""
    xs, ys, x_px, y_px, x_lo, x_hi, y_lo, y_hi = _prepare(xs, ys, invert_y)
    parts = _frame(xlabel, ylabel, x_lo, x_hi, y_lo, y_hi, invert_y)
    coords = " ".join(f"{_fmt(x_px(x))},{_fmt(y_px(y))}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{coords}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    parts.append("</svg>")
    atomic_write_text(path, "\n".join(parts) + "\n")


def svg_scatter_plot(xs, ys, path, xlabel="", ylabel="", invert_y=False) -> None:
    xs, ys, x_px, y_px, x_lo, x_hi, y_lo, y_hi = _prepare(xs, ys, invert_y)
    parts = _frame(xlabel, ylabel, x_lo, x_hi, y_lo, y_hi, invert_y)
    for x, y in zip(xs, ys):
        parts.append(
            f'<circle cx="{_fmt(x_px(x))}" cy="{_fmt(y_px(y))}" r="4" '
            f'fill="firebrick" fill-opacity="0.7"/>'
        )
    parts.append("</svg>")
    atomic_write_text(path, "\n".join(parts) + "\n")
