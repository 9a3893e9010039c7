"""Box-percentile summaries of replicated estimates, emitted as SVG + CSV.

A box-percentile glyph draws the whole empirical distribution: at quantile
level q the glyph's half-width is proportional to min(q, 1 - q), so it is
widest at the median and tapers to points at the extremes.  The quantiles
use the same inclusive linear-interpolation definition as the simulation
summaries.  Output is plain SVG text plus a CSV dump of the quantile
polygons, both byte-deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = ["QuantilePolygon", "build_quantile_polygon", "render_svg", "write_polygon_csv"]


@dataclass(frozen=True)
class QuantilePolygon:
    """Quantile profile of one batch of estimates.

    ``quantile_levels`` ascend through [0, 1] and include 0.5;
    ``quantile_values`` are the matching estimate quantiles (non-
    decreasing) and ``median`` is the value at level 0.5.
    """

    parameter_name: str
    quantile_levels: np.ndarray
    quantile_values: np.ndarray
    median: float

    def __post_init__(self):
        # copy so freezing the arrays cannot touch a caller-owned buffer
        levels = np.array(self.quantile_levels, dtype=float)
        values = np.array(self.quantile_values, dtype=float)
        if levels.ndim != 1 or levels.shape != values.shape:
            raise ValueError("quantile_levels and quantile_values must be matching 1-d arrays")
        if np.any(np.diff(levels) <= 0) or levels[0] < 0.0 or levels[-1] > 1.0:
            raise ValueError("quantile_levels must ascend within [0, 1]")
        if not np.any(levels == 0.5):
            raise ValueError("quantile_levels must include 0.5")
        if np.any(np.diff(values) < 0):
            raise ValueError("quantile_values must be non-decreasing")
        if self.median != values[levels == 0.5][0]:
            raise ValueError("median must equal the value at level 0.5")
        levels.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "quantile_levels", levels)
        object.__setattr__(self, "quantile_values", values)


def build_quantile_polygon(estimates, resolution: int, name: str = "estimate") -> QuantilePolygon:
    """Quantiles of the estimates at ``resolution`` evenly spaced levels.

    ``resolution`` must be an odd integer >= 3 so that the level grid over
    [0, 1] (endpoints included) contains 0.5 exactly.
    """
    est = np.asarray(estimates, dtype=float)
    if est.size == 0:
        raise ValueError("estimates must be non-empty")
    if not (isinstance(resolution, (int, np.integer)) and resolution >= 3 and resolution % 2 == 1):
        raise ValueError(f"resolution must be an odd integer >= 3, got {resolution!r}")
    levels = np.linspace(0.0, 1.0, resolution)
    values = np.quantile(est, levels, method="linear")
    return QuantilePolygon(
        parameter_name=name,
        quantile_levels=levels,
        quantile_values=values,
        median=float(values[resolution // 2]),
    )


# Fixed figure geometry (pixels).
_SLOT_WIDTH = 140
_GLYPH_HALF_WIDTH = 50.0
_HEIGHT = 360
_TOP = 20
_BOTTOM = 40
_LEFT = 60


def render_svg(polygons: list[QuantilePolygon], output_path) -> None:
    """Write one box-percentile glyph per polygon to an SVG file.

    All glyphs share a [0, 1] vertical axis (the estimates are
    probabilities).  The file contents depend only on the polygons, so
    rerenders are byte-identical.
    """
    if not polygons:
        raise ValueError("at least one polygon is required")
    axis_height = _HEIGHT - _TOP - _BOTTOM
    width = _LEFT + _SLOT_WIDTH * len(polygons) + 20

    def y_pixel(value: float) -> float:
        return _TOP + (1.0 - value) * axis_height

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_HEIGHT}" '
        f'viewBox="0 0 {width} {_HEIGHT}">',
        f'<rect width="{width}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{_LEFT}" y1="{y_pixel(1.0):.2f}" x2="{_LEFT}" y2="{y_pixel(0.0):.2f}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = y_pixel(tick)
        lines.append(f'<line x1="{_LEFT - 5}" y1="{y:.2f}" x2="{_LEFT}" y2="{y:.2f}" '
                     'stroke="black" stroke-width="1"/>')
        lines.append(f'<text x="{_LEFT - 9}" y="{y + 4:.2f}" font-size="11" '
                     f'text-anchor="end" font-family="sans-serif">{tick:.2f}</text>')
    for slot, poly in enumerate(polygons):
        center = _LEFT + _SLOT_WIDTH * slot + _SLOT_WIDTH / 2.0
        points: list[tuple[float, float]] = []
        levels = poly.quantile_levels.tolist()
        values = poly.quantile_values.tolist()
        for q, v in zip(levels, values):
            half = _GLYPH_HALF_WIDTH * min(q, 1.0 - q) / 0.5
            points.append((center + half, y_pixel(v)))
        for q, v in zip(reversed(levels), reversed(values)):
            half = _GLYPH_HALF_WIDTH * min(q, 1.0 - q) / 0.5
            points.append((center - half, y_pixel(v)))
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        lines.append(f'<polygon points="{path}" fill="lightsteelblue" stroke="black" '
                     'stroke-width="1"/>')
        median_y = y_pixel(poly.median)
        lines.append(f'<line x1="{center - _GLYPH_HALF_WIDTH:.2f}" y1="{median_y:.2f}" '
                     f'x2="{center + _GLYPH_HALF_WIDTH:.2f}" y2="{median_y:.2f}" '
                     'stroke="black" stroke-width="1.5"/>')
        lines.append(f'<text x="{center:.2f}" y="{_HEIGHT - 14}" font-size="13" '
                     f'text-anchor="middle" font-family="sans-serif">{_escape(poly.parameter_name)}</text>')
    lines.append("</svg>")
    with open(output_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def write_polygon_csv(polygons: list[QuantilePolygon], output_path) -> None:
    """Dump the polygons as rows of parameter,level,value."""
    if not polygons:
        raise ValueError("at least one polygon is required")
    with open(output_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["parameter", "level", "value"])
        for poly in polygons:
            for q, v in zip(poly.quantile_levels.tolist(), poly.quantile_values.tolist()):
                writer.writerow([poly.parameter_name, q, v])


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
