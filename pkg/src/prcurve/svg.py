"""Minimal SVG line plots on the unit square, with no renderer dependency."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["unit_square_plot"]

SIZE = 400
MARGIN = 40
COLORS = ("#c0392b", "#2c3e50", "#27ae60", "#8e44ad", "#d35400")
REFERENCE_COLOR = "#999999"


def _polyline(x, y, color: str, dashed: bool = False) -> str:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    px = MARGIN + x[keep] * SIZE
    py = MARGIN + (1.0 - y[keep]) * SIZE
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"/>'


def unit_square_plot(
    curves: list[tuple[str, np.ndarray, np.ndarray]],
    references: list[tuple[str, np.ndarray, np.ndarray]] = (),
    title: str = "",
    xlabel: str = "x",
    ylabel: str = "y",
    target=None,
) -> str:
    """Render labelled curves (solid) and reference curves (dashed grey) as SVG text."""
    w = SIZE + 2 * MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w + 20 * len(curves)}" '
        f'viewBox="0 0 {w} {w + 20 * len(curves)}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
        f'<text x="{w / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{w / 2}" y="{MARGIN + SIZE + 28}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="12" y="{MARGIN + SIZE / 2}" font-size="12" '
        f'transform="rotate(-90 12 {MARGIN + SIZE / 2})" text-anchor="middle">{escape(ylabel)}</text>',
    ]
    for _, x, y in references:
        parts.append(_polyline(x, y, REFERENCE_COLOR, dashed=True))
    for i, (label, x, y) in enumerate(curves):
        color = COLORS[i % len(COLORS)]
        parts.append(_polyline(x, y, color))
        ly = w + 20 * i + 5
        parts.append(f'<line x1="{MARGIN}" y1="{ly}" x2="{MARGIN + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{MARGIN + 26}" y="{ly + 4}" font-size="12">{escape(label)}</text>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    if target is not None:
        Path(target).write_text(text, encoding="utf-8", newline="\n")
    return text
