"""I-V Hysteresis Plots as Standalone SVG Files.

Each curve is drawn as one polyline of (v, i) points over a pair of axes through the origin, with a legend
listing the curves and the parameters of the run.
"""
from typing import Dict, List, Optional, Sequence, Tuple
from logging import getLogger
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from ..trace import Trace, MeasuredTrace

# pylint: disable=C0103
logger = getLogger(__name__)

WIDTH = 640
HEIGHT = 480
MARGIN = 60
LEGEND_LINE_HEIGHT = 14

COLOURS = ["#27aeef", "#ea5545", "#87bc45", "#ef9b20", "#b33dc6"]


class _Frame:
    """Maps data coordinates onto the plot area."""

    def __init__(self, curves: Sequence[Tuple[np.ndarray, np.ndarray]]):
        v_values = np.concatenate([v for v, _ in curves] + [np.zeros(1)])
        i_values = np.concatenate([i for _, i in curves] + [np.zeros(1)])
        self.v_min, self.v_max = self._span(v_values)
        self.i_min, self.i_max = self._span(i_values)

    @staticmethod
    def _span(values: np.ndarray) -> Tuple[float, float]:
        finite = values[np.isfinite(values)]
        low, high = float(np.min(finite)), float(np.max(finite))
        if high == low:
            return low - 1.0, high + 1.0
        pad = 0.05 * (high - low)
        return low - pad, high + pad

    def x(self, v: float) -> float:
        return MARGIN + (v - self.v_min) / (self.v_max - self.v_min) * (WIDTH - 2 * MARGIN)

    def y(self, i: float) -> float:
        return HEIGHT - MARGIN - (i - self.i_min) / (self.i_max - self.i_min) * (HEIGHT - 2 * MARGIN)


def _polyline(frame: _Frame, v: np.ndarray, i: np.ndarray, colour: str, css_class: str) -> str:
    points = " ".join(
        f"{frame.x(x):.2f},{frame.y(y):.2f}" for x, y in zip(v.tolist(), i.tolist()) if np.isfinite(x + y)
    )
    return f'<polyline class="{css_class}" fill="none" stroke="{colour}" stroke-width="1.5" points="{points}"/>\n'


def _axes(frame: _Frame) -> List[str]:
    x0, y0 = frame.x(0.0), frame.y(0.0)
    return [
        f'<line x1="{MARGIN}" y1="{y0:.2f}" x2="{WIDTH - MARGIN}" y2="{y0:.2f}" stroke="black"/>\n',
        f'<line x1="{x0:.2f}" y1="{MARGIN}" x2="{x0:.2f}" y2="{HEIGHT - MARGIN}" stroke="black"/>\n',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN / 2}" text-anchor="end">V [V]</text>\n',
        f'<text x="{MARGIN / 2}" y="{MARGIN / 2}">I [A]</text>\n',
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 16}">{frame.v_min:.3g}</text>\n',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 16}" text-anchor="end">{frame.v_max:.3g}</text>\n',
        f'<text x="{MARGIN - 4}" y="{HEIGHT - MARGIN}" text-anchor="end">{frame.i_min:.3g}</text>\n',
        f'<text x="{MARGIN - 4}" y="{MARGIN}" text-anchor="end">{frame.i_max:.3g}</text>\n',
    ]


def _legend(labels: Sequence[Tuple[str, Optional[str]]]) -> List[str]:
    lines = []
    y = MARGIN
    for text, colour in labels:
        fill = quoteattr(colour or "black")
        lines.append(f'<text x="{MARGIN + 8}" y="{y}" font-size="10" fill={fill}>{escape(text)}</text>\n')
        y += LEGEND_LINE_HEIGHT
    return lines


def _write(
    path: Path, title: str, curves: Sequence[Tuple[str, np.ndarray, np.ndarray]], details: Dict[str, str]
) -> None:
    frame = _Frame([(v, i) for _, v, i in curves])
    labels: List[Tuple[str, Optional[str]]] = []
    body: List[str] = []
    for index, (name, v, i) in enumerate(curves):
        colour = COLOURS[index % len(COLOURS)]
        body.append(_polyline(frame, v, i, colour, f"curve{index}"))
        labels.append((name, colour))
    labels += [(f"{key}: {value}", None) for key, value in details.items()]

    with open(path, "w", encoding="utf-8") as out:
        out.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" ')
        out.write('font-family="sans-serif">\n')
        out.write(f"<title>{escape(title)}</title>\n")
        out.write(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n')
        out.writelines(_axes(frame))
        out.writelines(body)
        out.writelines(_legend(labels))
        out.write("</svg>\n")

    logger.info("Wrote SVG plot %s.", path)


def _legend_details(metadata: Dict[str, str]) -> Dict[str, str]:
    keys = ("params", "element0", "element1", "mode", "seed", "drive")
    return {key: metadata[key] for key in keys if key in metadata}


def write_iv_svg(trace: Trace, path: Path, title: str = "I-V hysteresis") -> None:
    """Plots the (v, i) curve of `trace` with its run parameters in the legend."""
    _write(Path(path), title, [("model", trace.v, trace.i)], _legend_details(trace.metadata))


def write_overlay_svg(
    measured: MeasuredTrace, model: Trace, path: Path, details: Optional[Dict[str, str]] = None
) -> None:
    """Plots a measured record and the fitted model current over it."""
    curves = [("measured", measured.v, measured.i), ("fitted model", model.v, model.i)]
    _write(Path(path), "Fit overlay", curves, dict(details or {}))
