"""Provides SVG rendering of arrow diagrams on their skeleton circle."""

import logging
import math

import svg

from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common.diagram import ArrowDiagram

logger = logging.getLogger(__name__)

SIZE = 400
RADIUS = 160
LABEL_OFFSET = 16
ARROW_MARKER_ID = "arrow"


def _round(value: float) -> float:
    # -0.0 would print differently from 0.0
    return round(value, 3) + 0.0


def endpoint_xy(position: int, length: int, radius: float = RADIUS) -> tuple[float, float]:
    """Counter-clockwise from the top of the circle, in SVG coordinates."""
    angle = math.pi / 2 + 2 * math.pi * position / length
    centre = SIZE / 2
    return _round(centre + radius * math.cos(angle)), _round(centre - radius * math.sin(angle))


def _arrow_marker() -> svg.Defs:
    return svg.Defs(
        elements=[
            svg.Marker(
                id=ARROW_MARKER_ID,
                viewBox=svg.ViewBoxSpec(0, 0, 10, 10),
                refX=10,
                refY=5,
                markerWidth=8,
                markerHeight=8,
                orient="auto",
                elements=[svg.Path(d=[svg.M(0, 0), svg.L(10, 5), svg.L(0, 10), svg.Z()])],
            )
        ]
    )


def render_svg(d: ArrowDiagram) -> str:
    """
    Draws the canonical form of ``d``: endpoints equally spaced, each chord a
    straight arrow from tail to head labelled with its id next to the tail.
    """
    canonical = diagram_lib.canonical_form(d)
    length = len(canonical)
    elements: list[svg.Element] = [
        _arrow_marker(),
        svg.Circle(
            cx=SIZE / 2, cy=SIZE / 2, r=RADIUS, fill="none", stroke="black", stroke_width=2
        ),
    ]
    for chord, (tail, head) in sorted(canonical.positions.items()):
        x1, y1 = endpoint_xy(tail, length)
        x2, y2 = endpoint_xy(head, length)
        elements.append(
            svg.Line(
                x1=x1,
                y1=y1,
                x2=x2,
                y2=y2,
                stroke="black",
                stroke_width=1.5,
                marker_end=f"url(#{ARROW_MARKER_ID})",
            )
        )
        lx, ly = endpoint_xy(tail, length, RADIUS + LABEL_OFFSET)
        elements.append(
            svg.Text(x=lx, y=ly, text=str(chord), font_size=12, text_anchor="middle")
        )
    logger.debug("Rendered %s with %d elements", canonical, len(elements))
    document = svg.SVG(
        width=SIZE,
        height=SIZE,
        viewBox=svg.ViewBoxSpec(0, 0, SIZE, SIZE),
        elements=elements,
    )
    return str(document)
