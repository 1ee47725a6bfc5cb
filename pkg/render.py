"""SVG 1.1 pictures of planar bodies, drawn in body units with the unit circle for scale."""

import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from bodies import polygon_vertices
from errors import UnsupportedRepresentationError
from numerics import DEFAULT_TOLERANCE, FloatArray, TolerancePolicy
from shapes import Body

logger = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
PIXELS = 480


def _fmt(value: float) -> str:
    text = format(value, ".9g")
    return "0" if text == "-0" else text


@dataclass
class SvgCanvas:
    """Collects shapes and tracks the bounding box they need."""

    min_x: float = -1.0
    max_x: float = 1.0
    min_y: float = -1.0
    max_y: float = 1.0
    elements: list[ET.Element] = field(default_factory=list)

    def require(self, points: FloatArray) -> None:
        """Grow the bounding box to hold the points."""
        self.min_x = min(self.min_x, float(points[:, 0].min()))
        self.max_x = max(self.max_x, float(points[:, 0].max()))
        self.min_y = min(self.min_y, float(points[:, 1].min()))
        self.max_y = max(self.max_y, float(points[:, 1].max()))

    def polygon(self, points: FloatArray, stroke: str, filled: bool = False) -> None:
        """Closed polygon; y is flipped so the picture reads mathematically."""
        self.require(points)
        self.elements.append(
            ET.Element(
                "polygon",
                points=" ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in points),
                fill=stroke if filled else "none",
                stroke=stroke,
                **({"fill-opacity": "0.15"} if filled else {}),
            )
        )

    def circle(self, radius: float, stroke: str) -> None:
        """Circle centred at the origin."""
        self.require(np.array([[-radius, -radius], [radius, radius]]))
        self.elements.append(
            ET.Element(
                "circle",
                cx="0",
                cy="0",
                r=_fmt(radius),
                fill="none",
                stroke=stroke,
                **{"stroke-dasharray": "0.02 0.02"},
            )
        )

    def to_svg(self) -> str:
        """Serialized document; the viewBox is the padded bounding box in body units."""
        pad = 0.05 * max(self.max_x - self.min_x, self.max_y - self.min_y)
        left, top = self.min_x - pad, -self.max_y - pad
        width = self.max_x - self.min_x + 2 * pad
        height = self.max_y - self.min_y + 2 * pad
        root = ET.Element(
            "svg",
            xmlns="http://www.w3.org/2000/svg",
            version="1.1",
            width=f"{PIXELS}px",
            height=f"{round(PIXELS * height / width)}px",
            viewBox=" ".join(_fmt(v) for v in (left, top, width, height)),
        )
        group = ET.SubElement(
            root, "g", **{"stroke-width": _fmt(0.004 * width), "stroke-linejoin": "round"}
        )
        group.extend(self.elements)
        ET.indent(root)
        return ET.tostring(root, encoding="unicode") + "\n"


def render_bodies(
    bodies: list[Body],
    unit_circle: bool = True,
    fill_first: bool = False,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> str:
    """SVG text showing every body, first one on top of the reference circle."""
    canvas = SvgCanvas()
    if unit_circle:
        canvas.circle(1.0, "#7f7f7f")
    for index, body in enumerate(bodies):
        if body.dim != 2:  # noqa: PLR2004
            error_message = f"only planar bodies can be rendered, got R^{body.dim}"
            raise UnsupportedRepresentationError(error_message)
        outline = polygon_vertices(body, tol=tol)
        colour = PALETTE[index % len(PALETTE)]
        canvas.polygon(outline, colour, filled=fill_first and index == 0)
        logger.debug("rendered %s with %s boundary points", body.kind, outline.shape[0])
    return canvas.to_svg()


def write_svg(path: str, bodies: list[Body], unit_circle: bool = True) -> Path:
    """Render and save; returns the written path."""
    target = Path(path)
    target.write_text(render_bodies(bodies, unit_circle), encoding="utf-8")
    logger.info("wrote %s", target)
    return target
