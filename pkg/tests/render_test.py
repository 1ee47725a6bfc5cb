"""Tests for SVG rendering of planar bodies."""

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from errors import UnsupportedRepresentationError
from render import render_bodies, write_svg
from shapes import EuclideanBall, Zonotope

HEXAGON = Zonotope(np.array([[1.0, 0.0], [0.5, 1.0], [-0.5, 1.0]]))


def _shapes(svg: str, tag: str) -> list[ET.Element]:
    root = ET.fromstring(svg)
    return [element for element in root.iter() if element.tag.endswith(tag)]


def test_hexagon_renders_six_corners() -> None:
    """Three generators give a hexagon next to the dashed unit circle."""
    svg = render_bodies([HEXAGON])
    polygons = _shapes(svg, "polygon")
    assert len(polygons) == 1
    assert len(polygons[0].attrib["points"].split()) == 6
    assert len(_shapes(svg, "circle")) == 1


def test_viewbox_grows_with_the_bodies() -> None:
    """The hexagon reaches x = 2, so the box is wider than the circle's."""
    root = ET.fromstring(render_bodies([HEXAGON], unit_circle=False))
    left, _, width, _ = (float(v) for v in root.attrib["viewBox"].split())
    assert left < -2.0
    assert width > 4.0


def test_first_body_can_be_filled() -> None:
    """Only the first polygon gets a translucent fill."""
    svg = render_bodies([HEXAGON, EuclideanBall(1.5, 2)], fill_first=True)
    first, second = _shapes(svg, "polygon")
    assert first.attrib["fill-opacity"] == "0.15"
    assert second.attrib["fill"] == "none"


def test_only_planar_bodies_render() -> None:
    """R³ bodies have no picture."""
    with pytest.raises(UnsupportedRepresentationError):
        render_bodies([EuclideanBall(1.0, 3)])


def test_write_svg(tmp_path: Path) -> None:
    """The file holds the rendered document."""
    target = write_svg(str(tmp_path / "hexagon.svg"), [HEXAGON])
    assert target.exists()
    assert target.read_text(encoding="utf-8").startswith("<svg")
