"""Tests for document parsing, validation diagnostics and the canonical emitter."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from errors import DocumentError
from input_validator import (
    body_document,
    certificate_document,
    dumps,
    load_json,
    parse_body,
    parse_certificate,
    parse_coords,
    parse_frame,
    parse_group,
    parse_space,
    read_document,
    space_document,
)
from shapes import EuclideanBall, HPolytope, IntersectionPair, VPolytope

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "name", ["l2_plane.json", "cube_plane.json", "l1_plane.json", "disc_strip.json"]
)
def test_body_fixtures_are_canonical(name: str) -> None:
    """Parsing and re-emitting a body fixture reproduces it byte for byte."""
    text = _fixture(name)
    assert dumps(body_document(parse_body(text))) == text


@pytest.mark.parametrize("name", ["cube_certificate.json", "l1_plane_certificate.json"])
def test_certificate_fixtures_are_canonical(name: str) -> None:
    """Certificates survive parse and emit unchanged."""
    text = _fixture(name)
    assert dumps(certificate_document(parse_certificate(text))) == text


def test_disc_strip_fixture_shape() -> None:
    """The intersection document builds disc and strip."""
    body = parse_body(_fixture("disc_strip.json"))
    assert isinstance(body, IntersectionPair)
    assert isinstance(body.left, EuclideanBall)
    assert isinstance(body.right, HPolytope)


def test_convenience_kinds() -> None:
    """lp and named documents expand to explicit bodies."""
    l1 = parse_space('{"kind": "lp", "p": 1, "dim": 3}')
    assert l1.dim == 3
    assert isinstance(l1.unit_ball, VPolytope)
    cube = parse_space('{"kind": "lp", "p": "inf", "dim": 2}')
    assert cube.norm([0.5, -1.0]) == pytest.approx(1.0)
    hexagon = parse_space('{"kind": "named", "space": "hexagon"}')
    assert hexagon.dim == 2


def test_space_document_carries_dim_and_name() -> None:
    """Spaces serialize as their unit ball plus dim and name."""
    space = parse_space('{"kind": "lp", "p": 1, "dim": 2, "name": "l1^2"}')
    document = space_document(space)
    assert document["kind"] == "vpolytope"
    assert document["dim"] == 2
    assert document["name"] == "l1^2"


def test_missing_field_reports_its_path() -> None:
    """The dotted location points at the missing field."""
    with pytest.raises(DocumentError) as info:
        parse_body('{"kind": "zonotope"}')
    assert info.value.location.endswith("generators")


def test_unknown_kind_is_rejected() -> None:
    """The discriminator only accepts known kinds."""
    with pytest.raises(DocumentError):
        parse_body('{"kind": "cube", "size": 1}')


def test_extra_fields_are_rejected() -> None:
    """Documents are closed."""
    with pytest.raises(DocumentError):
        parse_body('{"kind": "ball2", "dim": 2, "colour": "red"}')


def test_non_finite_numbers_are_rejected() -> None:
    """NaN and Infinity are not JSON numbers here."""
    with pytest.raises(DocumentError):
        parse_body('{"kind": "ball2", "radius": NaN, "dim": 2}')
    with pytest.raises(DocumentError):
        load_json("[Infinity]")


def test_syntax_errors_carry_line_and_column() -> None:
    """Malformed JSON points at the offending position."""
    with pytest.raises(DocumentError) as info:
        load_json('{\n  "kind": ')
    assert info.value.location.startswith("line 2")


def test_declared_dimension_must_match() -> None:
    """dim is checked against the built body."""
    with pytest.raises(DocumentError) as info:
        parse_body('{"kind": "zonotope", "generators": [[1, 0]], "dim": 3}')
    assert info.value.location == "body"


def test_ball_needs_a_dimension() -> None:
    """A radius alone does not fix R^n."""
    with pytest.raises(DocumentError):
        parse_body('{"kind": "ball2", "radius": 2}')


def test_unbounded_unit_ball_is_rejected() -> None:
    """A lone strip is not a unit ball."""
    with pytest.raises(DocumentError) as info:
        parse_space('{"kind": "hpolytope", "normals": [[1, -1]], "offsets": [1]}')
    assert info.value.location == "space"


def test_certificate_pairs_must_match_the_space() -> None:
    """Vectors in R³ do not fit a planar space."""
    text = json.dumps(
        {
            "space": {"kind": "ball2", "dim": 2},
            "enlargement": {"kind": "ball2", "radius": 2, "dim": 2},
            "pairs": [{"f": [1, 0], "y": [1, 0, 0]}],
        }
    )
    with pytest.raises(DocumentError) as info:
        parse_certificate(text)
    assert info.value.location == "pairs"


def test_certificate_needs_pairs() -> None:
    """An empty pair list is rejected by validation."""
    text = json.dumps(
        {
            "space": {"kind": "ball2", "dim": 2},
            "enlargement": {"kind": "ball2", "radius": 2, "dim": 2},
            "pairs": [],
        }
    )
    with pytest.raises(DocumentError):
        parse_certificate(text)


def test_frame_and_group_fixtures() -> None:
    """Frames parse to matching matrices; groups are validated on load."""
    functionals, points = parse_frame(_fixture("cube_frame.json"))
    assert np.array_equal(functionals, np.eye(2))
    assert np.array_equal(points, np.eye(2))
    group = parse_group(_fixture("c4_rotations.json"))
    assert group.order == 4
    assert group.name == "c4"


def test_frame_shapes_must_agree() -> None:
    """Two functionals need two points."""
    with pytest.raises(DocumentError):
        parse_frame('{"functionals": [[1, 0], [0, 1]], "points": [[1, 0]]}')


def test_group_must_be_closed() -> None:
    """A lone quarter turn without its powers is not a group."""
    with pytest.raises(DocumentError) as info:
        parse_group('{"matrices": [[[1, 0], [0, 1]], [[0, -1], [1, 0]]]}')
    assert info.value.location == "matrices"


def test_coordinate_lists() -> None:
    """Comma separated floats, nothing else."""
    assert np.array_equal(parse_coords("1, 0"), [1.0, 0.0])
    for bad in ("", "a,b", "1,nan"):
        with pytest.raises(DocumentError):
            parse_coords(bad)


def test_missing_file_is_a_document_error(tmp_path: Path) -> None:
    """Unreadable paths are reported with the path as location."""
    missing = tmp_path / "nope.json"
    with pytest.raises(DocumentError) as info:
        read_document(str(missing))
    assert info.value.location == str(missing)


def test_emitter_number_format() -> None:
    """17 significant digits, no negative zero, null for non-finite values."""
    assert dumps(0.1) == "0.10000000000000001\n"
    assert dumps(-0.0) == "0\n"
    assert dumps(math.inf) == "null\n"
    assert dumps(np.float64(2.5)) == "2.5\n"
    assert dumps({"a": [1, np.int64(2)], "b": {}}) == '{\n  "a": [1, 2],\n  "b": {}\n}\n'
