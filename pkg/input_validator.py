"""Validation and serialization of body, space, certificate and frame documents."""

import json
import math
import sys
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError

from bodies import NormedSpace, hexagon_space, lp_space
from certificates import Certificate, theorem2_space
from errors import DocumentError, InputError
from groups import OrthogonalGroupAction, group_from_matrices
from numerics import FloatArray
from shapes import (
    Body,
    EuclideanBall,
    HPolytope,
    IntersectionPair,
    MinkowskiSum,
    Polar,
    Scaled,
    VPolytope,
    Zonotope,
)

Number = float
Vector = list[Number]
Matrix = list[Vector]


class Document(BaseModel):
    """Strict base: unknown fields and non-finite numbers are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class BodyFields(Document):
    """Fields every body document may carry."""

    dim: Optional[PositiveInt] = None
    name: Optional[str] = None

    def to_body(self) -> Body:
        """Build the body this document describes."""
        raise NotImplementedError


class HPolytopeDocument(BodyFields):
    kind: Literal["hpolytope"]
    normals: Matrix
    offsets: Vector

    @override
    def to_body(self) -> Body:
        return HPolytope(np.array(self.normals), np.array(self.offsets))


class VPolytopeDocument(BodyFields):
    kind: Literal["vpolytope"]
    vertices: Matrix

    @override
    def to_body(self) -> Body:
        return VPolytope(np.array(self.vertices))


class ZonotopeDocument(BodyFields):
    kind: Literal["zonotope"]
    generators: Matrix

    @override
    def to_body(self) -> Body:
        return Zonotope(np.array(self.generators))


class BallDocument(BodyFields):
    kind: Literal["ball2"]
    radius: PositiveFloat = 1.0

    @override
    def to_body(self) -> Body:
        if self.dim is None:
            error_message = "ball2 needs dim"
            raise InputError(error_message)
        return EuclideanBall(self.radius, self.dim)


class LpDocument(BodyFields):
    """Unit ball of l₁ⁿ, l₂ⁿ or l_∞ⁿ."""

    kind: Literal["lp"]
    p: Union[Literal[1, 2], Literal["inf"]]

    @override
    def to_body(self) -> Body:
        if self.dim is None:
            error_message = "lp needs dim"
            raise InputError(error_message)
        return lp_space(math.inf if self.p == "inf" else self.p, self.dim).unit_ball


class NamedDocument(BodyFields):
    """Built-in unit balls: "hexagon" and "disc-strip"."""

    kind: Literal["named"]
    space: Literal["hexagon", "disc-strip"]

    @override
    def to_body(self) -> Body:
        if self.space == "hexagon":
            return hexagon_space().unit_ball
        return theorem2_space().unit_ball


class PolarDocument(BodyFields):
    kind: Literal["polar"]
    body: "BodyDocument"

    @override
    def to_body(self) -> Body:
        return Polar(self.body.to_body())


class ScaledDocument(BodyFields):
    kind: Literal["scaled"]
    factor: PositiveFloat
    body: "BodyDocument"

    @override
    def to_body(self) -> Body:
        return Scaled(self.factor, self.body.to_body())


class SumDocument(BodyFields):
    kind: Literal["sum"]
    left: "BodyDocument"
    right: "BodyDocument"

    @override
    def to_body(self) -> Body:
        return MinkowskiSum(self.left.to_body(), self.right.to_body())


class IntersectionDocument(BodyFields):
    kind: Literal["intersection"]
    left: "BodyDocument"
    right: "BodyDocument"

    @override
    def to_body(self) -> Body:
        return IntersectionPair(self.left.to_body(), self.right.to_body())


BodyDocument = Annotated[
    Union[
        HPolytopeDocument,
        VPolytopeDocument,
        ZonotopeDocument,
        BallDocument,
        LpDocument,
        NamedDocument,
        PolarDocument,
        ScaledDocument,
        SumDocument,
        IntersectionDocument,
    ],
    Field(discriminator="kind"),
]

for _model in (PolarDocument, ScaledDocument, SumDocument, IntersectionDocument):
    _model.model_rebuild()


class BodyEnvelope(Document):
    body: BodyDocument


class PairDocument(Document):
    f: Vector
    y: Vector


class CertificateDocument(Document):
    space: BodyDocument
    enlargement: BodyDocument
    pairs: list[PairDocument] = Field(min_length=1)


class FrameDocument(Document):
    """Functionals f_i with norming points x_i (f_i(x_i) = 1)."""

    functionals: Matrix = Field(min_length=1)
    points: Matrix = Field(min_length=1)


class GroupDocument(Document):
    matrices: list[Matrix] = Field(min_length=1)
    name: str = "custom"


# === PARSING ===


def _reject_constant(token: str) -> float:
    error_message = f"non-finite number {token} is not allowed"
    raise ValueError(error_message)


def load_json(text: str) -> Any:
    """json.loads restricted to finite numbers, with line/column diagnostics."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    except ValueError as exc:
        raise DocumentError(str(exc), "document") from exc


def _validation_error(exc: ValidationError) -> DocumentError:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "document"
    return DocumentError(first["msg"], location)


def _validate(model: type[Document], raw: Any) -> Any:
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        raise _validation_error(exc) from exc


def _build_body(document: BodyDocument, location: str) -> Body:
    try:
        body = document.to_body()
    except DocumentError:
        raise
    except InputError as exc:
        raise DocumentError(str(exc), location) from exc
    if document.dim is not None and document.dim != body.dim:
        error_message = f"declared dim {document.dim} but the body lives in R^{body.dim}"
        raise DocumentError(error_message, location)
    return body


def body_from_data(raw: Any) -> Body:
    """Body from already-decoded JSON."""
    envelope: BodyEnvelope = _validate(BodyEnvelope, {"body": raw})
    return _build_body(envelope.body, "body")


def space_from_data(raw: Any) -> NormedSpace:
    """NormedSpace whose unit ball is the decoded body document."""
    envelope: BodyEnvelope = _validate(BodyEnvelope, {"body": raw})
    body = _build_body(envelope.body, "space")
    try:
        return NormedSpace(body.dim, body, name=envelope.body.name or "")
    except InputError as exc:
        raise DocumentError(str(exc), "space") from exc


def parse_body(text: str) -> Body:
    """Body document text → Body."""
    return body_from_data(load_json(text))


def parse_space(text: str) -> NormedSpace:
    """Body document text → NormedSpace."""
    return space_from_data(load_json(text))


def parse_certificate(text: str) -> Certificate:
    """Certificate document text → Certificate (not verified)."""
    document: CertificateDocument = _validate(CertificateDocument, load_json(text))
    space_body = _build_body(document.space, "space")
    enlargement = _build_body(document.enlargement, "enlargement")
    try:
        space = NormedSpace(space_body.dim, space_body, name=document.space.name or "")
        return Certificate(
            space,
            enlargement,
            np.array([pair.f for pair in document.pairs]),
            np.array([pair.y for pair in document.pairs]),
        )
    except InputError as exc:
        raise DocumentError(str(exc), "pairs") from exc


def parse_frame(text: str) -> tuple[FloatArray, FloatArray]:
    """Frame document text → (functionals, points)."""
    document: FrameDocument = _validate(FrameDocument, load_json(text))
    functionals = np.array(document.functionals, dtype=np.float64)
    points = np.array(document.points, dtype=np.float64)
    if functionals.ndim != 2 or functionals.shape != points.shape:  # noqa: PLR2004
        error_message = "functionals and points must be matrices of the same shape"
        raise DocumentError(error_message, "functionals")
    return functionals, points


def parse_group(text: str) -> OrthogonalGroupAction:
    """Group document text → group action (closure is validated)."""
    document: GroupDocument = _validate(GroupDocument, load_json(text))
    try:
        return group_from_matrices(np.array(document.matrices), name=document.name)
    except (InputError, ValueError) as exc:
        raise DocumentError(str(exc), "matrices") from exc


def parse_coords(text: str) -> FloatArray:
    """Comma separated coordinates such as ``1,0``."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise DocumentError(f"bad coordinate list {text!r}", "coords") from exc
    if not values or not all(math.isfinite(v) for v in values):
        raise DocumentError(f"bad coordinate list {text!r}", "coords")
    return np.array(values)


def read_document(source: str) -> str:
    """Text of a file, or of standard input for ``-``."""
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(exc.strerror or "cannot read file", source) from exc


# === SERIALIZATION ===


def _vectors(values: FloatArray) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.atleast_2d(values)]


def body_document(body: Body) -> dict[str, Any]:
    """Body → document dict."""
    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return {
                "kind": "hpolytope",
                "normals": _vectors(normals),
                "offsets": [float(v) for v in offsets],
            }
        case VPolytope(vertices=vertices):
            return {"kind": "vpolytope", "vertices": _vectors(vertices)}
        case Zonotope(generators=generators):
            return {"kind": "zonotope", "generators": _vectors(generators)}
        case EuclideanBall(radius=radius, n=n):
            return {"kind": "ball2", "radius": float(radius), "dim": n}
        case Polar(inner=inner):
            return {"kind": "polar", "body": body_document(inner)}
        case Scaled(factor=factor, inner=inner):
            return {"kind": "scaled", "factor": float(factor), "body": body_document(inner)}
        case MinkowskiSum(left=left, right=right):
            return {"kind": "sum", "left": body_document(left), "right": body_document(right)}
        case IntersectionPair(left=left, right=right):
            return {
                "kind": "intersection",
                "left": body_document(left),
                "right": body_document(right),
            }
        case _:
            error_message = f"no document form for {type(body).__name__}"
            raise InputError(error_message)


def space_document(space: NormedSpace) -> dict[str, Any]:
    """Space → unit-ball document carrying dim (and name when set)."""
    document = body_document(space.unit_ball)
    document["dim"] = space.dim
    if space.name:
        document["name"] = space.name
    return document


def certificate_document(cert: Certificate) -> dict[str, Any]:
    """Certificate → document dict."""
    return {
        "space": space_document(cert.space),
        "enlargement": body_document(cert.enlargement),
        "pairs": [
            {"f": [float(v) for v in f], "y": [float(v) for v in y]}
            for f, y in zip(cert.functionals, cert.vectors, strict=True)
        ],
    }


def _number(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    return "0" if text == "-0" else text


def _is_flat(value: Any) -> bool:
    return isinstance(value, list) and all(
        not isinstance(item, (list, dict)) for item in value
    )


def _emit(value: Any, depth: int) -> str:
    pad = "  " * (depth + 1)
    match value:
        case None:
            return "null"
        case bool() | np.bool_():
            return "true" if value else "false"
        case int() | np.integer():
            return str(int(value))
        case float() | np.floating():
            return _number(float(value))
        case str():
            return json.dumps(value, ensure_ascii=False)
        case np.ndarray():
            return _emit(value.tolist(), depth)
        case tuple():
            return _emit(list(value), depth)
        case dict():
            if not value:
                return "{}"
            items = [
                f"{pad}{json.dumps(str(k))}: {_emit(v, depth + 1)}" for k, v in value.items()
            ]
            return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
        case list():
            if _is_flat(value):
                return "[" + ", ".join(_emit(item, depth + 1) for item in value) + "]"
            items = [f"{pad}{_emit(item, depth + 1)}" for item in value]
            return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
        case _:
            error_message = f"cannot serialize {type(value).__name__}"
            raise InputError(error_message)


def dumps(value: Any) -> str:
    """Deterministic JSON with every float at 17 significant digits."""
    return _emit(value, 0) + "\n"
