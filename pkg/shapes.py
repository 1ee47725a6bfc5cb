"""Symmetric convex body representations.

Every representation is symmetric about 0 by construction:

* ``HPolytope``       {x : |⟨a_k, x⟩| <= b_k for all k}
* ``VPolytope``       conv(±v_m)
* ``Zonotope``        Σ_j [−y_j, y_j]
* ``EuclideanBall``   {x : ‖x‖₂ <= r}
* ``Polar``           {f : ⟨f, x⟩ <= 1 for all x in inner}
* ``Scaled``          λ·inner
* ``MinkowskiSum``    left + right
* ``IntersectionPair`` left ∩ right

Bodies are immutable values; every query lives in ``bodies``.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from errors import InputError
from numerics import FloatArray, as_rows, as_vector


class Body:
    """Common base of all representations."""

    @property
    def dim(self) -> int:
        """Ambient dimension."""
        raise NotImplementedError

    @property
    def kind(self) -> str:
        """Document tag of the representation."""
        raise NotImplementedError


def _frozen_copy(values: FloatArray) -> FloatArray:
    copy = np.array(values, dtype=np.float64, copy=True)
    copy.setflags(write=False)
    return copy


@dataclass(frozen=True, eq=False)
class HPolytope(Body):
    """{x : |⟨a_k, x⟩| <= b_k}.

    Normals that do not span describe an unbounded slab; that is only legal as
    a component of an intersection (see ``is_bounded``).
    """

    normals: FloatArray
    offsets: FloatArray

    def __post_init__(self) -> None:
        normals = as_rows(self.normals)
        offsets = as_vector(self.offsets, normals.shape[0])
        if normals.shape[0] == 0 or normals.shape[1] < 1:
            error_message = "H-polytope needs at least one normal"
            raise InputError(error_message)
        if np.any(offsets <= 0):
            error_message = "H-polytope offsets must be positive"
            raise InputError(error_message)
        object.__setattr__(self, "normals", _frozen_copy(normals))
        object.__setattr__(self, "offsets", _frozen_copy(offsets))

    @property
    def dim(self) -> int:
        return int(self.normals.shape[1])

    @property
    def kind(self) -> str:
        return "hpolytope"


@dataclass(frozen=True, eq=False)
class VPolytope(Body):
    """conv(±v_m)."""

    vertices: FloatArray

    def __post_init__(self) -> None:
        vertices = as_rows(self.vertices)
        if vertices.shape[1] < 1:
            error_message = "V-polytope vertices need at least one coordinate"
            raise InputError(error_message)
        object.__setattr__(self, "vertices", _frozen_copy(vertices))

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def kind(self) -> str:
        return "vpolytope"


@dataclass(frozen=True, eq=False)
class Zonotope(Body):
    """Σ_j [−y_j, y_j]. Degenerate (lower-dimensional) zonotopes are allowed."""

    generators: FloatArray

    def __post_init__(self) -> None:
        generators = as_rows(self.generators)
        if generators.shape[1] < 1:
            error_message = "zonotope generators need at least one coordinate"
            raise InputError(error_message)
        object.__setattr__(self, "generators", _frozen_copy(generators))

    @property
    def dim(self) -> int:
        return int(self.generators.shape[1])

    @property
    def kind(self) -> str:
        return "zonotope"


@dataclass(frozen=True, eq=False)
class EuclideanBall(Body):
    """{x : ‖x‖₂ <= radius} in R^n."""

    radius: float
    n: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.radius) or self.radius <= 0:
            error_message = "ball radius must be positive"
            raise InputError(error_message)
        if self.n < 1:
            error_message = "ball dimension must be positive"
            raise InputError(error_message)

    @property
    def dim(self) -> int:
        return self.n

    @property
    def kind(self) -> str:
        return "ball2"


@dataclass(frozen=True, eq=False)
class Polar(Body):
    """Polar body of ``inner``."""

    inner: Body

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def kind(self) -> str:
        return "polar"


@dataclass(frozen=True, eq=False)
class Scaled(Body):
    """factor · inner, factor > 0."""

    factor: float
    inner: Body

    def __post_init__(self) -> None:
        if not np.isfinite(self.factor) or self.factor <= 0:
            error_message = "scale factor must be positive"
            raise InputError(error_message)

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def kind(self) -> str:
        return "scaled"


def _same_dim(left: Body, right: Body) -> None:
    if left.dim != right.dim:
        error_message = f"dimension mismatch: {left.dim} vs {right.dim}"
        raise InputError(error_message)


@dataclass(frozen=True, eq=False)
class MinkowskiSum(Body):
    """left + right."""

    left: Body
    right: Body

    def __post_init__(self) -> None:
        _same_dim(self.left, self.right)

    @property
    def dim(self) -> int:
        return self.left.dim

    @property
    def kind(self) -> str:
        return "sum"


@dataclass(frozen=True, eq=False)
class IntersectionPair(Body):
    """left ∩ right."""

    left: Body
    right: Body

    def __post_init__(self) -> None:
        _same_dim(self.left, self.right)

    @property
    def dim(self) -> int:
        return self.left.dim

    @property
    def kind(self) -> str:
        return "intersection"


AnyBody = Union[
    HPolytope,
    VPolytope,
    Zonotope,
    EuclideanBall,
    Polar,
    Scaled,
    MinkowskiSum,
    IntersectionPair,
]

BodyKey = tuple[object, ...]


def body_key(body: Body, digits: int = 12) -> BodyKey:
    """Structural fingerprint; equal keys mean the same representation."""

    def arr(values: FloatArray) -> tuple[object, ...]:
        return tuple(np.round(values, digits).reshape(-1).tolist()) + values.shape

    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return ("hpolytope", arr(normals), arr(offsets))
        case VPolytope(vertices=vertices):
            return ("vpolytope", arr(vertices))
        case Zonotope(generators=generators):
            return ("zonotope", arr(generators))
        case EuclideanBall(radius=radius, n=n):
            return ("ball2", round(radius, digits), n)
        case Polar(inner=inner):
            return ("polar", body_key(inner, digits))
        case Scaled(factor=factor, inner=inner):
            return ("scaled", round(factor, digits), body_key(inner, digits))
        case MinkowskiSum(left=left, right=right):
            return ("sum", body_key(left, digits), body_key(right, digits))
        case IntersectionPair(left=left, right=right):
            return ("intersection", body_key(left, digits), body_key(right, digits))
        case _:
            error_message = f"unknown body type {type(body).__name__}"
            raise InputError(error_message)


def is_polytopal(body: Body) -> bool:
    """True when no Euclidean ball occurs anywhere in the tree."""
    match body:
        case EuclideanBall():
            return False
        case Polar(inner=inner) | Scaled(inner=inner):
            return is_polytopal(inner)
        case MinkowskiSum(left=left, right=right) | IntersectionPair(left=left, right=right):
            return is_polytopal(left) and is_polytopal(right)
        case _:
            return True


def _full_rank(rows: FloatArray) -> bool:
    return rows.shape[0] > 0 and int(np.linalg.matrix_rank(rows)) == rows.shape[1]


def _constraint_normals(body: Body) -> FloatArray | None:
    """Stacked normals when the body is an intersection of H-polytopes."""
    match body:
        case HPolytope(normals=normals):
            return normals
        case Scaled(inner=inner):
            return _constraint_normals(inner)
        case IntersectionPair(left=left, right=right):
            left_normals = _constraint_normals(left)
            right_normals = _constraint_normals(right)
            if left_normals is None or right_normals is None:
                return None
            return np.vstack([left_normals, right_normals])
        case _:
            return None


def is_bounded(body: Body) -> bool:
    """True when the body is a genuine ball: bounded with 0 in the interior.

    Bodies that are bounded but flat (degenerate zonotopes) report False.
    """
    match body:
        case HPolytope(normals=normals):
            return _full_rank(normals)
        case VPolytope(vertices=vertices):
            return _full_rank(vertices)
        case Zonotope(generators=generators):
            return _full_rank(generators)
        case EuclideanBall():
            return True
        case Scaled(inner=inner) | Polar(inner=inner):
            return is_bounded(inner)
        case MinkowskiSum(left=left, right=right):
            return (is_bounded(left) or is_bounded(right)) and _finite(left) and _finite(right)
        case IntersectionPair(left=left, right=right):
            if is_bounded(left) or is_bounded(right):
                return True
            normals = _constraint_normals(body)
            return normals is not None and _full_rank(normals)
        case _:
            return False


def _finite(body: Body) -> bool:
    """Bounded, possibly flat."""
    match body:
        case HPolytope(normals=normals):
            return _full_rank(normals)
        case Polar(inner=inner):
            return is_bounded(inner)
        case Scaled(inner=inner):
            return _finite(inner)
        case MinkowskiSum(left=left, right=right):
            return _finite(left) and _finite(right)
        case IntersectionPair(left=left, right=right):
            if _finite(left) or _finite(right):
                return True
            normals = _constraint_normals(body)
            return normals is not None and _full_rank(normals)
        case _:
            return True


def is_unit_euclidean(body: Body) -> bool:
    """True for the unit ball of l₂ⁿ."""
    match body:
        case EuclideanBall(radius=radius):
            return bool(np.isclose(radius, 1.0, rtol=0.0, atol=1e-15))
        case _:
            return False
