"""Support functions, gauges, containment and volume of symmetric convex bodies."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt
from scipy.spatial import ConvexHull
from scipy.stats import norm as standard_normal
from scipy.stats import qmc

from body_programs import program_gauge, program_support
from env import NET_2D, NET_ND, NET_SEED, VERTEX_BUDGET
from errors import InputError, UnsupportedRepresentationError
from numerics import DEFAULT_TOLERANCE, FloatArray, TolerancePolicy, as_rows, as_vector
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
    body_key,
    is_bounded,
    is_unit_euclidean,
)

logger = logging.getLogger(__name__)

ContainmentMode = Literal["exact", "sampled"]

PARALLEL_TOL = 1e-9


# === NORMED SPACES ===


@dataclass(frozen=True, eq=False)
class NormedSpace:
    """R^n normed by the gauge of ``unit_ball``; the dual ball is its polar."""

    dim: int
    unit_ball: Body
    name: str = ""

    def __post_init__(self) -> None:
        if self.dim < 1:
            error_message = "a normed space needs dimension at least 1"
            raise InputError(error_message)
        if self.unit_ball.dim != self.dim:
            error_message = (
                f"unit ball lives in R^{self.unit_ball.dim}, space is R^{self.dim}"
            )
            raise InputError(error_message)
        if not is_bounded(self.unit_ball):
            error_message = "unit ball must be bounded with 0 in its interior"
            raise InputError(error_message)

    def norm(self, x: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> float:
        """‖x‖ = gauge of the unit ball."""
        return gauge(self.unit_ball, x, tol)

    def dual_norm(self, f: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> float:
        """‖f‖* = support of the unit ball."""
        return support(self.unit_ball, f, tol)

    def dual_norms(
        self, functionals: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
    ) -> FloatArray:
        """Dual norms of many functionals at once."""
        return support_many(self.unit_ball, functionals, tol)

    @property
    def dual_ball(self) -> Body:
        """B(X*)."""
        return polar(self.unit_ball)

    @property
    def is_euclidean(self) -> bool:
        """True for l₂ⁿ."""
        return is_unit_euclidean(self.unit_ball)

    def same_as(self, other: "NormedSpace") -> bool:
        """Same dimension and the same unit-ball representation."""
        return self.dim == other.dim and body_key(self.unit_ball) == body_key(other.unit_ball)


def euclidean_space(n: int) -> NormedSpace:
    """l₂ⁿ."""
    return NormedSpace(n, EuclideanBall(1.0, n), name=f"l2^{n}")


def lp_space(p: float, n: int) -> NormedSpace:
    """l₁ⁿ, l₂ⁿ or l_∞ⁿ."""
    if p == 1:
        return NormedSpace(n, VPolytope(np.eye(n)), name=f"l1^{n}")
    if p == 2:  # noqa: PLR2004
        return euclidean_space(n)
    if math.isinf(p):
        return NormedSpace(n, HPolytope(np.eye(n), np.ones(n)), name=f"linf^{n}")
    error_message = f"only p in {{1, 2, inf}} is built in, got {p}"
    raise InputError(error_message)


def hexagon_space() -> NormedSpace:
    """The plane normed by a regular hexagon with vertices on the unit circle."""
    angles = np.arange(3) * np.pi / 3
    vertices = np.column_stack([np.cos(angles), np.sin(angles)])
    return NormedSpace(2, VPolytope(vertices), name="hexagon")


# === SUPPORT AND GAUGE ===


def _program_support_value(body: Body, direction: FloatArray, tol: TolerancePolicy) -> float:
    solution = program_support(body, direction, tol)
    if not solution.converged:
        logger.warning(
            "support of %s along %s is an outer bound; cone cuts did not converge",
            type(body).__name__,
            direction.tolist(),
        )
    return solution.value


def support_many(
    body: Body, directions: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> FloatArray:
    """h(body, a) for every row a of ``directions``."""
    rows = as_rows(directions, body.dim)
    match body:
        case VPolytope(vertices=vertices):
            if vertices.shape[0] == 0:
                return np.zeros(rows.shape[0])
            return np.max(np.abs(rows @ vertices.T), axis=1)
        case Zonotope(generators=generators):
            return np.sum(np.abs(rows @ generators.T), axis=1)
        case EuclideanBall(radius=radius):
            return radius * np.linalg.norm(rows, axis=1)
        case Scaled(factor=factor, inner=inner):
            return factor * support_many(inner, rows, tol)
        case MinkowskiSum(left=left, right=right):
            return support_many(left, rows, tol) + support_many(right, rows, tol)
        case Polar(inner=inner):
            return gauge_many(inner, rows, tol)
        case _:
            return np.array([_program_support_value(body, row, tol) for row in rows])


def support(body: Body, a: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> float:
    """h(body, a) = max{⟨a, x⟩ : x ∈ body}."""
    direction = as_vector(a, body.dim)
    return float(support_many(body, direction.reshape(1, -1), tol)[0])


def gauge_many(
    body: Body, points: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> FloatArray:
    """Minkowski functional of the body at every row of ``points``."""
    rows = as_rows(points, body.dim)
    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return np.max(np.abs(rows @ normals.T) / offsets, axis=1)
        case EuclideanBall(radius=radius):
            return np.linalg.norm(rows, axis=1) / radius
        case Scaled(factor=factor, inner=inner):
            return gauge_many(inner, rows, tol) / factor
        case IntersectionPair(left=left, right=right):
            return np.maximum(gauge_many(left, rows, tol), gauge_many(right, rows, tol))
        case Polar(inner=inner):
            return support_many(inner, rows, tol)
        case _:
            return np.array(
                [0.0 if not np.any(row) else program_gauge(body, row, tol) for row in rows]
            )


def gauge(body: Body, x: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> float:
    """inf{t > 0 : x ∈ t·body}; 0 at the origin."""
    point = as_vector(x, body.dim)
    if not np.any(point):
        return 0.0
    return float(gauge_many(body, point.reshape(1, -1), tol)[0])


def contains_point(
    body: Body, x: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> bool:
    """gauge(x) <= 1 + eps_feas."""
    return gauge(body, x, tol) <= 1.0 + tol.eps_feas


# === CONSTRUCTORS ===


def polar(body: Body) -> Body:
    """Polar body, simplified to an explicit representation when one is exact."""
    match body:
        case Polar(inner=inner):
            return inner
        case EuclideanBall(radius=radius, n=n):
            return EuclideanBall(1.0 / radius, n)
        case HPolytope(normals=normals, offsets=offsets):
            return VPolytope(normals / offsets[:, np.newaxis])
        case VPolytope(vertices=vertices) if (
            vertices.shape[0] and np.linalg.matrix_rank(vertices) == body.dim
        ):
            return HPolytope(vertices, np.ones(vertices.shape[0]))
        case Scaled(factor=factor, inner=inner):
            return scale(1.0 / factor, polar(inner))
        case _:
            return Polar(body)


def minkowski_sum(left: Body, right: Body) -> Body:
    """left + right; sums of zonotopes stay zonotopes."""
    if left.dim != right.dim:
        error_message = f"dimension mismatch: {left.dim} vs {right.dim}"
        raise InputError(error_message)
    if isinstance(left, Zonotope) and isinstance(right, Zonotope):
        return Zonotope(np.vstack([left.generators, right.generators]))
    return MinkowskiSum(left, right)


def scale(factor: float, body: Body) -> Body:
    """factor·body, kept in the body's own representation where possible."""
    if not np.isfinite(factor) or factor <= 0:
        error_message = "scale factor must be positive"
        raise InputError(error_message)
    match body:
        case Zonotope(generators=generators):
            return Zonotope(factor * generators)
        case VPolytope(vertices=vertices):
            return VPolytope(factor * vertices)
        case HPolytope(normals=normals, offsets=offsets):
            return HPolytope(normals, factor * offsets)
        case EuclideanBall(radius=radius, n=n):
            return EuclideanBall(factor * radius, n)
        case Scaled(factor=inner_factor, inner=inner):
            return Scaled(factor * inner_factor, inner)
        case _:
            return Scaled(factor, body)


def _invertible(matrix: FloatArray, tol: TolerancePolicy) -> bool:
    singular = np.linalg.svd(matrix, compute_uv=False)
    return bool(singular.min() > tol.eps_rank * max(1.0, float(singular.max())))


def linear_image(
    matrix: npt.ArrayLike, body: Body, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> Body:
    """M(body) with h_{M(A)}(a) = h_A(Mᵀa)."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape != (body.dim, body.dim):
        error_message = f"expected a {body.dim}×{body.dim} matrix, got {m.shape}"
        raise InputError(error_message)
    match body:
        case Zonotope(generators=generators):
            return Zonotope(generators @ m.T)
        case VPolytope(vertices=vertices):
            return VPolytope(vertices @ m.T)
        case Scaled(factor=factor, inner=inner):
            return Scaled(factor, linear_image(m, inner, tol))
        case MinkowskiSum(left=left, right=right):
            return MinkowskiSum(linear_image(m, left, tol), linear_image(m, right, tol))
        case _:
            pass
    if not _invertible(m, tol):
        error_message = f"singular map on a {body.kind} body has no exact image"
        raise UnsupportedRepresentationError(error_message)
    inverse = np.linalg.inv(m)
    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return HPolytope(normals @ inverse, offsets)
        case EuclideanBall(radius=radius, n=n):
            gram = m @ m.T
            stretch = float(np.sqrt(gram[0, 0]))
            if np.max(np.abs(gram - stretch**2 * np.eye(n))) > tol.eps_eq * max(1.0, stretch**2):
                error_message = "image of a ball under a non-conformal map is an ellipsoid"
                raise UnsupportedRepresentationError(error_message)
            return EuclideanBall(radius * stretch, n)
        case IntersectionPair(left=left, right=right):
            return IntersectionPair(linear_image(m, left, tol), linear_image(m, right, tol))
        case Polar(inner=inner):
            return Polar(linear_image(inverse.T, inner, tol))
        case _:
            error_message = f"no linear image for {body.kind}"
            raise UnsupportedRepresentationError(error_message)


# === ZONOTOPE COMBINATORICS ===


def reduce_generators(
    generators: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> FloatArray:
    """Drop zero generators and merge parallel ones; the zonotope is unchanged."""
    rows = as_rows(generators)
    if rows.shape[0] == 0:
        return rows
    lengths = np.linalg.norm(rows, axis=1)
    keep = lengths > tol.eps_rank * max(1.0, float(lengths.max()))
    units = rows[keep] / lengths[keep, np.newaxis]
    lengths = lengths[keep]
    if units.shape[0] == 0:
        return np.zeros((0, rows.shape[1]))
    pivot = np.argmax(np.abs(units) > PARALLEL_TOL, axis=1)
    units = units * np.sign(units[np.arange(units.shape[0]), pivot])[:, np.newaxis]

    directions: list[FloatArray] = []
    totals: list[float] = []
    for unit, length in zip(units, lengths, strict=True):
        for k, direction in enumerate(directions):
            if np.max(np.abs(direction - unit)) <= PARALLEL_TOL:
                totals[k] += float(length)
                break
        else:
            directions.append(unit)
            totals.append(float(length))
    return np.array(directions) * np.array(totals)[:, np.newaxis]


def zonotope_generators(body: Body) -> FloatArray:
    """Generators of a body that is exactly a zonotope."""
    match body:
        case Zonotope(generators=generators):
            return np.array(generators)
        case Scaled(factor=factor, inner=inner):
            return factor * zonotope_generators(inner)
        case MinkowskiSum(left=left, right=right):
            return np.vstack([zonotope_generators(left), zonotope_generators(right)])
        case HPolytope(normals=normals, offsets=offsets) if (
            normals.shape[0] == body.dim and np.linalg.matrix_rank(normals) == body.dim
        ):
            # parallelepiped {|Ax| <= b} = A⁻¹(box b)
            return (np.linalg.inv(normals) * offsets[np.newaxis, :]).T
        case EuclideanBall(n=1, radius=radius):
            return np.array([[radius]])
        case _:
            error_message = f"{body.kind} body is not a zonotope"
            raise UnsupportedRepresentationError(error_message)


def _hyperplane_normal(vectors: FloatArray, tol: TolerancePolicy) -> Optional[FloatArray]:
    """Unit normal of the hyperplane spanned by n−1 vectors, None if they are dependent."""
    _, singular, vh = np.linalg.svd(vectors, full_matrices=True)
    if singular.size and singular[-1] <= tol.eps_rank * max(1.0, float(singular[0])):
        return None
    return vh[-1]


def _canonical_sign(rows: FloatArray) -> FloatArray:
    pivot = np.argmax(np.abs(rows) > PARALLEL_TOL, axis=1)
    signs = np.sign(rows[np.arange(rows.shape[0]), pivot])
    signs[signs == 0] = 1.0
    return rows * signs[:, np.newaxis]


def unique_rows(points: FloatArray, decimals: int = 10) -> FloatArray:
    """Rows with near-duplicates removed, in first-seen order."""
    if points.shape[0] == 0:
        return points
    _, first = np.unique(np.round(points, decimals), axis=0, return_index=True)
    return points[np.sort(first)]


def _sign_table(count: int) -> FloatArray:
    if count == 0:
        return np.zeros((1, 0))
    return np.array(list(itertools.product((1.0, -1.0), repeat=count)))


def zonotope_facets(
    generators: npt.ArrayLike,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Optional[tuple[FloatArray, FloatArray]]:
    """H-representation {|⟨u_k, x⟩| <= h_k} of a full-dimensional zonotope.

    Returns None when the (n−1)-subset count exceeds the budget.
    """
    reduced = reduce_generators(generators, tol)
    n = reduced.shape[1]
    if reduced.shape[0] == 0 or np.linalg.matrix_rank(reduced) < n:
        error_message = "zonotope is not full-dimensional"
        raise UnsupportedRepresentationError(error_message)
    if n == 1:
        return np.ones((1, 1)), np.array([float(np.sum(np.abs(reduced)))])
    if math.comb(reduced.shape[0], n - 1) > budget:
        return None
    normals: list[FloatArray] = []
    for subset in itertools.combinations(range(reduced.shape[0]), n - 1):
        normal = _hyperplane_normal(reduced[list(subset)], tol)
        if normal is not None:
            normals.append(normal)
    stacked = unique_rows(_canonical_sign(np.array(normals)))
    offsets = np.sum(np.abs(stacked @ reduced.T), axis=1)
    return stacked, offsets


def zonotope_vertices(
    generators: npt.ArrayLike,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Optional[FloatArray]:
    """A superset of the zonotope's vertices, every point lying in the zonotope.

    Each (n−1)-subset of generators spanning a hyperplane gives a face; its
    vertices are the sign sweeps of the generators on the face.
    """
    reduced = reduce_generators(generators, tol)
    n = reduced.shape[1]
    count = reduced.shape[0]
    if count == 0:
        return np.zeros((1, n))
    if n == 1:
        total = float(np.sum(np.abs(reduced)))
        return np.array([[total], [-total]])
    if np.linalg.matrix_rank(reduced) < n:
        if 2**count > budget:
            return None
        return unique_rows(_sign_table(count) @ reduced)
    if math.comb(count, n - 1) * 2 ** (n - 1) > budget:
        return None

    candidates: list[FloatArray] = []
    produced = 0
    for subset in itertools.combinations(range(count), n - 1):
        normal = _hyperplane_normal(reduced[list(subset)], tol)
        if normal is None:
            continue
        heights = reduced @ normal
        on_face = np.abs(heights) <= tol.eps_rank * max(1.0, float(np.max(np.abs(heights))))
        base = np.sign(heights) * ~on_face @ reduced
        face = reduced[on_face]
        produced += 2 ** face.shape[0]
        if produced > budget:
            return None
        sweep = base + _sign_table(face.shape[0]) @ face
        candidates.extend([sweep, -sweep])
    return unique_rows(np.vstack(candidates))


def h_vertices(
    normals: FloatArray,
    offsets: FloatArray,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Optional[FloatArray]:
    """Vertices of {|⟨a_k, x⟩| <= b_k} by solving every n-subset of facet planes."""
    count, n = normals.shape
    if math.comb(count, n) * 2**n > budget:
        return None
    signs = _sign_table(n)
    found: list[FloatArray] = []
    for subset in itertools.combinations(range(count), n):
        rows = normals[list(subset)]
        if not _invertible(rows, tol):
            continue
        inverse = np.linalg.inv(rows)
        points = (signs * offsets[list(subset)]) @ inverse.T
        slack = np.max(np.abs(points @ normals.T) / offsets, axis=1)
        found.append(points[slack <= 1.0 + tol.eps_feas])
    if not found:
        return None
    return unique_rows(np.vstack(found))


def vertices(
    body: Body,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Optional[FloatArray]:
    """Points of the body including all its vertices, or None if not available."""
    match body:
        case VPolytope(vertices=points):
            return unique_rows(np.vstack([points, -points]))
        case Zonotope(generators=generators):
            return zonotope_vertices(generators, budget, tol)
        case HPolytope(normals=normals, offsets=offsets):
            return h_vertices(normals, offsets, budget, tol)
        case EuclideanBall(n=1, radius=radius):
            return np.array([[radius], [-radius]])
        case Scaled(factor=factor, inner=inner):
            inner_points = vertices(inner, budget, tol)
            return None if inner_points is None else factor * inner_points
        case MinkowskiSum(left=left, right=right):
            left_points = vertices(left, budget, tol)
            right_points = vertices(right, budget, tol)
            if left_points is None or right_points is None:
                return None
            if left_points.shape[0] * right_points.shape[0] > budget:
                return None
            sums = left_points[:, np.newaxis, :] + right_points[np.newaxis, :, :]
            return unique_rows(sums.reshape(-1, body.dim))
        case Polar(inner=inner):
            explicit = polar(inner)
            if isinstance(explicit, Polar):
                return None
            return vertices(explicit, budget, tol)
        case _:
            return None


def exposes_vertices(body: Body) -> bool:
    """True when ``vertices`` can answer for this representation (budget permitting)."""
    match body:
        case VPolytope() | Zonotope() | HPolytope():
            return True
        case Scaled(inner=inner) | Polar(inner=inner):
            return exposes_vertices(inner) and not isinstance(polar(inner), Polar)
        case MinkowskiSum(left=left, right=right):
            return exposes_vertices(left) and exposes_vertices(right)
        case _:
            return False


def facet_representation(
    body: Body,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Optional[tuple[FloatArray, FloatArray]]:
    """Normals and offsets of an explicit H-description, when one is at hand."""
    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return np.array(normals), np.array(offsets)
        case Scaled(factor=factor, inner=inner):
            inner_facets = facet_representation(inner, budget, tol)
            if inner_facets is None:
                return None
            return inner_facets[0], factor * inner_facets[1]
        case Zonotope(generators=generators):
            return zonotope_facets(generators, budget, tol)
        case VPolytope(vertices=points) if (
            points.shape[0] and np.linalg.matrix_rank(points) == body.dim
        ):
            if body.dim == 1:
                return np.ones((1, 1)), np.array([float(np.max(np.abs(points)))])
            hull = ConvexHull(np.vstack([points, -points]))
            return hull.equations[:, :-1], -hull.equations[:, -1]
        case Polar(inner=inner):
            explicit = polar(inner)
            if isinstance(explicit, Polar):
                return None
            return facet_representation(explicit, budget, tol)
        case _:
            return None


# === CONTAINMENT ===


@dataclass(frozen=True, eq=False)
class ContainmentReport:
    """Outcome of inner ⊆ outer.

    ``worst_margin`` is the largest normalized excess found (<= eps_feas means
    contained). Sampled mode only ever proves non-containment; a positive
    sampled answer is necessary-only.
    """

    contained: bool
    mode: ContainmentMode
    worst_margin: float
    witness: Optional[FloatArray] = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def necessary_only(self) -> bool:
        """True when the answer rests on sampled directions."""
        return self.mode == "sampled"


def _facet_check(
    inner: Body,
    facets: tuple[FloatArray, FloatArray],
    tol: TolerancePolicy,
) -> ContainmentReport:
    normals, offsets = facets
    excess = support_many(inner, normals, tol) / offsets - 1.0
    worst = int(np.argmax(excess))
    return ContainmentReport(
        contained=bool(excess[worst] <= tol.eps_feas),
        mode="exact",
        worst_margin=float(excess[worst]),
        witness=normals[worst],
    )


def _explicit_h(body: Body) -> Optional[tuple[FloatArray, FloatArray]]:
    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return np.array(normals), np.array(offsets)
        case Scaled(factor=factor, inner=inner):
            inner_facets = _explicit_h(inner)
            if inner_facets is None:
                return None
            return inner_facets[0], factor * inner_facets[1]
        case _:
            return None


def contains_body(
    inner: Body,
    outer: Body,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    budget: int = VERTEX_BUDGET,
) -> ContainmentReport:
    """Decide inner ⊆ outer, exactly when the representations allow it."""
    if inner.dim != outer.dim:
        error_message = f"dimension mismatch: {inner.dim} vs {outer.dim}"
        raise InputError(error_message)

    h_facets = _explicit_h(outer)
    if h_facets is not None:
        return _facet_check(inner, h_facets, tol)

    if isinstance(outer, IntersectionPair):
        left = contains_body(inner, outer.left, tol, budget)
        right = contains_body(inner, outer.right, tol, budget)
        worse = left if left.worst_margin >= right.worst_margin else right
        return ContainmentReport(
            contained=left.contained and right.contained,
            mode="exact" if left.mode == right.mode == "exact" else "sampled",
            worst_margin=worse.worst_margin,
            witness=worse.witness,
            warnings=left.warnings + right.warnings,
        )

    points = vertices(inner, budget, tol)
    if points is not None:
        excess = gauge_many(outer, points, tol) - 1.0
        worst = int(np.argmax(excess))
        return ContainmentReport(
            contained=bool(excess[worst] <= tol.eps_feas),
            mode="exact",
            worst_margin=float(excess[worst]),
            witness=points[worst],
        )

    facets = facet_representation(outer, budget, tol)
    if facets is not None:
        return _facet_check(inner, facets, tol)

    if isinstance(inner, EuclideanBall) and isinstance(outer, EuclideanBall):
        margin = inner.radius / outer.radius - 1.0
        return ContainmentReport(margin <= tol.eps_feas, "exact", margin)

    reason = (
        "vertex budget exceeded"
        if exposes_vertices(inner)
        else f"{inner.kind} exposes no vertices"
    )
    logger.warning("containment of %s in %s sampled: %s", inner.kind, outer.kind, reason)
    net = direction_net(inner.dim)
    gap = support_many(inner, net, tol) - support_many(outer, net, tol)
    worst = int(np.argmax(gap))
    return ContainmentReport(
        contained=bool(gap[worst] <= tol.eps_feas),
        mode="sampled",
        worst_margin=float(gap[worst]),
        witness=net[worst],
        warnings=(f"sampled directions: {reason}",),
    )


# === VOLUME ===


def zonotope_volume(
    generators: npt.ArrayLike,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> float:
    """2ⁿ Σ_{|J|=n} |det y_J|."""
    reduced = reduce_generators(generators, tol)
    n = reduced.shape[1]
    if reduced.shape[0] < n:
        return 0.0
    if math.comb(reduced.shape[0], n) > budget:
        error_message = "too many generator subsets for the determinant sum"
        raise UnsupportedRepresentationError(error_message)
    subsets = np.array(list(itertools.combinations(range(reduced.shape[0]), n)))
    determinants = np.linalg.det(reduced[subsets])
    return float(2**n * np.sum(np.abs(determinants)))


def _fan_volume(points: FloatArray) -> float:
    """Volume of conv(points) ∋ 0 by fanning hull facets from the origin."""
    n = points.shape[1]
    if n == 1:
        return float(np.max(points) - np.min(points))
    hull = ConvexHull(points)
    total = 0.0
    for simplex in hull.simplices:
        total += abs(float(np.linalg.det(points[simplex])))
    return total / math.factorial(n)


def volume(
    body: Body,
    budget: int = VERTEX_BUDGET,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> float:
    """Volume for zonotopes (any n), polytopes in n <= 3 and parallelepipeds."""
    n = body.dim
    match body:
        case Zonotope(generators=generators):
            return zonotope_volume(generators, budget, tol)
        case Scaled(factor=factor, inner=inner):
            return factor**n * volume(inner, budget, tol)
        case HPolytope(normals=normals, offsets=offsets) if (
            normals.shape[0] == n and _invertible(normals, tol)
        ):
            return float(2**n * np.prod(offsets) / abs(np.linalg.det(normals)))
        case HPolytope(normals=normals, offsets=offsets) if n <= 3:  # noqa: PLR2004
            points = h_vertices(normals, offsets, budget, tol)
            if points is None:
                error_message = "vertex budget exceeded"
                raise UnsupportedRepresentationError(error_message)
            return _fan_volume(points)
        case VPolytope(vertices=points) if n <= 3:  # noqa: PLR2004
            if np.linalg.matrix_rank(points) < n:
                return 0.0
            return _fan_volume(np.vstack([points, -points]))
        case EuclideanBall(radius=radius):
            return float(math.pi ** (n / 2) / math.gamma(n / 2 + 1) * radius**n)
        case MinkowskiSum() if _is_zonotope_tree(body):
            return zonotope_volume(zonotope_generators(body), budget, tol)
        case _:
            error_message = f"no volume routine for {body.kind} in dimension {n}"
            raise UnsupportedRepresentationError(error_message)


def _is_zonotope_tree(body: Body) -> bool:
    try:
        zonotope_generators(body)
    except UnsupportedRepresentationError:
        return False
    return True


# === DIRECTION NETS ===


@lru_cache(maxsize=32)
def direction_net(n: int, count: Optional[int] = None) -> FloatArray:
    """Deterministic unit directions: equally spaced in 2-D, scrambled Halton beyond."""
    if n < 1:
        error_message = "dimension must be positive"
        raise InputError(error_message)
    if n == 1:
        net = np.array([[1.0], [-1.0]])
    elif n == 2:  # noqa: PLR2004
        size = count or NET_2D
        angles = 2 * np.pi * np.arange(size) / size
        net = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        size = count or NET_ND
        sampler = qmc.Halton(d=n, scramble=True, seed=NET_SEED)
        uniform = np.clip(sampler.random(size), 1e-12, 1 - 1e-12)
        gaussian = standard_normal.ppf(uniform)
        cloud = gaussian / np.linalg.norm(gaussian, axis=1)[:, np.newaxis]
        net = np.vstack([cloud, np.eye(n), -np.eye(n)])
    net.setflags(write=False)
    return net


def hausdorff_distance(
    left: Body,
    right: Body,
    net: Optional[FloatArray] = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> float:
    """sup_u |h_left(u) − h_right(u)| over a direction net."""
    directions = direction_net(left.dim) if net is None else net
    return float(
        np.max(np.abs(support_many(left, directions, tol) - support_many(right, directions, tol)))
    )


# === 2-D BOUNDARIES ===


def polygon_vertices(
    body: Body, samples: int = 360, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> FloatArray:
    """Counter-clockwise boundary of a planar body."""
    if body.dim != 2:  # noqa: PLR2004
        error_message = "boundaries are only traced in the plane"
        raise UnsupportedRepresentationError(error_message)
    if isinstance(body, Zonotope) or _is_zonotope_tree(body) and not isinstance(body, HPolytope):
        reduced = reduce_generators(zonotope_generators(body), tol)
        if reduced.shape[0] == 0:
            return np.zeros((1, 2))
        # orient into the upper half-plane and walk by angle
        flip = (reduced[:, 1] < 0) | ((reduced[:, 1] == 0) & (reduced[:, 0] < 0))
        oriented = np.where(flip[:, np.newaxis], -reduced, reduced)
        order = np.argsort(np.arctan2(oriented[:, 1], oriented[:, 0]))
        steps = oriented[order]
        start = -np.sum(steps, axis=0)
        walk = [start]
        for step in np.vstack([steps, -steps])[:-1]:
            walk.append(walk[-1] + 2 * step)
        return np.array(walk)
    points = vertices(body, tol=tol)
    if points is not None and np.linalg.matrix_rank(points) == 2:  # noqa: PLR2004
        hull = ConvexHull(points)
        return points[hull.vertices]
    angles = 2 * np.pi * np.arange(samples) / samples
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    return directions / gauge_many(body, directions, tol)[:, np.newaxis]
