"""LP search for certificates over a finite pool of dual-ball functionals.

``find_certificate`` only ever answers "found" definitively: an infeasible LP
means nothing beyond the pool and generator budget that were tried.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt

from bodies import (
    NormedSpace,
    contains_body,
    direction_net,
    facet_representation,
    h_vertices,
    support_many,
    vertices,
    zonotope_facets,
)
from certificates import Certificate, VerificationReport, verify_certificate
from env import LP_NET_ND, NET_2D
from errors import InputError, PreconditionError
from numerics import (
    DEFAULT_TOLERANCE,
    ConeConstraint,
    FloatArray,
    LpBuilder,
    TolerancePolicy,
    as_rows,
    solve_conic,
    solve_lp,
)
from shapes import (
    Body,
    EuclideanBall,
    HPolytope,
    IntersectionPair,
    Polar,
    Scaled,
    VPolytope,
    Zonotope,
    is_polytopal,
)

logger = logging.getLogger(__name__)

Provenance = Literal["dual-vertex", "orbit", "random-extreme", "user"]
SearchStatus = Literal["found", "not-found-within-budget"]
TightenObjective = Literal["generator-norm-sum", "support"]
RowMode = Literal["exact", "sampled"]


# === POOLS ===


@dataclass(frozen=True, eq=False)
class FunctionalPool:
    """Candidate functionals f_j with where each one came from."""

    functionals: FloatArray
    provenance: tuple[Provenance, ...]

    def __post_init__(self) -> None:
        rows = as_rows(self.functionals)
        if rows.shape[0] != len(self.provenance):
            error_message = "one provenance tag per functional is required"
            raise InputError(error_message)
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "functionals", rows)

    @property
    def size(self) -> int:
        """Number of functionals."""
        return int(self.functionals.shape[0])

    def check(self, space: NormedSpace, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> None:
        """Every functional must lie in the dual ball."""
        excess = space.dual_norms(self.functionals, tol) - 1.0
        worst = int(np.argmax(excess))
        if excess[worst] > tol.eps_feas:
            error_message = f"pool functional {worst} has dual norm {1 + excess[worst]:.6g}"
            raise PreconditionError(error_message, witness=self.functionals[worst])

    def extended(self, other: "FunctionalPool") -> "FunctionalPool":
        """Union of two pools, self first."""
        return FunctionalPool(
            np.vstack([self.functionals, other.functionals]),
            self.provenance + other.provenance,
        )

    @classmethod
    def from_user(cls, functionals: npt.ArrayLike) -> "FunctionalPool":
        """Pool supplied by the caller."""
        rows = as_rows(functionals)
        return cls(rows, ("user",) * rows.shape[0])


def _symmetric(rows: FloatArray) -> FloatArray:
    return np.vstack([rows, -rows])


def _dual_vertices(body: Body) -> Optional[FloatArray]:
    """Vertices of the polar of a polytopal body, one per ± pair."""
    match body:
        case HPolytope(normals=normals, offsets=offsets):
            return normals / offsets[:, np.newaxis]
        case VPolytope(vertices=points):
            found = h_vertices(points, np.ones(points.shape[0]))
            if found is None:
                return None
            return _one_per_pair(found)
        case Zonotope(generators=generators):
            facets = zonotope_facets(generators)
            if facets is None:
                return None
            normals, offsets = facets
            return normals / offsets[:, np.newaxis]
        case Scaled(factor=factor, inner=inner):
            inner_vertices = _dual_vertices(inner)
            return None if inner_vertices is None else inner_vertices / factor
        case Polar(inner=inner):
            points = vertices(inner)
            return None if points is None else _one_per_pair(points)
        case _:
            return None


def _one_per_pair(points: FloatArray) -> FloatArray:
    kept: list[FloatArray] = []
    for point in points:
        if not any(np.allclose(point, -other, atol=1e-9) for other in kept):
            kept.append(point)
    return np.array(kept)


def _sampled_extremes(body: Body, count: int) -> FloatArray:
    """u / h_B(u) on a direction net: points of the dual sphere."""
    n = body.dim
    if n == 2:  # noqa: PLR2004
        angles = 2 * np.pi * np.arange(count) / count
        net = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        net = direction_net(n, max(count - 2 * n, 1))[:count]
    return net / support_many(body, net)[:, np.newaxis]


def _candidates(body: Body, budget: int) -> tuple[FloatArray, list[Provenance]]:
    match body:
        case EuclideanBall():
            points = _sampled_extremes(body, budget)
            return points, ["random-extreme"] * points.shape[0]
        case IntersectionPair(left=left, right=right):
            # the dual ball is conv(left° ∪ right°); polytopal parts go first
            first, second = (left, right) if is_polytopal(left) else (right, left)
            first_points, first_tags = _candidates(first, budget)
            remaining = max(budget - first_points.shape[0], body.dim)
            second_points, second_tags = _candidates(second, remaining)
            return np.vstack([first_points, second_points]), first_tags + second_tags
        case _:
            dual = _dual_vertices(body)
            if dual is None:
                points = _sampled_extremes(body, budget)
                return points, ["random-extreme"] * points.shape[0]
            if budget < dual.shape[0]:
                error_message = (
                    f"budget {budget} is below the {dual.shape[0]} dual vertices "
                    "needed to norm the space"
                )
                raise InputError(error_message)
            if budget >= 2 * dual.shape[0]:
                dual = _symmetric(dual)
            return dual, ["dual-vertex"] * dual.shape[0]


def default_pool(space: NormedSpace, budget: int) -> FunctionalPool:
    """Dual vertices for polytopal balls, equally spaced or quasi-uniform ones otherwise."""
    if budget < space.dim:
        error_message = f"budget must be at least the dimension {space.dim}"
        raise InputError(error_message)
    points, tags = _candidates(space.unit_ball, budget)
    if points.shape[0] > budget:
        logger.warning("pool truncated from %s to %s functionals", points.shape[0], budget)
        points, tags = points[:budget], tags[:budget]
    if np.linalg.matrix_rank(points) < space.dim:
        error_message = "pool does not span the dual space"
        raise InputError(error_message)
    return FunctionalPool(points, tuple(tags))


def greedy_selection(functionals: FloatArray, count: int) -> list[int]:
    """Farthest-point subset of the pool, as spread out as possible up to sign."""
    if count >= functionals.shape[0]:
        return list(range(functionals.shape[0]))
    units = functionals / np.linalg.norm(functionals, axis=1)[:, np.newaxis]
    chosen = [0]
    # distance up to sign: parallel functionals are redundant
    closest = 1.0 - np.abs(units @ units[0])
    while len(chosen) < count:
        pick = int(np.argmax(closest))
        chosen.append(pick)
        closest = np.minimum(closest, 1.0 - np.abs(units @ units[pick]))
    return sorted(chosen)


# === LP ===


@dataclass(frozen=True, eq=False)
class ContainmentRows:
    """h_Z(a_k) <= b_k rows imposed on the certificate zonotope."""

    normals: FloatArray
    offsets: FloatArray
    mode: RowMode


def containment_rows(
    enlargement: Body,
    count: Optional[int] = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> ContainmentRows:
    """Exact facet rows when an H-description exists, sampled support rows otherwise."""
    facets = facet_representation(enlargement, tol=tol)
    if facets is not None:
        return ContainmentRows(facets[0], facets[1], "exact")
    n = enlargement.dim
    size = count or (NET_2D if n == 2 else LP_NET_ND)  # noqa: PLR2004
    net = direction_net(n, size)
    return ContainmentRows(net, support_many(enlargement, net, tol), "sampled")


class CertificateProgram:
    """Variables y_j per functional, reconstruction rows and containment rows."""

    def __init__(self, functionals: FloatArray, rows: ContainmentRows) -> None:
        self.functionals = functionals
        self.rows = rows
        count, n = functionals.shape
        self.lp = LpBuilder()
        self.y = [self.lp.new_vars(n) for _ in range(count)]
        for r in range(n):
            for c in range(n):
                row = {
                    self.y[j][r]: float(functionals[j, c])
                    for j in range(count)
                    if functionals[j, c] != 0.0
                }
                self.lp.add_eq(row, 1.0 if r == c else 0.0)
        for normal, offset in zip(rows.normals, rows.offsets, strict=True):
            slack = self.lp.new_vars(count, lower=0.0)
            for j in range(count):
                projection = {var: float(a) for var, a in zip(self.y[j], normal, strict=True)}
                self.lp.add_ub({**projection, slack[j]: -1.0}, 0.0)
                self.lp.add_ub(
                    {**{var: -coef for var, coef in projection.items()}, slack[j]: -1.0}, 0.0
                )
            self.lp.add_ub({s: 1.0 for s in slack}, float(offset))

    def vectors(self, solution: FloatArray) -> FloatArray:
        """y_j read back from a solution."""
        return np.array([solution[block] for block in self.y])


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Outcome of a certificate search; "found" always carries a verified certificate."""

    status: SearchStatus
    certificate: Optional[Certificate] = None
    verification: Optional[VerificationReport] = None
    diagnostics: dict[str, object] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        """True when a verified certificate was assembled."""
        return self.status == "found"

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        summary: dict[str, object] = {"status": self.status, "diagnostics": dict(self.diagnostics)}
        if self.certificate is not None:
            summary["pairs"] = [
                {"f": f.tolist(), "y": y.tolist()}
                for f, y in zip(self.certificate.functionals, self.certificate.vectors, strict=True)
            ]
        if self.verification is not None:
            summary["verification"] = self.verification.to_dict()
        return summary


def _assemble(
    space: NormedSpace, enlargement: Body, functionals: FloatArray, vectors: FloatArray
) -> Certificate:
    keep = np.linalg.norm(vectors, axis=1) > 1e-12
    if not np.any(keep):
        keep[:] = True
    return Certificate(space, enlargement, functionals[keep], vectors[keep])


def find_certificate(
    space: NormedSpace,
    enlargement: Body,
    pool: FunctionalPool,
    generators: Optional[int] = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> SearchResult:
    """One LP: Σ y_j f_jᵀ = I and Σ_j |⟨a_k, y_j⟩| <= b_k for every containment row."""
    if enlargement.dim != space.dim:
        error_message = "enlargement and space dimensions differ"
        raise InputError(error_message)
    pool.check(space, tol)
    diagnostics: dict[str, object] = {"pool_size": pool.size}

    cover = contains_body(space.unit_ball, enlargement, tol)
    if not cover.contained and not cover.necessary_only:
        diagnostics["reason"] = "enlargement does not contain the unit ball"
        diagnostics["witness"] = None if cover.witness is None else cover.witness.tolist()
        logger.info("search skipped: enlargement misses the unit ball")
        return SearchResult("not-found-within-budget", diagnostics=diagnostics)

    selected = greedy_selection(pool.functionals, generators or pool.size)
    functionals = pool.functionals[selected]
    diagnostics["generators"] = len(selected)
    if np.linalg.matrix_rank(functionals) < space.dim:
        diagnostics["reason"] = "selected functionals do not span"
        return SearchResult("not-found-within-budget", diagnostics=diagnostics)

    rows = containment_rows(enlargement, tol=tol)
    diagnostics["rows"] = rows.mode
    for attempt in range(2):
        program = CertificateProgram(functionals, rows)
        diagnostics["lp_variables"] = program.lp.n_vars
        diagnostics["lp_rows"] = program.lp.eq_count + program.lp.ub_count
        outcome = solve_lp(program.lp.build(), tol)
        if not outcome.feasible or outcome.x is None:
            diagnostics["reason"] = f"LP {outcome.status}"
            logger.info("certificate LP %s with %s functionals", outcome.status, len(selected))
            return SearchResult("not-found-within-budget", diagnostics=diagnostics)
        cert = _assemble(space, enlargement, functionals, program.vectors(outcome.x))
        report = verify_certificate(cert, tol)
        if report.valid:
            diagnostics["refined"] = attempt > 0
            logger.info("certificate found with %s pairs", cert.size)
            return SearchResult("found", cert, report, diagnostics)
        if rows.mode == "exact":
            break
        logger.warning(
            "post-verification rejected a sampled-row certificate (margin %.3e)",
            report.containment.worst_margin,
        )
        # denser net, offsets pulled in by twice the observed bulge
        shrink = 1.0 / (1.0 + 2.0 * max(report.containment.worst_margin, 0.0))
        net = direction_net(space.dim, 2 * rows.normals.shape[0])
        if report.containment.witness is not None:
            witness = report.containment.witness / np.linalg.norm(report.containment.witness)
            net = np.vstack([net, witness])
        rows = ContainmentRows(net, shrink * support_many(enlargement, net, tol), "sampled")

    diagnostics["reason"] = "post-verification rejected the LP solution"
    return SearchResult("not-found-within-budget", diagnostics=diagnostics)


# === TIGHTENING ===


def generator_norm_sum(cert: Certificate) -> float:
    """Σ_j ‖y_j‖₂."""
    return float(np.sum(np.linalg.norm(cert.vectors, axis=1)))


def support_objective(cert: Certificate, directions: FloatArray) -> float:
    """Σ_d h_Z(d) over the given directions."""
    return float(np.sum(support_many(cert.zonotope, directions)))


def tighten_certificate(
    cert: Certificate,
    objective: TightenObjective = "generator-norm-sum",
    directions: Optional[npt.ArrayLike] = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Certificate:
    """Re-solve over the same functionals with a linear or cone objective.

    Returns the input when the re-solved certificate is not strictly better.
    """
    rows = containment_rows(cert.enlargement, tol=tol)
    program = CertificateProgram(np.array(cert.functionals), rows)
    n = cert.dim
    if objective == "generator-norm-sum":
        lengths = program.lp.new_vars(cert.size, lower=0.0)
        cones = [
            ConeConstraint(tuple(block), 1.0, length)
            for block, length in zip(program.y, lengths, strict=True)
        ]
        outcome = solve_conic(program.lp.build({s: 1.0 for s in lengths}), cones, tol)
        before = generator_norm_sum(cert)
        score = generator_norm_sum
    else:
        if directions is None:
            error_message = "support tightening needs directions"
            raise InputError(error_message)
        targets = as_rows(directions, n)
        cost: dict[int, float] = {}
        for target in targets:
            slack = program.lp.new_vars(cert.size, lower=0.0)
            for block, s in zip(program.y, slack, strict=True):
                row = {var: float(a) for var, a in zip(block, target, strict=True)}
                program.lp.add_ub({**row, s: -1.0}, 0.0)
                program.lp.add_ub({**{v: -c for v, c in row.items()}, s: -1.0}, 0.0)
                cost[s] = cost.get(s, 0.0) + 1.0
        outcome = solve_lp(program.lp.build(cost), tol)
        before = support_objective(cert, targets)

        def score(candidate: Certificate) -> float:
            return support_objective(candidate, targets)

    if not outcome.feasible or outcome.x is None:
        logger.warning("tightening LP %s; keeping the certificate", outcome.status)
        return cert
    tightened = _assemble(
        cert.space, cert.enlargement, np.array(cert.functionals), program.vectors(outcome.x)
    )
    after = score(tightened)
    improved = after < before - tol.eps_feas * max(1.0, abs(before))
    if not improved or not verify_certificate(tightened, tol).valid:
        return cert
    logger.info("tightened %s from %.9g to %.9g", objective, before, after)
    return tightened


