"""Small sufficient enlargements of l₂ⁿ.

Averaging a segment [−z, z] over the Haar measure of O(n) gives the ball of
radius ‖z‖λ(l₂ⁿ)/n, so a zonotope averages to λ(l₂ⁿ)B exactly when its
generator norms sum to n. Orbits of irreducible finite groups give such
zonotopes; so do their direct sums.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt

from bodies import (
    NormedSpace,
    contains_body,
    direction_net,
    euclidean_space,
    hausdorff_distance,
    lp_space,
    minkowski_sum,
    reduce_generators,
    support,
    support_many,
    zonotope_generators,
    zonotope_volume,
)
from certificates import (
    Certificate,
    VerificationReport,
    project_certificate,
    verify_certificate,
)
from env import HADAMARD_MAX_DIM
from errors import (
    HypothesisError,
    InputError,
    PreconditionError,
    SpaceMismatchError,
    UnsupportedRepresentationError,
)
from groups import OrthogonalGroupAction
from numerics import (
    DEFAULT_TOLERANCE,
    FloatArray,
    LpBuilder,
    RunningMean,
    Seed,
    TolerancePolicy,
    as_rows,
    as_vector,
    random_rotations,
    require_feasible,
    solve_lp,
)
from shapes import Body, EuclideanBall, HPolytope, VPolytope, Zonotope

logger = logging.getLogger(__name__)

SmallnessVerdict = Literal["small", "not-small", "invalid"]
SearchStatus = Literal["found", "not-found-within-budget"]


def _seed_sequence(seed: Seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(2**63)))
    return np.random.SeedSequence(seed)


# === AVERAGING ===


def lambda_euclidean(n: int) -> float:
    """Projection constant of l₂ⁿ: nΓ(n/2) / (√π Γ((n+1)/2))."""
    if n < 1:
        error_message = "dimension must be positive"
        raise InputError(error_message)
    if n == 1:
        return 1.0
    return n * math.exp(math.lgamma(n / 2) - math.lgamma((n + 1) / 2)) / math.sqrt(math.pi)


def average_segment_radius(z: npt.ArrayLike) -> float:
    """Radius of the Haar average of [−z, z]: ‖z‖₂ λ(l₂ⁿ)/n."""
    vector = as_vector(z)
    n = vector.shape[0]
    return float(np.linalg.norm(vector)) * lambda_euclidean(n) / n


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean with its standard error."""

    mean: float
    stderr: float
    trials: int

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {"mean": self.mean, "stderr": self.stderr, "trials": self.trials}


def monte_carlo_average_support(
    body: Body,
    a: npt.ArrayLike,
    trials: int,
    seed: Seed = None,
    workers: int = 1,
    chunk: int = 10_000,
) -> MonteCarloEstimate:
    """Mean of h(body, Qᵀa) over Haar-random Q.

    Chunks draw from independent child seeds, so the estimate does not depend
    on ``workers``.
    """
    if trials < 1:
        error_message = "trials must be at least 1"
        raise InputError(error_message)
    direction = as_vector(a, body.dim)
    sizes = [chunk] * (trials // chunk) + ([trials % chunk] if trials % chunk else [])
    children = _seed_sequence(seed).spawn(len(sizes))

    def run(size: int, child: np.random.SeedSequence) -> FloatArray:
        rotations = random_rotations(body.dim, size, np.random.default_rng(child))
        return support_many(body, np.einsum("tji,j->ti", rotations, direction))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        batches = list(pool.map(run, sizes, children))
    running = RunningMean()
    for batch in batches:
        running.extend(batch)
    return MonteCarloEstimate(running.mean, running.stderr, running.count)


# === ORBIT ZONOTOPES ===


def orbit_zonotope(
    group: OrthogonalGroupAction,
    y: npt.ArrayLike,
    allow_nontrivial_commutant: bool = False,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Certificate:
    """Certificate (g·y, (n/|G|)·g·y) for l₂ⁿ with the orbit zonotope as enlargement."""
    n = group.dim
    unit = as_vector(y, n)
    if abs(float(np.linalg.norm(unit)) - 1.0) > tol.eps_eq:
        error_message = "orbit seed y must be a unit vector"
        raise PreconditionError(error_message, witness=unit)
    commutant = group.commutant_dimension(tol)
    if commutant != 1 and not allow_nontrivial_commutant:
        error_message = (
            f"group {group.name or '?'} has a commutant of dimension {commutant}; "
            "the orbit need not be a tight frame"
        )
        raise HypothesisError(error_message)

    orbit = group.orbit(unit)
    vectors = (n / group.order) * orbit
    cert = Certificate(euclidean_space(n), Zonotope(vectors), orbit, vectors)
    residual = float(np.max(np.abs(cert.reconstruction() - np.eye(n))))
    if residual > tol.eps_eq:
        error_message = f"orbit of {unit.tolist()} is not a tight frame (residual {residual:.3e})"
        raise HypothesisError(error_message, witness=unit)
    return cert


@dataclass(frozen=True, eq=False)
class OrbitMember:
    """One orbit zonotope of a family."""

    seed: FloatArray
    certificate: Certificate
    volume: float


def orbit_family(
    group: OrthogonalGroupAction,
    seeds: npt.ArrayLike,
    allow_nontrivial_commutant: bool = False,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> list[OrbitMember]:
    """Orbit zonotopes for several unit seeds; each one is small."""
    members = []
    for row in as_rows(seeds, group.dim):
        unit = row / np.linalg.norm(row)
        cert = orbit_zonotope(group, unit, allow_nontrivial_commutant, tol)
        members.append(OrbitMember(unit, cert, zonotope_volume(cert.vectors, tol=tol)))
    return members


def circle_seeds(angles: npt.ArrayLike) -> FloatArray:
    """Unit vectors (cos a, sin a)."""
    values = as_vector(angles)
    return np.column_stack([np.cos(values), np.sin(values)])


# === SMALLNESS ===


@dataclass(frozen=True, eq=False)
class SmallnessReport:
    """Generator-norm-sum verdict for a zonotope enlargement of l₂ⁿ."""

    generator_norm_sum: float
    verdict: SmallnessVerdict
    lambda_n: float
    dim: int
    verification: Optional[VerificationReport] = None

    @property
    def averaged_radius(self) -> float:
        """Radius of the Haar-averaged enlargement."""
        return self.generator_norm_sum * self.lambda_n / self.dim

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        summary: dict[str, object] = {
            "verdict": self.verdict,
            "generator_norm_sum": self.generator_norm_sum,
            "dim": self.dim,
            "lambda_n": self.lambda_n,
            "averaged_radius": self.averaged_radius,
        }
        if self.verification is not None:
            summary["valid"] = self.verification.valid
        return summary


def smallness_check(
    cert: Certificate, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> SmallnessReport:
    """small ⇔ Σ‖y‖₂ = n over the enlargement's generators."""
    if not cert.space.is_euclidean:
        error_message = "smallness is defined for l2 spaces only"
        raise UnsupportedRepresentationError(error_message)
    generators = zonotope_generators(cert.enlargement)
    n = cert.dim
    total = float(np.sum(np.linalg.norm(generators, axis=1)))
    if total < n - tol.eps_feas:
        verification = verify_certificate(cert, tol)
        if verification.valid:
            logger.error("valid certificate with generator norm sum %.12g < %s", total, n)
        return SmallnessReport(total, "invalid", lambda_euclidean(n), n, verification)
    verdict: SmallnessVerdict = "small" if abs(total - n) <= tol.eps_feas else "not-small"
    return SmallnessReport(total, verdict, lambda_euclidean(n), n)


# === DIRECT SUMS ===


def _embed_enlargement(body: Body, offset: int, total: int) -> Body:
    match body:
        case VPolytope(vertices=vertices):
            padded = np.zeros((vertices.shape[0], total))
            padded[:, offset : offset + body.dim] = vertices
            return VPolytope(padded)
        case _:
            generators = zonotope_generators(body)
            padded = np.zeros((generators.shape[0], total))
            padded[:, offset : offset + body.dim] = generators
            return Zonotope(padded)


def direct_sum(*certs: Certificate) -> Certificate:
    """Certificate for l₂^{n₁+n₂+…} built from coordinate blocks."""
    if not certs:
        error_message = "direct sum of nothing"
        raise InputError(error_message)
    if any(not cert.space.is_euclidean for cert in certs):
        error_message = "direct sums are built for l2 spaces only"
        raise SpaceMismatchError(error_message)
    if len(certs) == 1:
        return certs[0]
    total = sum(cert.dim for cert in certs)
    functionals: list[FloatArray] = []
    vectors: list[FloatArray] = []
    enlargement: Optional[Body] = None
    offset = 0
    for cert in certs:
        block_f = np.zeros((cert.size, total))
        block_y = np.zeros((cert.size, total))
        block_f[:, offset : offset + cert.dim] = cert.functionals
        block_y[:, offset : offset + cert.dim] = cert.vectors
        functionals.append(block_f)
        vectors.append(block_y)
        embedded = _embed_enlargement(cert.enlargement, offset, total)
        enlargement = embedded if enlargement is None else minkowski_sum(enlargement, embedded)
        offset += cert.dim
    assert enlargement is not None
    return Certificate(
        euclidean_space(total), enlargement, np.vstack(functionals), np.vstack(vectors)
    )


@dataclass(frozen=True, eq=False)
class SplitReport:
    """Block decomposition of a zonotope enlargement of l₂^{n+m}."""

    first: SmallnessReport
    second: SmallnessReport
    split_gap: float
    splits: bool

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "split_gap": self.split_gap,
            "splits": self.splits,
        }


def theorem5_check(
    cert: Certificate, n: int, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> SplitReport:
    """Project onto the first n and the remaining coordinates and compare A with A₁ + A₂."""
    total = cert.dim
    if not 1 <= n < total:
        error_message = f"block size must lie in [1, {total - 1}]"
        raise InputError(error_message)
    first = project_certificate(cert, list(range(n)))
    second = project_certificate(cert, list(range(n, total)))
    rebuilt = minkowski_sum(
        _embed_enlargement(first.enlargement, 0, total),
        _embed_enlargement(second.enlargement, n, total),
    )
    net = direction_net(total)
    gap = float(
        np.max(np.abs(support_many(cert.enlargement, net, tol) - support_many(rebuilt, net, tol)))
    )
    return SplitReport(
        smallness_check(first, tol), smallness_check(second, tol), gap, gap <= tol.eps_feas
    )


# === HADAMARD CERTIFICATES ===


def hadamard_certificate(n: int) -> Certificate:
    """Certificate that B(l₂ⁿ) is a sufficient enlargement of l₁ⁿ.

    Pairs (f, f/2ⁿ⁻¹) over sign vectors f with last coordinate +1.
    """
    if not 1 <= n <= HADAMARD_MAX_DIM:
        error_message = f"n must lie in [1, {HADAMARD_MAX_DIM}]"
        raise InputError(error_message)
    signs = np.array(
        [[*head, 1.0] for head in itertools.product((1.0, -1.0), repeat=n - 1)]
    )
    return Certificate(
        lp_space(1, n), EuclideanBall(1.0, n), signs, signs / 2 ** (n - 1)
    )


# === HYPERPLANE PROJECTIONS ===


@dataclass(frozen=True, eq=False)
class HyperplaneProjection:
    """P = I − w hᵀ with ⟨w, h⟩ = 1 and minimal l∞ operator norm."""

    h: FloatArray
    kernel: FloatArray
    matrix: FloatArray
    norm: float

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "h": self.h.tolist(),
            "kernel": self.kernel.tolist(),
            "matrix": self.matrix.tolist(),
            "norm": self.norm,
        }


def infinity_operator_norm(matrix: FloatArray) -> float:
    """Largest absolute row sum."""
    return float(np.max(np.sum(np.abs(matrix), axis=1)))


def minimal_norm_hyperplane_projection(
    h: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> HyperplaneProjection:
    """min over ⟨w, h⟩ = 1 of max_i Σ_j |δ_ij − w_i h_j|, as one LP."""
    normal = as_vector(h)
    n = normal.shape[0]
    if abs(float(np.linalg.norm(normal)) - 1.0) > tol.eps_eq:
        error_message = "h must be a unit vector"
        raise InputError(error_message)

    lp = LpBuilder()
    w = lp.new_vars(n)
    level = lp.new_vars(1)[0]
    lp.add_eq({w[i]: float(normal[i]) for i in range(n)}, 1.0)
    for i in range(n):
        bounds = lp.new_vars(n, lower=0.0)
        for j in range(n):
            delta = 1.0 if i == j else 0.0
            # |δ_ij − w_i h_j| <= u_ij
            lp.add_ub({w[i]: -float(normal[j]), bounds[j]: -1.0}, -delta)
            lp.add_ub({w[i]: float(normal[j]), bounds[j]: -1.0}, delta)
        lp.add_ub({**{u: 1.0 for u in bounds}, level: -1.0}, 0.0)
    solution = require_feasible(solve_lp(lp.build({level: 1.0}), tol), "hyperplane projection")
    kernel = solution[w]
    matrix = np.eye(n) - np.outer(kernel, normal)
    return HyperplaneProjection(normal, kernel, matrix, infinity_operator_norm(matrix))


@dataclass(frozen=True, eq=False)
class Remark2Report:
    """A = [−h, h] + P(B(l∞ⁿ)) next to the natural certificate built from P."""

    enlargement: Zonotope
    projection: HyperplaneProjection
    certificate: Certificate
    verification: VerificationReport
    checks: dict[str, bool] = field(default_factory=dict)
    margins: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "projection_norm": self.projection.norm,
            "kernel": self.projection.kernel.tolist(),
            "certificate_valid": self.verification.valid,
            "checks": dict(self.checks),
            "margins": dict(self.margins),
        }


def remark2_enlargement(
    h: npt.ArrayLike, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> Remark2Report:
    """Build A, the certificate (h, w) ∪ (e_j, P e_j), and every containment separately."""
    projection = minimal_norm_hyperplane_projection(h, tol)
    n = projection.h.shape[0]
    columns = projection.matrix.T
    body = Zonotope(np.vstack([projection.h, columns]))
    pairs_y = np.vstack([projection.kernel, columns])
    cert_zonotope = Zonotope(pairs_y)
    cert = Certificate(
        euclidean_space(n), cert_zonotope, np.vstack([projection.h, np.eye(n)]), pairs_y
    )

    cube3 = HPolytope(np.eye(n), 3.0 * np.ones(n))
    checks: dict[str, bool] = {}
    margins: dict[str, float] = {}
    for label, zonotope in (("body", body), ("certificate", cert_zonotope)):
        inside_cube = contains_body(zonotope, cube3, tol)
        slab = support(zonotope, projection.h, tol) - 1.0
        covers = contains_body(EuclideanBall(1.0, n), zonotope, tol)
        checks[f"{label}_in_3cube"] = inside_cube.contained
        margins[f"{label}_in_3cube"] = inside_cube.worst_margin
        checks[f"{label}_in_slab"] = slab <= tol.eps_feas
        margins[f"{label}_in_slab"] = slab
        checks[f"{label}_covers_ball"] = covers.contained
        margins[f"{label}_covers_ball"] = covers.worst_margin
    inside_body = contains_body(cert_zonotope, body, tol)
    checks["certificate_in_body"] = inside_body.contained
    margins["certificate_in_body"] = inside_body.worst_margin
    return Remark2Report(body, projection, cert, verify_certificate(cert, tol), checks, margins)


# === MINIMAL VOLUME ===


def _volume_and_gradient(
    vectors: FloatArray, subsets: npt.NDArray[np.int64], tol: TolerancePolicy
) -> tuple[float, FloatArray]:
    """2ⁿ Σ |det y_J| and a subgradient; singular blocks contribute 0."""
    n = vectors.shape[1]
    blocks = vectors[subsets]
    dets = np.linalg.det(blocks)
    gradient = np.zeros_like(vectors)
    live = np.abs(dets) > tol.eps_rank
    if np.any(live):
        # ∂|det B|/∂B = |det B| B⁻ᵀ
        cofactors = np.abs(dets[live])[:, np.newaxis, np.newaxis] * np.transpose(
            np.linalg.inv(blocks[live]), (0, 2, 1)
        )
        np.add.at(gradient, subsets[live], cofactors)
    return float(2**n * np.sum(np.abs(dets))), 2**n * gradient


def _descend(
    start: FloatArray,
    projector: FloatArray,
    subsets: npt.NDArray[np.int64],
    tol: TolerancePolicy,
    iterations: int = 300,
) -> tuple[FloatArray, float]:
    """Projected subgradient descent with backtracking; reconstruction is preserved."""
    current = start
    value, gradient = _volume_and_gradient(current, subsets, tol)
    step = 1.0
    for _ in range(iterations):
        direction = projector @ gradient
        if float(np.max(np.abs(direction))) <= tol.eps_eq:
            break
        improved = False
        while step > 1e-12:
            candidate = current - step * direction
            candidate_value, candidate_gradient = _volume_and_gradient(candidate, subsets, tol)
            if candidate_value < value - 1e-15 * max(1.0, value):
                current, value, gradient = candidate, candidate_value, candidate_gradient
                step *= 2.0
                improved = True
                break
            step /= 2.0
        if not improved:
            break
    return current, value


def _restore(vectors: FloatArray, chosen: FloatArray, gram_inverse: FloatArray) -> FloatArray:
    """Nearest point with Σ y_j f_jᵀ = I."""
    return vectors + chosen @ gram_inverse @ (np.eye(chosen.shape[1]) - vectors.T @ chosen).T


def _linearized_target(
    current: FloatArray,
    gradient: FloatArray,
    chosen: FloatArray,
    radius: float,
    tol: TolerancePolicy,
) -> Optional[FloatArray]:
    """Minimize ⟨∇vol, Y⟩ over the reconstruction constraints within a box around Y."""
    count, n = current.shape
    lp = LpBuilder()
    cells = np.empty((count, n), dtype=np.int64)
    for j, r in itertools.product(range(count), range(n)):
        middle = float(current[j, r])
        cells[j, r] = lp.new_vars(1, middle - radius, middle + radius)[0]
    for r, c in itertools.product(range(n), range(n)):
        row = {int(cells[j, r]): float(chosen[j, c]) for j in range(count)}
        lp.add_eq(row, 1.0 if r == c else 0.0)
    objective = {int(cells[j, r]): float(gradient[j, r]) for j, r in np.ndindex(count, n)}
    outcome = solve_lp(lp.build(objective), tol)
    if not outcome.feasible or outcome.x is None:
        return None
    return outcome.x[cells]


def _linearized_descent(
    start: FloatArray,
    chosen: FloatArray,
    gram_inverse: FloatArray,
    subsets: npt.NDArray[np.int64],
    tol: TolerancePolicy,
    rounds: int = 30,
) -> tuple[FloatArray, float]:
    """Trust-region LP steps on the linearized volume, backtracking along each step."""
    current = start
    value, gradient = _volume_and_gradient(current, subsets, tol)
    radius = 0.5 * max(1.0, float(np.max(np.abs(current))))
    for _ in range(rounds):
        target = _linearized_target(current, gradient, chosen, radius, tol)
        if target is None:
            break
        step = target - current
        fraction = 1.0
        accepted = False
        while fraction >= 1 / 64:
            candidate = _restore(current + fraction * step, chosen, gram_inverse)
            candidate_value, candidate_gradient = _volume_and_gradient(candidate, subsets, tol)
            if candidate_value < value - 1e-12 * max(1.0, value):
                current, value, gradient = candidate, candidate_value, candidate_gradient
                accepted = True
                break
            fraction /= 2.0
        if not accepted:
            radius /= 4.0
            if radius < 1e-6:
                break
    return current, value


@dataclass(frozen=True, eq=False)
class MinVolumeResult:
    """Best certificate zonotope found by the multi-start search."""

    status: SearchStatus
    certificate: Optional[Certificate]
    volume: float
    history: tuple[float, ...]
    norm_sum: float
    bounds_respected: bool
    restarts: int
    verification: Optional[VerificationReport] = None

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        summary: dict[str, object] = {
            "status": self.status,
            "volume": self.volume,
            "norm_sum": self.norm_sum,
            "bounds_respected": self.bounds_respected,
            "restarts": self.restarts,
            "best_per_restart": list(self.history),
        }
        if self.verification is not None:
            summary["valid"] = self.verification.valid
        if self.certificate is not None:
            summary["pairs"] = [
                {"f": f.tolist(), "y": y.tolist()}
                for f, y in zip(self.certificate.functionals, self.certificate.vectors, strict=True)
            ]
        return summary


def _restart(
    pool: FloatArray,
    generators: int,
    child: np.random.SeedSequence,
    tol: TolerancePolicy,
) -> Optional[tuple[FloatArray, FloatArray, float]]:
    """One assignment of pool functionals, initialized and descended."""
    rng = np.random.default_rng(child)
    n = pool.shape[1]
    replace = generators > pool.shape[0]
    for _ in range(20):
        chosen = pool[rng.choice(pool.shape[0], size=generators, replace=replace)]
        if np.linalg.matrix_rank(chosen) == n:
            break
    else:
        return None

    gram_inverse = np.linalg.inv(chosen.T @ chosen)
    projector = np.eye(generators) - chosen @ gram_inverse @ chosen.T
    subsets = np.array(list(itertools.combinations(range(generators), n)), dtype=np.int64)

    starts = [chosen @ gram_inverse]
    # the best parallelepiped of the assignment has volume 2ⁿ / max |det f_J|
    spans = np.abs(np.linalg.det(chosen[subsets]))
    if float(spans.max()) > tol.eps_rank:
        pick = subsets[int(np.argmax(spans))]
        parallelepiped = np.zeros_like(chosen)
        parallelepiped[pick] = np.linalg.inv(chosen[pick]).T
        starts.append(parallelepiped)

    best: Optional[tuple[FloatArray, float]] = None
    for start in starts:
        linearized, _ = _linearized_descent(start, chosen, gram_inverse, subsets, tol)
        vectors, value = _descend(linearized, projector, subsets, tol)
        if best is None or value < best[1]:
            best = (vectors, value)
    assert best is not None
    return chosen, _restore(best[0], chosen, gram_inverse), best[1]


def min_volume_search(
    space: NormedSpace,
    pool: npt.ArrayLike,
    generators: int,
    restarts: int,
    seed: Seed = None,
    workers: int = 1,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> MinVolumeResult:
    """Multi-start minimization of vol Σ[−y_j, y_j] subject to Σ y_j f_jᵀ = I.

    Each restart takes LP steps on the linearized volume, then projected
    subgradient descent. The winner is verified before it is reported as found.
    """
    n = space.dim
    functionals = as_rows(pool, n)
    if generators < n:
        error_message = f"need at least {n} generators"
        raise InputError(error_message)
    if restarts < 1:
        error_message = "restarts must be at least 1"
        raise InputError(error_message)
    excess = space.dual_norms(functionals, tol) - 1.0
    if float(np.max(excess)) > tol.eps_feas:
        worst = int(np.argmax(excess))
        error_message = f"pool functional {worst} lies outside the dual ball"
        raise PreconditionError(error_message, witness=functionals[worst])

    children = _seed_sequence(seed).spawn(restarts)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        outcomes = list(
            executor.map(lambda child: _restart(functionals, generators, child, tol), children)
        )

    history = tuple(math.inf if o is None else o[2] for o in outcomes)
    found = [o for o in outcomes if o is not None]
    if not found:
        logger.info("min-volume search: pool never spans R^%s", n)
        return MinVolumeResult(
            "not-found-within-budget", None, math.inf, history, 0.0, True, restarts
        )

    chosen, vectors, _ = min(found, key=lambda o: o[2])
    keep = np.linalg.norm(vectors, axis=1) > 1e-12
    chosen, vectors = chosen[keep], vectors[keep]
    cert = Certificate(space, Zonotope(vectors), chosen, vectors)
    verification = verify_certificate(cert, tol)
    if not verification.valid:
        logger.warning(
            "min-volume search: best certificate fails verification "
            "(reconstruction %.3e, dual %.3e)",
            verification.reconstruction_residual,
            verification.dual_residual,
        )
        return MinVolumeResult(
            "not-found-within-budget", None, math.inf, history, 0.0, True, restarts, verification
        )
    volume = zonotope_volume(reduce_generators(vectors, tol), tol=tol)
    norm_sum = float(np.sum(np.linalg.norm(vectors, axis=1)))

    bounds_respected = True
    if space.is_euclidean:
        bounds_respected = volume >= 2**n - 1e-6 and norm_sum >= n - tol.eps_feas
        if not bounds_respected:
            logger.error(
                "min-volume bound broken: volume %.12g, norm sum %.12g", volume, norm_sum
            )
    logger.info("min-volume search: best volume %.9g over %s restarts", volume, restarts)
    return MinVolumeResult(
        "found", cert, volume, history, norm_sum, bounds_respected, restarts, verification
    )


def hausdorff_to_circumscribed_cube(
    body: Body, step_degrees: float = 1.0
) -> tuple[float, float]:
    """Distance from a planar body to the nearest rotated square [−1,1]², and its angle."""
    if body.dim != 2:  # noqa: PLR2004
        error_message = "rotational alignment is implemented in the plane"
        raise UnsupportedRepresentationError(error_message)
    best = (math.inf, 0.0)
    for degrees in np.arange(0.0, 90.0, step_degrees):
        angle = math.radians(float(degrees))
        square = Zonotope(
            np.array([[math.cos(angle), math.sin(angle)], [-math.sin(angle), math.cos(angle)]])
        )
        distance = hausdorff_distance(body, square)
        if distance < best[0]:
            best = (distance, float(degrees))
    return best
