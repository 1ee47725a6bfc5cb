"""Finite factorization certificates for sufficient enlargements.

A certificate is a list of pairs (f_j, y_j) with every f_j in the dual unit ball,
Σ_j y_j f_jᵀ = I and the zonotope Σ_j [−y_j, y_j] inside the enlargement. This
module verifies them, builds the canonical ones (parallelepipeds, convex
combinations), runs the quantitative parallelepiped-containment check with its
c₁/c₂/c₃ constants, hosts the disc-and-strip example space, and extracts prisms.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt
from scipy.linalg import null_space

from bodies import (
    ContainmentReport,
    NormedSpace,
    contains_body,
    direction_net,
    euclidean_space,
    gauge_many,
    minkowski_sum,
    scale,
    support,
    support_many,
)
from body_programs import BodyEncoder
from errors import (
    HypothesisError,
    InputError,
    PreconditionError,
    RankError,
    SpaceMismatchError,
    UnsupportedRepresentationError,
)
from numerics import (
    DEFAULT_TOLERANCE,
    FloatArray,
    Seed,
    TolerancePolicy,
    as_rows,
    as_vector,
    make_rng,
    require_feasible,
)
from shapes import (
    Body,
    EuclideanBall,
    HPolytope,
    IntersectionPair,
    Zonotope,
    is_polytopal,
)

logger = logging.getLogger(__name__)

C2Mode = Literal["exact", "analytic", "conic", "sampled"]


def _frozen(values: FloatArray) -> FloatArray:
    copy = np.array(values, dtype=np.float64, copy=True)
    copy.setflags(write=False)
    return copy


def _vector_list(values: FloatArray) -> list[list[float]]:
    return [[float(v) for v in row] for row in values]


# === CERTIFICATES ===


@dataclass(frozen=True, eq=False)
class Certificate:
    """Pairs (functionals[j], vectors[j]) claimed to witness ``enlargement``."""

    space: NormedSpace
    enlargement: Body
    functionals: FloatArray
    vectors: FloatArray

    def __post_init__(self) -> None:
        n = self.space.dim
        if self.enlargement.dim != n:
            error_message = f"enlargement lives in R^{self.enlargement.dim}, space is R^{n}"
            raise InputError(error_message)
        functionals = as_rows(self.functionals, n)
        vectors = as_rows(self.vectors, n)
        if functionals.shape[0] != vectors.shape[0]:
            error_message = (
                f"{functionals.shape[0]} functionals but {vectors.shape[0]} vectors"
            )
            raise InputError(error_message)
        if functionals.shape[0] == 0:
            error_message = "a certificate needs at least one pair"
            raise InputError(error_message)
        object.__setattr__(self, "functionals", _frozen(functionals))
        object.__setattr__(self, "vectors", _frozen(vectors))

    @property
    def dim(self) -> int:
        """Dimension of the space."""
        return self.space.dim

    @property
    def size(self) -> int:
        """Number of pairs."""
        return int(self.functionals.shape[0])

    @property
    def zonotope(self) -> Zonotope:
        """Σ_j [−y_j, y_j]."""
        return Zonotope(self.vectors)

    def reconstruction(self) -> FloatArray:
        """Σ_j y_j f_jᵀ; the identity for a valid certificate."""
        return self.vectors.T @ self.functionals

    def with_enlargement(self, enlargement: Body) -> "Certificate":
        """Same pairs claimed for another enlargement."""
        return Certificate(self.space, enlargement, self.functionals, self.vectors)


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Residual of every certificate condition."""

    valid: bool
    dual_residual: float
    reconstruction_residual: float
    containment: ContainmentReport
    covers_unit_ball: ContainmentReport
    worst_functional: int

    @property
    def flags(self) -> tuple[str, ...]:
        """Warnings about sampled checks."""
        flags = list(self.containment.warnings)
        if self.containment.necessary_only:
            flags.append("containment checked on sampled directions only")
        if self.covers_unit_ball.necessary_only:
            flags.append("unit-ball cover checked on sampled directions only")
        return tuple(flags)

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "valid": self.valid,
            "dual_residual": self.dual_residual,
            "reconstruction_residual": self.reconstruction_residual,
            "containment": {
                "contained": self.containment.contained,
                "mode": self.containment.mode,
                "worst_margin": self.containment.worst_margin,
            },
            "covers_unit_ball": self.covers_unit_ball.contained,
            "flags": list(self.flags),
        }


def verify_certificate(
    cert: Certificate, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> VerificationReport:
    """Check dual feasibility, reconstruction and zonotope containment."""
    dual = cert.space.dual_norms(cert.functionals, tol) - 1.0
    worst = int(np.argmax(dual))
    reconstruction = float(np.max(np.abs(cert.reconstruction() - np.eye(cert.dim))))
    containment = contains_body(cert.zonotope, cert.enlargement, tol)
    covers = contains_body(cert.space.unit_ball, cert.zonotope, tol)
    valid = (
        float(dual[worst]) <= tol.eps_feas
        and reconstruction <= tol.eps_eq
        and containment.contained
    )
    if valid and not covers.contained:
        logger.error(
            "valid certificate whose zonotope misses the unit ball by %.3e",
            covers.worst_margin,
        )
    return VerificationReport(
        valid=valid,
        dual_residual=float(dual[worst]),
        reconstruction_residual=reconstruction,
        containment=containment,
        covers_unit_ball=covers,
        worst_functional=worst,
    )


def frame_residual(
    cert: Certificate, samples: int = 100, seed: Seed = None
) -> float:
    """max ‖Σ_j ⟨x, f_j⟩ y_j − x‖₂ / ‖x‖₂ over random Gaussian x."""
    rng = make_rng(seed)
    points = rng.standard_normal((samples, cert.dim))
    images = (points @ cert.functionals.T) @ cert.vectors
    errors = np.linalg.norm(images - points, axis=1) / np.linalg.norm(points, axis=1)
    return float(np.max(errors))


# === CANONICAL CONSTRUCTIONS ===


def parallelepiped_certificate(
    space: NormedSpace,
    functionals: npt.ArrayLike,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Certificate:
    """Dual-basis certificate of Q = {x : |f_i(x)| <= 1}."""
    n = space.dim
    rows = as_rows(functionals, n)
    if rows.shape[0] != n:
        error_message = f"a parallelepiped needs exactly {n} functionals, got {rows.shape[0]}"
        raise InputError(error_message)
    if np.linalg.matrix_rank(rows, tol=tol.eps_rank * max(1.0, float(np.abs(rows).max()))) < n:
        error_message = "functionals are linearly dependent"
        raise RankError(error_message)
    # Q ⊇ B(X) exactly when every f_i has dual norm <= 1
    excess = space.dual_norms(rows, tol) - 1.0
    worst = int(np.argmax(excess))
    if excess[worst] > tol.eps_feas:
        error_message = (
            f"parallelepiped misses the unit ball: functional {worst} has dual norm "
            f"{1.0 + excess[worst]:.6g}"
        )
        raise PreconditionError(error_message, witness=rows[worst])
    dual_basis = np.linalg.inv(rows).T
    return Certificate(space, HPolytope(rows, np.ones(n)), rows, dual_basis)


def convex_combination(first: Certificate, second: Certificate, weight: float) -> Certificate:
    """weight·first + (1 − weight)·second, pairs concatenated."""
    if not first.space.same_as(second.space):
        error_message = "certificates live over different spaces"
        raise SpaceMismatchError(error_message)
    if not 0.0 <= weight <= 1.0:
        error_message = f"weight must lie in [0, 1], got {weight}"
        raise InputError(error_message)
    if weight == 1.0:
        return first
    if weight == 0.0:
        return second
    return Certificate(
        first.space,
        minkowski_sum(scale(weight, first.enlargement), scale(1.0 - weight, second.enlargement)),
        np.vstack([first.functionals, second.functionals]),
        np.vstack([weight * first.vectors, (1.0 - weight) * second.vectors]),
    )


# === PARALLELEPIPED CONTAINMENT CONSTANTS ===


@dataclass(frozen=True, eq=False)
class C2Result:
    """c₂ = 1 − max_{i<j} max_{f ∈ B(X*)} min(|f(x_i)|, |f(x_j)|)."""

    value: float
    mode: C2Mode
    pair: Optional[tuple[int, int]] = None
    witness: Optional[FloatArray] = None

    @property
    def advisory(self) -> bool:
        """Sampled values only bound c₂ from one side."""
        return self.mode == "sampled"

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "c2": self.value,
            "mode": self.mode,
            "pair": list(self.pair) if self.pair is not None else None,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
        }


def _frame(
    space: NormedSpace,
    functionals: npt.ArrayLike,
    points: npt.ArrayLike,
    tol: TolerancePolicy,
) -> tuple[FloatArray, FloatArray]:
    """Validate n norming pairs: ‖f_i‖* = ‖x_i‖ = f_i(x_i) = 1."""
    n = space.dim
    f = as_rows(functionals, n)
    x = as_rows(points, n)
    if f.shape[0] != n or x.shape[0] != n:
        error_message = f"expected {n} functionals and {n} points"
        raise InputError(error_message)
    dual = space.dual_norms(f, tol)
    norms = gauge_many(space.unit_ball, x, tol)
    values = np.sum(f * x, axis=1)
    for i in range(n):
        if abs(dual[i] - 1.0) > tol.eps_feas:
            error_message = f"functional {i} has dual norm {dual[i]:.6g}, not 1"
            raise PreconditionError(error_message, witness=f[i])
        if abs(norms[i] - 1.0) > tol.eps_feas:
            error_message = f"point {i} has norm {norms[i]:.6g}, not 1"
            raise PreconditionError(error_message, witness=x[i])
        if abs(values[i] - 1.0) > tol.eps_feas:
            error_message = f"functional {i} takes {values[i]:.6g} at point {i}, not 1"
            raise PreconditionError(error_message, witness=x[i])
    return f, x


def _analytic_overlap(xi: FloatArray, xj: FloatArray) -> tuple[float, FloatArray]:
    """Euclidean unit vectors at angle θ: the best unit f bisects them, giving cos(θ/2)."""
    cosine = float(np.clip(np.dot(xi, xj), -1.0, 1.0))
    sign = 1.0 if cosine >= 0 else -1.0
    angle = math.acos(abs(cosine))
    bisector = xi + sign * xj
    return math.cos(angle / 2), bisector / np.linalg.norm(bisector)


def _program_overlap(
    space: NormedSpace, xi: FloatArray, xj: FloatArray, tol: TolerancePolicy
) -> tuple[float, FloatArray, bool]:
    """Two sign patterns suffice: f and −f give the same overlap."""
    best = -math.inf
    best_f = np.zeros(space.dim)
    converged = True
    for sign in (1.0, -1.0):
        encoder = BodyEncoder()
        f = encoder.free_block(space.dim)
        level = encoder.free_block(1)[0]
        encoder.support_bound(space.unit_ball, f)
        for point, point_sign in ((xi, 1.0), (xj, sign)):
            row = {level: 1.0}
            for var, value in zip(f, point, strict=True):
                row[var] = -point_sign * float(value)
            encoder.lp.add_ub(row, 0.0)
        outcome = encoder.solve({level: -1.0}, tol)
        solution = require_feasible(outcome, "overlap program")
        converged = converged and outcome.converged
        if solution[level] > best:
            best = float(solution[level])
            best_f = solution[f]
    return best, best_f, converged


def _sampled_overlap(
    space: NormedSpace, xi: FloatArray, xj: FloatArray, tol: TolerancePolicy
) -> tuple[float, FloatArray]:
    net = direction_net(space.dim)
    dual_sphere = net / space.dual_norms(net, tol)[:, np.newaxis]
    overlap = np.minimum(np.abs(dual_sphere @ xi), np.abs(dual_sphere @ xj))
    k = int(np.argmax(overlap))
    return float(overlap[k]), dual_sphere[k]


def compute_c2(
    space: NormedSpace,
    functionals: npt.ArrayLike,
    points: npt.ArrayLike,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> C2Result:
    """Largest c₂ for which no f ∈ B(X*) is >= 1 − c₂ in modulus at two of the points."""
    _, x = _frame(space, functionals, points, tol)
    n = space.dim
    if n == 1:
        return C2Result(1.0, "exact")

    if space.is_euclidean:
        mode: C2Mode = "analytic"
    elif is_polytopal(space.unit_ball):
        mode = "exact"
    else:
        mode = "conic"

    worst = -math.inf
    worst_pair = (0, 1)
    witness = np.zeros(n)
    for i, j in itertools.combinations(range(n), 2):
        if mode == "analytic":
            overlap, f = _analytic_overlap(x[i], x[j])
        else:
            overlap, f, converged = _program_overlap(space, x[i], x[j], tol)
            if not converged:
                logger.warning("overlap program for pair (%s, %s) did not converge", i, j)
                mode = "sampled"
                overlap, f = _sampled_overlap(space, x[i], x[j], tol)
        if overlap > worst:
            worst, worst_pair, witness = overlap, (i, j), f
    return C2Result(1.0 - worst, mode, worst_pair, witness)


def theorem1_c3(c1: float, c2: float) -> float:
    """c₃ = 1 − ((2 − c₂)/c₂)·c₁."""
    if c2 <= 0:
        error_message = f"c2 must be positive, got {c2}"
        raise HypothesisError(error_message)
    return 1.0 - (2.0 - c2) / c2 * c1


@dataclass(frozen=True, eq=False)
class Theorem1Report:
    """Constants and outcome of the shrunken-parallelepiped containment check."""

    c1: float
    c2: C2Result
    c3: float
    holds: bool
    inconclusive: bool
    witness: Optional[FloatArray] = None

    @property
    def advisory(self) -> bool:
        """c₂ came from sampling, so the hypothesis is not certified."""
        return self.c2.advisory

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "c1": self.c1,
            "c2": self.c2.value,
            "c2_mode": self.c2.mode,
            "c3": self.c3,
            "holds": self.holds,
            "inconclusive": self.inconclusive,
            "advisory": self.advisory,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
        }


def theorem1_check(
    space: NormedSpace,
    functionals: npt.ArrayLike,
    points: npt.ArrayLike,
    cert: Certificate,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Theorem1Report:
    """Check that the certificate zonotope contains {x : |f_i(x)| <= c₃}."""
    if not cert.space.same_as(space):
        error_message = "certificate belongs to another space"
        raise SpaceMismatchError(error_message)
    report = verify_certificate(cert, tol)
    if not report.valid:
        error_message = "certificate does not verify"
        raise PreconditionError(error_message)
    c2 = compute_c2(space, functionals, points, tol)
    if c2.value <= 0:
        error_message = f"no positive c2: pair {c2.pair} is normed jointly"
        raise HypothesisError(error_message, witness=c2.witness)

    f = as_rows(functionals, space.dim)
    zonotope = cert.zonotope
    c1 = max(0.0, float(np.max(support_many(zonotope, f, tol))) - 1.0)
    c3 = theorem1_c3(c1, c2.value)
    if c3 <= 0:
        return Theorem1Report(c1, c2, c3, holds=False, inconclusive=True)

    signs = np.array(list(itertools.product((1.0, -1.0), repeat=space.dim)))
    corners = c3 * signs @ np.linalg.inv(f).T
    excess = gauge_many(zonotope, corners, tol) - 1.0
    worst = int(np.argmax(excess))
    holds = bool(excess[worst] <= tol.eps_feas)
    if not holds and not c2.advisory:
        logger.error("shrunken parallelepiped escapes the zonotope by %.3e", excess[worst])
    return Theorem1Report(
        c1,
        c2,
        c3,
        holds=holds,
        inconclusive=False,
        witness=None if holds else corners[worst],
    )


@dataclass(frozen=True, eq=False)
class MinimalityReport:
    """Whether the circumscribed parallelepiped is certified minimal."""

    minimal: bool
    margin: float
    c2: C2Result

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {"minimal": self.minimal, "margin": self.margin, **self.c2.to_dict()}


def corollary_minimality_check(
    space: NormedSpace,
    functionals: npt.ArrayLike,
    points: npt.ArrayLike,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> MinimalityReport:
    """Q = {|f_i| <= 1} is minimal when no dual-ball functional norms two of the x_i."""
    n = space.dim
    f = as_rows(functionals, n)
    x = as_rows(points, n)
    if x.shape[0] == f.shape[0]:
        # points on the negative face are as good as on the positive one
        flips = np.sign(np.sum(f * x, axis=1))
        flips[flips == 0] = 1.0
        x = x * flips[:, np.newaxis]
    c2 = compute_c2(space, f, x, tol)
    return MinimalityReport(c2.value > tol.eps_feas, max(c2.value, 0.0), c2)


# === DISC AND STRIP EXAMPLE ===


def theorem2_space() -> NormedSpace:
    """Unit disc intersected with the strip |a₁ − a₂| <= 1."""
    strip = HPolytope(np.array([[1.0, -1.0]]), np.array([1.0]))
    return NormedSpace(2, IntersectionPair(EuclideanBall(1.0, 2), strip), name="disc-strip")


@dataclass(frozen=True, eq=False)
class Theorem2Frame:
    """Norming points and functionals of the disc-and-strip space."""

    x1: FloatArray = field(default_factory=lambda: np.array([1.0, 0.0]))
    x2: FloatArray = field(default_factory=lambda: np.array([0.0, 1.0]))
    f1: FloatArray = field(default_factory=lambda: np.array([1.0, 0.0]))
    f2: FloatArray = field(default_factory=lambda: np.array([0.0, 1.0]))
    f3: FloatArray = field(default_factory=lambda: np.array([1.0, -1.0]))


def theorem2_frame() -> Theorem2Frame:
    """x₁ = e₁, x₂ = e₂, coordinate functionals and f₃ = a₁ − a₂."""
    return Theorem2Frame()


@dataclass(frozen=True, eq=False)
class Theorem2Conditions:
    """The three properties of the disc-and-strip example."""

    unique_norming: bool
    f3_dual_norm: float
    f3_values: tuple[float, float]
    minimality: MinimalityReport

    @property
    def corollary_applies(self) -> bool:
        """The corollary certifies minimality here only if c₂ > 0."""
        return self.minimality.minimal

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "unique_norming": self.unique_norming,
            "f3_dual_norm": self.f3_dual_norm,
            "f3_values": list(self.f3_values),
            "corollary_applies": self.corollary_applies,
            "c2": self.minimality.c2.value,
        }


def theorem2_conditions(
    tol: TolerancePolicy = DEFAULT_TOLERANCE, samples: int = 720
) -> Theorem2Conditions:
    """f₁ and f₂ norm exactly one boundary point each; f₃ norms both x₁ and x₂."""
    space = theorem2_space()
    frame = theorem2_frame()
    angles = 2 * np.pi * np.arange(samples) / samples
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    boundary = directions / gauge_many(space.unit_ball, directions, tol)[:, np.newaxis]
    step = 2 * np.pi / samples

    unique = True
    for f, x in ((frame.f1, frame.x1), (frame.f2, frame.x2)):
        normed = boundary[boundary @ f >= 1.0 - tol.eps_feas]
        distances = np.linalg.norm(normed - x, axis=1)
        unique = unique and bool(np.all(distances <= step))

    values = (float(frame.f3 @ frame.x1), float(frame.f3 @ frame.x2))
    minimality = corollary_minimality_check(
        space, np.vstack([frame.f1, frame.f2]), np.vstack([frame.x1, frame.x2]), tol
    )
    return Theorem2Conditions(
        unique_norming=unique,
        f3_dual_norm=space.dual_norm(frame.f3, tol),
        f3_values=values,
        minimality=minimality,
    )


@dataclass(frozen=True, eq=False)
class PartitionReport:
    """min(|f(x₁(ε))|, |f(x₂(ε))|) <= 1 − tan ε over dual extreme functionals."""

    eps: float
    bound: float
    holds: bool
    worst_slack: float
    witness: FloatArray
    strip_slack: float

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "eps": self.eps,
            "bound": self.bound,
            "holds": self.holds,
            "worst_slack": self.worst_slack,
            "witness": [float(v) for v in self.witness],
            "strip_slack": self.strip_slack,
        }


def partition_property_check(
    eps: float,
    samples: int = 10_000,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> PartitionReport:
    """Evaluate the partition inequality on the unit circle plus ±(1, −1).

    The circle holds every extreme point of the dual ball apart from ±(1, −1).
    Read over all of those points the inequality fails for every ε in (0, π/4):
    f = (1, 1)/√2 gives min(|f(x₁)|, |f(x₂)|) = cos(π/4 − ε) > 1 − tan ε. A
    report with ``holds=False`` and that witness is the expected outcome, not a
    numerical failure; ``strip_slack`` isolates the ±(1, −1) functionals, where
    the inequality does hold.
    """
    if not 0.0 < eps < math.pi / 4:
        error_message = f"eps must lie in (0, pi/4), got {eps}"
        raise InputError(error_message)
    x1 = np.array([math.cos(eps), math.sin(eps)])
    x2 = np.array([math.sin(eps), math.cos(eps)])
    bound = 1.0 - math.tan(eps)

    angles = 2 * np.pi * np.arange(samples) / samples
    strip = np.array([[1.0, -1.0], [-1.0, 1.0]])
    functionals = np.vstack([np.column_stack([np.cos(angles), np.sin(angles)]), strip])
    overlap = np.minimum(np.abs(functionals @ x1), np.abs(functionals @ x2))
    slack = bound - overlap
    worst = int(np.argmax(-slack))
    report = PartitionReport(
        eps=eps,
        bound=bound,
        holds=bool(slack[worst] >= -tol.eps_feas),
        worst_slack=float(slack[worst]),
        witness=functionals[worst],
        strip_slack=float(np.min(slack[-2:])),
    )
    if not report.holds:
        logger.info(
            "partition inequality fails at eps=%.6g for f=%s (slack %.6g)",
            eps,
            report.witness,
            report.worst_slack,
        )
    return report


# === PRISMS ===


@dataclass(frozen=True, eq=False)
class AtomDecomposition:
    """Coordinates of the certificate atoms in the basis x₁, …, x_n.

    ``plus`` / ``minus`` hold the coefficient mass at h and −h per basis
    direction; ``residual`` the coordinates of the remaining atoms.
    """

    plus: FloatArray
    minus: FloatArray
    residual: FloatArray
    residual_index: tuple[int, ...]

    @property
    def merged(self) -> FloatArray:
        """b₁ − b₂ per basis direction."""
        return self.plus - self.minus


@dataclass(frozen=True, eq=False)
class PrismReport:
    """Prism certificate with its post-checks."""

    certificate: Certificate
    decomposition: Optional[AtomDecomposition]
    verification: VerificationReport
    prism_residual: float
    inside_original: ContainmentReport
    leading_mass_residual: float

    @property
    def ok(self) -> bool:
        """Valid, prism-shaped and inside the original zonotope."""
        return (
            self.verification.valid
            and self.prism_residual <= DEFAULT_TOLERANCE.eps_eq
            and self.inside_original.contained
        )

    def to_dict(self) -> dict[str, object]:
        """JSON-ready summary."""
        return {
            "ok": self.ok,
            "valid": self.verification.valid,
            "prism_residual": self.prism_residual,
            "inside_original": self.inside_original.contained,
            "leading_mass_residual": self.leading_mass_residual,
            "pairs": [
                {"f": f, "y": y}
                for f, y in zip(
                    _vector_list(self.certificate.functionals),
                    _vector_list(self.certificate.vectors),
                    strict=True,
                )
            ],
        }


def prismify(
    cert: Certificate,
    x1: npt.ArrayLike,
    h: npt.ArrayLike,
    basis: Optional[npt.ArrayLike] = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> PrismReport:
    """Merge the ±h atoms into one generator and flatten the rest into ker h.

    ``basis`` (x₂, …, x_n) defaults to an orthonormal basis of ker h.
    """
    n = cert.dim
    x1_vec = as_vector(x1, n)
    h_vec = as_vector(h, n)
    original = verify_certificate(cert, tol)
    if not original.valid:
        error_message = "certificate does not verify"
        raise PreconditionError(error_message)
    if n == 1:
        inside = contains_body(cert.zonotope, cert.zonotope, tol)
        return PrismReport(cert, None, original, 0.0, inside, 0.0)

    rest_basis = null_space(h_vec.reshape(1, -1)).T if basis is None else as_rows(basis, n)
    frame = np.vstack([x1_vec, rest_basis])
    if frame.shape != (n, n) or np.linalg.matrix_rank(frame) < n:
        error_message = "x1 and the basis must form a basis of the space"
        raise RankError(error_message)
    heights = frame @ h_vec
    expected = np.zeros(n)
    expected[0] = 1.0
    if np.max(np.abs(heights - expected)) > tol.eps_eq:
        error_message = "h must take 1 at x1 and 0 on the remaining basis"
        raise PreconditionError(error_message, witness=h_vec)

    slab = support(cert.zonotope, h_vec, tol)
    if slab > 1.0 + tol.eps_feas:
        error_message = f"zonotope leaves the slab |h| <= 1 (support {slab:.6g})"
        raise PreconditionError(error_message, witness=h_vec)

    plus = np.max(np.abs(cert.functionals - h_vec), axis=1) <= tol.eps_eq
    minus = np.max(np.abs(cert.functionals + h_vec), axis=1) <= tol.eps_eq
    rest = ~(plus | minus)
    coordinates = cert.vectors @ np.linalg.inv(frame)
    for j in np.flatnonzero(rest):
        if abs(coordinates[j, 0]) > tol.eps_feas:
            error_message = (
                f"pair {j} has functional {cert.functionals[j].tolist()} distinct from ±h "
                f"but a vector with x1-coordinate {coordinates[j, 0]:.6g}"
            )
            raise HypothesisError(error_message, witness=cert.vectors[j])

    decomposition = AtomDecomposition(
        plus=coordinates[plus].sum(axis=0),
        minus=coordinates[minus].sum(axis=0),
        residual=coordinates[rest],
        residual_index=tuple(int(j) for j in np.flatnonzero(rest)),
    )
    merged_vector = decomposition.merged @ frame
    flattened = coordinates[rest].copy()
    flattened[:, 0] = 0.0
    functionals = np.vstack([h_vec, cert.functionals[rest]])
    vectors = np.vstack([merged_vector, flattened @ frame])
    prism = Certificate(cert.space, cert.enlargement, functionals, vectors)

    prism_residual = float(np.max(np.abs(vectors[1:] @ h_vec), initial=0.0))
    return PrismReport(
        certificate=prism,
        decomposition=decomposition,
        verification=verify_certificate(prism, tol),
        prism_residual=prism_residual,
        inside_original=contains_body(prism.zonotope, cert.zonotope, tol),
        leading_mass_residual=abs(float(decomposition.merged[0]) - 1.0),
    )


# === COORDINATE PROJECTIONS ===


def project_certificate(cert: Certificate, coords: list[int]) -> Certificate:
    """Certificate for the coordinate image of a Euclidean space."""
    if not cert.space.is_euclidean:
        error_message = "coordinate projection keeps certificates only for l2 spaces"
        raise UnsupportedRepresentationError(error_message)
    if not coords or len(set(coords)) != len(coords) or not all(
        0 <= c < cert.dim for c in coords
    ):
        error_message = f"invalid coordinate selection {coords}"
        raise InputError(error_message)
    k = len(coords)
    match cert.enlargement:
        case Zonotope(generators=generators):
            enlargement: Body = Zonotope(generators[:, coords])
        case EuclideanBall(radius=radius):
            enlargement = EuclideanBall(radius, k)
        case _:
            error_message = f"no coordinate image for {cert.enlargement.kind}"
            raise UnsupportedRepresentationError(error_message)
    return Certificate(
        euclidean_space(k),
        enlargement,
        cert.functionals[:, coords],
        cert.vectors[:, coords],
    )
