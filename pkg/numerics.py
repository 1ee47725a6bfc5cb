"""Dense small-dimension numerics: tolerances, LP and cone solving, Haar sampling."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp
from scipy.linalg import svdvals
from scipy.optimize import linprog

from env import CONE_MAX_ROUNDS, EPS_EQ, EPS_FEAS, EPS_RANK
from errors import InputError, SolverError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
ConstraintMatrix = FloatArray | sp.csr_array
Seed = int | np.random.Generator | None
Bound = tuple[Optional[float], Optional[float]]

LpStatus = Literal["feasible", "infeasible", "unbounded", "failed"]


@dataclass(frozen=True)
class TolerancePolicy:
    """Slack used for feasibility, equality residuals and rank decisions."""

    eps_feas: float = EPS_FEAS
    eps_eq: float = EPS_EQ
    eps_rank: float = EPS_RANK

    def __post_init__(self) -> None:
        if min(self.eps_feas, self.eps_eq, self.eps_rank) <= 0:
            error_message = "tolerances must be strictly positive"
            raise InputError(error_message)
        if self.eps_feas < self.eps_eq:
            error_message = "eps_feas must be at least eps_eq"
            raise InputError(error_message)

    @classmethod
    def from_env(cls) -> "TolerancePolicy":
        """Policy configured through the ENLARGE_EPS_* settings."""
        return cls(EPS_FEAS, EPS_EQ, EPS_RANK)

    def with_overrides(
        self,
        eps_feas: Optional[float] = None,
        eps_eq: Optional[float] = None,
    ) -> "TolerancePolicy":
        """Copy with some tolerances replaced; keeps eps_feas >= eps_eq."""
        new_eq = self.eps_eq if eps_eq is None else eps_eq
        new_feas = self.eps_feas if eps_feas is None else eps_feas
        return TolerancePolicy(max(new_feas, new_eq), new_eq, self.eps_rank)


DEFAULT_TOLERANCE = TolerancePolicy.from_env()


def as_vector(values: npt.ArrayLike, dim: Optional[int] = None) -> FloatArray:
    """Coerce to a finite 1-D float array, optionally of a fixed length."""
    vector = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(vector)):
        error_message = "vector entries must be finite"
        raise InputError(error_message)
    if dim is not None and vector.shape[0] != dim:
        error_message = f"expected a vector of length {dim}, got {vector.shape[0]}"
        raise InputError(error_message)
    return vector


def as_rows(values: npt.ArrayLike, dim: Optional[int] = None) -> FloatArray:
    """Coerce to a finite 2-D float array whose rows are vectors."""
    rows = np.asarray(values, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1) if rows.size else rows.reshape(0, dim or 0)
    if rows.ndim != 2:  # noqa: PLR2004
        error_message = "expected a list of vectors"
        raise InputError(error_message)
    if not np.all(np.isfinite(rows)):
        error_message = "vector entries must be finite"
        raise InputError(error_message)
    if dim is not None and rows.shape[1] != dim:
        error_message = f"expected vectors of length {dim}, got {rows.shape[1]}"
        raise InputError(error_message)
    return rows


def make_rng(seed: Seed) -> np.random.Generator:
    """Generator from a seed, or pass an existing generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# === LINEAR PROGRAMS ===


@dataclass(frozen=True, eq=False)
class LpProblem:
    """min cᵀx subject to A_eq x = b_eq, A_ub x <= b_ub, per-variable bounds.

    Variables are free unless ``bounds`` says otherwise.
    """

    n_vars: int
    a_eq: Optional[ConstraintMatrix] = None
    b_eq: Optional[FloatArray] = None
    a_ub: Optional[ConstraintMatrix] = None
    b_ub: Optional[FloatArray] = None
    objective: Optional[FloatArray] = None
    bounds: Optional[Sequence[Bound]] = None

    def validate(self) -> None:
        """Raise InputError when the pieces do not fit together."""
        if self.n_vars < 1:
            error_message = "an LP needs at least one variable"
            raise InputError(error_message)
        for name, matrix, rhs in (
            ("equality", self.a_eq, self.b_eq),
            ("inequality", self.a_ub, self.b_ub),
        ):
            if (matrix is None) != (rhs is None):
                error_message = f"{name} matrix and right-hand side must come together"
                raise InputError(error_message)
            if matrix is None or rhs is None:
                continue
            rows, cols = matrix.shape
            if cols != self.n_vars or rows != rhs.shape[0]:
                error_message = (
                    f"{name} constraints have shape {matrix.shape} "
                    f"but rhs {rhs.shape} and {self.n_vars} variables"
                )
                raise InputError(error_message)
        if self.objective is not None and self.objective.shape != (self.n_vars,):
            error_message = "objective length does not match the variable count"
            raise InputError(error_message)
        if self.bounds is not None and len(self.bounds) != self.n_vars:
            error_message = "one bound pair per variable is required"
            raise InputError(error_message)

    def violation(self, x: FloatArray) -> float:
        """Largest raw constraint violation of a candidate point."""
        worst = 0.0
        if self.a_eq is not None and self.b_eq is not None:
            worst = max(worst, float(np.max(np.abs(self.a_eq @ x - self.b_eq), initial=0.0)))
        if self.a_ub is not None and self.b_ub is not None:
            worst = max(worst, float(np.max(self.a_ub @ x - self.b_ub, initial=0.0)))
        if self.bounds is not None:
            for value, (low, high) in zip(x, self.bounds, strict=True):
                if low is not None:
                    worst = max(worst, low - float(value))
                if high is not None:
                    worst = max(worst, float(value) - high)
        return worst


@dataclass(frozen=True, eq=False)
class LpOutcome:
    """Result of an LP solve."""

    status: LpStatus
    x: Optional[FloatArray] = None
    objective: Optional[float] = None
    message: str = ""
    max_violation: float = 0.0
    rounds: int = 1
    converged: bool = True

    @property
    def feasible(self) -> bool:
        """True when a point was returned."""
        return self.status == "feasible" and self.x is not None


def _rhs_scale(problem: LpProblem) -> float:
    sides = [side for side in (problem.b_eq, problem.b_ub) if side is not None and side.size]
    return max((float(np.max(np.abs(side))) for side in sides), default=0.0)


def solve_lp(problem: LpProblem, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> LpOutcome:
    """Solve a small LP with HiGHS and re-check the point against the raw rows."""
    problem.validate()
    cost = problem.objective if problem.objective is not None else np.zeros(problem.n_vars)
    bounds: Sequence[Bound] = (
        problem.bounds if problem.bounds is not None else [(None, None)] * problem.n_vars
    )
    highs_tol = max(1e-10, 0.1 * tol.eps_feas)
    result = linprog(
        cost,
        A_ub=problem.a_ub,
        b_ub=problem.b_ub,
        A_eq=problem.a_eq,
        b_eq=problem.b_eq,
        bounds=bounds,
        method="highs",
        options={
            "primal_feasibility_tolerance": highs_tol,
            "dual_feasibility_tolerance": highs_tol,
        },
    )
    status = int(result.status)
    if status == 2:  # noqa: PLR2004
        return LpOutcome("infeasible", message=str(result.message))
    if status == 3:  # noqa: PLR2004
        return LpOutcome("unbounded", message=str(result.message))
    if status != 0 or result.x is None:
        logger.warning("LP backend stopped with status %s: %s", status, result.message)
        return LpOutcome("failed", message=str(result.message))

    x = np.asarray(result.x, dtype=np.float64)
    violation = problem.violation(x)
    scale = max(1.0, _rhs_scale(problem))
    if violation > tol.eps_feas * scale:
        logger.warning("LP point violates its rows by %.3e", violation)
        return LpOutcome(
            "failed",
            x=x,
            message=f"point violates its rows by {violation:.3e}",
            max_violation=violation,
        )
    return LpOutcome(
        "feasible",
        x=x,
        objective=float(result.fun),
        message=str(result.message),
        max_violation=violation,
    )


class LpBuilder:
    """Accumulates sparse rows for an LP over a growing set of variables."""

    def __init__(self) -> None:
        self.n_vars = 0
        self.bounds: list[Bound] = []
        self._eq: list[tuple[dict[int, float], float]] = []
        self._ub: list[tuple[dict[int, float], float]] = []

    def new_vars(
        self,
        count: int,
        lower: Optional[float] = None,
        upper: Optional[float] = None,
    ) -> list[int]:
        """Allocate ``count`` variables and return their indices."""
        start = self.n_vars
        self.n_vars += count
        self.bounds.extend([(lower, upper)] * count)
        return list(range(start, start + count))

    def add_eq(self, row: dict[int, float], rhs: float) -> None:
        """Append Σ row[v]·x_v = rhs."""
        self._eq.append((row, rhs))

    def add_ub(self, row: dict[int, float], rhs: float) -> None:
        """Append Σ row[v]·x_v <= rhs."""
        self._ub.append((row, rhs))

    @property
    def ub_count(self) -> int:
        """Number of inequality rows so far."""
        return len(self._ub)

    @property
    def eq_count(self) -> int:
        """Number of equality rows so far."""
        return len(self._eq)

    def _stack(
        self, rows: list[tuple[dict[int, float], float]]
    ) -> tuple[Optional[sp.csr_array], Optional[FloatArray]]:
        if not rows:
            return None, None
        data: list[float] = []
        row_idx: list[int] = []
        col_idx: list[int] = []
        rhs = np.empty(len(rows))
        for i, (row, value) in enumerate(rows):
            rhs[i] = value
            for col, coef in row.items():
                if coef != 0.0:
                    row_idx.append(i)
                    col_idx.append(col)
                    data.append(coef)
        coords = (np.asarray(row_idx, dtype=np.int64), np.asarray(col_idx, dtype=np.int64))
        matrix = sp.csr_array((np.asarray(data), coords), shape=(len(rows), self.n_vars))
        return matrix, rhs

    def build(self, objective: Optional[dict[int, float]] = None) -> LpProblem:
        """Freeze the accumulated rows into an LpProblem."""
        a_eq, b_eq = self._stack(self._eq)
        a_ub, b_ub = self._stack(self._ub)
        cost: Optional[FloatArray] = None
        if objective is not None:
            cost = np.zeros(self.n_vars)
            for col, coef in objective.items():
                cost[col] += coef
        return LpProblem(
            n_vars=self.n_vars,
            a_eq=a_eq,
            b_eq=b_eq,
            a_ub=a_ub,
            b_ub=b_ub,
            objective=cost,
            bounds=list(self.bounds),
        )


# === SECOND-ORDER CONES BY CUTTING PLANES ===


@dataclass(frozen=True)
class ConeConstraint:
    """‖x[block]‖₂ <= scale · x[scale_var] (or <= scale when scale_var is None)."""

    block: tuple[int, ...]
    scale: float
    scale_var: Optional[int] = None

    def cap(self, x: FloatArray) -> float:
        """Right-hand side evaluated at x."""
        if self.scale_var is None:
            return self.scale
        return self.scale * float(x[self.scale_var])

    def cut(self, direction: FloatArray) -> tuple[dict[int, float], float]:
        """Linear cut ⟨direction, x[block]⟩ <= cap, valid for any unit direction."""
        row = {var: float(coef) for var, coef in zip(self.block, direction, strict=True)}
        if self.scale_var is None:
            return row, self.scale
        row[self.scale_var] = row.get(self.scale_var, 0.0) - self.scale
        return row, 0.0


def _append_rows(
    problem: LpProblem, rows: list[tuple[dict[int, float], float]]
) -> LpProblem:
    if not rows:
        return problem
    extra = LpBuilder()
    extra.n_vars = problem.n_vars
    for row, rhs in rows:
        extra.add_ub(row, rhs)
    cut_matrix, cut_rhs = extra._stack(extra._ub)  # noqa: SLF001
    assert cut_matrix is not None
    assert cut_rhs is not None
    if problem.a_ub is None or problem.b_ub is None:
        a_ub: sp.csr_array = cut_matrix
        b_ub = cut_rhs
    else:
        a_ub = sp.csr_array(sp.vstack([sp.csr_array(problem.a_ub), cut_matrix]))
        b_ub = np.concatenate([problem.b_ub, cut_rhs])
    return LpProblem(
        n_vars=problem.n_vars,
        a_eq=problem.a_eq,
        b_eq=problem.b_eq,
        a_ub=a_ub,
        b_ub=b_ub,
        objective=problem.objective,
        bounds=problem.bounds,
    )


def solve_conic(
    problem: LpProblem,
    cones: Sequence[ConeConstraint],
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    max_rounds: int = CONE_MAX_ROUNDS,
) -> LpOutcome:
    """Solve an LP with additional second-order cone rows.

    The cones are replaced by an outer polyhedral approximation that starts from
    the box |x_i| <= cap and is refined with a tangent cut at every violated
    iterate. The loop stops once each cone holds within eps_eq/10 (relative).
    """
    if not cones:
        return solve_lp(problem, tol)

    cuts: list[tuple[dict[int, float], float]] = []
    for cone in cones:
        size = len(cone.block)
        for i in range(size):
            for sign in (1.0, -1.0):
                unit = np.zeros(size)
                unit[i] = sign
                cuts.append(cone.cut(unit))

    current = _append_rows(problem, cuts)
    outcome = solve_lp(current, tol)
    for round_no in range(1, max_rounds + 1):
        if not outcome.feasible or outcome.x is None:
            return outcome
        x = outcome.x
        new_cuts: list[tuple[dict[int, float], float]] = []
        worst = 0.0
        for cone in cones:
            part = x[list(cone.block)]
            length = float(np.linalg.norm(part))
            cap = cone.cap(x)
            excess = length - cap
            if excess > 0.1 * tol.eps_eq * max(1.0, abs(cap)):
                new_cuts.append(cone.cut(part / length))
                worst = max(worst, excess)
        if not new_cuts:
            return LpOutcome(
                "feasible",
                x=x,
                objective=outcome.objective,
                message=outcome.message,
                max_violation=outcome.max_violation,
                rounds=round_no,
            )
        current = _append_rows(current, new_cuts)
        outcome = solve_lp(current, tol)

    logger.warning("cone cutting planes stopped after %s rounds", max_rounds)
    return LpOutcome(
        outcome.status,
        x=outcome.x,
        objective=outcome.objective,
        message="cone rounds exhausted",
        max_violation=outcome.max_violation,
        rounds=max_rounds,
        converged=False,
    )


def require_feasible(outcome: LpOutcome, what: str) -> FloatArray:
    """Point of a feasible outcome, or SolverError naming the computation."""
    if outcome.feasible and outcome.x is not None:
        return outcome.x
    error_message = f"{what}: LP {outcome.status} ({outcome.message})"
    raise SolverError(error_message)


# === HAAR SAMPLING ===


def random_rotations(n: int, count: int, seed: Seed = None) -> FloatArray:
    """``count`` independent Haar-distributed matrices from O(n), shape (count, n, n).

    QR of a Gaussian matrix with the signs of R's diagonal moved into Q.
    """
    if n < 1 or count < 0:
        error_message = "dimension must be positive and count non-negative"
        raise InputError(error_message)
    rng = make_rng(seed)
    gaussian = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(gaussian)
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1.0
    return q * signs[:, np.newaxis, :]


def random_rotation(n: int, seed: Seed = None) -> FloatArray:
    """One Haar-distributed orthogonal n×n matrix."""
    return random_rotations(n, 1, seed)[0]


# === COMMUTANTS ===


def commutant_dimension(
    group: Sequence[FloatArray],
    dim: Optional[int] = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> int:
    """Dimension of {M : Mg = gM for every g} as the nullity of the commutator stack."""
    if not group:
        if dim is None:
            error_message = "an empty group needs an explicit dimension"
            raise InputError(error_message)
        return dim * dim
    n = group[0].shape[0]
    eye = np.eye(n)
    blocks: list[FloatArray] = []
    for g in group:
        if g.shape != (n, n):
            error_message = "all group elements must be square of one size"
            raise InputError(error_message)
        # row-major vec: vec(Mg) = (I ⊗ gᵀ) vec(M), vec(gM) = (g ⊗ I) vec(M)
        blocks.append(np.kron(eye, g.T) - np.kron(g, eye))
    singular = svdvals(np.vstack(blocks))
    top = float(singular.max(initial=0.0))
    if top == 0.0:
        return n * n
    rank = int(np.count_nonzero(singular > tol.eps_rank * top))
    return n * n - rank


@dataclass
class RunningMean:
    """Welford accumulator used for Monte-Carlo estimates."""

    count: int = 0
    mean: float = 0.0
    _m2: float = field(default=0.0, repr=False)

    def extend(self, values: FloatArray) -> None:
        """Fold a batch of samples into the running statistics."""
        if values.size == 0:
            return
        batch = values.size
        batch_mean = float(values.mean())
        batch_m2 = float(np.sum((values - batch_mean) ** 2))
        total = self.count + batch
        delta = batch_mean - self.mean
        self.mean += delta * batch / total
        self._m2 += batch_m2 + delta * delta * self.count * batch / total
        self.count = total

    @property
    def stderr(self) -> float:
        """Standard error of the mean."""
        if self.count < 2:  # noqa: PLR2004
            return 0.0
        variance = self._m2 / (self.count - 1)
        return float(np.sqrt(max(variance, 0.0) / self.count))
