"""Conic encodings of body membership and support bounds.

``BodyEncoder`` turns "x ∈ t·K" and "h_K(x) <= t" into linear rows plus
second-order cones for any body tree, so support functions and gauges of
representations without a closed form (H-polytopes, intersections, sums,
polars of those) become one call of ``numerics.solve_conic``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from errors import InputError, SolverError
from env import CONE_MAX_ROUNDS
from numerics import (
    DEFAULT_TOLERANCE,
    ConeConstraint,
    FloatArray,
    LpBuilder,
    LpOutcome,
    TolerancePolicy,
    solve_conic,
)
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

Block = list[int]


@dataclass(frozen=True, eq=False)
class ProgramSupport:
    """Support value from a conic program and the point attaining it."""

    value: float
    point: FloatArray
    converged: bool = True


@dataclass(frozen=True)
class Level:
    """The right-hand side ``coef · x[var]``, or the constant ``coef`` when var is None."""

    var: Optional[int]
    coef: float

    def scaled(self, factor: float) -> "Level":
        """Same level multiplied by a positive factor."""
        return Level(self.var, self.coef * factor)


UNIT = Level(None, 1.0)


class BodyEncoder:
    """Builds one conic program over blocks of variables."""

    def __init__(self) -> None:
        self.lp = LpBuilder()
        self.cones: list[ConeConstraint] = []

    def free_block(self, size: int) -> Block:
        """Fresh unconstrained variables."""
        return self.lp.new_vars(size)

    def level_var(self) -> Level:
        """Fresh non-negative variable used as a level."""
        return Level(self.lp.new_vars(1, lower=0.0)[0], 1.0)

    def fix(self, block: Block, values: FloatArray) -> None:
        """Pin a block to constant values."""
        for var, value in zip(block, values, strict=True):
            self.lp.add_eq({var: 1.0}, float(value))

    def _at_most(self, row: dict[int, float], level: Level) -> None:
        """row <= level."""
        if level.var is None:
            self.lp.add_ub(row, level.coef)
            return
        merged = dict(row)
        merged[level.var] = merged.get(level.var, 0.0) - level.coef
        self.lp.add_ub(merged, 0.0)

    def _both_signs(self, row: dict[int, float], level: Level) -> None:
        """|row| <= level."""
        self._at_most(row, level)
        self._at_most({var: -coef for var, coef in row.items()}, level)

    def _combination(self, target: Block, vectors: FloatArray) -> Block:
        """New coefficients c with target = Σ_m c_m vectors[m]."""
        coefs = self.free_block(vectors.shape[0])
        for i, var in enumerate(target):
            row = {var: 1.0}
            for m, coef_var in enumerate(coefs):
                value = float(vectors[m, i])
                if value != 0.0:
                    row[coef_var] = -value
            self.lp.add_eq(row, 0.0)
        return coefs

    def _split(self, target: Block) -> tuple[Block, Block]:
        """New blocks u, v with target = u + v."""
        left = self.free_block(len(target))
        right = self.free_block(len(target))
        for t, u, v in zip(target, left, right, strict=True):
            self.lp.add_eq({t: 1.0, u: -1.0, v: -1.0}, 0.0)
        return left, right

    def _cone(self, block: Block, level: Level) -> None:
        self.cones.append(ConeConstraint(tuple(block), level.coef, level.var))

    def _l1_budget(self, coefs: Block, weights: FloatArray, level: Level) -> None:
        """Σ_m weights[m]·|coefs[m]| <= level."""
        slack = self.lp.new_vars(len(coefs), lower=0.0)
        for c, s in zip(coefs, slack, strict=True):
            self.lp.add_ub({c: 1.0, s: -1.0}, 0.0)
            self.lp.add_ub({c: -1.0, s: -1.0}, 0.0)
        self._at_most({s: float(w) for s, w in zip(slack, weights, strict=True)}, level)

    def membership(self, body: Body, x: Block, level: Level = UNIT) -> None:
        """Constrain x ∈ level·body."""
        match body:
            case HPolytope(normals=normals, offsets=offsets):
                for normal, offset in zip(normals, offsets, strict=True):
                    row = {var: float(a) for var, a in zip(x, normal, strict=True) if a != 0.0}
                    self._both_signs(row, level.scaled(float(offset)))
            case VPolytope(vertices=vertices):
                coefs = self._combination(x, vertices)
                self._l1_budget(coefs, np.ones(len(coefs)), level)
            case Zonotope(generators=generators):
                coefs = self._combination(x, generators)
                for c in coefs:
                    self._both_signs({c: 1.0}, level)
            case EuclideanBall(radius=radius):
                self._cone(x, level.scaled(radius))
            case Scaled(factor=factor, inner=inner):
                self.membership(inner, x, level.scaled(factor))
            case MinkowskiSum(left=left, right=right):
                u, v = self._split(x)
                self.membership(left, u, level)
                self.membership(right, v, level)
            case IntersectionPair(left=left, right=right):
                self.membership(left, x, level)
                self.membership(right, x, level)
            case Polar(inner=inner):
                self.support_bound(inner, x, level)
            case _:
                error_message = f"cannot encode {type(body).__name__}"
                raise InputError(error_message)

    def support_bound(self, body: Body, x: Block, level: Level = UNIT) -> None:
        """Constrain h_body(x) <= level, i.e. x ∈ level·polar(body)."""
        match body:
            case HPolytope(normals=normals, offsets=offsets):
                # h(x) = min Σ b_k|λ_k| over x = Σ λ_k a_k
                coefs = self._combination(x, normals)
                self._l1_budget(coefs, offsets, level)
            case VPolytope(vertices=vertices):
                for vertex in vertices:
                    row = {var: float(v) for var, v in zip(x, vertex, strict=True) if v != 0.0}
                    self._both_signs(row, level)
            case Zonotope(generators=generators):
                slack = self.lp.new_vars(generators.shape[0], lower=0.0)
                for generator, s in zip(generators, slack, strict=True):
                    row = {var: float(g) for var, g in zip(x, generator, strict=True) if g != 0.0}
                    self._at_most({**row, s: -1.0}, Level(None, 0.0))
                    self._at_most({**{k: -v for k, v in row.items()}, s: -1.0}, Level(None, 0.0))
                self._at_most({s: 1.0 for s in slack}, level)
            case EuclideanBall(radius=radius):
                self._cone(x, level.scaled(1.0 / radius))
            case Scaled(factor=factor, inner=inner):
                self.support_bound(inner, x, level.scaled(1.0 / factor))
            case MinkowskiSum(left=left, right=right):
                t_left, t_right = self.level_var(), self.level_var()
                assert t_left.var is not None
                assert t_right.var is not None
                self._at_most({t_left.var: 1.0, t_right.var: 1.0}, level)
                self.support_bound(left, x, t_left)
                self.support_bound(right, x, t_right)
            case IntersectionPair(left=left, right=right):
                # h_{A∩B}(x) = min over x = u + v of h_A(u) + h_B(v)
                u, v = self._split(x)
                t_left, t_right = self.level_var(), self.level_var()
                assert t_left.var is not None
                assert t_right.var is not None
                self._at_most({t_left.var: 1.0, t_right.var: 1.0}, level)
                self.support_bound(left, u, t_left)
                self.support_bound(right, v, t_right)
            case Polar(inner=inner):
                self.membership(inner, x, level)
            case _:
                error_message = f"cannot encode {type(body).__name__}"
                raise InputError(error_message)

    def solve(
        self,
        objective: Optional[dict[int, float]] = None,
        tol: TolerancePolicy = DEFAULT_TOLERANCE,
        max_rounds: int = CONE_MAX_ROUNDS,
    ) -> LpOutcome:
        """Solve the accumulated program."""
        return solve_conic(self.lp.build(objective), self.cones, tol, max_rounds)


def program_support(
    body: Body,
    direction: FloatArray,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    max_rounds: int = CONE_MAX_ROUNDS,
) -> ProgramSupport:
    """max ⟨direction, x⟩ over the body, with a maximizer.

    When the cone cuts did not converge the value is the maximum over the outer
    approximation: an upper bound, flagged by ``converged=False``.
    """
    encoder = BodyEncoder()
    x = encoder.free_block(body.dim)
    encoder.membership(body, x)
    objective = {var: -float(a) for var, a in zip(x, direction, strict=True)}
    outcome = encoder.solve(objective, tol, max_rounds)
    if not outcome.feasible or outcome.x is None or outcome.objective is None:
        error_message = f"support program {outcome.status}: {outcome.message}"
        raise SolverError(error_message)
    return ProgramSupport(-outcome.objective, outcome.x[x], outcome.converged)


def program_gauge(
    body: Body, point: FloatArray, tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> float:
    """min t with point ∈ t·body; +inf when the point is outside the body's span."""
    encoder = BodyEncoder()
    t = encoder.level_var()
    assert t.var is not None
    x = encoder.free_block(body.dim)
    encoder.fix(x, point)
    encoder.membership(body, x, t)
    outcome = encoder.solve({t.var: 1.0}, tol)
    if outcome.status == "infeasible":
        return float("inf")
    if not outcome.feasible or outcome.objective is None:
        error_message = f"gauge program {outcome.status}: {outcome.message}"
        raise SolverError(error_message)
    return max(outcome.objective, 0.0)
