"""Tests for the conic support and gauge programs."""

import math

import numpy as np
import pytest

from body_programs import program_gauge, program_support
from shapes import EuclideanBall, HPolytope, IntersectionPair

DISC_STRIP = IntersectionPair(
    EuclideanBall(1.0, 2), HPolytope(np.array([[1.0, -1.0]]), np.array([1.0]))
)
DIRECTION = np.array([1.0, 0.3])


def test_converged_support_matches_the_disc() -> None:
    """Along (1, 0.3) the strip is inactive, so the value is ‖(1, 0.3)‖."""
    solution = program_support(DISC_STRIP, DIRECTION)
    assert solution.converged
    assert solution.value == pytest.approx(math.hypot(1.0, 0.3), abs=1e-7)
    assert float(np.linalg.norm(solution.point)) <= 1.0 + 1e-7


def test_unconverged_support_is_flagged_as_an_outer_bound() -> None:
    """One round of cuts leaves an overestimate and says so."""
    solution = program_support(DISC_STRIP, DIRECTION, max_rounds=1)
    assert not solution.converged
    assert solution.value >= math.hypot(1.0, 0.3) - 1e-9


def test_gauge_of_the_disc_strip() -> None:
    """(1, −1)/2 lies on the strip boundary."""
    assert program_gauge(DISC_STRIP, np.array([0.5, -0.5])) == pytest.approx(1.0, abs=1e-7)
