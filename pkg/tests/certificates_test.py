"""Tests for certificate verification, canonical constructions, c₂ and prisms."""

import itertools
import math

import numpy as np
import pytest
from scipy.linalg import null_space

from bodies import NormedSpace, euclidean_space, gauge_many, lp_space, support_many, vertices
from certificates import (
    Certificate,
    compute_c2,
    convex_combination,
    corollary_minimality_check,
    frame_residual,
    parallelepiped_certificate,
    partition_property_check,
    prismify,
    project_certificate,
    theorem1_c3,
    theorem1_check,
    theorem2_conditions,
    verify_certificate,
)
from errors import (
    HypothesisError,
    InputError,
    PreconditionError,
    RankError,
    SpaceMismatchError,
    UnsupportedRepresentationError,
)
from shapes import HPolytope, VPolytope, Zonotope

PLANE = euclidean_space(2)
DIAGONALS = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)


def test_coordinate_parallelepiped_verifies() -> None:
    """The dual basis of e₁, e₂ certifies the square over l₂²."""
    cert = parallelepiped_certificate(PLANE, np.eye(2))
    report = verify_certificate(cert)
    assert report.valid
    assert report.reconstruction_residual == pytest.approx(0.0, abs=1e-12)
    assert report.containment.mode == "exact"
    assert report.covers_unit_ball.contained
    assert report.to_dict()["flags"] == []


def test_parallelepiped_needs_dual_unit_functionals() -> None:
    """2e₁ has dual norm 2; dependent rows have no dual basis."""
    with pytest.raises(PreconditionError) as info:
        parallelepiped_certificate(PLANE, 2 * np.eye(2))
    assert info.value.witness is not None
    with pytest.raises(RankError):
        parallelepiped_certificate(PLANE, np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(InputError):
        parallelepiped_certificate(PLANE, np.eye(2)[:1])


def test_broken_reconstruction_is_reported() -> None:
    """Halving the vectors leaves Σ y_j f_jᵀ = I/2."""
    cert = Certificate(PLANE, HPolytope(np.eye(2), np.ones(2)), np.eye(2), 0.5 * np.eye(2))
    report = verify_certificate(cert)
    assert not report.valid
    assert report.reconstruction_residual == pytest.approx(0.5)


def test_rotated_zonotope_escapes_the_square() -> None:
    """The 45° square has a vertex at (√2, 0), outside [−1, 1]²."""
    cert = Certificate(PLANE, HPolytope(np.eye(2), np.ones(2)), DIAGONALS, DIAGONALS)
    report = verify_certificate(cert)
    assert not report.valid
    assert report.reconstruction_residual == pytest.approx(0.0, abs=1e-12)
    assert not report.containment.contained
    assert report.containment.worst_margin == pytest.approx(math.sqrt(2) - 1)


def test_certificate_rejects_mismatched_pairs() -> None:
    """Functional and vector counts must agree."""
    with pytest.raises(InputError):
        Certificate(PLANE, Zonotope(np.eye(2)), np.eye(2), np.eye(2)[:1])


def test_convex_combination_of_two_parallelepipeds() -> None:
    """Half of each square, pairs concatenated, still verifies."""
    first = parallelepiped_certificate(PLANE, np.eye(2))
    second = parallelepiped_certificate(PLANE, DIAGONALS)
    mixed = convex_combination(first, second, 0.5)
    assert mixed.size == 4
    assert verify_certificate(mixed).valid
    assert convex_combination(first, second, 1.0) is first
    with pytest.raises(InputError):
        convex_combination(first, second, 1.5)
    with pytest.raises(SpaceMismatchError):
        convex_combination(first, parallelepiped_certificate(lp_space(1, 2), np.eye(2)), 0.5)


def test_c2_of_the_euclidean_plane() -> None:
    """Orthonormal points at 90°: the bisector norms both to cos 45°."""
    result = compute_c2(PLANE, np.eye(2), np.eye(2))
    assert result.mode == "analytic"
    assert result.value == pytest.approx(1 - 1 / math.sqrt(2))
    assert result.pair == (0, 1)


def test_c2_of_the_cube_plane() -> None:
    """In l_∞² the dual ball is the l₁ ball, so min(|f₁|, |f₂|) <= 1/2."""
    result = compute_c2(lp_space(math.inf, 2), np.eye(2), np.eye(2))
    assert result.mode == "exact"
    assert result.value == pytest.approx(0.5, abs=1e-8)


def test_frame_must_be_norming() -> None:
    """A point of norm 2 is rejected before any program runs."""
    with pytest.raises(PreconditionError):
        compute_c2(PLANE, np.eye(2), 2 * np.eye(2))


def test_l1_parallelepiped_is_not_certified_minimal() -> None:
    """f = (1, 1) norms both e₁ and −e₂ in l₁², so c₂ = 0."""
    space = lp_space(1, 2)
    report = corollary_minimality_check(
        space, np.array([[1.0, 1.0], [1.0, -1.0]]), np.array([[1.0, 0.0], [0.0, -1.0]])
    )
    assert not report.minimal
    assert report.margin == pytest.approx(0.0, abs=1e-8)


def test_square_is_minimal_over_l2() -> None:
    """c₂ > 0 for the coordinate frame of l₂²."""
    report = corollary_minimality_check(PLANE, np.eye(2), np.eye(2))
    assert report.minimal
    assert report.to_dict()["mode"] == "analytic"


def test_c3_formula() -> None:
    """c₃ = 1 − ((2 − c₂)/c₂)·c₁; c₂ <= 0 is a hypothesis failure."""
    assert theorem1_c3(0.0, 0.3) == pytest.approx(1.0)
    assert theorem1_c3(0.1, 0.5) == pytest.approx(0.7)
    with pytest.raises(HypothesisError):
        theorem1_c3(0.1, 0.0)


def test_shrunken_parallelepiped_fits_the_square_certificate() -> None:
    """With c₁ = 0 the full square must lie in the zonotope, and it does."""
    cert = parallelepiped_certificate(PLANE, np.eye(2))
    report = theorem1_check(PLANE, np.eye(2), np.eye(2), cert)
    assert report.c1 == pytest.approx(0.0)
    assert report.c3 == pytest.approx(1.0)
    assert report.holds
    assert not report.inconclusive
    assert report.witness is None


def test_theorem1_check_needs_a_valid_certificate() -> None:
    """An invalid certificate fails the precondition."""
    cert = Certificate(PLANE, HPolytope(np.eye(2), np.ones(2)), DIAGONALS, DIAGONALS)
    with pytest.raises(PreconditionError):
        theorem1_check(PLANE, np.eye(2), np.eye(2), cert)


def test_disc_and_strip_conditions() -> None:
    """Coordinate functionals norm one point each; f₃ norms both with opposite signs."""
    conditions = theorem2_conditions()
    assert conditions.unique_norming
    assert conditions.f3_dual_norm == pytest.approx(1.0, abs=1e-7)
    assert conditions.f3_values == (1.0, -1.0)
    assert not conditions.corollary_applies


@pytest.mark.parametrize("eps", [math.pi / 16, math.pi / 8, math.pi / 6, math.pi / 5])
def test_partition_inequality_fails_on_the_diagonal(eps: float) -> None:
    """cos(π/4 − ε) exceeds 1 − tan ε; the strip functional stays below it."""
    report = partition_property_check(eps)
    assert report.bound == pytest.approx(1 - math.tan(eps))
    assert not report.holds
    assert report.worst_slack == pytest.approx(report.bound - math.cos(math.pi / 4 - eps), abs=1e-6)
    assert np.allclose(np.abs(report.witness), 1 / math.sqrt(2), atol=1e-3)
    assert report.strip_slack == pytest.approx(report.bound - (math.cos(eps) - math.sin(eps)))
    assert report.strip_slack > 0


def test_partition_check_rejects_eps_out_of_range() -> None:
    """ε must lie strictly between 0 and π/4."""
    with pytest.raises(InputError):
        partition_property_check(math.pi / 4)


def test_prismify_keeps_the_square() -> None:
    """e₁ already is the merged atom; the rest lies in ker e₁."""
    cert = parallelepiped_certificate(PLANE, np.eye(2))
    report = prismify(cert, [1.0, 0.0], [1.0, 0.0])
    assert report.ok
    assert report.prism_residual == pytest.approx(0.0)
    assert report.leading_mass_residual == pytest.approx(0.0)
    assert report.decomposition is not None
    assert report.decomposition.residual_index == (1,)
    assert report.certificate.size == 2


def test_prismify_merges_split_atoms() -> None:
    """Two half-weight copies of (e₁, e₁) collapse into one generator."""
    functionals = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    vectors = np.array([[0.5, 0.0], [0.5, 0.0], [0.0, 1.0]])
    cert = Certificate(PLANE, Zonotope(np.eye(2)), functionals, vectors)
    report = prismify(cert, [1.0, 0.0], [1.0, 0.0])
    assert report.ok
    assert report.certificate.size == 2
    assert np.allclose(report.certificate.vectors[0], [1.0, 0.0])


def test_prismify_checks_the_slab() -> None:
    """h must take 1 at x₁."""
    cert = parallelepiped_certificate(PLANE, np.eye(2))
    with pytest.raises(PreconditionError):
        prismify(cert, [1.0, 0.0], [2.0, 0.0])


def test_prismify_drops_zero_atoms() -> None:
    """A zero pair survives as a zero generator in ker h."""
    functionals = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    vectors = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    cert = Certificate(PLANE, Zonotope(np.eye(2)), functionals, vectors)
    report = prismify(cert, [1.0, 0.0], [1.0, 0.0])
    assert report.ok
    assert report.certificate.size == 3


def test_prismify_rejects_atoms_off_the_kernel() -> None:
    """In l₁² the diagonal functionals norm e₁ without being ±e₁."""
    space = lp_space(1, 2)
    diamond = parallelepiped_certificate(space, np.array([[1.0, 1.0], [1.0, -1.0]]))
    with pytest.raises(HypothesisError) as info:
        prismify(diamond, [1.0, 0.0], [1.0, 0.0])
    assert info.value.witness is not None


def test_coordinate_projection_of_a_cube_certificate() -> None:
    """Dropping a coordinate of the l₂³ cube certificate leaves a square one."""
    cert = Certificate(euclidean_space(3), Zonotope(np.eye(3)), np.eye(3), np.eye(3))
    projected = project_certificate(cert, [0, 2])
    assert projected.dim == 2
    assert verify_certificate(projected).valid
    with pytest.raises(InputError):
        project_certificate(cert, [])
    l1 = parallelepiped_certificate(lp_space(1, 2), np.eye(2))
    with pytest.raises(UnsupportedRepresentationError):
        project_certificate(l1, [0])


def test_frame_residual_of_a_valid_certificate() -> None:
    """Σ ⟨x, f_j⟩ y_j reproduces x."""
    cert = parallelepiped_certificate(PLANE, DIAGONALS)
    assert frame_residual(cert, samples=20, seed=3) == pytest.approx(0.0, abs=1e-12)


# === RANDOMIZED FAMILIES ===


def _random_polytopal_space(rng: np.random.Generator, n: int) -> NormedSpace:
    match int(rng.integers(3)):
        case 0:
            return NormedSpace(n, VPolytope(rng.standard_normal((n + 2, n))))
        case 1:
            normals = rng.standard_normal((n + int(rng.integers(1, 4)), n))
            return NormedSpace(n, HPolytope(normals, rng.uniform(0.5, 1.5, normals.shape[0])))
        case _:
            return NormedSpace(n, Zonotope(rng.standard_normal((n + int(rng.integers(3)), n))))


def _dual_unit_rows(rng: np.random.Generator, space: NormedSpace) -> np.ndarray:
    rows = rng.standard_normal((space.dim, space.dim))
    while np.linalg.cond(rows) > 1e3:
        rows = rng.standard_normal((space.dim, space.dim))
    return rows / (space.dual_norms(rows)[:, np.newaxis] * (1.0 + 1e-9))


@pytest.mark.parametrize("seed", range(10))
def test_parallelepipeds_of_random_polytopal_spaces_verify(seed: int) -> None:
    """Dual-unit functionals give a valid parallelepiped in every dimension up to 4."""
    rng = np.random.default_rng(seed)
    for n in (1, 2, 3, 4, int(rng.integers(1, 5))):
        space = _random_polytopal_space(rng, n)
        report = verify_certificate(parallelepiped_certificate(space, _dual_unit_rows(rng, space)))
        assert report.valid
        assert report.containment.mode == "exact"


@pytest.mark.parametrize("seed", range(20))
def test_convex_combinations_at_random_weights_verify(seed: int) -> None:
    """Any weight in [0, 1] mixes two valid certificates into a valid one."""
    rng = np.random.default_rng(100 + seed)
    space = _random_polytopal_space(rng, int(rng.integers(2, 4)))
    first = parallelepiped_certificate(space, _dual_unit_rows(rng, space))
    second = parallelepiped_certificate(space, _dual_unit_rows(rng, space))
    mixed = convex_combination(first, second, float(rng.uniform()))
    assert mixed.size == 2 * space.dim
    assert verify_certificate(mixed).valid


def _norming_frame(
    rng: np.random.Generator, n: int
) -> tuple[NormedSpace, np.ndarray, np.ndarray]:
    """Unit ball with vertices F⁻¹e_i, normed by the rows of F, cut at every diagonal."""
    functionals = rng.standard_normal((n, n))
    while np.linalg.cond(functionals) > 50:
        functionals = rng.standard_normal((n, n))
    points = np.linalg.inv(functionals).T
    signs = np.array([(1.0, *rest) for rest in itertools.product((1.0, -1.0), repeat=n - 1)])
    corners = rng.uniform(0.55, 0.9, (signs.shape[0], 1)) * signs
    ball = VPolytope(np.vstack([np.eye(n), corners]) @ points)
    return NormedSpace(n, ball), functionals, points


def _inflated_certificate(
    rng: np.random.Generator,
    space: NormedSpace,
    functionals: np.ndarray,
    c2: float,
) -> Certificate:
    """Mix the parallelepiped of F with a tilted one, keeping c₁ below c₂/(2 − c₂)."""
    n = space.dim
    mixing = rng.standard_normal((n, n))
    mixing /= np.sum(np.abs(mixing), axis=1, keepdims=True)
    while np.linalg.cond(mixing) > 50:
        mixing = rng.standard_normal((n, n))
        mixing /= np.sum(np.abs(mixing), axis=1, keepdims=True)
    first = parallelepiped_certificate(space, functionals)
    second = parallelepiped_certificate(space, mixing @ functionals)
    overshoot = float(np.max(support_many(second.zonotope, functionals))) - 1.0
    share = 0.5
    if overshoot > 1e-12:
        share = min(0.9, float(rng.uniform(0.1, 0.9)) * c2 / ((2.0 - c2) * overshoot))
    return convex_combination(first, second, 1.0 - share)


@pytest.mark.parametrize("seed", range(20))
def test_shrunken_parallelepiped_fits_inflated_zonotopes(seed: int) -> None:
    """Whenever c₃ > 0 the zonotope holds {|f_i| <= c₃}."""
    rng = np.random.default_rng(300 + seed)
    for k in range(10):
        n = 2 + k % 2
        space, functionals, points = _norming_frame(rng, n)
        c2 = compute_c2(space, functionals, points)
        while c2.value <= 0.05:
            space, functionals, points = _norming_frame(rng, n)
            c2 = compute_c2(space, functionals, points)
        cert = _inflated_certificate(rng, space, functionals, c2.value)
        report = theorem1_check(space, functionals, points, cert)
        assert report.c2.mode == "exact"
        assert report.c3 > 0
        assert not report.inconclusive
        assert report.holds


def _slab_bounded_certificate(
    rng: np.random.Generator, n: int
) -> tuple[Certificate, np.ndarray, np.ndarray, np.ndarray]:
    """Atoms (±h, u) carrying unit h-mass, the other pairs with vectors in ker h.

    Built in the frame (x₁, x₂, …, x_n) and mapped back; the unit ball is cut
    out by the certificate's own functionals.
    """
    h = rng.standard_normal(n)
    h /= np.linalg.norm(h)
    kernel = null_space(h.reshape(1, -1)).T
    mixing = np.eye(n - 1) + 0.3 * rng.standard_normal((n - 1, n - 1))
    while np.linalg.cond(mixing) > 20:
        mixing = np.eye(n - 1) + 0.3 * rng.standard_normal((n - 1, n - 1))
    basis = mixing @ kernel
    x1 = h + 0.5 * rng.standard_normal(n - 1) @ kernel
    frame = np.vstack([x1, basis])

    signs = np.array([1.0] * int(rng.integers(1, 3)) + [-1.0] * int(rng.integers(2)))
    atoms = np.hstack(
        [
            (signs * rng.dirichlet(np.ones(signs.size)))[:, np.newaxis],
            rng.uniform(-0.5, 0.5, (signs.size, n - 1)),
        ]
    )
    merged = signs @ atoms
    lower = np.hstack([-merged[1:, np.newaxis], np.eye(n - 1)])
    count = n - 1 + int(rng.integers(3))
    spread = rng.standard_normal((n - 1, count))
    inverse = np.linalg.pinv(spread)
    coefficients = inverse @ lower + (np.eye(count) - inverse @ spread) @ rng.standard_normal(
        (count, n)
    )
    flat = np.hstack([np.zeros((count, 1)), spread.T])

    functionals = np.vstack(
        [signs[:, np.newaxis] * h, coefficients @ np.linalg.inv(frame).T]
    )
    vectors = np.vstack([atoms, flat]) @ frame
    space = NormedSpace(n, HPolytope(functionals, np.ones(functionals.shape[0])))
    return Certificate(space, Zonotope(vectors), functionals, vectors), x1, h, basis


@pytest.mark.parametrize("seed", range(10))
def test_prismify_on_generated_slab_bounded_certificates(seed: int) -> None:
    """The prism verifies, lies in ker h off its first generator and inside the input."""
    rng = np.random.default_rng(400 + seed)
    for n in (2, 3, 2, 3, 3):
        cert, x1, h, basis = _slab_bounded_certificate(rng, n)
        assert verify_certificate(cert).valid
        report = prismify(cert, x1, h, basis)
        assert report.verification.valid
        assert report.ok
        assert report.leading_mass_residual == pytest.approx(0.0, abs=1e-9)
        assert np.all(np.abs(report.certificate.vectors[1:] @ h) <= 1e-9)
        corners = vertices(report.certificate.zonotope)
        assert corners is not None
        assert np.all(gauge_many(cert.zonotope, corners) <= 1.0 + 1e-9)
