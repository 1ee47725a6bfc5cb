"""Tests for Haar averaging, orbit zonotopes, smallness, direct sums and min-volume search."""

import math

import numpy as np
import pytest

from bodies import direction_net, euclidean_space, support_many, zonotope_facets
from certificates import Certificate, frame_residual, verify_certificate
from errors import (
    HypothesisError,
    InputError,
    PreconditionError,
    SpaceMismatchError,
    UnsupportedRepresentationError,
)
from euclidean import (
    average_segment_radius,
    circle_seeds,
    direct_sum,
    hadamard_certificate,
    hausdorff_to_circumscribed_cube,
    lambda_euclidean,
    min_volume_search,
    minimal_norm_hyperplane_projection,
    monte_carlo_average_support,
    orbit_family,
    orbit_zonotope,
    remark2_enlargement,
    smallness_check,
    theorem5_check,
)
from groups import cyclic, dihedral, named_group, octahedral, tetrahedral
from numerics import random_rotations
from search import generator_norm_sum
from shapes import HPolytope, Zonotope

SEED = 11
SOLID_GROUPS = (tetrahedral(), octahedral())


@pytest.mark.parametrize(
    ("n", "expected"), [(1, 1.0), (2, 4 / math.pi), (3, 1.5), (4, 16 / (3 * math.pi))]
)
def test_projection_constant_of_euclidean_spaces(n: int, expected: float) -> None:
    """λ(l₂ⁿ) closed form at small n."""
    assert lambda_euclidean(n) == pytest.approx(expected)


def test_average_segment_radius() -> None:
    """‖(3, 4)‖ λ(l₂²)/2 = 10/π."""
    assert average_segment_radius([3.0, 4.0]) == pytest.approx(10 / math.pi)


def test_monte_carlo_matches_the_closed_form() -> None:
    """E|cos θ| = 2/π for the segment [−e₁, e₁]."""
    estimate = monte_carlo_average_support(
        Zonotope(np.array([[1.0, 0.0]])), [1.0, 0.0], trials=20_000, seed=SEED
    )
    assert estimate.trials == 20_000
    assert estimate.mean == pytest.approx(2 / math.pi, abs=max(0.01, 5 * estimate.stderr))


def test_monte_carlo_does_not_depend_on_workers() -> None:
    """Chunks carry their own seeds."""
    segment = Zonotope(np.array([[1.0, 0.0, 0.0]]))
    one = monte_carlo_average_support(segment, [0.0, 0.0, 1.0], 3000, SEED, workers=1, chunk=700)
    many = monte_carlo_average_support(segment, [0.0, 0.0, 1.0], 3000, SEED, workers=4, chunk=700)
    assert one.mean == many.mean
    assert one.trials == many.trials == 3000


def test_dihedral_orbit_is_small_and_valid() -> None:
    """The D₄ orbit of e₁ is the square with generator norms summing to 2."""
    cert = orbit_zonotope(dihedral(4), [1.0, 0.0])
    assert cert.size == 8
    assert verify_certificate(cert).valid
    report = smallness_check(cert)
    assert report.verdict == "small"
    assert report.generator_norm_sum == pytest.approx(2.0)
    assert report.averaged_radius == pytest.approx(4 / math.pi)


def test_cyclic_orbit_needs_the_commutant_override() -> None:
    """The commutant of C₄ is 2-dimensional, so the orbit needs an explicit override."""
    with pytest.raises(HypothesisError):
        orbit_zonotope(cyclic(4), [1.0, 0.0])
    cert = orbit_zonotope(cyclic(4), [1.0, 0.0], allow_nontrivial_commutant=True)
    assert verify_certificate(cert).valid


def test_orbit_seed_must_be_unit() -> None:
    """‖y‖₂ = 1 is a precondition."""
    with pytest.raises(PreconditionError):
        orbit_zonotope(dihedral(3), [2.0, 0.0])


def test_orbit_family_over_circle_seeds() -> None:
    """Every seed gives a valid small zonotope."""
    members = orbit_family(dihedral(3), circle_seeds([0.0, 0.2, 0.5]))
    assert len(members) == 3
    for member in members:
        assert smallness_check(member.certificate).verdict == "small"
        assert member.volume > 4.0


def test_scaled_enlargement_is_not_small() -> None:
    """1.1 times the orbit zonotope has norm sum 2.2."""
    cert = orbit_zonotope(dihedral(4), [1.0, 0.0])
    bigger = Certificate(
        cert.space, Zonotope(1.1 * cert.vectors), cert.functionals, cert.vectors
    )
    report = smallness_check(bigger)
    assert report.verdict == "not-small"
    assert report.generator_norm_sum == pytest.approx(2.2)


def test_too_small_enlargement_is_invalid() -> None:
    """A zonotope with norm sum below n cannot be certified."""
    cert = orbit_zonotope(dihedral(4), [1.0, 0.0])
    shrunk = Certificate(cert.space, Zonotope(0.5 * cert.vectors), cert.functionals, cert.vectors)
    report = smallness_check(shrunk)
    assert report.verdict == "invalid"
    assert report.verification is not None
    assert not report.verification.valid


def test_smallness_is_for_euclidean_spaces() -> None:
    """l₁ certificates have no smallness verdict."""
    with pytest.raises(UnsupportedRepresentationError):
        smallness_check(hadamard_certificate(2))


@pytest.mark.parametrize("n", range(1, 9))
def test_hadamard_certificates_verify(n: int) -> None:
    """The Euclidean ball is a sufficient enlargement of l₁ⁿ."""
    cert = hadamard_certificate(n)
    assert cert.size == 2 ** (n - 1)
    assert verify_certificate(cert).valid
    net = direction_net(n)
    assert np.all(support_many(cert.zonotope, net) <= np.linalg.norm(net, axis=1) + 1e-9)


def test_hadamard_dimension_is_bounded() -> None:
    """n = 0 is rejected."""
    with pytest.raises(InputError):
        hadamard_certificate(0)


def test_direct_sum_of_two_orbits() -> None:
    """Blocks combine into a valid small certificate of l₂⁴."""
    square = orbit_zonotope(dihedral(4), [1.0, 0.0])
    hexagon = orbit_zonotope(dihedral(3), [0.0, 1.0])
    total = direct_sum(square, hexagon)
    assert total.dim == 4
    assert total.size == square.size + hexagon.size
    assert verify_certificate(total).valid
    assert smallness_check(total).verdict == "small"
    assert direct_sum(square) is square


def test_direct_sum_needs_euclidean_blocks() -> None:
    """l₁ blocks are rejected."""
    with pytest.raises(SpaceMismatchError):
        direct_sum(hadamard_certificate(2), orbit_zonotope(dihedral(4), [1.0, 0.0]))
    with pytest.raises(InputError):
        direct_sum()


def test_direct_sum_splits_back_into_blocks() -> None:
    """Coordinate projections of a direct sum rebuild it exactly."""
    total = direct_sum(
        orbit_zonotope(dihedral(4), [1.0, 0.0]), orbit_zonotope(dihedral(5), [1.0, 0.0])
    )
    report = theorem5_check(total, 2)
    assert report.splits
    assert report.first.verdict == "small"
    assert report.second.verdict == "small"
    with pytest.raises(InputError):
        theorem5_check(total, 4)


def test_hyperplane_projection_norms() -> None:
    """Coordinate hyperplanes project with norm 1; the diagonal one in 3-D needs 4/3."""
    assert minimal_norm_hyperplane_projection([1.0, 0.0]).norm == pytest.approx(1.0)
    diagonal = np.ones(3) / math.sqrt(3)
    projection = minimal_norm_hyperplane_projection(diagonal)
    assert projection.norm == pytest.approx(4 / 3, abs=1e-8)
    assert float(projection.kernel @ diagonal) == pytest.approx(1.0)
    assert np.allclose(projection.matrix @ projection.kernel, 0.0, atol=1e-8)
    with pytest.raises(InputError):
        minimal_norm_hyperplane_projection([1.0, 1.0])


def test_projection_enlargement_certificate() -> None:
    """The certificate built from P verifies and sits inside A."""
    report = remark2_enlargement(np.ones(3) / math.sqrt(3))
    assert report.verification.valid
    assert report.checks["certificate_in_body"]
    assert report.checks["certificate_in_slab"]
    assert report.to_dict()["projection_norm"] == pytest.approx(4 / 3, abs=1e-8)


def _circle_pool(count: int) -> np.ndarray:
    angles = np.pi * np.arange(count) / count
    return np.column_stack([np.cos(angles), np.sin(angles)])


def test_min_volume_search_respects_the_euclidean_bounds() -> None:
    """No zonotope certificate of l₂² has volume below 4 or norm sum below 2."""
    result = min_volume_search(euclidean_space(2), _circle_pool(8), 3, restarts=6, seed=SEED)
    assert result.status == "found"
    assert result.certificate is not None
    assert result.bounds_respected
    assert result.volume >= 4.0 - 1e-6
    assert result.norm_sum >= 2.0 - 1e-9
    assert verify_certificate(result.certificate).valid
    assert len(result.history) == 6


def test_min_volume_search_is_reproducible() -> None:
    """Same seed, same restarts, same history."""
    first = min_volume_search(euclidean_space(2), _circle_pool(6), 3, 4, seed=SEED, workers=2)
    second = min_volume_search(euclidean_space(2), _circle_pool(6), 3, 4, seed=SEED, workers=1)
    assert first.history == second.history


def test_min_volume_search_preconditions() -> None:
    """Pool functionals must be in the dual ball; generators must span."""
    space = euclidean_space(2)
    with pytest.raises(PreconditionError):
        min_volume_search(space, 2 * _circle_pool(4), 3, 2)
    with pytest.raises(InputError):
        min_volume_search(space, _circle_pool(4), 1, 2)


def test_min_volume_search_with_a_degenerate_pool() -> None:
    """A pool on one line never spans the plane."""
    result = min_volume_search(euclidean_space(2), [[1.0, 0.0], [-1.0, 0.0]], 2, 3, seed=SEED)
    assert result.status == "not-found-within-budget"
    assert result.certificate is None


def test_square_aligns_with_itself() -> None:
    """[−1, 1]² is at distance 0 from the unrotated square."""
    distance, angle = hausdorff_to_circumscribed_cube(Zonotope(np.eye(2)))
    assert distance == pytest.approx(0.0, abs=1e-12)
    assert angle == 0.0


@pytest.mark.parametrize("name", [*(f"d{k}" for k in range(3, 9)), "octahedral", "icosahedral"])
def test_orbit_frames_reproduce_every_vector(name: str) -> None:
    """Σ_g ⟨x, g y⟩ (n/|G|) g y = x for every unit seed of an irreducible group."""
    group = named_group(name)
    rng = np.random.default_rng(SEED)
    for k in range(20):
        seed = rng.standard_normal(group.dim)
        cert = orbit_zonotope(group, seed / np.linalg.norm(seed))
        assert frame_residual(cert, samples=100, seed=k) <= 1e-9


def _random_l2_certificate(rng: np.random.Generator, n: int, kind: int) -> Certificate:
    """Parallelepipeds, rotated orbits and mixtures of the two over l₂ⁿ."""

    def parallelepiped() -> tuple[np.ndarray, np.ndarray]:
        rows = rng.standard_normal((n, n))
        while np.linalg.cond(rows) > 1e3:
            rows = rng.standard_normal((n, n))
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
        return rows, np.linalg.inv(rows).T

    def rotated_orbit() -> tuple[np.ndarray, np.ndarray]:
        def unit(dim: int) -> np.ndarray:
            seed = rng.standard_normal(dim)
            return seed / np.linalg.norm(seed)

        if n == 2:  # noqa: PLR2004
            cert = orbit_zonotope(dihedral(int(rng.integers(3, 9))), unit(2))
        elif n == 3:  # noqa: PLR2004
            cert = orbit_zonotope(SOLID_GROUPS[int(rng.integers(2))], unit(3))
        else:
            cert = direct_sum(
                orbit_zonotope(dihedral(int(rng.integers(3, 9))), unit(2)),
                orbit_zonotope(dihedral(int(rng.integers(3, 9))), unit(2)),
            )
        rotation = random_rotations(n, 1, rng)[0]
        return cert.functionals @ rotation.T, cert.vectors @ rotation.T

    if kind == 0:
        functionals, vectors = parallelepiped()
    elif kind == 1:
        functionals, vectors = rotated_orbit()
    else:
        weight = float(rng.uniform())
        first, second = parallelepiped(), rotated_orbit()
        functionals = np.vstack([first[0], second[0]])
        vectors = np.vstack([weight * first[1], (1.0 - weight) * second[1]])
    facets = zonotope_facets(vectors)
    assert facets is not None
    return Certificate(euclidean_space(n), HPolytope(*facets), functionals, vectors)


def test_generator_norms_of_valid_l2_certificates_sum_to_at_least_n() -> None:
    """Σ‖y_j‖ >= Σ f_j(y_j) = n on a thousand random valid certificates."""
    rng = np.random.default_rng(SEED)
    for k in range(1000):
        n = 2 + k % 3
        cert = _random_l2_certificate(rng, n, (k // 3) % 3)
        assert verify_certificate(cert).valid
        assert generator_norm_sum(cert) >= n - 1e-9


def test_monte_carlo_segment_average_in_three_dimensions() -> None:
    """E|⟨u, e₁⟩| over the sphere S² is λ(l₂³)/3 = 1/2, within one percent."""
    estimate = monte_carlo_average_support(
        Zonotope(np.array([[1.0, 0.0, 0.0]])), [1.0, 0.0, 0.0], trials=100_000, seed=SEED
    )
    expected = average_segment_radius([1.0, 0.0, 0.0])
    assert expected == pytest.approx(0.5)
    assert abs(estimate.mean - expected) <= 0.01 * expected


def test_min_volume_search_lands_on_a_circumscribed_square() -> None:
    """Four generators over sixteen equally spaced functionals reach volume 4."""
    result = min_volume_search(euclidean_space(2), _circle_pool(16), 4, restarts=100, seed=SEED)
    assert result.status == "found"
    assert result.certificate is not None
    assert result.verification is not None
    assert result.verification.valid
    assert 4.0 - 1e-6 <= result.volume <= 4.05
    assert result.bounds_respected
    distance, _ = hausdorff_to_circumscribed_cube(result.certificate.zonotope)
    assert distance <= 0.05
