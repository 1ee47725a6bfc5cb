"""Finite subgroups of O(n) acting on R^n."""

import itertools
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from errors import InputError
from numerics import DEFAULT_TOLERANCE, FloatArray, TolerancePolicy, as_vector, commutant_dimension

MATCH_TOL = 1e-8

BUILTIN_GROUPS = (
    "d3",
    "d4",
    "d5",
    "d6",
    "d7",
    "d8",
    "c3",
    "c4",
    "c6",
    "tetrahedral",
    "octahedral",
    "icosahedral",
)


@dataclass(frozen=True, eq=False)
class OrthogonalGroupAction:
    """A finite group given by all of its elements as orthogonal matrices."""

    elements: FloatArray
    name: str = ""

    def __post_init__(self) -> None:
        stack = np.asarray(self.elements, dtype=np.float64)
        square = stack.ndim == 3 and stack.shape[1] == stack.shape[2]  # noqa: PLR2004
        if not square or stack.shape[0] == 0:
            error_message = "a group is a non-empty stack of square matrices"
            raise InputError(error_message)
        stack = stack.copy()
        stack.setflags(write=False)
        object.__setattr__(self, "elements", stack)
        self.validate()

    @property
    def order(self) -> int:
        """|G|."""
        return int(self.elements.shape[0])

    @property
    def dim(self) -> int:
        """n for G ⊂ O(n)."""
        return int(self.elements.shape[1])

    def _index(self) -> cKDTree:
        return cKDTree(self.elements.reshape(self.order, -1))

    def validate(self, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> None:
        """Orthogonality, identity, closure under products and inverses."""
        n = self.dim
        eye = np.eye(n)
        gram = np.einsum("gji,gjk->gik", self.elements, self.elements)
        worst = float(np.max(np.abs(gram - eye)))
        if worst > tol.eps_eq * 10 * n:
            error_message = f"element is not orthogonal (‖gᵀg − I‖ = {worst:.3e})"
            raise InputError(error_message)

        index = self._index()
        if self.find(eye, index) is None:
            error_message = "group does not contain the identity"
            raise InputError(error_message)
        for g in self.elements:
            if self.find(g.T, index) is None:
                error_message = "group is not closed under inverses"
                raise InputError(error_message)
        products = np.einsum("aij,bjk->abik", self.elements, self.elements)
        distances, _ = index.query(products.reshape(self.order**2, -1))
        if float(np.max(distances)) > MATCH_TOL:
            error_message = "group is not closed under products"
            raise InputError(error_message)

    def find(self, matrix: FloatArray, index: Optional[cKDTree] = None) -> Optional[int]:
        """Position of a matrix in the element list."""
        tree = index if index is not None else self._index()
        distance, position = tree.query(np.asarray(matrix).reshape(-1))
        return int(position) if float(distance) <= MATCH_TOL else None

    def multiplication_table(self) -> npt.NDArray[np.int64]:
        """table[a, b] = index of g_a g_b."""
        products = np.einsum("aij,bjk->abik", self.elements, self.elements)
        _, positions = self._index().query(products.reshape(self.order**2, -1))
        return np.asarray(positions, dtype=np.int64).reshape(self.order, self.order)

    def orbit(self, y: npt.ArrayLike) -> FloatArray:
        """g(y) for every element, in element order (repeats kept)."""
        return self.elements @ as_vector(y, self.dim)

    def commutant_dimension(self, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
        """Dimension of the matrices commuting with every element."""
        return commutant_dimension(list(self.elements), self.dim, tol)


def _rotation(angle: float) -> FloatArray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _reflection(angle: float) -> FloatArray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [s, -c]])


def cyclic(k: int) -> OrthogonalGroupAction:
    """Rotations of the plane by multiples of 2π/k."""
    if k < 1:
        error_message = "cyclic group order must be positive"
        raise InputError(error_message)
    return OrthogonalGroupAction(
        np.array([_rotation(2 * math.pi * m / k) for m in range(k)]), name=f"c{k}"
    )


def dihedral(k: int) -> OrthogonalGroupAction:
    """Symmetries of the regular k-gon: k rotations and k reflections."""
    if k < 1:
        error_message = "dihedral group needs k >= 1"
        raise InputError(error_message)
    rotations = [_rotation(2 * math.pi * m / k) for m in range(k)]
    reflections = [_reflection(2 * math.pi * m / k) for m in range(k)]
    return OrthogonalGroupAction(np.array(rotations + reflections), name=f"d{k}")


def point_symmetry_group(points: npt.ArrayLike, name: str = "") -> OrthogonalGroupAction:
    """All orthogonal maps permuting a finite centred point set."""
    cloud = np.asarray(points, dtype=np.float64)
    n = cloud.shape[1]
    basis: list[int] = []
    for i in range(cloud.shape[0]):
        if np.linalg.matrix_rank(cloud[[*basis, i]]) > len(basis):
            basis.append(i)
        if len(basis) == n:
            break
    if len(basis) < n:
        error_message = "point set does not span the space"
        raise InputError(error_message)

    source = cloud[basis]
    gram = source @ source.T
    inverse = np.linalg.inv(source.T)
    tree = cKDTree(cloud)
    scale = max(1.0, float(np.abs(gram).max()))
    found: list[FloatArray] = []
    for target in itertools.permutations(range(cloud.shape[0]), n):
        image = cloud[list(target)]
        if np.max(np.abs(image @ image.T - gram)) > MATCH_TOL * scale:
            continue
        matrix = image.T @ inverse
        if np.max(np.abs(matrix.T @ matrix - np.eye(n))) > MATCH_TOL:
            continue
        distances, _ = tree.query(cloud @ matrix.T)
        if float(np.max(distances)) <= MATCH_TOL * scale:
            found.append(matrix)
    return OrthogonalGroupAction(np.array(found), name=name)


def tetrahedral() -> OrthogonalGroupAction:
    """Full symmetry group of the regular tetrahedron (order 24)."""
    vertices = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64)
    return point_symmetry_group(vertices, name="tetrahedral")


def octahedral() -> OrthogonalGroupAction:
    """Full symmetry group of the cube (order 48)."""
    return point_symmetry_group(np.vstack([np.eye(3), -np.eye(3)]), name="octahedral")


def icosahedral() -> OrthogonalGroupAction:
    """Full symmetry group of the regular icosahedron (order 120)."""
    phi = (1 + math.sqrt(5)) / 2
    vertices = []
    for a, b in itertools.product((1.0, -1.0), repeat=2):
        vertices += [[0.0, a, b * phi], [a, b * phi, 0.0], [a * phi, 0.0, b]]
    return point_symmetry_group(np.array(vertices), name="icosahedral")


def group_from_matrices(matrices: npt.ArrayLike, name: str = "custom") -> OrthogonalGroupAction:
    """Group given element by element; closure is checked, not completed."""
    return OrthogonalGroupAction(np.asarray(matrices, dtype=np.float64), name=name)


def named_group(name: str) -> OrthogonalGroupAction:
    """d<k>, c<k>, tetrahedral, octahedral or icosahedral."""
    key = name.strip().lower()
    if match := re.fullmatch(r"d(\d+)", key):
        return dihedral(int(match.group(1)))
    if match := re.fullmatch(r"c(\d+)", key):
        return cyclic(int(match.group(1)))
    builders = {
        "tetrahedral": tetrahedral,
        "octahedral": octahedral,
        "icosahedral": icosahedral,
    }
    if key in builders:
        return builders[key]()
    error_message = f"unknown group {name!r}"
    raise InputError(error_message)
