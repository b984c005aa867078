"""Closed-form generators for the explicit design families.

Each constructor returns a :class:`~sphdesign.core.Configuration` (or a
raw matrix where noted) built from exact algebraic constants evaluated
in double precision.  All of them are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Configuration, Mode

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

# Rotation by 120 degrees; its orbit of a unit vector is a Mercedes-Benz
# frame (three equiangular lines in the plane).
ROTATION_120 = np.array([[-0.5, -SQRT3 / 2], [SQRT3 / 2, -0.5]])


@dataclass(frozen=True)
class MercedesAngles:
    """One in-plane rotation angle (radians) per plane of the 12-point family."""

    theta: tuple[float, float, float, float]

    def __post_init__(self):
        th = tuple(float(x) for x in self.theta)
        if len(th) != 4 or not all(math.isfinite(x) for x in th):
            raise ValueError("need four finite angles")
        object.__setattr__(self, "theta", th)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A k-plane in R^d stored as a d-by-k matrix with orthonormal columns."""

    columns: np.ndarray

    def __post_init__(self):
        B = np.ascontiguousarray(np.asarray(self.columns, dtype=float))
        if B.ndim != 2 or B.shape[0] < B.shape[1]:
            raise ValueError(f"basis must be d x k with k <= d, got {B.shape}")
        if np.max(np.abs(B.T @ B - np.eye(B.shape[1]))) > 1e-13:
            raise ValueError("basis columns are not orthonormal")
        B.setflags(write=False)
        object.__setattr__(self, "columns", B)

    @property
    def d(self) -> int:
        return self.columns.shape[0]

    @property
    def k(self) -> int:
        return self.columns.shape[1]

    def projection(self) -> np.ndarray:
        return self.columns @ self.columns.T


def equally_spaced_lines(t: int) -> Configuration:
    """t+1 equally spaced lines in the plane: the optimal (t,t)-design in R^2.

    Column k is (cos(k*pi/(t+1)), sin(k*pi/(t+1))).
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    k = np.arange(t + 1)
    ang = k * np.pi / (t + 1)
    return Configuration(np.vstack([np.cos(ang), np.sin(ang)]), Mode.EQUAL_NORM)


def mercedes_benz(theta: float) -> np.ndarray:
    """2x3 matrix of three equiangular unit vectors at mutual angle 120 deg.

    All pairwise inner products are -1/2; the Gramian is circulant.
    """
    u = np.array([math.cos(theta), math.sin(theta)])
    return np.column_stack([u, ROTATION_120 @ u, ROTATION_120 @ ROTATION_120 @ u])


def _canonical_plane_blocks() -> np.ndarray:
    """The fixed 4x8 matrix whose 4x2 blocks span four equi-isoclinic planes."""
    return (1.0 / SQRT6) * np.array(
        [
            [SQRT6, 0, SQRT2, 0, SQRT2, 0, SQRT2, 0],
            [0, SQRT6, 0, SQRT2, 0, SQRT2, 0, SQRT2],
            [0, 0, -2, 0, 1, -SQRT3, 1, SQRT3],
            [0, 0, 0, -2, SQRT3, 1, -SQRT3, 1],
        ]
    )


def equiisoclinic_planes_r4() -> list[SubspaceBasis]:
    """The four pairwise equi-isoclinic 2-planes in R^4 (common angle 1/sqrt 3).

    Unique up to a global orthogonal map; every pair of projections
    satisfies P_j P_k P_j = (1/3) P_j.
    """
    W = _canonical_plane_blocks()
    return [SubspaceBasis(W[:, 2 * j : 2 * j + 2]) for j in range(4)]


def twelve_point_design(angles) -> Configuration:
    """12-point (2,2)-design in R^4: four Mercedes-Benz frames on equi-isoclinic planes.

    ``angles`` is a :class:`MercedesAngles` or any 4-sequence of floats,
    one in-plane rotation per plane.  Every member of this continuous
    family is a design: the double power sum at t=2 equals 18 exactly.
    """
    if not isinstance(angles, MercedesAngles):
        angles = MercedesAngles(tuple(angles))
    W = _canonical_plane_blocks()
    blocks = [
        W[:, 2 * j : 2 * j + 2] @ mercedes_benz(angles.theta[j]) for j in range(4)
    ]
    return Configuration(np.hstack(blocks), Mode.EQUAL_NORM)


def three_mubs_r4() -> Configuration:
    """Three mutually unbiased orthonormal bases of R^4 (12 unit vectors).

    Vectors from different bases meet at angle 1/2.  Projectively
    equivalent to ``twelve_point_design((0, pi/2, pi/2, pi/2))``.
    """
    B = np.array(
        [
            [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0],
            [1, -1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1],
            [0, 0, 1, 1, 1, -1, 0, 0, 0, 0, 1, -1],
            [0, 0, 1, -1, 0, 0, 1, -1, 1, -1, 0, 0],
        ],
        dtype=float,
    )
    return Configuration(B / SQRT2, Mode.EQUAL_NORM)


def reznick_11pt() -> Configuration:
    """Reznick's 11-point weighted (3,3)-design for R^3.

    Encodes the classical sum-of-sixth-powers identity
    sum_j <x, v_j>^6 = 540 ||x||^6; the three distinct column norms are
    taken by 1, 2 and 8 of the vectors.
    """
    r378 = 378.0 ** (1.0 / 6.0)
    r280 = 280.0 ** (1.0 / 6.0)
    s3 = SQRT3
    V = np.array(
        [
            [r378, 0, 0, s3, s3, 0, 0, s3, s3, s3, s3],
            [0, r378, 0, 0, 0, s3, s3, s3, -s3, s3, -s3],
            [0, 0, r280, 2, -2, 2, -2, 1, 1, -1, -1],
        ]
    )
    return Configuration(V, Mode.WEIGHTED)


def new_11pt_d5() -> Configuration:
    """An 11-point weighted (3,3)-design for R^3 with dihedral D5 symmetry.

    Two rings of five equal-norm vectors over the fifth roots of unity
    plus one axial vector; the exact constants are sixth roots involving
    sqrt(105), and sum_j <x, v_j>^6 = 40500 ||x||^6.
    """
    s105 = math.sqrt(105.0)
    a1 = (12960.0 + 864.0 * s105) ** (1.0 / 6.0)
    a2 = (12960.0 - 864.0 * s105) ** (1.0 / 6.0)
    b1 = (1425.0 - 139.0 * s105) ** (1.0 / 6.0)
    b2 = (1425.0 + 139.0 * s105) ** (1.0 / 6.0)
    b3 = 26250.0 ** (1.0 / 6.0)
    k = np.arange(5)
    c, s = np.cos(2 * np.pi * k / 5), np.sin(2 * np.pi * k / 5)
    ring1 = np.vstack([a1 * c, a1 * s, b1 * np.ones(5)])
    ring2 = np.vstack([a2 * c, a2 * s, -b2 * np.ones(5)])
    axis = np.array([[0.0], [0.0], [-b3]])
    return Configuration(np.hstack([ring1, ring2, axis]), Mode.WEIGHTED)


def stroud_coefficients(d: int, sign: int = 1):
    """Coefficients (a1..a5, C) of the degree-5 antipodal cubature rule.

    ``sign`` selects one of the two branches.  The first four closure
    relations of the rule pin a2..a5; a1 is then forced by cancellation
    of the (sum x_j)^4 term, which gives a1 = 8 (g^4 - 1) (g^2 +- 2 sqrt 2)^4
    with g = (8 - d)^(1/4).  C = 3 a5^4.
    """
    if d not in (4, 5, 6):
        raise ValueError(f"rule exists for d in {{4, 5, 6}}, got d={d}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    g = (8.0 - d) ** 0.25
    a1 = 8.0 * (g**4 - 1.0) * (g**2 + sign * 2.0 * SQRT2) ** 4
    a2 = 2.0 * g**2 + sign * 2.0 * SQRT2
    a3 = -sign * 2.0 * SQRT2 * g**4 - 8.0 * g**2
    a4 = 2.0 * g
    a5 = -sign * 2.0 * SQRT2 * g**3 - 8.0 * g
    return a1, a2, a3, a4, a5, 3.0 * a5**4


def stroud_design(d: int, sign: int = 1) -> Configuration:
    """Weighted (2,2)-design for R^d, d in {4, 5, 6}, from Stroud's cubature rules.

    The 1 + d + d(d-1)/2 vectors are a1^(1/4) u, {a2 u + a3 e_j} and
    {a4 u + a5 (e_j + e_k)} with u the all-ones vector, and satisfy
    sum_j <x, v_j>^4 = 3 a5^4 ||x||^4.
    """
    a1, a2, a3, a4, a5, _ = stroud_coefficients(d, sign)
    u = np.ones(d)
    eye = np.eye(d)
    cols = [a1**0.25 * u]
    cols += [a2 * u + a3 * eye[:, j] for j in range(d)]
    cols += [
        a4 * u + a5 * (eye[:, j] + eye[:, k])
        for j in range(d)
        for k in range(j + 1, d)
    ]
    return Configuration(np.column_stack(cols), Mode.WEIGHTED)


def kempner_24pt_raw() -> np.ndarray:
    """The 24 weighted vectors behind Kempner's sixth-power identity.

    Families {2 e_i}, {8^(1/6) (e_i +- e_j)} and {e_1 +- e_2 +- e_3 +- e_4}
    (the 8 folded into the middle family's norms); all columns then have
    norm 2, and sum_j <x, v_j>^6 = 120 ||x||^6.
    """
    w = 8.0 ** (1.0 / 6.0)
    cols = []
    eye = np.eye(4)
    for i in range(4):
        cols.append(2.0 * eye[:, i])
    for i in range(4):
        for j in range(i + 1, 4):
            for s in (1.0, -1.0):
                cols.append(w * (eye[:, i] + s * eye[:, j]))
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            for s3 in (1.0, -1.0):
                cols.append(np.array([1.0, s1, s2, s3]))
    return np.column_stack(cols)


def kempner_24pt() -> Configuration:
    """Kempner's 24-point equal-norm (3,3)-design for R^4 (unit rescaling).

    All raw vectors share norm 2, so dividing by 2 gives an equal-norm
    design with squared angles 0, 1/4 and 1/2.
    """
    return Configuration(kempner_24pt_raw() / 2.0, Mode.EQUAL_NORM)


def z3_generator() -> np.ndarray:
    """Order-3 rotation diag(1, R) about the first coordinate axis of R^3."""
    g = np.eye(3)
    g[1:, 1:] = ROTATION_120
    return g


def z3_orbit(seeds) -> Configuration:
    """Orbit of 8 unit seed vectors under the order-3 rotation group.

    ``seeds`` is a 3x8 matrix of unit columns; the result interleaves
    [v_1, g v_1, g^2 v_1, ..., v_8, g v_8, g^2 v_8].  Every 3x3 Gram
    block is circulant, and the diagonal blocks are the isogonal pattern
    with off-diagonal entry (3/2)(b_j^2 - 1/3) for first coordinate b_j.
    """
    S = np.asarray(seeds, dtype=float)
    if S.shape != (3, 8):
        raise ValueError(f"need 8 seed vectors in R^3 as a 3x8 matrix, got {S.shape}")
    norms = np.linalg.norm(S, axis=0)
    if np.max(np.abs(norms - 1.0)) > 1e-12:
        raise ValueError("seed vectors must have unit norm")
    S = S / norms  # tighten to full precision so the orbit has unit columns
    g = z3_generator()
    cols = []
    for j in range(8):
        v = S[:, j]
        cols += [v, g @ v, g @ g @ v]
    return Configuration(np.column_stack(cols), Mode.EQUAL_NORM)
