"""Structure discovery on numerical designs.

Clustering of repeated angles and norms, per-vector angle incidence,
m-product fingerprints (projective-unitary-equivalence invariants), and
recovery of the 12-point family parameters from a numerically found
(2,2)-design in R^4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import Configuration, Mode, potential
from .families import (
    MercedesAngles,
    SubspaceBasis,
    _canonical_plane_blocks,
)
from .verify import equiisoclinic_residual

DEFAULT_CLUSTER_TOL = 1e-6
DEFAULT_QUANTUM = 1e-8


@dataclass(frozen=True)
class AngleProfile:
    """Clustered multiset of squared angles |<v_j, v_k>|^2 over unordered pairs."""

    clusters: tuple  # of (representative, multiplicity)
    cluster_tolerance: float


@dataclass(frozen=True, eq=False)
class MProductFingerprint:
    """Sorted multiset of m-products, rounded to a quantization grid.

    The m-product of a tuple is the cyclic product of consecutive inner
    products; its multiset over all tuples of distinct indices is
    invariant under projective unitary equivalence.
    """

    m: int
    values: np.ndarray
    quantum: float

    def matches(self, other: "MProductFingerprint", atol: float | None = None) -> bool:
        if self.m != other.m or self.values.shape != other.values.shape:
            return False
        tol = max(self.quantum, other.quantum) if atol is None else atol
        return bool(np.all(np.abs(self.values - other.values) <= tol))


def _cluster_line(values: np.ndarray, tolerance: float):
    """Single-linkage clusters of scalars: split at gaps > tolerance."""
    if tolerance <= 0:
        raise ValueError("cluster tolerance must be positive")
    vals = np.sort(np.asarray(values, dtype=float))
    if vals.size == 0:
        return ()
    breaks = np.nonzero(np.diff(vals) > tolerance)[0]
    clusters = []
    start = 0
    for b in list(breaks) + [vals.size - 1]:
        chunk = vals[start : b + 1]
        clusters.append((float(np.mean(chunk)), int(chunk.size)))
        start = b + 1
    return tuple(clusters)


def _squared_angles(config: Configuration) -> np.ndarray:
    G = config.entries.T @ config.entries
    iu = np.triu_indices(config.n, k=1)
    return G[iu] ** 2


def angle_profile(config: Configuration, cluster_tolerance: float = DEFAULT_CLUSTER_TOL) -> AngleProfile:
    """Cluster the n(n-1)/2 squared angles; representatives are cluster means."""
    return AngleProfile(
        clusters=_cluster_line(_squared_angles(config), cluster_tolerance),
        cluster_tolerance=cluster_tolerance,
    )


def norm_profile(config: Configuration, cluster_tolerance: float = DEFAULT_CLUSTER_TOL):
    """Clustered column norms as (representative, multiplicity) pairs."""
    return _cluster_line(config.norms(), cluster_tolerance)


def per_vector_angle_incidence(
    config: Configuration, target_squared_angle: float, tolerance: float = DEFAULT_CLUSTER_TOL
):
    """For each vector, how many others it meets at the given squared angle."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    G = config.entries.T @ config.entries
    close = np.abs(G**2 - target_squared_angle) <= tolerance
    np.fill_diagonal(close, False)
    return [int(c) for c in close.sum(axis=0)]


def m_product_fingerprint(
    config: Configuration, m: int, quantum: float = DEFAULT_QUANTUM
) -> MProductFingerprint:
    """Sorted multiset of 2- or 3-products over tuples of distinct indices.

    Tuples are reduced modulo cyclic rotation and reversal (the product
    is invariant under both), so each unordered pair or triple
    contributes once.
    """
    if m not in (2, 3):
        raise ValueError(f"m must be 2 or 3, got {m}")
    if quantum <= 0:
        raise ValueError("quantum must be positive")
    G = config.entries.T @ config.entries
    n = config.n
    if m == 2:
        iu = np.triu_indices(n, k=1)
        vals = G[iu] ** 2
    else:
        idx = np.array(list(itertools.combinations(range(n), 3)))
        if idx.size:
            a, b, c = idx[:, 0], idx[:, 1], idx[:, 2]
            vals = G[a, b] * G[b, c] * G[c, a]
        else:
            vals = np.zeros(0)
    vals = np.sort(np.round(vals / quantum) * quantum)
    vals.setflags(write=False)
    return MProductFingerprint(m=m, values=vals, quantum=quantum)


# ---------------------------------------------------------------------------
# Membership in the 12-point family
# ---------------------------------------------------------------------------

_HALF_ANGLE_FIND_TOL = 1e-3  # coarse gate for locating the 1/2-angle triangles


def _coplanar_half_angle_triangles(G: np.ndarray):
    """Triples with pairwise |<.,.>| = 1/2 spanning a plane (3-product -1/8)."""
    n = G.shape[0]
    tris = []
    for a, b, c in itertools.combinations(range(n), 3):
        if (
            abs(abs(G[a, b]) - 0.5) < _HALF_ANGLE_FIND_TOL
            and abs(abs(G[b, c]) - 0.5) < _HALF_ANGLE_FIND_TOL
            and abs(abs(G[a, c]) - 0.5) < _HALF_ANGLE_FIND_TOL
            and abs(G[a, b] * G[b, c] * G[a, c] + 0.125) < _HALF_ANGLE_FIND_TOL
        ):
            tris.append((a, b, c))
    return tris


def _iter_partitions(tris, n):
    """Yield partitions of range(n) into disjoint triangles, lexicographically."""

    def extend(remaining, chosen):
        if not remaining:
            yield list(chosen)
            return
        first = min(remaining)
        for tri in tris:
            if first in tri and set(tri) <= remaining:
                yield from extend(remaining - set(tri), chosen + [tri])

    yield from extend(set(range(n)), [])


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _try_family_match(X: np.ndarray, partition, tolerance: float):
    """Align the four planes of one triple-partition with the canonical ones.

    Returns the four angles on success, None if any residual gate fails.
    """
    planes = []
    for tri in partition:
        U, s, _ = np.linalg.svd(X[:, list(tri)], full_matrices=False)
        if s[2] > tolerance:  # triple does not span a plane
            return None
        planes.append(U[:, :2])
    if (
        equiisoclinic_residual([SubspaceBasis(W) for W in planes], 1.0 / 3.0)
        > tolerance
    ):
        return None

    # Move the first plane to the span of e1, e2.
    A = np.linalg.svd(planes[0], full_matrices=True)[0]
    Y = A.T @ X
    rest = [A.T @ W for W in planes[1:]]

    # Each remaining plane is the graph of sqrt(2) x (rotation or
    # reflection) from the top R^2 to the bottom R^2.
    maps = []
    for W in rest:
        top = W[:2, :]
        L = W[2:, :] @ np.linalg.inv(top)
        if np.linalg.norm(L.T @ L - 2.0 * np.eye(2)) > 10 * tolerance:
            return None
        maps.append(L / math.sqrt(2.0))
    if np.linalg.det(maps[0]) < 0:
        # Flip the bottom block's orientation so all graph maps rotate.
        flip = np.diag([1.0, -1.0])
        Y[2:, :] = flip @ Y[2:, :]
        maps = [flip @ L for L in maps]
    angles = [math.atan2(L[1, 0], L[0, 0]) for L in maps]

    # Rotate the bottom block so the first graph map sits at 180 deg,
    # then the other two must land on +-60 deg (canonical positions).
    turn = math.pi - angles[0]
    Y[2:, :] = _rotation(turn) @ Y[2:, :]
    slots = {1: partition[1]}
    for L_angle, tri in zip(angles[1:], partition[2:]):
        pos = math.remainder(L_angle + turn, 2.0 * math.pi)
        if abs(pos - math.pi / 3.0) < 1e-3:
            slot = 2
        elif abs(pos + math.pi / 3.0) < 1e-3:
            slot = 3
        else:
            return None
        if slot in slots:
            return None
        slots[slot] = tri
    slots[0] = partition[0]

    blocks = _canonical_plane_blocks()
    thetas = []
    for j in range(4):
        Vj = blocks[:, 2 * j : 2 * j + 2]
        y = Y[:, slots[j][0]]
        m = Vj.T @ y
        if np.linalg.norm(Vj @ m - y) > tolerance:
            return None
        thetas.append(math.atan2(m[1], m[0]))
    return MercedesAngles(tuple(thetas))


def match_to_family(config: Configuration, tolerance: float = 1e-6):
    """Recover 12-point family parameters from a (2,2)-design in R^4.

    Partitions the vectors into four coplanar triples by half-angle
    incidence, fits a plane to each, checks that the planes are pairwise
    isoclinic at squared angle 1/3, aligns them with the canonical
    plane configuration and reads off the in-plane rotation of each
    triple.  Returns a :class:`MercedesAngles` whose regenerated design
    is projectively equivalent to the input, or None if any residual
    gate fails.
    """
    if config.mode != Mode.EQUAL_NORM or (config.d, config.n) != (4, 12):
        raise ValueError("family membership applies to 4x12 equal-norm configurations")
    f = potential(config, 2).f
    if f > 1e-10 * 144:
        raise ValueError(f"not a (2,2)-design: potential {f:.3e} exceeds 1e-10 * 144")
    X = config.entries
    G = X.T @ X
    tris = _coplanar_half_angle_triangles(G)
    for partition in _iter_partitions(tris, config.n):
        angles = _try_family_match(X, partition, tolerance)
        if angles is not None:
            return angles
    return None
