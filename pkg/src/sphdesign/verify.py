"""Independent design certification oracles.

The checks here deliberately avoid the potential's code path: a
unit-norm configuration is a (t,t)-design iff it integrates every
monomial of degree 2t exactly against the uniform sphere measure, and
the monomial integrals are evaluated in exact rational arithmetic.
Also houses the equi-isoclinic test for subspace collections and the
19-equation system characterising order-3-symmetric 24-point
(4,4)-designs in R^3.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .core import (
    DESIGN_ZERO_FACTOR,
    Configuration,
    Mode,
    normalize_trace,
    potential,
)
from .families import SubspaceBasis


def multi_indices(degree: int, d: int):
    """Yield every exponent vector alpha in N^d with |alpha| = degree."""
    if d == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for tail in multi_indices(degree - head, d - 1):
            yield (head,) + tail


def sphere_monomial_integral(alpha, d: int) -> Fraction:
    """Exact integral of x^alpha over the unit sphere (normalized measure).

    Zero unless every exponent is even; for alpha = 2*beta the value is
    the Pochhammer ratio (1/2)_beta / (d/2)_|beta| with the numerator
    taken coordinate-wise.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != d:
        raise ValueError(f"exponent vector has length {len(alpha)}, expected d={d}")
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be nonnegative")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    beta = [a // 2 for a in alpha]
    num = Fraction(1)
    for b in beta:
        for i in range(b):
            num *= Fraction(1, 2) + i
    den = Fraction(1)
    for i in range(sum(beta)):
        den *= Fraction(d, 2) + i
    return num / den


def cubature_residual(config: Configuration, t: int) -> float:
    """Worst monomial-integration error of the vertex-average rule.

    For every |alpha| = 2t compares (1/n) sum_j v_j^alpha with the exact
    sphere integral; a unit-norm configuration is a (t,t)-design iff the
    maximum is (numerically) zero.
    """
    if config.mode is not Mode.EQUAL_NORM:
        raise ValueError("cubature characterisation applies to unit-norm configurations")
    V = config.entries
    d, n = V.shape
    worst = 0.0
    for alpha in multi_indices(2 * t, d):
        mean = float(np.mean(np.prod(V ** np.array(alpha)[:, None], axis=0)))
        worst = max(worst, abs(mean - float(sphere_monomial_integral(alpha, d))))
    return worst


def equiisoclinic_residual(bases, sigma_squared: float) -> float:
    """Max operator-norm residual of P_j P_k P_j - sigma^2 P_j over pairs j != k.

    Zero exactly when the spanned subspaces are pairwise isoclinic at
    the common angle sigma.
    """
    bases = [b if isinstance(b, SubspaceBasis) else SubspaceBasis(b) for b in bases]
    if len({(b.d, b.k) for b in bases}) > 1:
        raise ValueError("all bases must share the same ambient dimension and rank")
    projections = [b.projection() for b in bases]
    worst = 0.0
    for Pj, Pk in itertools.permutations(projections, 2):
        R = Pj @ Pk @ Pj - sigma_squared * Pj
        worst = max(worst, float(np.linalg.norm(R, 2)))
    return worst


def z3_design_residual(seeds) -> np.ndarray:
    """Residuals of the 19 conditions for an order-3-orbit (4,4)-design in R^3.

    ``seeds`` is a 3x8 matrix of unit columns (b_j, y_j, z_j).  The first
    11 entries are the derived conditions -- four even power sums of the
    b_j, three pairs of odd moment sums (reported as the max of each
    y/z pair), one quartic moment matching 8/315, two mixed yz sums and
    one purely planar octic sum -- followed by the 8 unit-norm residuals.
    The orbit of the seeds is a 24-vector (4,4)-design iff all 19 vanish.
    """
    S = np.asarray(seeds, dtype=float)
    if S.shape != (3, 8):
        raise ValueError(f"need 8 seed vectors in R^3 as a 3x8 matrix, got {S.shape}")
    b, y, z = S[0], S[1], S[2]
    res = []
    for k in (1, 2, 3, 4):
        res.append(abs(np.sum(b ** (2 * k)) / 8.0 - 1.0 / (2 * k + 1)))
    wy = 3.0 - 3.0 * b**2 - 4.0 * y**2
    wz = 3.0 - 3.0 * b**2 - 4.0 * z**2
    for k in (1, 2, 3):
        ry = abs(np.sum(b ** (2 * k - 1) * y * wy))
        rz = abs(np.sum(b ** (2 * k - 1) * z * wz))
        res.append(max(ry, rz))
    res.append(abs(np.sum(b**2 * y**2 * wy**2) / 8.0 - 8.0 / 315.0))
    cross = y * z * (3.0 * z**2 - y**2) * (3.0 * y**2 - z**2)
    for k in (0, 1):
        res.append(abs(np.sum(b ** (2 * k) * cross)))
    res.append(abs(np.sum((y**4 - z**4) * (y**4 - 14.0 * y**2 * z**2 + z**4))))
    res.extend(np.abs(b**2 + y**2 + z**2 - 1.0).tolist())
    return np.array(res)


def is_design(config: Configuration, t: int, tolerance: float = DESIGN_ZERO_FACTOR):
    """Decide designhood via the potential at the trace-normalized configuration.

    Returns ``(verdict, f_value)`` with verdict true iff
    f <= tolerance * n**2.
    """
    f = potential(normalize_trace(config), t).f
    return bool(f <= tolerance * config.n**2), f
