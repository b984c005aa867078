"""Design potential, its gradient, and the basic certification identities.

A configuration is a d-by-n real matrix whose columns are the design
vectors.  The central quantity is the potential

    f(V) = sum_jk <v_j, v_k>^(2t)  -  c_t(d) * (sum_l ||v_l||^(2t))^2,

which is nonnegative for every configuration and vanishes exactly on the
spherical (t,t)-designs.  Everything else in the package is built on the
functions here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# Tolerances for stored configurations.  Unit columns are kept to full
# double precision; the trace constraint of a normalized weighted
# configuration is allowed a little more slack.
UNIT_NORM_TOL = 1e-14
TRACE_TOL = 1e-12

# A normalized configuration (trace n) counts as a design when
# f <= DESIGN_ZERO_FACTOR * n**2.
DESIGN_ZERO_FACTOR = 1e-12

_DEFAULT_PROBE_SEED = 7


class Mode(enum.Enum):
    """Norm constraint of a configuration: unit columns or free norms."""

    EQUAL_NORM = "equal_norm"
    WEIGHTED = "weighted"


@dataclass(frozen=True, eq=False)
class Configuration:
    """A d-by-n matrix of design vectors (columns) plus its norm mode.

    Instances are immutable; the entry array is copied on construction
    and marked read-only, so configurations are safe to share between
    threads.

    Parameters
    ----------
    entries : (d, n) array_like
        Column j is the vector v_j.  No column may be zero.
    mode : Mode
        EQUAL_NORM requires every column to have unit norm (to within
        1e-14).  WEIGHTED leaves norms free.
    normalized : bool
        For WEIGHTED configurations, asserts sum_j ||v_j||^2 = n to
        within 1e-12.  Set by :func:`normalize_trace`.
    """

    entries: np.ndarray
    mode: Mode
    normalized: bool = False

    def __post_init__(self):
        V = np.ascontiguousarray(np.asarray(self.entries, dtype=float))
        if V.ndim != 2:
            raise ValueError(f"entries must be a 2-d array, got shape {V.shape}")
        d, n = V.shape
        if d < 1 or n < 1:
            raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
        if not np.all(np.isfinite(V)):
            raise ValueError("entries must be finite")
        norms = np.linalg.norm(V, axis=0)
        if np.any(norms == 0.0):
            raise ValueError("zero column in configuration")
        if self.mode == Mode.EQUAL_NORM and np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
            raise ValueError("equal-norm configuration has a non-unit column")
        if self.mode == Mode.WEIGHTED and self.normalized:
            if abs(np.sum(norms**2) - n) > TRACE_TOL * n:
                raise ValueError("configuration flagged normalized but trace != n")
        V.setflags(write=False)
        object.__setattr__(self, "entries", V)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.entries, axis=0)

    def gram(self) -> "GramMatrix":
        return GramMatrix(self.entries.T @ self.entries)


@dataclass(frozen=True)
class DesignProblem:
    """The triple (t, d, n) plus norm mode defining the variety f = 0."""

    t: int
    d: int
    n: int
    mode: Mode

    def __post_init__(self):
        if self.t < 1 or self.d < 1 or self.n < 1:
            raise ValueError(f"need t, d, n >= 1, got {(self.t, self.d, self.n)}")


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Symmetric n-by-n matrix of inner products G[j, k] = <v_j, v_k>."""

    entries: np.ndarray

    def __post_init__(self):
        G = np.asarray(self.entries, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not np.allclose(G, G.T, atol=1e-12 * max(1.0, np.abs(G).max())):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "entries", G)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class PotentialValue:
    """Potential residual f = lhs - rhs with its two constituent sums.

    lhs is the double power sum over all ordered pairs (diagonal
    included); rhs is the lower-bound term.  f >= 0 up to roundoff for
    every configuration, with equality exactly on designs.
    """

    f: float
    lhs: float
    rhs: float

    def __post_init__(self):
        if self.f < -1e-9 * max(1.0, abs(self.rhs)):
            raise ValueError(
                f"potential {self.f} below the lower bound beyond roundoff "
                f"(rhs={self.rhs}); inputs are inconsistent"
            )


def design_constant(t: int, d: int) -> Fraction:
    """Exact value of c_t(d) = prod_{j=0}^{t-1} (2j+1) / (d+2j).

    This is the constant multiplying the squared norm-power sum in the
    potential.  Use ``float(design_constant(t, d))`` for the double view.
    """
    if t < 1 or d < 1:
        raise ValueError(f"need t >= 1 and d >= 1, got t={t}, d={d}")
    c = Fraction(1)
    for j in range(t):
        c *= Fraction(2 * j + 1, d + 2 * j)
    return c


def _potential_raw(V: np.ndarray, t: int, ct: float):
    """(f, lhs, rhs) for a raw matrix; no validation, solver hot path."""
    G = V.T @ V
    lhs = float(np.sum(G ** (2 * t)))
    norm_pow = np.einsum("ii->i", G) ** t
    rhs = ct * float(np.sum(norm_pow)) ** 2
    return lhs - rhs, lhs, rhs


def potential(config: Configuration, t: int) -> PotentialValue:
    """Evaluate the design potential f at the configuration.

    Returns the full :class:`PotentialValue`; ``potential(c, t).f == 0``
    (numerically) characterises spherical (t,t)-designs.  The value
    scales as f(cV) = c^(4t) f(V).
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    ct = float(design_constant(t, config.d))
    f, lhs, rhs = _potential_raw(config.entries, t, ct)
    return PotentialValue(f=f, lhs=lhs, rhs=rhs)


def _potential_gradient_raw(V: np.ndarray, t: int, ct: float) -> np.ndarray:
    G = V.T @ V
    norms2 = np.einsum("ii->i", G)
    S = float(np.sum(norms2**t))
    P = G ** (2 * t - 1)
    return 4.0 * t * (V @ P - ct * S * V * norms2 ** (t - 1))


def potential_gradient(config: Configuration, t: int) -> np.ndarray:
    """Euclidean gradient of f with respect to every vector entry.

    Column i is  4t [ sum_k <v_i,v_k>^(2t-1) v_k
                      - c_t (sum_l ||v_l||^(2t)) ||v_i||^(2t-2) v_i ].
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    ct = float(design_constant(t, config.d))
    return _potential_gradient_raw(config.entries, t, ct)


def normalize_trace(config: Configuration) -> Configuration:
    """Rescale so that sum_j ||v_j||^2 = n; marks the result normalized.

    Idempotent, and the identity map (up to one rounding) on an
    already-normalized configuration.
    """
    V = config.entries
    trace = float(np.sum(V * V))
    s = math.sqrt(config.n / trace)
    if config.mode == Mode.EQUAL_NORM:
        # Unit columns already have trace n up to roundoff; rescaling by
        # s would perturb them for nothing.
        return config
    return Configuration(V * s, config.mode, normalized=True)


def default_probes(d: int, count: int = 100, seed: int = _DEFAULT_PROBE_SEED) -> np.ndarray:
    """Seeded random unit probe vectors, one per column."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((d, count))
    return X / np.linalg.norm(X, axis=0)


def bessel_residual(config: Configuration, t: int, probes=None) -> float:
    """Max relative failure of the reproducing identity over probe points.

    For each probe x the design identity requires

        sum_j <x, v_j>^(2t)  =  c_t(d) * (sum_l ||v_l||^(2t)) * ||x||^(2t);

    the residual is the largest relative deviation.  Defaults to 100
    seeded random unit probes, so the value is deterministic.
    """
    if probes is None:
        probes = default_probes(config.d)
    X = np.asarray(probes, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != config.d or X.shape[1] == 0:
        raise ValueError("probes must be a nonempty set of vectors in R^d")
    xnorms = np.linalg.norm(X, axis=0)
    if np.any(xnorms == 0.0):
        raise ValueError("zero probe vector")
    V = config.entries
    ct = float(design_constant(t, config.d))
    S = float(np.sum(np.sum(V * V, axis=0) ** t))
    lhs = np.sum((X.T @ V) ** (2 * t), axis=1)
    target = ct * S * xnorms ** (2 * t)
    return float(np.max(np.abs(lhs - target) / target))


def n_bounds(t: int, d: int) -> tuple[int, int]:
    """(dim Hom(t), dim Hom(2t)): the design-size window for (t, d).

    The minimal weighted design size lies between the two; the minimal
    equal-norm size is at most the upper value.
    """
    if t < 1 or d < 1:
        raise ValueError(f"need t >= 1 and d >= 1, got t={t}, d={d}")
    return math.comb(t + d - 1, t), math.comb(2 * t + d - 1, 2 * t)
