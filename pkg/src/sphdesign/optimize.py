"""Minimization of the design potential over sphere products or R^(d x n).

Equal-norm problems live on the product of unit spheres (one per
column); weighted problems live on the flat matrix space with a
(||v_1||^2 - 1)^2 penalty pinning the overall scale.  Both are driven by
a Riemannian trust-region solver with truncated-CG inner iterations;
the objective is polynomial, so Hessian-vector products are applied in
closed form.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    Configuration,
    DesignProblem,
    Mode,
    _potential_gradient_raw,
    _potential_raw,
    design_constant,
    potential,
)
from .families import z3_generator

# Trust-region constants (standard truncated-CG trust-region settings).
_RHO_PRIME = 0.1
_RHO_REGULARIZATION = 1e3
_KAPPA = 0.1
_THETA = 1.0


class Converged(enum.Enum):
    ZERO_FOUND = "zero_found"
    GRADIENT_SMALL = "gradient_small"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class SolverOptions:
    """Trust-region stopping and tuning parameters.

    ``zero_threshold`` is the early-stop level for the (normalized)
    potential; None means the default 1e-14 * n**2.  The maximum trust
    radius is ``initial_trust_radius_factor`` times the domain's typical
    distance (pi sqrt(n) on the sphere product, sqrt(dn) on the flat
    space).
    """

    max_iterations: int = 2000
    gradient_tolerance: float = 1e-10
    zero_threshold: float | None = None
    initial_trust_radius_factor: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.gradient_tolerance <= 0:
            raise ValueError("gradient_tolerance must be positive")
        if self.zero_threshold is not None and self.zero_threshold <= 0:
            raise ValueError("zero_threshold must be positive")
        if not 0 < self.initial_trust_radius_factor <= 1:
            raise ValueError("initial_trust_radius_factor must be in (0, 1]")

    def resolve_zero_threshold(self, n: int) -> float:
        if self.zero_threshold is not None:
            return self.zero_threshold
        return 1e-14 * n**2


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one minimization run.

    ``config`` is trace-normalized for weighted problems and ``f_value``
    is the potential recomputed at that configuration.
    """

    config: Configuration
    f_value: float
    iterations: int
    converged: Converged
    seed: int


class _DegenerateStep(ValueError):
    """Retraction hit an exactly antipodal column (v_i + s_i = 0)."""


class _SphereProduct:
    """Product of unit spheres, one factor per matrix column."""

    def __init__(self, d, n):
        self.dim = (d - 1) * n
        self.typical_distance = math.pi * math.sqrt(n)

    @staticmethod
    def project(X, U):
        return U - X * np.sum(X * U, axis=0)

    @staticmethod
    def retract(X, U):
        Y = X + U
        norms = np.linalg.norm(Y, axis=0)
        if np.any(norms == 0.0):
            raise _DegenerateStep("step maps a column to zero")
        return Y / norms


class _FlatSpace:
    """R^(d x n) with the Frobenius metric."""

    def __init__(self, d, n):
        self.dim = d * n
        self.typical_distance = math.sqrt(d * n)

    @staticmethod
    def project(X, U):
        return U

    @staticmethod
    def retract(X, U):
        return X + U


def random_configuration(d: int, n: int, mode: Mode, seed: int) -> Configuration:
    """Seeded Gaussian configuration: unit columns (equal-norm) or trace n.

    Deterministic: the same seed always produces the same matrix.
    """
    if d < 1 or n < 1:
        raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((d, n))
    while np.any(np.linalg.norm(X, axis=0) == 0.0):  # pragma: no cover
        X = rng.standard_normal((d, n))
    if mode == Mode.EQUAL_NORM:
        X = X / np.linalg.norm(X, axis=0)
        return Configuration(X, mode)
    X = X * math.sqrt(n / np.sum(X * X))
    return Configuration(X, mode, normalized=True)


def riemannian_gradient(config: Configuration, euclidean_grad) -> np.ndarray:
    """Tangent projection of a Euclidean gradient onto the sphere product.

    Column i becomes g_i - <g_i, v_i> v_i, which is orthogonal to v_i.
    """
    if config.mode != Mode.EQUAL_NORM:
        raise ValueError("tangent projection applies to equal-norm configurations")
    G = np.asarray(euclidean_grad, dtype=float)
    if G.shape != config.entries.shape:
        raise ValueError(f"gradient shape {G.shape} != configuration shape")
    return _SphereProduct.project(config.entries, G)


def retract(config: Configuration, step) -> Configuration:
    """Move each column to (v_i + s_i) / ||v_i + s_i|| on its sphere.

    Raises ValueError on an exactly antipodal step so the caller can
    shrink it.
    """
    if config.mode != Mode.EQUAL_NORM:
        raise ValueError("retraction applies to equal-norm configurations")
    S = np.asarray(step, dtype=float)
    if S.shape != config.entries.shape:
        raise ValueError(f"step shape {S.shape} != configuration shape")
    if not np.any(S):
        return config
    return Configuration(_SphereProduct.retract(config.entries, S), Mode.EQUAL_NORM)


def weighted_objective(config: Configuration, t: int):
    """Penalized objective f(V) + (||v_1||^2 - 1)^2 and its gradient."""
    ct = float(design_constant(t, config.d))
    V = config.entries
    f, _, _ = _potential_raw(V, t, ct)
    grad = _potential_gradient_raw(V, t, ct)
    excess = float(V[:, 0] @ V[:, 0]) - 1.0
    grad = grad.copy()
    grad[:, 0] += 4.0 * excess * V[:, 0]
    return f + excess**2, grad


def _potential_hessian_vec(V: np.ndarray, U: np.ndarray, t: int, ct: float) -> np.ndarray:
    """Euclidean Hessian-vector product of the potential (exact, closed form)."""
    G = V.T @ V
    M = V.T @ U
    M = M + M.T
    norms2 = np.einsum("ii->i", G)
    mdiag = np.einsum("ii->i", M)
    S = float(np.sum(norms2**t))
    dS = t * float(np.sum(norms2 ** (t - 1) * mdiag))
    P = G ** (2 * t - 1)
    H = U @ P + (2 * t - 1) * V @ (G ** (2 * t - 2) * M)
    H -= ct * (dS * V * norms2 ** (t - 1) + S * U * norms2 ** (t - 1))
    if t > 1:
        H -= ct * S * (t - 1) * V * (norms2 ** (t - 2) * mdiag)
    return 4.0 * t * H


def _make_objective(problem: DesignProblem):
    """Returns (manifold, fgrad, hess_at) for the problem's domain.

    fgrad(X) -> (cost, rgrad, design_f) where design_f is the potential
    of the trace-normalized configuration (the quantity the zero test
    and the final report use).  hess_at(X) returns the Riemannian
    Hessian-vector operator at X.
    """
    t, d, n = problem.t, problem.d, problem.n
    ct = float(design_constant(t, d))
    two_t = 2 * t
    if problem.mode == Mode.EQUAL_NORM:
        man = _SphereProduct(d, n)

        def fgrad(X):
            f, _, _ = _potential_raw(X, t, ct)
            grad = _potential_gradient_raw(X, t, ct)
            return f, man.project(X, grad), f

        def hess_at(X):
            # Sphere-product Hessian: projected Euclidean Hessian minus
            # the Weingarten (radial curvature) term per column.
            egrad = _potential_gradient_raw(X, t, ct)
            radial = np.sum(X * egrad, axis=0)

            def hvp(U):
                H = _potential_hessian_vec(X, U, t, ct)
                return man.project(X, H) - radial * U

            return hvp

    else:
        man = _FlatSpace(d, n)

        def fgrad(X):
            f, _, _ = _potential_raw(X, t, ct)
            grad = _potential_gradient_raw(X, t, ct)
            v1 = X[:, 0]
            excess = float(v1 @ v1) - 1.0
            grad = grad.copy()
            grad[:, 0] += 4.0 * excess * v1
            trace = float(np.sum(X * X))
            f_normalized = (n / trace) ** two_t * f
            return f + excess**2, grad, f_normalized

        def hess_at(X):
            v1 = X[:, 0]
            excess = float(v1 @ v1) - 1.0

            def hvp(U):
                H = _potential_hessian_vec(X, U, t, ct)
                H[:, 0] += 8.0 * float(v1 @ U[:, 0]) * v1 + 4.0 * excess * U[:, 0]
                return H

            return hvp

    return man, fgrad, hess_at


def _norm(U) -> float:
    return float(np.sqrt(np.sum(U * U)))


def _inner(U, W) -> float:
    return float(np.sum(U * W))


def _truncated_cg(man, X, grad, grad_norm, hess, delta, max_inner):
    """Steihaug-Toint truncated CG for the trust-region subproblem.

    Returns (eta, H eta, hit_boundary).  Monitors the model value so
    rounding noise in the Hessian products cannot drive it back up.
    """
    eta = np.zeros_like(X)
    Heta = np.zeros_like(X)
    r = grad
    r_r = grad_norm**2
    norm_r0 = grad_norm
    direction = -r
    e_Pe = 0.0
    e_Pd = 0.0
    d_Pd = r_r
    z_r = r_r
    model_value = 0.0
    hit_boundary = False
    for j in range(max_inner):
        Hdir = hess(direction)
        d_Hd = _inner(direction, Hdir)
        if d_Hd > 0:
            alpha = z_r / d_Hd
            e_Pe_new = e_Pe + 2.0 * alpha * e_Pd + alpha**2 * d_Pd
        if d_Hd <= 0 or e_Pe_new >= delta**2:
            # Negative curvature or outside the region: go to the boundary.
            tau = (-e_Pd + math.sqrt(e_Pd**2 + d_Pd * (delta**2 - e_Pe))) / d_Pd
            eta = eta + tau * direction
            Heta = Heta + tau * Hdir
            hit_boundary = True
            break
        new_eta = eta + alpha * direction
        new_Heta = Heta + alpha * Hdir
        new_model = _inner(new_eta, grad) + 0.5 * _inner(new_eta, new_Heta)
        if new_model >= model_value:
            # rounding pushed the model up: keep the best iterate so far
            break
        eta, Heta, model_value = new_eta, new_Heta, new_model
        e_Pe = e_Pe_new
        r = r + alpha * Hdir
        r_r = _inner(r, r)
        norm_r = math.sqrt(r_r)
        if j >= 1 and norm_r <= norm_r0 * min(norm_r0**_THETA, _KAPPA):
            break
        z_r_old = z_r
        z_r = r_r
        beta = z_r / z_r_old
        direction = -r + beta * direction
        e_Pd = beta * (e_Pd + alpha * d_Pd)
        d_Pd = z_r + beta**2 * d_Pd
    return eta, Heta, hit_boundary


def _trust_region(
    man, fgrad, hess_at, X, options: SolverOptions, zero_threshold: float, callback=None
):
    """Core trust-region loop; returns (X, iterations, reason, last design_f).

    ``callback(k, fx, X)`` fires at the start and after every accepted step.
    """
    delta_bar = options.initial_trust_radius_factor * man.typical_distance
    delta = delta_bar / 8.0
    fx, gx, design_f = fgrad(X)
    norm_g = _norm(gx)
    hess = hess_at(X)
    if callback is not None:
        callback(0, fx, X)

    k = 0
    while True:
        if design_f <= zero_threshold:
            return X, k, Converged.ZERO_FOUND, design_f
        if norm_g <= options.gradient_tolerance:
            return X, k, Converged.GRADIENT_SMALL, design_f
        if k >= options.max_iterations:
            return X, k, Converged.ITERATION_CAP, design_f
        if delta < 1e-14 * delta_bar:
            # The radius has collapsed below numerical resolution: no
            # representable step can still decrease the objective.
            return X, k, Converged.ITERATION_CAP, design_f

        eta, Heta, hit_boundary = _truncated_cg(
            man, X, gx, norm_g, hess, delta, max_inner=man.dim
        )
        accepted = False
        if np.any(eta):
            try:
                X_prop = man.retract(X, eta)
            except _DegenerateStep:
                X_prop = None
            if X_prop is not None:
                fx_prop, gx_prop, design_f_prop = fgrad(X_prop)
                rho_num = fx - fx_prop
                rho_den = -_inner(gx, eta) - 0.5 * _inner(eta, Heta)
                # Regularize both sides so the ratio tends to 1 near
                # convergence instead of being dominated by cancellation.
                reg = max(1.0, abs(fx)) * np.finfo(float).eps * _RHO_REGULARIZATION
                model_decreased = rho_den + reg >= 0
                rho = (rho_num + reg) / (rho_den + reg) if rho_den + reg != 0 else -np.inf
                # fx_prop <= fx keeps the accepted-iterate sequence
                # monotone even when the model ratio looks fine.
                accepted = (
                    model_decreased
                    and np.isfinite(rho)
                    and rho > _RHO_PRIME
                    and fx_prop <= fx
                )
        if accepted:
            X, fx, gx, design_f = X_prop, fx_prop, gx_prop, design_f_prop
            norm_g = _norm(gx)
            hess = hess_at(X)
            if callback is not None:
                callback(k + 1, fx, X)
            if rho < 0.25:
                delta /= 4.0
            elif rho > 0.75 and hit_boundary:
                delta = min(2.0 * delta, delta_bar)
        else:
            delta /= 4.0
        k += 1


def minimize(
    problem: DesignProblem,
    start: Configuration,
    options: SolverOptions,
    callback=None,
) -> SolveResult:
    """Trust-region minimization of the design objective from one start.

    Equal-norm iterates stay on the sphere product; weighted results are
    trace-normalized before the reported potential is computed.  The
    optional ``callback(k, objective, iterate)`` observes every accepted
    iterate; the objective sequence it sees is non-increasing.
    """
    if (start.d, start.n) != (problem.d, problem.n) or start.mode != problem.mode:
        raise ValueError(
            f"start configuration ({start.d}x{start.n}, {start.mode.value}) does not "
            f"match problem ({problem.d}x{problem.n}, {problem.mode.value})"
        )
    man, fgrad, hess_at = _make_objective(problem)
    zero_threshold = options.resolve_zero_threshold(problem.n)
    X, iterations, reason, _ = _trust_region(
        man, fgrad, hess_at, start.entries.copy(), options, zero_threshold, callback
    )
    if problem.mode == Mode.EQUAL_NORM:
        config = Configuration(X / np.linalg.norm(X, axis=0), Mode.EQUAL_NORM)
    else:
        config = Configuration(
            X * math.sqrt(problem.n / np.sum(X * X)), Mode.WEIGHTED, normalized=True
        )
    return SolveResult(
        config=config,
        f_value=potential(config, problem.t).f,
        iterations=iterations,
        converged=reason,
        seed=options.seed,
    )


def _run_restart(args):
    problem, options, seed = args
    start = random_configuration(problem.d, problem.n, problem.mode, seed)
    return minimize(problem, start, replace(options, seed=seed))


def multi_start(problem: DesignProblem, restarts: int, options: SolverOptions, workers: int = 1):
    """Independent restarts from seeds seed+0 .. seed+restarts-1.

    Returns ``(best, all_results)`` with the best chosen by
    (f_value, seed) lexicographic order, so the outcome is independent
    of execution order (and of ``workers``).
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    jobs = [(problem, options, options.seed + i) for i in range(restarts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, jobs))
    else:
        results = [_run_restart(job) for job in jobs]
    results.sort(key=lambda r: r.seed)
    best = min(results, key=lambda r: (r.f_value, r.seed))
    return best, results


def optimize_z3_seeds(options: SolverOptions, start_seeds=None):
    """Search for 8 unit seeds whose order-3 orbit is a (4,4)-design in R^3.

    Minimizes the 24-point potential pulled back to the seed spheres.
    Returns ``(seeds, f_value)`` with f_value the potential of the full
    orbit.
    """
    t, d = 4, 3
    ct = float(design_constant(t, d))
    g = z3_generator()
    powers = np.stack([np.eye(3), g, g @ g])  # (3, 3, 3): power index first
    man = _SphereProduct(d, 8)

    def orbit(S):
        cols = np.empty((3, 24))
        for a in range(3):
            cols[:, a::3] = powers[a] @ S
        return cols

    def pull_back(G):
        grad = np.zeros((3, 8))
        for a in range(3):
            grad += powers[a].T @ G[:, a::3]
        return grad

    def egrad_seeds(S):
        return pull_back(_potential_gradient_raw(orbit(S), t, ct))

    def fgrad(S):
        V = orbit(S)
        f, _, _ = _potential_raw(V, t, ct)
        grad = pull_back(_potential_gradient_raw(V, t, ct))
        return f, man.project(S, grad), f

    def hess_at(S):
        # The orbit map is linear, so the pulled-back Hessian is the
        # orbit Hessian sandwiched between the map and its adjoint.
        V = orbit(S)
        radial = np.sum(S * egrad_seeds(S), axis=0)

        def hvp(U):
            H = pull_back(_potential_hessian_vec(V, orbit(U), t, ct))
            return man.project(S, H) - radial * U

        return hvp

    if start_seeds is None:
        rng = np.random.default_rng(options.seed)
        S0 = rng.standard_normal((3, 8))
        S0 = S0 / np.linalg.norm(S0, axis=0)
    else:
        S0 = np.asarray(start_seeds, dtype=float)
        S0 = S0 / np.linalg.norm(S0, axis=0)
    zero_threshold = options.resolve_zero_threshold(24)
    S, _, _, design_f = _trust_region(man, fgrad, hess_at, S0.copy(), options, zero_threshold)
    S = S / np.linalg.norm(S, axis=0)
    return S, design_f
