"""Numerical search for Garden Algebra reps.

The cost is ``garden_residual``, the squared norm of the residual vector
``r(x)`` over all matrix entries ``x``. ``minimize`` runs Levenberg-Marquardt
(damped Gauss-Newton with the Nielsen gain-ratio update) on ``r`` and falls
back to a backtracking gradient step when no damped step decreases the cost.
Only accepted steps are taken, so the cost trace never increases.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .garden import GardenRep, NotSignedPermutation, decompose_sp, garden_residual

cost = garden_residual


def cost_gradient(rep: GardenRep) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradient of the cost with respect to every entry of ``L`` and ``R``."""
    L = np.asarray(rep.L, dtype=np.float64)
    R = np.asarray(rep.R, dtype=np.float64)
    r = kernels.residual_vector(L, R)
    g = 2.0 * (kernels.jacobian(L, R).T @ r)
    half = L.size
    return g[:half].reshape(L.shape), g[half:].reshape(R.shape)


@dataclass
class SolveProblem:
    """Free-entry search problem; ``fixed_*`` flag entries held at ``values_*``."""

    N: int
    d: int
    fixed_L: np.ndarray | None = None
    fixed_R: np.ndarray | None = None
    values_L: np.ndarray | None = None
    values_R: np.ndarray | None = None
    seed: int = 0
    max_iter: int = 10_000
    threshold: float = 1e-18
    init_scale: float = 1.0
    damping: float = 1e-3
    round_tol: float = 1e-6

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise ValueError("N and d must be positive")
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")
        shape = (self.N, self.d, self.d)
        for name in ("fixed_L", "fixed_R"):
            arr = getattr(self, name)
            arr = np.zeros(shape, dtype=bool) if arr is None else np.asarray(arr, dtype=bool)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            setattr(self, name, arr)
        for name in ("values_L", "values_R"):
            arr = getattr(self, name)
            arr = np.zeros(shape) if arr is None else np.asarray(arr, dtype=np.float64)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            setattr(self, name, arr)

    @property
    def free(self) -> np.ndarray:
        return ~np.concatenate([self.fixed_L.ravel(), self.fixed_R.ravel()])

    def settings(self) -> dict:
        return {
            "seed": self.seed,
            "max_iter": self.max_iter,
            "threshold": self.threshold,
            "init": f"uniform[-{self.init_scale}, {self.init_scale}]",
            "damping": self.damping,
            "round_tol": self.round_tol,
            "n_fixed": int((~self.free).sum()),
        }

    def with_seed(self, seed: int) -> "SolveProblem":
        return SolveProblem(
            self.N, self.d, self.fixed_L, self.fixed_R, self.values_L, self.values_R,
            seed, self.max_iter, self.threshold, self.init_scale, self.damping, self.round_tol,
        )


@dataclass
class SolveReport:
    final_cost: float
    iterations: int
    iterate: GardenRep
    rounded: GardenRep | None
    verified: bool
    converged: bool
    stop_reason: str
    trace: list[float] = field(default_factory=list)
    settings: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self, include_trace: bool = False) -> dict:
        out = {
            "final_cost": self.final_cost,
            "iterations": self.iterations,
            "converged": self.converged,
            "verified": self.verified,
            "stop_reason": self.stop_reason,
            "seconds": self.seconds,
            "settings": self.settings,
            "iterate": self.iterate.to_json(),
            "rounded": None if self.rounded is None else self.rounded.to_json(),
        }
        if include_trace:
            out["trace"] = self.trace
        return out


def problem_from_mask(obj, **kwargs) -> SolveProblem:
    """Problem from the mask JSON: the garden matrix format plus
    ``"fixed": {"L": grid, "R": grid}`` of booleans (true = held fixed)."""
    if not isinstance(obj, dict):
        obj = json.loads(Path(obj).read_text())
    values_L = np.asarray(obj["L"], dtype=np.float64)
    values_R = np.asarray(obj["R"], dtype=np.float64)
    fixed = obj.get("fixed", {})
    n, d = values_L.shape[0], values_L.shape[1]
    if obj.get("N", n) != n or obj.get("d", d) != d:
        raise ValueError("mask N/d do not match the matrices")
    return SolveProblem(
        n, d,
        fixed_L=np.asarray(fixed.get("L", np.zeros_like(values_L)), dtype=bool),
        fixed_R=np.asarray(fixed.get("R", np.zeros_like(values_R)), dtype=bool),
        values_L=values_L,
        values_R=values_R,
        **kwargs,
    )


def _split(x: np.ndarray, n: int, d: int):
    half = n * d * d
    return x[:half].reshape(n, d, d), x[half:].reshape(n, d, d)


def minimize(p: SolveProblem) -> SolveReport:
    """Run the damped Gauss-Newton search from the seeded start point."""
    start = time.perf_counter()
    n, d = p.N, p.d
    rng = np.random.default_rng(p.seed)
    x = rng.uniform(-p.init_scale, p.init_scale, size=2 * n * d * d)
    fixed_values = np.concatenate([p.values_L.ravel(), p.values_R.ravel()])
    free = p.free
    x[~free] = fixed_values[~free]

    def residual(v):
        L, R = _split(v, n, d)
        return kernels.residual_vector(L, R)

    r = residual(x)
    c = float(r @ r)
    trace = [c]
    lam, nu = None, 2.0
    stop = "max_iter"
    it = 0
    while it < p.max_iter:
        if c <= p.threshold:
            stop = "threshold"
            break
        if not free.any():
            stop = "no_free_entries"
            break
        J = kernels.jacobian(*_split(x, n, d))[:, free]
        g = J.T @ r
        A = J.T @ J
        if lam is None:
            lam = p.damping * max(float(np.max(np.diag(A))), 1e-12)
        accepted = False
        while lam < 1e20:
            try:
                step = np.linalg.solve(A + lam * np.eye(A.shape[0]), -g)
            except np.linalg.LinAlgError:
                lam *= nu
                nu *= 2.0
                continue
            trial = x.copy()
            trial[free] += step
            r_new = residual(trial)
            c_new = float(r_new @ r_new)
            predicted = float(step @ (lam * step - g))
            if c_new < c and predicted > 0:
                rho = (c - c_new) / predicted
                lam *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
                nu = 2.0
                accepted = True
                break
            lam *= nu
            nu *= 2.0
        if not accepted:
            # gradient-descent fallback with backtracking
            gnorm = float(np.linalg.norm(g))
            alpha = 1.0 / max(gnorm, 1e-300)
            while alpha * gnorm > 1e-16:
                trial = x.copy()
                trial[free] -= alpha * g
                r_new = residual(trial)
                c_new = float(r_new @ r_new)
                if c_new < c:
                    accepted = True
                    lam = p.damping * max(float(np.max(np.diag(A))), 1e-12)
                    nu = 2.0
                    break
                alpha *= 0.5
        if not accepted:
            stop = "stalled"
            break
        x, r, c = trial, r_new, c_new
        trace.append(c)
        it += 1
    else:
        if c <= p.threshold:
            stop = "threshold"

    L, R = _split(x, n, d)
    iterate = GardenRep(L.copy(), R.copy())
    converged = c <= p.threshold
    rounded = round_and_verify(iterate, p.round_tol)
    return SolveReport(
        final_cost=c,
        iterations=it,
        iterate=iterate,
        rounded=rounded,
        verified=rounded is not None,
        converged=converged,
        stop_reason=stop,
        trace=trace,
        settings=p.settings(),
        seconds=time.perf_counter() - start,
    )


def round_and_verify(rep: GardenRep, tol: float = 1e-6) -> GardenRep | None:
    """Snap a float iterate to signed permutations and verify exactly.

    Returns the exact rep (``R_I = L_I^T``) when every ``L_I`` and ``R_I`` is
    within ``tol`` of a signed permutation matrix with ``R_I = L_I^T`` and the
    rounded tuple has residual exactly zero; otherwise ``None``.
    """
    mats = []
    try:
        for Lm, Rm in zip(rep.L, rep.R):
            sp_l = decompose_sp(Lm, tol)
            m = sp_l.to_matrix()
            if np.max(np.abs(np.asarray(Rm, dtype=np.float64) - m.T)) > tol:
                return None
            mats.append(m)
    except NotSignedPermutation:
        return None
    L = np.stack(mats)
    exact = GardenRep(L, L.transpose(0, 2, 1).copy(), rep.bosons, rep.fermions)
    if garden_residual(exact) != 0:
        return None
    return GardenRep(exact.L, exact.R, rep.bosons, rep.fermions, verified=True)


def _minimize(p: SolveProblem) -> SolveReport:
    return minimize(p)


def solve_batch(p: SolveProblem, seeds, jobs: int = 1) -> list[SolveReport]:
    """One report per seed, in seed order; seeds run in parallel when ``jobs > 1``."""
    problems = [p.with_seed(int(s)) for s in seeds]
    if jobs <= 1:
        return [minimize(q) for q in problems]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_minimize, problems))


def trace_csv(reports: list[SolveReport]) -> str:
    lines = ["seed,iteration,cost"]
    for rep in reports:
        seed = rep.settings.get("seed", 0)
        lines.extend(f"{seed},{k},{c:.17g}" for k, c in enumerate(rep.trace))
    return "\n".join(lines) + "\n"
