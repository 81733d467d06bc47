"""Derivative-free minimizers used by the variational solver.

Both methods are self-contained implementations. The default builds a
linear model of the objective on a simplex of n+1 points and steps
against the model gradient within a shrinking trust region; the fallback
is a standard Nelder-Mead simplex search. Convergence requires both the
region size and the recent objective improvement to fall below tol.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ComputeError


@dataclass
class OptimizationResult:
    x: np.ndarray
    fun: float
    n_evals: int
    converged: bool
    history: list[float]


def _checked(fun: Callable, history: list[float]) -> Callable:
    def wrapped(x: np.ndarray) -> float:
        value = float(fun(x))
        if not np.isfinite(value):
            raise ComputeError(f"objective returned non-finite value {value}")
        history.append(value)
        return value

    return wrapped


def minimize_trust_linear(
    fun: Callable,
    x0,
    rhobeg: float = 0.3,
    tol: float = 1e-4,
    max_evals: int = 4000,
) -> OptimizationResult:
    """Linear-approximation trust-region minimizer (unconstrained).

    Maintains a simplex of n+1 points, fits a linear model through it,
    and steps from the best point against the model gradient with step
    length rho. Failed steps shrink rho by half after the simplex has
    been pulled in around the incumbent.
    """
    history: list[float] = []
    f = _checked(fun, history)
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    pts = [x0.copy()]
    vals = [f(x0)]
    for i in range(n):
        e = x0.copy()
        e[i] += rhobeg
        pts.append(e)
        vals.append(f(e))
    rho = rhobeg
    f_at_last_shrink = np.inf
    converged = False
    while len(history) < max_evals:
        order = np.argsort(vals)
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        base, fbase = pts[0], vals[0]
        D = np.array([p - base for p in pts[1:]])
        dF = np.array([v - fbase for v in vals[1:]])
        try:
            g = np.linalg.solve(D, dF)
        except np.linalg.LinAlgError:
            g = np.linalg.lstsq(D, dF, rcond=None)[0]
        gn = np.linalg.norm(g)
        step = np.zeros(n) if gn < 1e-14 else -rho * g / gn
        xnew = base + step
        fnew = f(xnew)
        if fnew < fbase - 1e-12:
            worst = int(np.argmax(vals))
            pts[worst] = xnew
            vals[worst] = fnew
        else:
            # keep simplex geometry bounded before conceding the radius
            dists = [float(np.linalg.norm(p - base)) for p in pts]
            far = int(np.argmax(dists))
            if dists[far] > 2.0 * rho and far != 0:
                if len(history) >= max_evals:
                    break
                pts[far] = base + rho * (pts[far] - base) / dists[far]
                vals[far] = f(pts[far])
                continue
            improvement = f_at_last_shrink - fbase
            f_at_last_shrink = fbase
            rho *= 0.5
            if rho < tol and improvement < tol:
                converged = True
                break
            for i in range(1, len(pts)):
                if len(history) >= max_evals:
                    break
                pts[i] = base + (pts[i] - base) * 0.5
                vals[i] = f(pts[i])
    best = int(np.argmin(vals))
    return OptimizationResult(
        x=pts[best].copy(),
        fun=vals[best],
        n_evals=len(history),
        converged=converged,
        history=history,
    )


def minimize_nelder_mead(
    fun: Callable,
    x0,
    scale: float = 0.1,
    tol: float = 1e-4,
    max_evals: int = 4000,
) -> OptimizationResult:
    """Nelder-Mead simplex search with the standard 1/2/0.5/0.5 moves."""
    history: list[float] = []
    f = _checked(fun, history)
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    simplex = [x0.copy()]
    for i in range(n):
        e = x0.copy()
        e[i] += scale
        simplex.append(e)
    vals = [f(p) for p in simplex]
    converged = False
    while len(history) < max_evals:
        order = np.argsort(vals)
        simplex = [simplex[i] for i in order]
        vals = [vals[i] for i in order]
        size = max(np.linalg.norm(p - simplex[0]) for p in simplex[1:])
        spread = vals[-1] - vals[0]
        if size < tol and spread < tol:
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = f(xr)
        if fr < vals[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = f(xe)
            if fe < fr:
                simplex[-1], vals[-1] = xe, fe
            else:
                simplex[-1], vals[-1] = xr, fr
        elif fr < vals[-2]:
            simplex[-1], vals[-1] = xr, fr
        else:
            xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = f(xc)
            if fc < vals[-1]:
                simplex[-1], vals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    if len(history) >= max_evals:
                        break
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    vals[i] = f(simplex[i])
    best = int(np.argmin(vals))
    return OptimizationResult(
        x=simplex[best].copy(),
        fun=vals[best],
        n_evals=len(history),
        converged=converged,
        history=history,
    )


METHODS = {
    "trust-linear": minimize_trust_linear,
    "nelder-mead": minimize_nelder_mead,
}


def minimize(
    fun: Callable,
    x0,
    method: str = "trust-linear",
    tol: float = 1e-4,
    max_evals: int = 4000,
    **kwargs,
) -> OptimizationResult:
    if method not in METHODS:
        raise ValueError(f"unknown optimizer {method!r}; choose from {sorted(METHODS)}")
    return METHODS[method](fun, x0, tol=tol, max_evals=max_evals, **kwargs)
