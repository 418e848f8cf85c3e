"""Deterministic direction sets and local search on the unit sphere."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm, qmc


@dataclass(frozen=True)
class SearchConfig:
    """Budget for a multistart search over directions.

    ``seeds`` of None means a dimension-dependent default chosen by the
    caller (see ``resolve_seeds``).
    """

    seeds: int | None = None
    refinements: int = 64
    fatol: float = 1e-9
    maxiter: int = 500
    step: float = 0.05

    def __post_init__(self):
        if self.seeds is not None and self.seeds < 1:
            raise ValueError("seeds must be positive")
        if self.refinements < 0 or self.maxiter < 1:
            raise ValueError("refinements must be >= 0 and maxiter >= 1")
        if not self.fatol > 0 or not self.step > 0:
            raise ValueError("fatol and step must be positive")

    @classmethod
    def for_width(cls) -> "SearchConfig":
        return cls(step=0.1)

    def resolve_seeds(self, d: int) -> int:
        return self.seeds if self.seeds is not None else 4096 * d


def sphere_points(d: int, n: int, seed: int = 0) -> np.ndarray:
    """``n`` low-discrepancy unit vectors in R^d.

    Equally spaced angles in the plane; elsewhere a scrambled Halton
    sequence pushed through the Gaussian quantile and normalised.
    """
    if n < 1:
        return np.empty((0, d))
    if d == 2:
        theta = 2.0 * math.pi * (np.arange(n) + 0.5) / n
        return np.column_stack([np.cos(theta), np.sin(theta)])
    H = qmc.Halton(d, scramble=True, seed=seed).random(n)
    G = norm.ppf(np.clip(H, 1e-12, 1 - 1e-12))
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def tangent_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to ``u`` (as columns)."""
    d = u.size
    Q, _ = np.linalg.qr(np.column_stack([u, np.eye(d)]))
    return Q[:, 1:d]


def refine_on_sphere(f, u0, step=0.05, fatol=1e-9, maxiter=500):
    """Nelder-Mead on the chart ``z -> (u0 + E z) / |u0 + E z|``.

    Returns the best unit vector found and its value.  Never worse than
    ``u0``.
    """
    u0 = np.asarray(u0, dtype=float)
    u0 = u0 / np.linalg.norm(u0)
    E = tangent_basis(u0)
    k = E.shape[1]

    def chart(z):
        v = u0 + E @ z
        return v / np.linalg.norm(v)

    def g(z):
        return f(chart(z))

    simplex0 = np.vstack([np.zeros(k), step * np.eye(k)])
    res = minimize(g, np.zeros(k), method="Nelder-Mead",
                   options={"initial_simplex": simplex0, "fatol": fatol,
                            "xatol": 1e-10, "maxiter": maxiter})
    u = chart(res.x)
    fu = f(u)
    f0 = f(u0)
    if f0 <= fu:
        return u0, f0
    return u, fu


def best_of(results):
    """Minimum value; ties go to the lexicographically smallest direction."""
    return min(results, key=lambda r: (r[1], tuple(r[0])))


def multistart_minimize(f, seeds: np.ndarray, config: SearchConfig):
    """Evaluate ``f`` on every seed, then refine the best ``config.refinements``."""
    values = np.array([f(u) for u in seeds])
    order = np.lexsort((np.arange(len(values)), values))
    results = [(seeds[i], float(values[i])) for i in order[:1]]
    for i in order[:config.refinements]:
        results.append(refine_on_sphere(f, seeds[i], step=config.step,
                                        fatol=config.fatol, maxiter=config.maxiter))
    return best_of(results)
