"""Planks, relative widths, and plank covers of polytopes.

A plank with unit normal ``u``, translation ``t`` and width ``w`` is the
closed set ``{x : |<x, u> - t| <= w / 2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.stats import qmc

from .geometry import (GeometryError, Polytope, as_direction, as_point, support,
                       width_in_direction)
from .lp import chord_length, membership


class CoverError(RuntimeError):
    pass


class NoSamplesInBody(CoverError):
    """Rejection sampling from the bounding box never landed inside the body."""


@dataclass(frozen=True, eq=False)
class Plank:
    normal: np.ndarray
    translation: float
    width: float

    def __post_init__(self):
        u = as_direction(self.normal)
        u.setflags(write=False)
        t, w = float(self.translation), float(self.width)
        if not (math.isfinite(t) and math.isfinite(w)):
            raise GeometryError("plank translation and width must be finite")
        if w < 0:
            raise GeometryError(f"plank width must be non-negative, got {w}")
        object.__setattr__(self, "normal", u)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "width", w)

    @property
    def dim(self) -> int:
        return self.normal.size

    def excess(self, X) -> np.ndarray:
        """``|<x, u> - t| - w/2``: positive exactly outside the plank."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.abs(X @ self.normal - self.translation) - self.width / 2.0

    def contains(self, x) -> bool:
        return bool(self.excess(x)[0] <= 0.0)

    def __eq__(self, other):
        if not isinstance(other, Plank):
            return NotImplemented
        return (np.array_equal(self.normal, other.normal)
                and self.translation == other.translation and self.width == other.width)

    __hash__ = None


def relative_width(p: Plank, body: Polytope) -> float:
    return p.width / width_in_direction(body, p.normal)


def total_relative_width(planks: Sequence[Plank], body: Polytope) -> float:
    return math.fsum(relative_width(p, body) for p in planks)


def bang_functional(planks: Sequence[Plank], body: Polytope) -> float:
    """Sum of plank widths divided by the chord length along each normal."""
    return math.fsum(p.width / chord_length(body, p.normal) for p in planks)


def transform_plank(p: Plank, S, c=None) -> Plank:
    """The image plank ``{S x + c : x in p}``."""
    S = np.asarray(S, dtype=float)
    d = p.dim
    if S.shape != (d, d):
        raise GeometryError(f"map must be {d}x{d}")
    c = np.zeros(d) if c is None else as_point(c, d)
    if np.array_equal(S, np.eye(d)) and not c.any():
        return p
    try:
        n = np.linalg.solve(S.T, p.normal)
    except np.linalg.LinAlgError:
        raise GeometryError("plank map is singular") from None
    s = float(np.linalg.norm(n))
    if not np.isfinite(s) or s == 0.0:
        raise GeometryError("plank map is singular")
    return Plank(n / s, (p.translation + float(c @ n)) / s, p.width / s)


def slab_cover(body: Polytope, u, m: int) -> list[Plank]:
    """Partition the body's extent along ``u`` into ``m`` equal slabs."""
    if m < 1:
        raise ValueError("need at least one slab")
    u = as_direction(u, body.dim)
    lo = -support(body, -u)
    hi = support(body, u)
    w = (hi - lo) / m
    return [Plank(u, lo + (k + 0.5) * w, w) for k in range(m)]


# -- cover verification ---------------------------------------------------

@dataclass(frozen=True)
class VerifyConfig:
    n: int | None = None
    rounds: int = 3
    tol: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError("sample count must be positive")
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    def samples(self, d: int) -> int:
        return self.n if self.n is not None else 20000 * d


@dataclass(frozen=True, eq=False)
class CoverVerdict:
    status: Literal["covered", "counterexample"]
    margin: float
    witness: np.ndarray | None = None
    points_tested: int = 0
    rounds: int = 0
    weights: np.ndarray | None = field(default=None, repr=False)

    @property
    def covered(self) -> bool:
        return self.status == "covered"


def margin(planks: Sequence[Plank], X) -> np.ndarray:
    """Per-point minimum over planks of the excess; positive means uncovered."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    U = np.array([p.normal for p in planks])
    t = np.array([p.translation for p in planks])
    half = np.array([p.width for p in planks]) / 2.0
    return (np.abs(X @ U.T - t) - half).min(axis=1)


class _HullTest:
    """Fast approximate membership from qhull facets, for sampling only."""

    def __init__(self, body: Polytope):
        from scipy.spatial import ConvexHull

        hull = ConvexHull(body.vertices)
        self.normals = hull.equations[:, :-1]
        self.offsets = hull.equations[:, -1]
        scale = float(np.abs(body.vertices).max())
        self.slack = 1e-12 * max(1.0, scale)

    def __call__(self, X) -> np.ndarray:
        return (X @ self.normals.T + self.offsets <= -self.slack).all(axis=1)


def _candidates(body: Polytope, n: int, seed: int, inside) -> tuple[np.ndarray, int]:
    V = body.vertices
    d = body.dim
    lo, hi = V.min(axis=0), V.max(axis=0)
    box = qmc.scale(qmc.Halton(d, scramble=True, seed=seed).random(n), lo, hi)
    box = box[inside(box)]
    if len(box) == 0:
        raise NoSamplesInBody(f"none of {n} bounding-box samples landed inside the body")
    i, j = np.triu_indices(len(V), k=1)
    mids = (V[i] + V[j]) / 2.0
    return np.vstack([box, V, mids]), len(box)


def _ascend(x, f, inside, step, min_step):
    """Coordinate ascent on ``f`` within the body, halving the step."""
    fx = f(x[None])[0]
    d = x.size
    moves = np.vstack([np.eye(d), -np.eye(d)])
    while step >= min_step:
        trial = x + step * moves
        ok = inside(trial)
        if ok.any():
            vals = np.where(ok, f(trial), -np.inf)
            k = int(vals.argmax())
            if vals[k] > fx:
                x, fx = trial[k], vals[k]
                continue
        step /= 2.0
    return x, fx


def covers(planks: Sequence[Plank], body: Polytope, cfg: VerifyConfig | None = None) -> CoverVerdict:
    """Search for a point of the body outside every plank.

    One-sided: a ``counterexample`` carries a witness checked by LP
    membership and direct plank arithmetic; ``covered`` only means the
    search found nothing beyond ``cfg.tol``.
    """
    if not planks:
        raise ValueError("need at least one plank")
    cfg = cfg or VerifyConfig()
    d = body.dim
    for p in planks:
        if p.dim != d:
            raise GeometryError("plank and body dimensions differ")

    inside = _HullTest(body)
    X, n_box = _candidates(body, cfg.samples(d), cfg.seed, inside)
    f = lambda Y: margin(planks, Y)  # noqa: E731
    values = f(X)
    tested = len(X)

    diam = float(np.ptp(body.vertices, axis=0).max())
    # largest margins first, ties broken by sample index
    top = np.lexsort((np.arange(len(values)), -values))[:8]
    pool = [(float(values[i]), X[i]) for i in top]
    for r in range(cfg.rounds):
        step = diam * 0.05 / 2 ** r
        refined = []
        for v, x in pool:
            if inside(x[None])[0]:
                y, fy = _ascend(x, f, inside, step, step * 1e-6)
                tested += 1
                refined.append((float(fy), y))
            else:
                refined.append((v, x))
        pool = sorted(refined, key=lambda r: -r[0])

    for v, x in pool:
        if v <= cfg.tol:
            break
        check = membership(body, x)
        exact = float(margin(planks, x)[0])
        if check.inside and exact > cfg.tol:
            return CoverVerdict("counterexample", exact, x, tested, cfg.rounds, check.weights)
    vetted = [v for v, _ in pool if v <= cfg.tol] or [float(values[values <= cfg.tol].max(initial=-np.inf))]
    return CoverVerdict("covered", vetted[0], None, tested, cfg.rounds)
