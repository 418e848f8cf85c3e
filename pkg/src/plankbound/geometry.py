"""Vertex-represented convex polytopes and their support data.

Bodies are stored as immutable ``(n, d)`` float arrays.  Every quantity in
this module is evaluated exactly at the vertices: the maximum of a linear
functional over a polytope is attained at one of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-12
DEDUPE_TOL = 1e-12
SYMMETRY_TOL = 1e-12
RANK_TOL = 1e-9


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class DegenerateBody(GeometryError):
    """The vertex set does not span the ambient space."""


def as_point(p, dim: int | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if not np.isfinite(p).all():
        raise GeometryError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.size}")
    return p


def as_direction(u, dim: int | None = None) -> np.ndarray:
    u = as_point(u, dim)
    if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise GeometryError(f"direction is not a unit vector (norm {np.linalg.norm(u)!r})")
    return u


def normalize(x) -> np.ndarray:
    x = as_point(x)
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        raise GeometryError("cannot normalize the zero vector")
    return x / nrm


def dedupe(points: np.ndarray, tol: float = DEDUPE_TOL) -> np.ndarray:
    """Drop points within ``tol`` (max-norm) of an earlier point, keeping order."""
    if len(points) < 2:
        return points
    # exact duplicates first; cheap and usually the bulk of the work
    _, first = np.unique(points, axis=0, return_index=True)
    pts = points[np.sort(first)]
    keep = np.ones(len(pts), dtype=bool)
    for i in range(len(pts)):
        if not keep[i]:
            continue
        close = np.abs(pts[i + 1:] - pts[i]).max(axis=1) <= tol
        keep[i + 1:] &= ~close
    return pts[keep]


def affine_rank(points: np.ndarray) -> int:
    diffs = points - points[0]
    if len(points) < 2:
        return 0
    s = np.linalg.svd(diffs, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_TOL * s[0]))


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of a finite, full-dimensional point set in R^d, d >= 2."""

    vertices: np.ndarray

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] == 0:
            raise GeometryError("vertices must be a nonempty list of points")
        if V.shape[1] < 2:
            raise GeometryError(f"dimension must be at least 2, got {V.shape[1]}")
        if not np.isfinite(V).all():
            raise GeometryError("vertex coordinates must be finite")
        V = dedupe(V)
        if affine_rank(V) < V.shape[1]:
            raise DegenerateBody("not full-dimensional: vertex differences are rank deficient")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        self._check()

    def _check(self):
        pass

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def transformed(self, S, c=None) -> "Polytope":
        """Image under ``x -> S @ x + c``."""
        S = np.asarray(S, dtype=float)
        V = self.vertices @ S.T
        if c is not None:
            V = V + as_point(c, self.dim)
        return Polytope(V)


@dataclass(frozen=True, eq=False)
class SymmetricBody(Polytope):
    """Origin-symmetric polytope; the vertex list is closed under negation."""

    def _check(self):
        V = self.vertices
        for start in range(0, len(V), 256):
            block = V[start:start + 256]
            gap = np.abs(block[:, None, :] + V[None, :, :]).max(axis=2).min(axis=1)
            if gap.max() > SYMMETRY_TOL:
                bad = block[int(gap.argmax())]
                raise GeometryError(f"vertex set is not closed under negation (missing -{bad.tolist()})")

    def transformed(self, S, c=None) -> "Polytope":
        if c is not None and np.any(np.asarray(c) != 0):
            return super().transformed(S, c)
        S = np.asarray(S, dtype=float)
        return SymmetricBody(self.vertices @ S.T)


def support_raw(body: Polytope, x) -> float:
    """max <v, x> over vertices for an arbitrary (not necessarily unit) vector."""
    x = as_point(x, body.dim)
    return float((body.vertices @ x).max())


def support_point(body: Polytope, u) -> tuple[int, float]:
    """Index of the first vertex attaining the support value, and the value."""
    u = as_direction(u, body.dim)
    values = body.vertices @ u
    i = int(values.argmax())
    return i, float(values[i])


def support(body: Polytope, u) -> float:
    u = as_direction(u, body.dim)
    return float((body.vertices @ u).max())


def width_in_direction(body: Polytope, u) -> float:
    u = as_direction(u, body.dim)
    values = body.vertices @ u
    return float(values.max() - values.min())


def widths(body: Polytope, U: np.ndarray) -> np.ndarray:
    """Vectorised directional widths for the rows of ``U`` (assumed unit)."""
    values = body.vertices @ np.asarray(U, dtype=float).T
    return values.max(axis=0) - values.min(axis=0)


def difference_body(body: Polytope) -> SymmetricBody:
    """The centrally symmetric body (K - K) / 2.

    Candidate vertices are all halved pairwise differences.  Non-extreme
    candidates are kept; each pair contributes both signs so the result is
    negation-closed bit for bit.
    """
    V = body.vertices
    n = V.shape[0]
    i, j = np.triu_indices(n, k=1)
    D = (V[i] - V[j]) / 2.0
    # canonical sign: first coordinate of non-negligible size is positive
    lead = np.argmax(np.abs(D) > DEDUPE_TOL, axis=1)
    flip = D[np.arange(len(D)), lead] < 0
    D[flip] = -D[flip]
    D = dedupe(D)
    return SymmetricBody(np.vstack([D, -D]))


def prune_to_hull(body: Polytope) -> Polytope:
    """Drop non-extreme vertices (qhull); the hull is unchanged."""
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(body.vertices)
    except QhullError:
        return body
    idx = np.sort(hull.vertices)
    V = body.vertices[idx]
    if isinstance(body, SymmetricBody):
        try:
            return SymmetricBody(V)
        except GeometryError:
            return body
    return Polytope(V)


def cube(d: int, lo: float = -1.0, hi: float = 1.0) -> Polytope:
    import itertools

    V = np.array(list(itertools.product((lo, hi), repeat=d)), dtype=float)
    if lo == -hi:
        return SymmetricBody(V)
    return Polytope(V)


def cross_polytope(d: int) -> SymmetricBody:
    E = np.eye(d)
    return SymmetricBody(np.vstack([E, -E]))


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> Polytope:
    angles = phase + 2.0 * math.pi * np.arange(n) / n
    V = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    if n % 2 == 0:
        # make the list exactly negation-closed
        half = V[: n // 2]
        return SymmetricBody(np.vstack([half, -half]))
    return Polytope(V)


def simplex(d: int) -> Polytope:
    return Polytope(np.vstack([np.zeros(d), np.eye(d)]))


# -- minimum width --------------------------------------------------------

def _width_starts(d: int) -> np.ndarray:
    from .sphere import sphere_points

    n_structured = 2 * d * math.ceil(d / 2)
    starts = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        starts += [e, -e]
    s2 = 1.0 / math.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            for sign in (1.0, -1.0):
                v = np.zeros(d)
                v[i], v[j] = s2, sign * s2
                starts.append(v)
    starts = starts[:n_structured]
    return np.vstack([np.array(starts), sphere_points(d, 32)])


def min_width(body: Polytope, search=None) -> tuple[np.ndarray, float]:
    """Approximate minimiser of the directional width over the sphere.

    The returned value is an upper bound on the width of the body and
    always equals ``width_in_direction(body, direction)``.
    """
    from .sphere import SearchConfig, best_of, refine_on_sphere

    search = search or SearchConfig.for_width()
    starts = _width_starts(body.dim)

    def f(u):
        return width_in_direction(body, u)

    results = []
    for u0 in starts:
        u, _ = refine_on_sphere(f, u0, step=search.step, fatol=search.fatol,
                                maxiter=search.maxiter)
        results.append((u, f(u)))
    return best_of(results)
