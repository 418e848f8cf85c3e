"""John position for origin-symmetric polytopes via the Lowner ellipsoid.

The minimum-volume enclosing ellipsoid ``E = {x : x^T A x <= 1}`` of a
symmetric body ``L`` satisfies ``E / sqrt(d) <= L <= E``.  Mapping ``E`` onto
the ball of radius ``sqrt(d)`` therefore puts ``L`` between the unit ball
and ``sqrt(d)`` times it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError, SymmetricBody, affine_rank, dedupe
from .lp import radial
from .parallel import parallel_map
from .sphere import multistart_minimize, SearchConfig, sphere_points

DEFAULT_EPS = 1e-7
INNER_FAILURE = 1e-4
OUTER_SLACK = 1e-6


class MveeError(RuntimeError):
    pass


class JohnCertificateError(RuntimeError):
    """Normalisation finished but the sandwich could not be certified."""


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Centered ellipsoid ``{x : x^T A x <= 1}``."""

    A: np.ndarray
    weights: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("shape matrix must be square")
        if np.abs(A - A.T).max() > 1e-12 * max(1.0, np.abs(A).max()):
            raise ValueError("shape matrix must be symmetric")
        A = (A + A.T) / 2.0
        if np.linalg.eigvalsh(A)[0] <= 0:
            raise ValueError("shape matrix must be positive definite")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def norms(self, points) -> np.ndarray:
        """``p^T A p`` for each row."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        return np.einsum("ij,jk,ik->i", P, self.A, P)


def _scatter_norms(Q, u):
    M = Q.T @ (u[:, None] * Q)
    Minv = np.linalg.inv(M)
    Minv = (Minv + Minv.T) / 2.0
    return Minv, np.einsum("ij,jk,ik->i", Q, Minv, Q)


def mvee(points, eps: float = DEFAULT_EPS, max_iter: int | None = None) -> Ellipsoid:
    """Minimum-volume centered ellipsoid enclosing a negation-closed point set.

    Multiplicative-weights (Khachiyan) iteration with Todd-Yildirim away
    steps.  Stops once every Mahalanobis norm ``p^T M^{-1} p`` is at most
    ``d (1 + eps)``, where ``M`` is the weighted scatter matrix; the result
    ``A = M^{-1} / d`` then has volume within ``(1 + eps)^d`` of optimal.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    P = np.asarray(points, dtype=float)
    d = P.shape[1]
    if affine_rank(np.vstack([np.zeros(d), P])) < d:
        raise MveeError("points do not span the space")
    # p and -p contribute the same rank-one term; keep one of each pair
    Q = P[np.abs(P).max(axis=1) > 0]
    lead = np.argmax(np.abs(Q) > 1e-12, axis=1)
    Q = np.where((Q[np.arange(len(Q)), lead] < 0)[:, None], -Q, Q)
    Q = dedupe(Q)
    n = Q.shape[0]
    cap = max_iter if max_iter is not None else int(math.ceil(100 * d / eps))

    u = np.full(n, 1.0 / n)
    target = d * (1.0 + eps)
    it = 0
    while True:
        Minv, g = _scatter_norms(Q, u)
        j = int(g.argmax())
        if g[j] <= target:
            break
        if it >= cap:
            raise MveeError(f"no convergence after {cap} iterations (max norm {g[j]:.6g})")
        active = np.flatnonzero(u > 0)
        k = int(active[g[active].argmin()])
        if g[j] / d - 1.0 >= 1.0 - g[k] / d or u[k] >= 1.0:
            tau = (g[j] - d) / (d * (g[j] - 1.0))
            u *= 1.0 - tau
            u[j] += tau
        else:
            floor = -u[k] / (1.0 - u[k])
            tau = floor if g[k] <= 1.0 else max((g[k] - d) / (d * (g[k] - 1.0)), floor)
            u *= 1.0 - tau
            u[k] += tau
            if tau == floor:
                u[k] = 0.0
        u = np.maximum(u, 0.0)
        u /= u.sum()
        it += 1

    # independent re-check of the stopping rule on the final weights
    Minv, g = _scatter_norms(Q, u)
    if g.max() > target * (1.0 + 1e-12):
        raise MveeError("stopping criterion does not hold on re-check")
    return Ellipsoid(Minv / d, weights=u, iterations=it)


def _principal_sqrt(A: np.ndarray) -> np.ndarray:
    lam, Q = np.linalg.eigh(A)
    if lam[0] <= 1e-12 * lam[-1]:
        raise MveeError("ellipsoid is numerically degenerate")
    return (Q * np.sqrt(lam)) @ Q.T


@dataclass(frozen=True, eq=False)
class JohnNormalization:
    transform: np.ndarray
    body: SymmetricBody
    inner: float
    outer: float
    ellipsoid: Ellipsoid = field(repr=False)

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def certified(self) -> bool:
        return (self.inner >= 1.0 - INNER_FAILURE
                and self.outer <= math.sqrt(self.dim) * (1.0 + OUTER_SLACK))


def _verify_directions(d: int, n: int) -> np.ndarray:
    E = np.eye(d)
    return np.vstack([E, -E, sphere_points(d, n)])


def verify_john(body: SymmetricBody, directions: int | None = None,
                refinements: int = 2) -> tuple[float, float]:
    """Certify ``inner * B <= body <= outer * B``.

    ``outer`` is the largest vertex norm and is exact.  ``inner`` is the
    minimum of the radial function over coordinate directions plus a
    low-discrepancy set, followed by a few local refinements; it is an
    upper estimate of the in-radius, accurate when the search converges.
    """
    from .geometry import prune_to_hull

    d = body.dim
    n = directions if directions is not None else 64 * d
    outer = float(np.linalg.norm(body.vertices, axis=1).max())
    hull = prune_to_hull(body)
    U = _verify_directions(d, n)

    def rho(u):
        return radial(hull, u)

    values = np.array(parallel_map(rho, list(U)))
    order = np.lexsort((np.arange(len(values)), values))
    spacing = len(U) ** (-1.0 / (d - 1))
    cfg = SearchConfig(refinements=refinements, step=0.5 * spacing, fatol=1e-8)
    _, inner = multistart_minimize(rho, U[order[:max(refinements, 1)]], cfg)
    inner = min(inner, float(values.min()))
    return inner, outer


def john_normalize(body: SymmetricBody, eps: float = DEFAULT_EPS,
                   directions: int | None = None, check: bool = True) -> JohnNormalization:
    """Linear map ``T`` putting ``body`` in John position, with certificate.

    ``T = sqrt(d) * A^{1/2}`` for the Lowner ellipsoid ``{x^T A x <= 1}``.

    Raises
    ------
    JohnCertificateError
        If ``check`` is set and the certified inner radius falls below
        ``1 - 1e-4``.
    """
    if not isinstance(body, SymmetricBody):
        raise GeometryError("John normalisation needs an origin-symmetric body")
    d = body.dim
    E = mvee(body.vertices, eps)
    T = math.sqrt(d) * _principal_sqrt(E.A)
    normalized = SymmetricBody(body.vertices @ T.T)
    inner, outer = verify_john(normalized, directions)
    if check and inner < 1.0 - INNER_FAILURE:
        raise JohnCertificateError(
            f"inner radius {inner:.9g} below {1 - INNER_FAILURE}; mvee eps {eps} too loose?"
        )
    return JohnNormalization(T, normalized, inner, outer, E)
