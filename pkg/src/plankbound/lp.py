"""Dense two-phase simplex and the LP-backed queries on V-polytopes.

Problems are in standard form::

    maximize    c @ x
    subject to  A @ x == b,  x >= 0

The solver keeps a full tableau and pivots by Bland's rule, which is slow
in the worst case but deterministic and cycle-free.  Instance sizes here are
a few hundred columns by fewer than a dozen rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numba import njit

from .geometry import Polytope, SymmetricBody, as_direction, as_point

REDUCED_COST_TOL = 1e-10
FEASIBILITY_TOL = 1e-9
PIVOT_TOL = 1e-11

Status = Literal["optimal", "infeasible", "unbounded"]


class LpError(RuntimeError):
    """The simplex kernel could not produce a trustworthy answer."""


class LpIterationLimit(LpError):
    pass


@dataclass(frozen=True)
class LpProblem:
    objective: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        A = np.atleast_2d(np.asarray(self.A_eq, dtype=float))
        b = np.asarray(self.b_eq, dtype=float).ravel()
        if A.shape != (b.size, c.size):
            raise ValueError(
                f"constraint matrix has shape {A.shape}, expected ({b.size}, {c.size})"
            )
        if not (np.isfinite(c).all() and np.isfinite(A).all() and np.isfinite(b).all()):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A_eq", A)
        object.__setattr__(self, "b_eq", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A_eq.shape


@dataclass(frozen=True)
class LpSolution:
    status: Status
    value: float = float("nan")
    x: np.ndarray | None = field(default=None, repr=False)
    pivots: int = 0


_OPTIMAL, _INFEASIBLE, _UNBOUNDED, _LIMIT = 0, 1, 2, 3
_STATUS = {_OPTIMAL: "optimal", _INFEASIBLE: "infeasible", _UNBOUNDED: "unbounded"}


@njit(cache=True)
def _pivot(T, row, col):
    rows, cols = T.shape
    inv = 1.0 / T[row, col]
    for j in range(cols):
        T[row, j] *= inv
    for i in range(rows):
        if i != row:
            f = T[i, col]
            if f != 0.0:
                for j in range(cols):
                    T[i, j] -= f * T[row, j]


@njit(cache=True)
def _run_simplex(T, basis, ncols, budget):
    """Bland-rule pivoting on a tableau whose last row holds reduced costs
    (maximisation).  Returns (status, pivots used)."""
    m = T.shape[0] - 1
    last = T.shape[1] - 1
    used = 0
    while True:
        col = -1
        for j in range(ncols):
            if T[m, j] > REDUCED_COST_TOL:
                col = j
                break
        if col < 0:
            return _OPTIMAL, used
        best = np.inf
        for i in range(m):
            if T[i, col] > PIVOT_TOL:
                ratio = T[i, last] / T[i, col]
                if ratio < best:
                    best = ratio
        if best == np.inf:
            return _UNBOUNDED, used
        tie = best + 1e-12 * max(1.0, abs(best))
        row = -1
        for i in range(m):
            if T[i, col] > PIVOT_TOL and T[i, last] / T[i, col] <= tie:
                if row < 0 or basis[i] < basis[row]:
                    row = i
        if used >= budget:
            return _LIMIT, used
        _pivot(T, row, col)
        basis[row] = col
        used += 1


@njit(cache=True)
def _two_phase(A, b, c, budget):
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    for i in range(m):
        T[i, n + i] = 1.0
        T[i, n + m] = b[i]
    for j in range(n):
        T[m, j] = A[:, j].sum()
    # the corner cell holds minus the objective value
    T[m, n + m] = b.sum()
    basis = np.arange(n, n + m)
    # phase 1 may only bring structural columns into the basis
    status, used = _run_simplex(T, basis, n, budget)
    keep = np.zeros(m, dtype=np.bool_)
    if status == _LIMIT:
        return status, basis, keep, np.zeros(0), used
    scale = 1.0
    for i in range(m):
        scale = max(scale, abs(b[i]))
    if T[m, n + m] > FEASIBILITY_TOL * scale:
        return _INFEASIBLE, basis, keep, np.zeros(0), used

    # drive leftover artificials out; rows that cannot be cleared are redundant
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(T[i, j]) > 1e-9:
                    _pivot(T, i, j)
                    basis[i] = j
                    used += 1
                    break
        keep[i] = basis[i] < n
    idx = np.flatnonzero(keep)
    k = idx.size
    T2 = np.zeros((k + 1, n + 1))
    basis2 = np.empty(k, dtype=np.int64)
    for r in range(k):
        T2[r, :n] = T[idx[r], :n]
        T2[r, n] = T[idx[r], n + m]
        basis2[r] = basis[idx[r]]
    for j in range(n):
        acc = c[j]
        for r in range(k):
            acc -= c[basis2[r]] * T2[r, j]
        T2[k, j] = acc
    z = 0.0
    for r in range(k):
        z += c[basis2[r]] * T2[r, n]
    T2[k, n] = -z
    status, more = _run_simplex(T2, basis2, n, budget - used)
    return status, basis2, keep, T2[:k, n].copy(), used + more


def solve_lp(problem: LpProblem) -> LpSolution:
    """Solve ``problem`` by two-phase dense simplex with Bland's rule.

    Raises
    ------
    LpIterationLimit
        If more than ``10 * (rows + cols) ** 2`` pivots are needed.
    """
    A = problem.A_eq.copy()
    b = problem.b_eq.copy()
    c = problem.objective
    m, n = A.shape
    budget = 10 * (m + n) ** 2
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    status, basis, keep, xb, used = _two_phase(A, b, c, budget)
    if status == _LIMIT:
        raise LpIterationLimit(f"simplex exceeded {budget} pivots")
    if status != _OPTIMAL:
        return LpSolution(_STATUS[status], pivots=used)

    x = np.zeros(n)
    x[basis] = xb
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    residual = np.abs(A @ x - b).max(initial=0.0)
    # recompute basic values from the original data to shed tableau drift
    if basis.size:
        try:
            xb2 = np.linalg.solve(A[np.ix_(keep, basis)], b[keep])
        except np.linalg.LinAlgError:
            xb2 = None
        if xb2 is not None and np.isfinite(xb2).all():
            trial = np.zeros(n)
            trial[basis] = xb2
            r2 = np.abs(A @ trial - b).max(initial=0.0)
            if r2 <= residual:
                x, residual = trial, r2
    if residual > FEASIBILITY_TOL * scale:
        raise LpError(f"optimal basis violates constraints by {residual:.3g}")
    return LpSolution("optimal", float(c @ x), x, used)


# -- queries on V-polytopes -------------------------------------------------

@dataclass(frozen=True)
class Membership:
    inside: bool
    weights: np.ndarray | None = None


def membership(body: Polytope, p) -> Membership:
    """Decide ``p in conv(body.vertices)`` by LP feasibility.

    When inside, ``weights`` is a convex-combination witness.
    """
    p = as_point(p, body.dim)
    V = body.vertices
    n = V.shape[0]
    A = np.vstack([V.T, np.ones((1, n))])
    b = np.append(p, 1.0)
    sol = solve_lp(LpProblem(np.zeros(n), A, b))
    if sol.status != "optimal":
        return Membership(False)
    return Membership(True, sol.x)


def radial(body: SymmetricBody, u) -> float:
    """Largest ``t >= 0`` with ``t * u`` in the body."""
    u = as_direction(u, body.dim)
    V = body.vertices
    n = V.shape[0]
    A = np.zeros((body.dim + 1, n + 1))
    A[:-1, :n] = V.T
    A[:-1, n] = -u
    A[-1, :n] = 1.0
    b = np.zeros(body.dim + 1)
    b[-1] = 1.0
    c = np.zeros(n + 1)
    c[n] = 1.0
    sol = solve_lp(LpProblem(c, A, b))
    if sol.status != "optimal":
        raise LpError(f"radial LP returned {sol.status}")
    return sol.value


def chord_length(body: Polytope, u) -> float:
    """Length of the longest chord of the body parallel to ``u``.

    Solved as one LP over two blocks of barycentric coordinates, ``x`` and
    ``y``, with ``x - y = t * u``.
    """
    u = as_direction(u, body.dim)
    V = body.vertices
    n, d = V.shape
    A = np.zeros((d + 2, 2 * n + 1))
    A[:d, :n] = V.T
    A[:d, n:2 * n] = -V.T
    A[:d, 2 * n] = -u
    A[d, :n] = 1.0
    A[d + 1, n:2 * n] = 1.0
    b = np.zeros(d + 2)
    b[d:] = 1.0
    c = np.zeros(2 * n + 1)
    c[-1] = 1.0
    sol = solve_lp(LpProblem(c, A, b))
    if sol.status != "optimal":
        raise LpError(f"chord LP returned {sol.status}")
    return sol.value
