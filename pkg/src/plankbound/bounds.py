"""Chord-to-width ratios in John position and certified plank-cover bounds.

For a symmetric body ``B <= L <= sqrt(d) B`` and a unit direction ``u``, take
a support point ``a`` with ``<a, u> = h`` and ``|a| = r``.  In the plane
spanned by ``u`` and ``a`` the tangent from ``a`` to the unit disc crosses the
``u`` axis at height ``y``, which bounds the radial function from below.
Writing ``a = (x, h)`` in that plane::

    y / h = r^2 / (h^2 + h sqrt(r^2 - 1) sqrt(r^2 - h^2))  >=  2 / (1 + r)

with equality exactly at ``h = sqrt(r (r + 1) / 2)``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import Polytope, SymmetricBody, difference_body, width_in_direction
from .john import INNER_FAILURE, OUTER_SLACK, john_normalize, verify_john
from .lp import chord_length
from .parallel import parallel_map
from .planks import Plank, transform_plank
from .sphere import SearchConfig, multistart_minimize, sphere_points

INEQUALITY_TOL = 1e-9


class DomainError(ValueError):
    """Arguments outside ``1 <= h <= r``."""


class NotInJohnPosition(RuntimeError):
    pass


def theorem_bound(d: int) -> float:
    """2 / (1 + sqrt(d)), the guaranteed total relative width of a cover."""
    return 2.0 / (1.0 + math.sqrt(d))


def claim_bound(d: int) -> float:
    return 1.0 / math.sqrt(d)


def _check_domain(r: float, h: float, strict: bool = False) -> None:
    if not (math.isfinite(r) and math.isfinite(h)):
        raise DomainError("r and h must be finite")
    if h < 1.0 or h > r or (strict and h >= r):
        rel = "<" if strict else "<="
        raise DomainError(f"need 1 <= h {rel} r, got r={r!r}, h={h!r}")


def ratio_closed_form(r: float, h: float) -> float:
    """``y / h`` for a support point of norm ``r`` at height ``h``."""
    _check_domain(r, h)
    if h == r:
        return 1.0
    return r * r / (h * h + h * math.sqrt(r * r - 1.0) * math.sqrt(r * r - h * h))


def tangent_construction(r: float, h: float) -> float:
    """Height ``y`` where the tangent from ``a = (x, h)`` to the unit disc meets the axis.

    ``y`` is the root of ``(x^2 - 1) y^2 + 2 h y - r^2 = 0`` lying in
    ``[1, h]``, evaluated as ``r^2 / (h + x sqrt(r^2 - 1))``, which has no
    removable singularity at ``x = 1``.  The explicit ``x = 1`` root
    ``r^2 / (2h)`` is used only to cross-check.
    """
    _check_domain(r, h, strict=True)
    x = math.sqrt(r * r - h * h)
    k = math.sqrt(r * r - 1.0)
    y = r * r / (h + x * k)
    if abs(x - 1.0) <= 1e-12:
        y_flat = r * r / (2.0 * h)
        if abs(y - y_flat) > 1e-10 * max(1.0, y):
            raise ArithmeticError(f"x = 1 branch disagrees: {y!r} vs {y_flat!r}")
    residual = (x * x - 1.0) * y * y + 2.0 * h * y - r * r
    if abs(residual) > 1e-9 * max(1.0, r * r):
        raise ArithmeticError(f"root does not solve the tangent quadratic (residual {residual:.3g})")
    if h > 1.0 and not (1.0 - 1e-10 <= y <= h * (1.0 + 1e-12)):
        raise ArithmeticError(f"tangent height {y!r} outside [1, {h!r}]")
    return y


@dataclass(frozen=True)
class Lemma4Instance:
    r: float
    h: float
    x: float
    y: float
    t: float
    k: float

    @classmethod
    def build(cls, r: float, h: float) -> "Lemma4Instance":
        _check_domain(r, h)
        x = math.sqrt(r * r - h * h)
        y = h if h == r else tangent_construction(r, h)
        return cls(r, h, x, y, x / h, math.sqrt(r * r - 1.0))


@dataclass(frozen=True)
class BoundCheck:
    ratio: float
    bound: float
    slack: float
    square_residual: float


def lemma4_bound_check(r: float, h: float) -> BoundCheck:
    """Compare ``y / h`` with ``2 / (1 + r)`` and verify the perfect square.

    The gap is ``(r + 1) t^2 - 2 k t + (r - 1) = (sqrt(r + 1) t - sqrt(r - 1))^2``
    with ``t = sqrt(r^2 - h^2) / h`` and ``k = sqrt(r^2 - 1)``.
    """
    ratio = ratio_closed_form(r, h)
    bound = 2.0 / (1.0 + r)
    t = math.sqrt(r * r - h * h) / h
    k = math.sqrt(r * r - 1.0)
    quadratic = (r + 1.0) * t * t - 2.0 * k * t + (r - 1.0)
    square = (math.sqrt(r + 1.0) * t - math.sqrt(r - 1.0)) ** 2
    residual = abs(quadratic - square)
    if residual > 1e-10 * (1.0 + r * r):
        raise ArithmeticError(f"perfect-square identity fails by {residual:.3g} at r={r}, h={h}")
    slack = ratio - bound
    if slack < -1e-12:
        raise ArithmeticError(f"ratio {ratio!r} below bound {bound!r} at r={r}, h={h}")
    return BoundCheck(ratio, bound, slack, residual)


@dataclass(frozen=True)
class SharpWitness:
    d: int
    r: float
    x: float
    h: float
    ratio: float

    @property
    def bound(self) -> float:
        return theorem_bound(self.d)

    @property
    def slack(self) -> float:
        return self.ratio - self.bound


def sharp_witness(d: int) -> SharpWitness:
    """The configuration on the cube where the ratio bound is attained."""
    if d < 2:
        raise DomainError("dimension must be at least 2")
    r = math.sqrt(d)
    x = math.sqrt(r * (r - 1.0) / 2.0)
    h = math.sqrt(r * (r + 1.0) / 2.0)
    return SharpWitness(d, r, x, h, ratio_closed_form(r, h))


def cube_sharp_direction(d: int) -> np.ndarray:
    """Unit ``u = (a, b, ..., b)`` with ``<(1, ..., 1), u> = sqrt(r (r + 1) / 2)``, ``r = sqrt(d)``.

    Along this direction the cube ``[-1, 1]^d`` has chord/width ratio
    exactly ``2 / (1 + sqrt(d))``.
    """
    w = sharp_witness(d)
    s = d - 1
    a = (w.h + math.sqrt(s * (d - w.h * w.h))) / d
    b = (w.h - a) / s
    u = np.full(d, b)
    u[0] = a
    return u / np.linalg.norm(u)


# -- ratio search -----------------------------------------------------------

def chord_width_ratio(body: Polytope, u) -> float:
    return chord_length(body, u) / width_in_direction(body, u)


def min_chord_width_ratio(body: SymmetricBody, search: SearchConfig | None = None,
                          certificate: tuple[float, float] | None = None):
    """Minimise ``chord / width`` over the sphere for a body in John position.

    ``certificate`` is an ``(inner, outer)`` pair from ``verify_john``; it is
    computed when not supplied.

    Raises
    ------
    NotInJohnPosition
        If the certificate does not show ``B <= body <= sqrt(d) B``.
    """
    search = search or SearchConfig()
    d = body.dim
    inner, outer = certificate if certificate is not None else verify_john(body)
    if inner < 1.0 - INNER_FAILURE or outer > math.sqrt(d) * (1.0 + OUTER_SLACK):
        raise NotInJohnPosition(f"certificate inner={inner:.9g}, outer={outer:.9g} fails the sandwich")

    def f(u):
        return chord_width_ratio(body, u)

    seeds = sphere_points(d, search.resolve_seeds(d))
    return multistart_minimize(f, seeds, search)


def ratio_scan(body: Polytope, U: np.ndarray) -> np.ndarray:
    """Rows ``(ell, w, ell / w)`` for each direction in ``U``."""
    def row(u):
        ell = chord_length(body, u)
        w = width_in_direction(body, u)
        return ell, w, ell / w

    return np.array(parallel_map(row, list(U))).reshape(-1, 3)


# -- certificate -------------------------------------------------------------

ROW_FIELDS = ("normal", "width", "w", "ell", "rw", "width_over_ell")


@dataclass(frozen=True)
class PlankRow:
    normal: tuple[float, ...]
    width: float
    w: float
    ell: float
    rw: float
    width_over_ell: float


@dataclass(frozen=True)
class Inequality:
    name: str
    value: float
    threshold: float

    @property
    def slack(self) -> float:
        return self.value - self.threshold

    @property
    def passed(self) -> bool:
        return self.slack >= -INEQUALITY_TOL


@dataclass(frozen=True)
class CertReport:
    body_id: str
    dim: int
    frame: str
    rows: tuple[PlankRow, ...]
    sum_rw: float
    sum_width_over_ell: float
    min_ratio: float
    min_ratio_direction: tuple[float, ...] | None
    transform: tuple[tuple[float, ...], ...] = field(repr=False, default=())

    @property
    def thresholds(self) -> dict[str, float]:
        return {"bang": 1.0, "theorem": theorem_bound(self.dim), "claim": claim_bound(self.dim)}

    @property
    def inequalities(self) -> tuple[Inequality, ...]:
        th = self.thresholds
        return (
            Inequality("bang", self.sum_width_over_ell, th["bang"]),
            Inequality("theorem", self.sum_rw, th["theorem"]),
            Inequality("claim", self.sum_rw, th["claim"]),
        )

    @property
    def chain(self) -> Inequality:
        """``sum rw >= 2/(1+sqrt d) * sum width/ell``; guaranteed when every plank ratio clears the bound."""
        bound = theorem_bound(self.dim)
        return Inequality("chain", self.sum_rw, bound * self.sum_width_over_ell)

    @property
    def passed(self) -> bool:
        return all(q.passed for q in self.inequalities)

    @property
    def failed(self) -> list[str]:
        return [q.name for q in self.inequalities if not q.passed]

    @property
    def tightest(self) -> str:
        return min(self.inequalities, key=lambda q: q.slack).name

    def to_dict(self) -> dict:
        return {
            "body": self.body_id,
            "dimension": self.dim,
            "frame": self.frame,
            "transform": [list(r) for r in self.transform],
            "planks": [{f: (list(getattr(row, f)) if f == "normal" else getattr(row, f))
                        for f in ROW_FIELDS} for row in self.rows],
            "totals": {"rw": self.sum_rw, "width_over_ell": self.sum_width_over_ell},
            "thresholds": self.thresholds,
            "inequalities": {q.name: {"value": q.value, "threshold": q.threshold,
                                      "slack": q.slack, "passed": q.passed}
                             for q in self.inequalities + (self.chain,)},
            "passed": self.passed,
            "tightest": self.tightest,
            "min_ratio": None if math.isnan(self.min_ratio) else self.min_ratio,
            "min_ratio_direction": None if self.min_ratio_direction is None else list(self.min_ratio_direction),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for row in self.rows:
            w.writerow([";".join(map(repr, row.normal))]
                       + [repr(getattr(row, f)) for f in ROW_FIELDS[1:]])
        w.writerow(["total", "", "", "", repr(self.sum_rw), repr(self.sum_width_over_ell)])
        for q in self.inequalities:
            w.writerow([f"# {q.name}", repr(q.value), repr(q.threshold),
                        "pass" if q.passed else "fail"])
        return buf.getvalue()


def certify_cover_bound(body: Polytope, planks: Sequence[Plank], frame: str = "john",
                        eps: float = 1e-7, body_id: str = "body",
                        normalization=None) -> CertReport:
    """Evaluate the plank-cover inequalities for ``planks`` on ``body``.

    Relative widths are affine invariant; chord lengths are not, so with
    ``frame="john"`` the body and planks are first mapped by the John
    transform of the difference body and every row is reported in that
    frame.  ``frame="original"`` skips the map.  A ``JohnNormalization`` of
    ``difference_body(body)`` may be passed in to avoid recomputing it.
    """
    if frame not in ("john", "original"):
        raise ValueError(f"unknown frame {frame!r}")
    d = body.dim
    if frame == "john":
        if normalization is None:
            normalization = john_normalize(difference_body(body), eps)
        T = normalization.transform
        K = body.transformed(T)
        planks = [transform_plank(p, T) for p in planks]
    else:
        T = np.eye(d)
        K = body

    rows = []
    for p in planks:
        w = width_in_direction(K, p.normal)
        ell = chord_length(K, p.normal)
        rows.append(PlankRow(tuple(p.normal.tolist()), p.width, w, ell, p.width / w, p.width / ell))
    if rows:
        worst = min(rows, key=lambda r: (r.ell / r.w, r.normal))
        min_ratio, min_dir = worst.ell / worst.w, worst.normal
    else:
        min_ratio, min_dir = float("nan"), None
    return CertReport(
        body_id=body_id, dim=d, frame=frame, rows=tuple(rows),
        sum_rw=math.fsum(r.rw for r in rows),
        sum_width_over_ell=math.fsum(r.width_over_ell for r in rows),
        min_ratio=min_ratio, min_ratio_direction=min_dir,
        transform=tuple(tuple(r) for r in T.tolist()),
    )
