"""``plankbound`` command line.

Exit codes: 0 success; 1 usage, I/O or parse error; 2 John normalisation
not certified or ratio bound violated; 3 a cover inequality failed; 4
``--verify-cover`` found an uncovered point.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as pio
from .bounds import (certify_cover_bound, chord_width_ratio, sharp_witness,
                     theorem_bound, ratio_scan)
from .geometry import GeometryError, difference_body, normalize
from .john import INNER_FAILURE, OUTER_SLACK, JohnCertificateError, MveeError, john_normalize
from .lp import LpError
from .planks import CoverError, VerifyConfig, covers, slab_cover
from .sphere import SearchConfig, multistart_minimize, sphere_points

COMMANDS = ("normalize", "ratio-scan", "certify", "witness", "gen-cover")
RATIO_TOL = 1e-6

EXIT_OK, EXIT_ERROR, EXIT_NORMALIZE, EXIT_INEQUALITY, EXIT_UNCOVERED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    body: Path | None
    planks: Path | None
    out: Path | None
    dim: int | None
    n: int | None
    m: int | None
    u: tuple[float, ...] | None
    eps: float
    tol: float
    verify_cover: bool
    seed: int
    plot: bool

    @classmethod
    def from_args(cls, ns) -> "RunConfig":
        if not 0 < ns.eps < 1:
            raise UsageError("--eps must lie in (0, 1)")
        if not ns.tol > 0:
            raise UsageError("--tol must be positive")
        for flag in ("n", "m", "dim"):
            v = getattr(ns, flag)
            if v is not None and v < 1:
                raise UsageError(f"--{flag} must be positive")
        u = None
        if ns.u is not None:
            try:
                u = tuple(float(x) for x in ns.u.split(","))
            except ValueError:
                raise UsageError(f"--u: expected comma-separated numbers, got {ns.u!r}") from None
        return cls(ns.command, ns.body, ns.planks, ns.out, ns.dim, ns.n, ns.m, u,
                   ns.eps, ns.tol, ns.verify_cover, ns.seed, not ns.no_plot)

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise UsageError(f"{self.command} needs --{name}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="plankbound",
                description="Certify plank-cover lower bounds on polytopes.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--body", type=Path, help="body JSON file")
    p.add_argument("--planks", type=Path, help="plank-set JSON file")
    p.add_argument("--out", type=Path, help="output path (stdout when omitted)")
    p.add_argument("--dim", type=int, help="dimension (witness) or expected body dimension")
    p.add_argument("--n", type=int, help="scan directions / cover verification samples")
    p.add_argument("--m", type=int, help="number of slabs for gen-cover")
    p.add_argument("--u", help="direction as comma-separated coordinates")
    p.add_argument("--eps", type=float, default=1e-7, help="MVEE accuracy")
    p.add_argument("--tol", type=float, default=1e-7, help="cover verification tolerance")
    p.add_argument("--verify-cover", action="store_true", help="check coverage before certifying")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-plot", action="store_true", help="skip figures")
    return p


def _fmt(x) -> str:
    return repr(float(x))


def _emit(text: str, out: Path | None, suffix: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.with_suffix(suffix).write_text(text)


def _load_body(cfg: RunConfig):
    body = pio.load_body(cfg.body)
    if cfg.dim is not None and cfg.dim != body.dim:
        raise UsageError(f"--dim {cfg.dim} does not match body dimension {body.dim}")
    return body


def _certificate(norm) -> dict:
    d = norm.dim
    return {
        "inner": norm.inner,
        "outer": norm.outer,
        "inner_required": 1.0 - INNER_FAILURE,
        "outer_allowed": math.sqrt(d) * (1.0 + OUTER_SLACK),
        "certified": norm.certified,
    }


def cmd_normalize(cfg: RunConfig) -> int:
    cfg.require("body")
    body = _load_body(cfg)
    L = difference_body(body)
    norm = john_normalize(L, cfg.eps, check=False)
    doc = {
        "dimension": body.dim,
        "difference_body": pio.body_to_dict(L),
        "transform": norm.transform.tolist(),
        "normalized": pio.body_to_dict(norm.body),
        "certificate": _certificate(norm),
        "mvee": {"eps": cfg.eps, "iterations": norm.ellipsoid.iterations},
    }
    _emit(pio.dumps(doc), cfg.out, ".json")
    if cfg.out is not None and cfg.plot and body.dim == 2:
        from .plotting import plot_normalization

        plot_normalization(L, norm.body, cfg.out.with_suffix(".png"))
    if not norm.certified:
        print(f"normalization not certified: inner={norm.inner!r}, outer={norm.outer!r}",
              file=sys.stderr)
        return EXIT_NORMALIZE
    return EXIT_OK


def cmd_ratio_scan(cfg: RunConfig) -> int:
    cfg.require("body")
    body = _load_body(cfg)
    d = body.dim
    norm = john_normalize(difference_body(body), cfg.eps, check=False)
    if not norm.certified:
        print(f"normalization not certified: inner={norm.inner!r}, outer={norm.outer!r}",
              file=sys.stderr)
        return EXIT_NORMALIZE
    # chords and widths of TK and of its difference body TL agree; TK is smaller
    L = body.transformed(norm.transform)
    U = sphere_points(d, cfg.n or 256, seed=cfg.seed)
    rows = ratio_scan(L, U)
    ratios = rows[:, 2]
    k = min(8, len(U))
    top = U[np.lexsort((np.arange(len(ratios)), ratios))[:k]]
    best_u, best = multistart_minimize(lambda u: chord_width_ratio(L, u), top,
                                       SearchConfig(refinements=k))
    threshold = theorem_bound(d)
    ok = best >= threshold - RATIO_TOL

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"u_{i + 1}" for i in range(d)] + ["ell", "w", "ratio"])
    for u, row in zip(U, rows):
        w.writerow([_fmt(x) for x in u] + [_fmt(x) for x in row])
    w.writerow(["# min_ratio", _fmt(best)])
    w.writerow(["# min_direction", ";".join(_fmt(x) for x in best_u)])
    w.writerow(["# threshold", _fmt(threshold)])
    w.writerow(["# status", "pass" if ok else "fail"])
    _emit(buf.getvalue(), cfg.out, ".csv")
    if cfg.out is not None and cfg.plot:
        from .plotting import plot_ratio_scan

        plot_ratio_scan(U, ratios, threshold, (best_u, best), cfg.out.with_suffix(".png"))
    if not ok:
        print(f"ratio bound violated: {best!r} < {threshold!r}", file=sys.stderr)
        return EXIT_NORMALIZE
    return EXIT_OK


def cmd_certify(cfg: RunConfig) -> int:
    cfg.require("body", "planks")
    body = _load_body(cfg)
    planks = pio.load_planks(cfg.planks)
    if planks and planks[0].dim != body.dim:
        raise UsageError(f"plank dimension {planks[0].dim} does not match body dimension {body.dim}")
    verdict = None
    if cfg.verify_cover:
        if not planks:
            raise UsageError("--verify-cover needs at least one plank")
        verdict = covers(planks, body, VerifyConfig(n=cfg.n, tol=cfg.tol, seed=cfg.seed))
    report = certify_cover_bound(body, planks, eps=cfg.eps, body_id=str(cfg.body))
    doc = report.to_dict()
    if verdict is not None:
        doc["cover"] = {
            "status": verdict.status,
            "margin": verdict.margin,
            "witness": None if verdict.witness is None else verdict.witness.tolist(),
            "points_tested": verdict.points_tested,
            "rounds": verdict.rounds,
        }
    uncovered = verdict is not None and not verdict.covered
    if uncovered:
        # the inequalities assume a cover; with a counterexample they say nothing
        doc["inequalities"] = None
        doc["passed"] = None
        doc["tightest"] = None
    _emit(pio.dumps(doc), cfg.out, ".json")
    if cfg.out is not None:
        cfg.out.with_suffix(".csv").write_text(report.to_csv())
        if cfg.plot and report.rows:
            from .plotting import plot_certificate

            plot_certificate(report, cfg.out.with_suffix(".png"))
    if uncovered:
        print(f"planks do not cover the body: witness {verdict.witness.tolist()} "
              f"has margin {verdict.margin!r}", file=sys.stderr)
        return EXIT_UNCOVERED
    if not report.passed:
        print("failed inequalities: " + ", ".join(report.failed), file=sys.stderr)
        return EXIT_INEQUALITY
    return EXIT_OK


def cmd_witness(cfg: RunConfig) -> int:
    cfg.require("dim")
    if cfg.dim < 2:
        raise UsageError("--dim must be at least 2")
    wit = sharp_witness(cfg.dim)
    lines = [
        f"d      {wit.d}",
        f"r      {_fmt(wit.r)}",
        f"x      {_fmt(wit.x)}",
        f"h      {_fmt(wit.h)}",
        f"ratio  {_fmt(wit.ratio)}",
        f"bound  {_fmt(wit.bound)}",
        f"slack  {_fmt(wit.slack)}",
    ]
    _emit("\n".join(lines) + "\n", cfg.out, ".txt")
    if cfg.out is not None and cfg.plot:
        from .plotting import plot_witness

        plot_witness(wit, cfg.out.with_suffix(".png"))
    return EXIT_OK


def cmd_gen_cover(cfg: RunConfig) -> int:
    cfg.require("body", "u", "m")
    body = _load_body(cfg)
    if len(cfg.u) != body.dim:
        raise UsageError(f"--u has {len(cfg.u)} coordinates, body has dimension {body.dim}")
    u = normalize(cfg.u)
    planks = slab_cover(body, u, cfg.m)
    _emit(pio.dumps(pio.planks_to_dict(planks, body.dim)), cfg.out, ".json")
    return EXIT_OK


HANDLERS = {
    "normalize": cmd_normalize,
    "ratio-scan": cmd_ratio_scan,
    "certify": cmd_certify,
    "witness": cmd_witness,
    "gen-cover": cmd_gen_cover,
}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(ns)
        return HANDLERS[cfg.command](cfg)
    except (JohnCertificateError, MveeError) as exc:
        print(f"plankbound: normalization failed: {exc}", file=sys.stderr)
        return EXIT_NORMALIZE
    except (UsageError, OSError, ValueError, GeometryError, LpError, CoverError) as exc:
        print(f"plankbound: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
