"""
worm-szego CLI.

Evaluate the Szegő kernel of D'_beta, trace it along approach paths and run
the verification suites, with machine-readable CSV / JSON Lines output.

Examples:
  worm-szego eval --beta 6.2832 --w 0,0,1,0 --z 0,0,1,0
  worm-szego trace --w-face oblique_right --geometric 0.02,0.5,12 --format csv
  worm-szego trace --re-tau 4,24,11
  worm-szego singular --w-face E1 --z-face E1
  worm-szego compare --w-face oblique_right --var w1 --geometric 0.02,0.5,6
  worm-szego repro --mode 2 --z 0.5,0.2,1.1,0
  worm-szego verify --suite all --seed 7

Points are written re1,im1,re2,im2. Data goes to stdout (or --out); status
lines go to stderr.

Exit codes: 0 ok, 1 usage, 2 point outside the domain, 3 tolerance not met,
4 approach path leaves the domain, 5 failed check.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass

from . import config, kernel_terms, reports, szego
from .analysis import classify, compare_orders
from .domain import BoundaryFace, DomainParams, Face, Point, TauLambda, make_params, make_path, reduce
from .errors import (
    BetaOutOfRange,
    HOutOfRange,
    OutsideDomain,
    PathLeavesDomain,
    ToleranceNotMet,
    WormSzegoError,
)
from .reproducing import TestFunction, reproduce_check
from .suites import SUITE_NAMES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_OUTSIDE = 2
EXIT_TOLERANCE = 3
EXIT_PATH = 4
EXIT_CHECK = 5


class UsageError(Exception):
    """Bad command-line input detected after argparse (exit 1)."""


# ----------------------------
# Run configuration
# ----------------------------
@dataclass(frozen=True)
class RunConfig:
    command: str
    beta: float
    h: float | None
    tol_quad: float
    tol_series: float
    fmt: str
    out: str | None
    seed: int

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = cls(
            command=args.cmd,
            beta=float(args.beta),
            h=None if args.h is None else float(args.h),
            tol_quad=float(args.tol_quad),
            tol_series=float(args.tol_series),
            fmt=args.format,
            out=args.out,
            seed=int(args.seed),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.fmt not in reports.FORMATS:
            raise UsageError(f"--format must be one of {list(reports.FORMATS)}: got {self.fmt!r}.")
        if not (self.tol_quad > 0 and self.tol_series > 0):
            raise UsageError(f"Tolerances must be positive: got {self.tol_quad}, {self.tol_series}.")
        if self.seed < 0:
            raise UsageError(f"--seed must be non-negative: got {self.seed}.")

    def params(self) -> DomainParams:
        try:
            return make_params(self.beta, self.h, tol_quad=self.tol_quad, tol_series=self.tol_series)
        except (BetaOutOfRange, HOutOfRange) as exc:
            raise UsageError(str(exc)) from exc


# ----------------------------
# Argument parsing helpers
# ----------------------------
def _floats(text: str, n: int | None, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"Cannot parse {what} {text!r}: {exc}.") from exc
    if n is not None and len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated numbers: got {text!r}.")
    return vals


def parse_point(text: str) -> Point:
    re1, im1, re2, im2 = _floats(text, 4, "point")
    return complex(re1, im1), complex(re2, im2)


def parse_face(text: str | None) -> BoundaryFace:
    if text is None:
        raise UsageError("A boundary face is required.")
    return BoundaryFace(Face.parse(text))


def _face_arg(args: argparse.Namespace, name: str) -> BoundaryFace:
    face = parse_face(getattr(args, name))
    return BoundaryFace(face.face, x=args.x, theta=args.theta, aux=args.aux)


def parse_eps(args: argparse.Namespace) -> list[float]:
    if args.eps is not None:
        eps = _floats(args.eps, None, "--eps")
    elif args.geometric is not None:
        start, ratio, count = _floats(args.geometric, 3, "--geometric")
        if not (start > 0 and 0 < ratio < 1 and count >= 1 and float(count).is_integer()):
            raise UsageError(f"--geometric needs start>0, 0<ratio<1, integer count>=1: got {args.geometric!r}.")
        eps = [start * ratio**k for k in range(int(count))]
    else:
        eps = []
    if not eps:
        raise UsageError("Empty epsilon list: give --eps e1,e2,... or --geometric start,ratio,count.")
    return eps


def _banner(title: str, lines: Sequence[str] = ()) -> None:
    print("=" * 88, file=sys.stderr)
    print(title, file=sys.stderr)
    for line in lines:
        print(f"- {line}", file=sys.stderr)
    print("=" * 88, file=sys.stderr)


def _emit(cfg: RunConfig, rows: Sequence[dict[str, object]]) -> None:
    reports.write_frame(reports.to_frame(rows), cfg.fmt, cfg.out)


def _kernel_columns(prefix: str, kv: szego.KernelValue) -> dict[str, object]:
    return {
        **reports.complex_columns(prefix, kv.value),
        f"{prefix}_err": kv.err_est,
        f"{prefix}_terms": kv.n_terms,
    }


def _remainder_value(
    params: DomainParams, tl: TauLambda, k: szego.KernelValue, lead: szego.LeadingTerm
) -> tuple[complex, float]:
    """Direct remainder series where it is short, K - leading otherwise."""
    if kernel_terms.predicted_terms(params, tl) <= config.DIRECT_SERIES_CAP:
        rest = szego.remainder(params, tl)
        return rest.value, rest.err_est
    logger.info("remainder by subtraction: series too long near the boundary")
    return k.value - lead.value, k.err_est


# ----------------------------
# Commands
# ----------------------------
def cmd_eval(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params()
    w, z = parse_point(args.w), parse_point(args.z)
    row: dict[str, object] = {"beta": params.beta, "h": params.h}
    values = {}
    for route, prefix in (
        (szego.Route.DIRECT_SERIES, "direct"),
        (szego.Route.RESIDUE_PLUS_CONTOUR, "residue_contour"),
        (szego.Route.HALF_PERIOD_CELL, "half_period"),
    ):
        kv = szego.kernel(params, w, z, route=route)
        values[prefix] = kv
        row.update(_kernel_columns(prefix, kv))

    tl = reduce(params, w, z)
    lead = szego.leading_term(params, w, z)
    rest, rest_err = _remainder_value(params, tl, values["direct"], lead)
    row.update(reports.complex_columns("leading", lead.value))
    row["leading_err"] = lead.err_est
    row.update(reports.complex_columns("remainder", rest))
    row["remainder_err"] = rest_err
    ref = values["direct"].value
    row["route_agreement"] = max(abs(v.value - ref) for v in values.values()) / abs(ref)

    _banner("EVAL", [f"beta: {params.beta:.6g}", f"h:    {params.h:.6g}", f"K:    {ref:.12g}"])
    _emit(cfg, [row])
    return EXIT_OK


def _trace_re_tau(params: DomainParams, sweep: str) -> list[dict[str, object]]:
    start, stop, count = _floats(sweep, 3, "--re-tau")
    if not (count >= 1 and float(count).is_integer()):
        raise UsageError(f"--re-tau needs an integer count: got {sweep!r}.")
    n = int(count)
    taus = [start + (stop - start) * k / (n - 1) for k in range(n)] if n > 1 else [start]
    rows = []
    for (w, z), t in zip(szego.re_tau_sweep(taus), taus):
        tl = reduce(params, w, z)
        k = szego.kernel(params, w, z)
        lead = szego.leading_term(params, w, z)
        rest, rest_err = _remainder_value(params, tl, k, lead)
        rows.append(
            {
                "re_tau": t,
                "abs_K": abs(k.value),
                "K_err": k.err_est,
                "abs_leading": abs(lead.value),
                "leading_err": lead.err_est,
                "abs_remainder": abs(rest),
                "remainder_err": rest_err,
            }
        )
    return rows


def cmd_trace(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params()
    if args.re_tau is not None:
        rows = _trace_re_tau(params, args.re_tau)
        _banner("TRACE (Re tau sweep)", [f"rows: {len(rows)}"])
        _emit(cfg, rows)
        return EXIT_OK

    eps = parse_eps(args)
    w_face = _face_arg(args, "w_face")
    z_face = _face_arg(args, "z_face") if args.z_face is not None else w_face
    direction = tuple(_floats(args.direction, 2, "--direction"))
    path = make_path(params, (w_face, z_face), eps, direction=direction)

    rows = []
    for e, (w, z) in zip(path.epsilons, path.points):
        tl = reduce(params, w, z)
        k = szego.kernel(params, w, z)
        dk = szego.kernel_derivative_value(params, szego.Var.W1, w, z)
        lead = szego.leading_term_reduced(params, tl)
        rest, rest_err = _remainder_value(params, tl, k, lead)
        rows.append(
            {
                "eps": e,
                "abs_K": abs(k.value),
                "K_err": k.err_est,
                "route": k.route.value,
                "abs_dK_w1": abs(dk.value),
                "dK_w1_err": dk.err_est,
                "abs_leading": abs(lead.value),
                "leading_err": lead.err_est,
                "abs_remainder": abs(rest),
                "remainder_err": rest_err,
            }
        )
    _banner("TRACE", [f"target: {w_face.face.value} x {z_face.face.value}", f"rows:   {len(rows)}"])
    _emit(cfg, rows)
    return EXIT_OK


def cmd_singular(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params()
    pair = (args.w_face, args.z_face if args.z_face is not None else args.w_face)
    rows = [
        {
            "term": a.term.value,
            "active": a.active,
            "worst_face": a.worst_face.value if a.worst_face is not None else "",
            "predicted_order": a.predicted_order,
            "factors": ";".join(f.value for f in a.factors),
            "ambiguous": a.ambiguous,
        }
        for a in classify(params, pair)
    ]
    _banner("SINGULAR", [f"pair:   {pair[0]} x {pair[1]}", f"active: {sum(r['active'] for r in rows)}"])
    _emit(cfg, rows)
    return EXIT_OK


def cmd_compare(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params()
    eps = parse_eps(args)
    w_face = _face_arg(args, "w_face")
    z_face = _face_arg(args, "z_face") if args.z_face is not None else w_face
    path = make_path(params, (w_face, z_face), eps)
    rep = compare_orders(params, path, args.var)
    row: dict[str, object] = {
        "var": rep.var,
        "target": " x ".join(rep.target),
        "controlling_factor": rep.controlling_factor,
        "szego_order": rep.szego_order,
        "bergman_order": rep.bergman_order,
        "order_err": abs(rep.szego_order - rep.bergman_order),
        "template": rep.template,
        "passed": rep.passed,
        "ratio_spread": rep.ratio_spread,
        "bounded": rep.bounded,
        **{f"order_{name}": order for name, order in rep.per_factor.items()},
        "note": rep.note,
    }
    _banner("COMPARE", [f"{rep.var}: {rep.szego_order:.4f} vs {rep.template} {rep.bergman_order}", "OK" if rep.passed else "FAILED"])
    _emit(cfg, [row])
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_repro(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params()
    z = parse_point(args.z)
    if args.mode < 0:
        logger.warning("Negative mode %d: membership of z2^m in the Hardy space is experimental.", args.mode)
    F = TestFunction.gaussian(params, args.mode, center=args.center)
    res = reproduce_check(params, F, z, delta=args.delta)
    row: dict[str, object] = {
        "mode": args.mode,
        "residual": res.residual,
        "residual_err": res.err_est,
        **reports.complex_columns("expected", res.expected),
        "expected_err": sys.float_info.epsilon * abs(res.expected),
        **reports.complex_columns("pairing", res.pairing.value),
        "pairing_err": res.pairing.err_est,
    }
    for face, value in res.pairing.per_face.items():
        row.update(reports.complex_columns(face.value, value))
        row[f"{face.value}_err"] = res.pairing.per_face_err[face]
    passed = res.residual <= args.threshold
    _banner("REPRO", [f"residual: {res.residual:.3e} (threshold {args.threshold:g})", "OK" if passed else "FAILED"])
    _emit(cfg, [row])
    return EXIT_OK if passed else EXIT_CHECK


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params()
    checks = run_suite(args.suite, params, cfg.seed)
    df = reports.to_frame([c.to_dict() for c in checks])
    reports.write_frame(df, cfg.fmt, cfg.out)
    n_failed = sum(not c.passed for c in checks)
    _banner(
        f"VERIFY {args.suite}",
        [f"checks: {len(checks)}", f"failed: {n_failed}", "ALL CHECKS OK" if n_failed == 0 else "FAILED"],
    )
    return EXIT_OK if n_failed == 0 else EXIT_CHECK


# ----------------------------
# Parser
# ----------------------------
def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--beta", type=float, default=2.0 * math.pi, help="Shape parameter beta > pi (default 2*pi)")
    p.add_argument("--h", type=float, default=None, help="Contour height inside (nu/2, min(1/2, 3nu/2))")
    p.add_argument("--tol-quad", type=float, default=config.TOL_QUAD, help="Quadrature tolerance (relative to envelope)")
    p.add_argument("--tol-series", type=float, default=config.TOL_SERIES, help="Series tolerance (relative to sum)")
    p.add_argument("--format", choices=reports.FORMATS, default="json", help="Output format")
    p.add_argument("--out", default=None, help="Output file (default: stdout)")
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Seed for sampled suites")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG (stderr)")
    return p


def _add_path_args(p: argparse.ArgumentParser, *, required_face: bool) -> None:
    p.add_argument("--w-face", required=required_face, help="Face approached by w (E1..E4, oblique_right, ...)")
    p.add_argument("--z-face", default=None, help="Face approached by z (default: same as --w-face)")
    p.add_argument("--x", type=float, default=0.0, help="Re z1 of the face point")
    p.add_argument("--theta", type=float, default=0.0, help="Angle of z2 / 2 pi, in [0, 1)")
    p.add_argument("--aux", type=float, default=0.0, help="Free coordinate on a non-distinguished face")
    p.add_argument("--eps", default=None, help="Comma-separated, strictly decreasing gaps")
    p.add_argument("--geometric", default=None, help="start,ratio,count schedule of gaps")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    p = argparse.ArgumentParser(prog="worm-szego", description="Szegő kernel of the non-smooth worm domain D'_beta")
    sub = p.add_subparsers(dest="cmd", required=True)

    ev = sub.add_parser("eval", parents=[common], help="Evaluate K(w, z) by every route")
    ev.add_argument("--w", required=True, help="Point re1,im1,re2,im2")
    ev.add_argument("--z", required=True, help="Point re1,im1,re2,im2")
    ev.set_defaults(func=cmd_eval)

    tr = sub.add_parser("trace", parents=[common], help="K, dK, leading term and remainder along a path")
    _add_path_args(tr, required_face=False)
    tr.add_argument("--direction", default="1,1", help="Weights of the oblique and horizontal gaps")
    tr.add_argument("--re-tau", default=None, help="start,stop,count sweep of Re tau at lam = 1 instead of a path")
    tr.set_defaults(func=cmd_trace)

    sg = sub.add_parser("singular", parents=[common], help="Classify the expansion terms at a boundary pair")
    sg.add_argument("--w-face", required=True, help="Face of w, or 'interior'")
    sg.add_argument("--z-face", default=None, help="Face of z, or 'interior' (default: same as --w-face)")
    sg.set_defaults(func=cmd_singular)

    cp = sub.add_parser("compare", parents=[common], help="Derivative orders against the Bergman templates")
    _add_path_args(cp, required_face=True)
    cp.add_argument("--var", default="w1", help="w1, w2, conj_z1 or conj_z2")
    cp.set_defaults(func=cmd_compare)

    rp = sub.add_parser("repro", parents=[common], help="Reproducing-property check for one mode")
    rp.add_argument("--mode", type=int, default=0, help="Power m of z2 in the test function")
    rp.add_argument("--z", default="0,0,1,0", help="Interior point re1,im1,re2,im2")
    rp.add_argument("--center", type=float, default=0.0, help="Centre of the Gaussian profile")
    rp.add_argument("--delta", type=float, default=config.BOUNDARY_OFFSET, help="Boundary offset")
    rp.add_argument("--threshold", type=float, default=1e-4, help="Residual above which the check fails")
    rp.set_defaults(func=cmd_repro)

    vf = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    vf.add_argument("--suite", choices=SUITE_NAMES, default="all", help="Suite to run")
    vf.set_defaults(func=cmd_verify)

    return p


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for OutsideDomain here.
        code = 0 if exc.code in (None, 0) else EXIT_USAGE
        if code == 0:
            raise
        return code

    _configure_logging(args.verbose)
    try:
        cfg = RunConfig.from_args(args)
        return int(args.func(cfg, args))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PathLeavesDomain as exc:
        print(f"path leaves the domain: {exc}", file=sys.stderr)
        return EXIT_PATH
    except OutsideDomain as exc:
        print(f"outside the domain: {exc}", file=sys.stderr)
        return EXIT_OUTSIDE
    except ToleranceNotMet as exc:
        print(f"tolerance not met: {exc} (best value {exc.value}, err_est {exc.err_est:.3e})", file=sys.stderr)
        return EXIT_TOLERANCE
    except WormSzegoError as exc:
        if isinstance(exc, ValueError):
            print(f"usage error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"FAILED: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    raise SystemExit(main())
