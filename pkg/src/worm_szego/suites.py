"""
Verification suites behind ``worm-szego verify``.

Each suite runs one family of identities over a fixed or seeded grid and
returns ``Check`` records (measured error against tolerance). Suites are
deterministic: every suite draws from its own generator seeded with the run
seed, so the report does not depend on which other suites ran before it.

Suites:
  - residues:      I_j = R_j + J_j on a (tau, j) grid
  - decomposition: J_j against 4 e^{-s tau h}(M_j - E1_j - E2_j + E3_j), and M_j against its closed form
  - closed_forms:  partial sums of R_j lam^j and M_j lam^j against the summed closed forms
  - symmetry:      Hermitian symmetry, positivity on the diagonal, route agreement
  - derivatives:   analytic first derivatives against five-point differences
  - decay:         leading and remainder decay rates along a Re tau sweep
  - orders:        blow-up orders on an oblique approach and at the E1 corner
  - repro:         reproducing property and theta-coefficient cross-check
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import asdict, dataclass

import numpy as np

from . import config, kernel_terms, szego
from .analysis import Quantity, compare_orders, fit_blowup, fit_corner
from .domain import BoundaryFace, DomainParams, Face, Point, make_params, make_path, reduce, sample_interior, tau_lambda
from .errors import WormSzegoError
from .reproducing import TestFunction, reproduce_check, theta_coefficient

logger = logging.getLogger(__name__)

PI = math.pi

# Grids and thresholds of the checks.
RESIDUE_TAUS: tuple[complex, ...] = (0.5, 1.0 + 0.3j, 3.0, 5.0)
RESIDUE_JS: tuple[int, ...] = tuple(range(-5, 6))
IDENTITY_TOL = 1e-8
CLOSED_FORM_BETAS: tuple[float, ...] = (1.5 * PI, 2.0 * PI)
CLOSED_FORM_POINTS = 20
CLOSED_FORM_N = 60
SYMMETRY_PAIRS = 50
HERMITIAN_TOL = 1e-10
ROUTE_TOL = 1e-7
DERIVATIVE_PAIRS = 20
DERIVATIVE_TOL = 1e-6
FD_STEP = 1e-3
SLOPE_REL_TOL = 0.1
ORDER_TOL = 0.05
APPROACH_EPS: tuple[float, ...] = tuple(0.02 * 0.5**k for k in range(6))
CORNER_EPS: tuple[float, ...] = (0.02, 0.01, 0.005, 0.0025)
REPRO_MODES: tuple[int, ...] = (0, 1, 2, 3)
REPRO_POINTS = 5
REPRO_TOL = 1e-4
THETA_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    suite: str
    check: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, object]:
        return asdict(self)


def _check(suite: str, name: str, measured: float, tolerance: float, detail: str = "") -> Check:
    measured = float(measured)
    passed = math.isfinite(measured) and measured <= tolerance
    if not passed:
        logger.info("check failed: %s/%s measured %.3e > %.3e", suite, name, measured, tolerance)
    return Check(suite=suite, check=name, measured=measured, tolerance=float(tolerance), passed=passed, detail=detail)


def _failed(suite: str, name: str, tolerance: float, exc: Exception) -> Check:
    logger.warning("check %s/%s raised %s: %s", suite, name, type(exc).__name__, exc)
    return Check(
        suite=suite,
        check=name,
        measured=float("nan"),
        tolerance=float(tolerance),
        passed=False,
        detail=f"{type(exc).__name__}: {exc}",
    )


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:g}{z.imag:+g}i"


def _pairs(params: DomainParams, rng: np.random.Generator, n: int) -> list[tuple[Point, Point]]:
    pts = sample_interior(params, rng, 2 * n)
    return list(zip(pts[0::2], pts[1::2]))


# ----------------------------
# Residues and decomposition
# ----------------------------
def run_residues(params: DomainParams, rng: np.random.Generator) -> list[Check]:
    out: list[Check] = []
    js = np.asarray(RESIDUE_JS)
    for tau in RESIDUE_TAUS:
        tl = tau_lambda(params, tau, 1.0)
        I = np.asarray(kernel_terms.I_terms(params, tl, js).value)
        J = np.asarray(kernel_terms.J_terms(params, tl, js).value)
        R = kernel_terms.R_terms(params, tl, js)
        for j, i_j, r_j, j_j in zip(js, I, R, J):
            err = abs(i_j - (r_j + j_j)) / abs(i_j)
            out.append(_check("residues", f"I=R+J tau={_fmt(tau)} j={j}", err, IDENTITY_TOL))
    return out


def run_decomposition(params: DomainParams, rng: np.random.Generator) -> list[Check]:
    out: list[Check] = []
    js = np.asarray(RESIDUE_JS)
    for tau in RESIDUE_TAUS:
        tl = tau_lambda(params, tau, 1.0)
        parts = {p: np.asarray(kernel_terms.decomposition_terms(params, tl, js, p).value) for p in kernel_terms.DECOMPOSITION_PARTS}
        J = np.asarray(kernel_terms.J_terms(params, tl, js).value)
        hs = tl.sign * params.h
        rhs = 4.0 * np.exp(-tl.tau * hs) * (parts["M"] - parts["E1"] - parts["E2"] + parts["E3"])
        for k, j in enumerate(js):
            out.append(_check("decomposition", f"J=4e(M-E1-E2+E3) tau={_fmt(tau)} j={j}", _rel(J[k], rhs[k]), IDENTITY_TOL))
            closed = kernel_terms.M_closed_form(kernel_terms.TermContext.build(params, tl, int(j)))
            out.append(_check("decomposition", f"M closed form tau={_fmt(tau)} j={j}", _rel(parts["M"][k], closed), IDENTITY_TOL))
    return out


# ----------------------------
# Closed-form sums
# ----------------------------
def run_closed_forms(params: DomainParams, rng: np.random.Generator) -> list[Check]:
    out: list[Check] = []
    js = np.arange(-CLOSED_FORM_N, CLOSED_FORM_N + 1)
    per_beta = CLOSED_FORM_POINTS // len(CLOSED_FORM_BETAS)
    for beta in CLOSED_FORM_BETAS:
        p = make_params(beta, tol_quad=params.tol_quad, tol_series=params.tol_series)
        for k, (w, z) in enumerate(_pairs(p, rng, per_beta)):
            tl = reduce(p, w, z)
            label = f"beta={beta:.6g} point={k}"

            partial_r = complex(np.sum(kernel_terms.R_terms(p, tl, js, weighted=True)))
            out.append(_check("closed_forms", f"sum R_j lam^j {label}", _rel(partial_r, kernel_terms.residue_sum(p, tl)), IDENTITY_TOL))

            m_terms = [kernel_terms.M_closed_form(kernel_terms.TermContext.build(p, tl, int(j))) * tl.lam ** int(j) for j in js]
            partial_m = complex(4.0 * np.exp(-tl.tau * tl.sign * p.h) * sum(m_terms))
            out.append(_check("closed_forms", f"sum M_j lam^j {label}", _rel(partial_m, kernel_terms.M_sum(p, tl).total), IDENTITY_TOL))
    return out


# ----------------------------
# Symmetry and derivatives
# ----------------------------
def run_symmetry(params: DomainParams, rng: np.random.Generator, n_pairs: int = SYMMETRY_PAIRS) -> list[Check]:
    out: list[Check] = []
    direct = szego.Route.DIRECT_SERIES
    for k, (w, z) in enumerate(_pairs(params, rng, n_pairs)):
        try:
            k_wz = szego.kernel(params, w, z, route=direct).value
            k_zw = szego.kernel(params, z, w, route=direct).value
            k_rc = szego.kernel(params, w, z, route=szego.Route.RESIDUE_PLUS_CONTOUR).value
            k_cell = szego.kernel(params, w, z, route=szego.Route.HALF_PERIOD_CELL).value
            k_zz = szego.kernel(params, z, z, route=direct).value
        except WormSzegoError as exc:
            out.append(_failed("symmetry", f"pair={k}", ROUTE_TOL, exc))
            continue
        out.append(_check("symmetry", f"hermitian pair={k}", _rel(k_wz, k_zw.conjugate()), HERMITIAN_TOL))
        out.append(_check("symmetry", f"residue+contour route pair={k}", _rel(k_wz, k_rc), ROUTE_TOL))
        out.append(_check("symmetry", f"half-period route pair={k}", _rel(k_wz, k_cell), ROUTE_TOL))
        diag = abs(k_zz.imag) / abs(k_zz) if k_zz.real > 0 else math.inf
        out.append(_check("symmetry", f"diagonal real positive pair={k}", diag, HERMITIAN_TOL))
    return out


def _shift(params: DomainParams, var: szego.Var, w: Point, z: Point, step: float) -> complex:
    (w1, w2), (z1, z2) = w, z
    if var is szego.Var.W1:
        w = (w1 + step, w2)
    elif var is szego.Var.W2:
        w = (w1, w2 + step)
    elif var is szego.Var.CONJ_Z1:
        z = (z1 + step, z2)
    else:
        z = (z1, z2 + step)
    return szego.kernel(params, w, z).value


def five_point_derivative(params: DomainParams, var: szego.Var, w: Point, z: Point, step: float = FD_STEP) -> complex:
    """
    Real-step five-point difference. A real shift of z1 (z2) moves conj z1
    (conj z2) by the same amount, so one stencil serves all four variables.
    """
    f = {k: _shift(params, var, w, z, k * step) for k in (-2, -1, 1, 2)}
    return (f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * step)


def run_derivatives(params: DomainParams, rng: np.random.Generator, n_pairs: int = DERIVATIVE_PAIRS) -> list[Check]:
    out: list[Check] = []
    for k, (w, z) in enumerate(_pairs(params, rng, n_pairs)):
        for var in szego.Var:
            name = f"d/d{var.value} pair={k}"
            try:
                analytic = szego.kernel_derivative(params, var, w, z)
                numeric = five_point_derivative(params, var, w, z)
            except WormSzegoError as exc:
                out.append(_failed("derivatives", name, DERIVATIVE_TOL, exc))
                continue
            out.append(_check("derivatives", name, _rel(analytic, numeric), DERIVATIVE_TOL))
    return out


# ----------------------------
# Decay along Re tau
# ----------------------------
def run_decay(params: DomainParams, rng: np.random.Generator) -> list[Check]:
    out: list[Check] = []
    half_nu = 0.5 * params.nu
    try:
        lead = szego.leading_decay(params, szego.four_pi_sweep(range(1, 7)))
        out.append(_check("decay", "leading slope = -nu/2", abs(lead.slope + half_nu) / half_nu, SLOPE_REL_TOL))
    except WormSzegoError as exc:
        out.append(_failed("decay", "leading slope = -nu/2", SLOPE_REL_TOL, exc))

    rate = kernel_terms.next_pole_rate(params)
    coincide = kernel_terms.pole_rows_coincide(params)
    try:
        if coincide:
            rest = szego.remainder_decay(params, szego.four_pi_sweep(range(1, 7)), residual_max=0.5)
        else:
            rest = szego.remainder_decay(params, szego.four_pi_sweep(range(3, 14)))
    except WormSzegoError as exc:
        out.append(_failed("decay", "remainder slope <= -h", 0.0, exc))
        return out
    out.append(_check("decay", "remainder slope <= -h", rest.slope + params.h, 0.0, detail=f"slope={rest.slope:.6g}"))
    if not coincide:
        out.append(_check("decay", "remainder slope = -next_pole_rate", abs(rest.slope + rate) / rate, SLOPE_REL_TOL))
    return out


# ----------------------------
# Blow-up orders
# ----------------------------
def run_orders(params: DomainParams, rng: np.random.Generator) -> list[Check]:
    out: list[Check] = []
    face = BoundaryFace(Face.OBLIQUE_RIGHT)
    path = make_path(params, (face, face), APPROACH_EPS)

    for quantity, expected in ((Quantity.KERNEL, 1.0), (Quantity.DW_KERNEL, 2.0)):
        name = f"oblique order {quantity.value} = {expected:g}"
        try:
            fit = fit_blowup(params, path, quantity)
        except WormSzegoError as exc:
            out.append(_failed("orders", name, ORDER_TOL, exc))
            continue
        out.append(_check("orders", name, abs(-fit.slope - expected), ORDER_TOL))

    try:
        report = compare_orders(params, path, szego.Var.W1)
        out.append(
            _check(
                "orders",
                f"w1 against template {report.template}",
                abs(report.szego_order - report.bergman_order),
                config.ORDER_MATCH_TOL,
            )
        )
    except WormSzegoError as exc:
        out.append(_failed("orders", "w1 against template", config.ORDER_MATCH_TOL, exc))

    for quantity, expected in ((Quantity.KERNEL, (1.0, 1.0)), (szego.Var.W1, (2.0, 1.0))):
        name = f"E1 corner orders {quantity.value}"
        try:
            corner = fit_corner(params, Face.E1, CORNER_EPS, CORNER_EPS, quantity)
        except WormSzegoError as exc:
            out.append(_failed("orders", name, config.ORDER_MATCH_TOL, exc))
            continue
        err = max(abs(corner.order_oblique - expected[0]), abs(corner.order_horizontal - expected[1]))
        out.append(_check("orders", name, err, config.ORDER_MATCH_TOL))
    return out


# ----------------------------
# Reproducing property
# ----------------------------
def run_repro(params: DomainParams, rng: np.random.Generator, n_points: int = REPRO_POINTS) -> list[Check]:
    out: list[Check] = []
    for m in REPRO_MODES:
        F = TestFunction.gaussian(params, m)
        for k, z in enumerate(sample_interior(params, rng, n_points, margin=0.5, x_span=1.0)):
            name = f"reproduce mode={m} point={k}"
            try:
                res = reproduce_check(params, F, z)
            except WormSzegoError as exc:
                out.append(_failed("repro", name, REPRO_TOL, exc))
                continue
            out.append(_check("repro", name, res.residual, REPRO_TOL, detail=f"err_est={res.err_est:.3e}"))

    z: Point = (0j, 1.0 + 0j)
    w1, r = 0.3 + 0.2j, 1.0
    for m in REPRO_MODES:
        name = f"theta coefficient mode={m}"
        try:
            coeff = theta_coefficient(params, w1, r, z, m)
            tl = tau_lambda(params, w1 - z[0].conjugate(), 1.0)
            I_m = complex(np.asarray(kernel_terms.I_terms(params, tl, [m]).value).ravel()[0])
            expected = (r * z[1].conjugate()) ** m * I_m / (8.0 * PI)
        except WormSzegoError as exc:
            out.append(_failed("repro", name, THETA_TOL, exc))
            continue
        out.append(_check("repro", name, _rel(coeff, expected), THETA_TOL))
    return out


SUITES: dict[str, Callable[[DomainParams, np.random.Generator], list[Check]]] = {
    "residues": run_residues,
    "decomposition": run_decomposition,
    "closed_forms": run_closed_forms,
    "symmetry": run_symmetry,
    "derivatives": run_derivatives,
    "decay": run_decay,
    "orders": run_orders,
    "repro": run_repro,
}

SUITE_NAMES: tuple[str, ...] = (*SUITES, "all")


def run_suite(name: str, params: DomainParams, seed: int = config.DEFAULT_SEED) -> list[Check]:
    """Run one suite (or all of them, in declaration order) with a fresh seeded generator each."""
    if name not in SUITE_NAMES:
        raise ValueError(f"Unknown suite {name!r}. Known: {list(SUITE_NAMES)}")
    names = list(SUITES) if name == "all" else [name]
    checks: list[Check] = []
    for suite in names:
        logger.info("suite %s (beta=%.6g, seed=%d)", suite, params.beta, seed)
        checks.extend(SUITES[suite](params, np.random.default_rng(seed)))
    return checks
