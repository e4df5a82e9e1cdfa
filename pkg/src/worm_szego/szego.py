"""
The Szegő kernel of D'_beta and its first derivatives.

    8 pi K(w, z) = sum_j lam^j I_j(tau),    tau = w1 - conj(z1),  lam = w2 conj(z2)

Three routes evaluate the same quantity:

  - DirectSeries: the series above, each I_j by quadrature;
  - ResiduePlusContour: the closed-form residue sum plus sum_j lam^j J_j;
  - HalfPeriodCell: the real line folded onto [0, 1/2], where both sums over
    j resum into geometric series and a single finite integral remains.

The direct series needs ~log(tol)/log(rho) terms, rho the largest of the four
boundary ratios, so it slows down near the boundary; ``Route.AUTO`` switches
to the half-period cell when that count exceeds DIRECT_SERIES_CAP.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import config, kernel_terms
from .domain import DomainParams, Point, TauLambda, contains, reduce, violated_inequality
from .errors import OutsideDomain
from .fits import ExponentFit, fit_exponent
from .quadrature import integrate_interval

logger = logging.getLogger(__name__)

PI = math.pi
EIGHT_PI = 8.0 * PI


class Route(str, Enum):
    DIRECT_SERIES = "DirectSeries"
    RESIDUE_PLUS_CONTOUR = "ResiduePlusContour"
    HALF_PERIOD_CELL = "HalfPeriodCell"
    AUTO = "Auto"


class Var(str, Enum):
    W1 = "w1"
    W2 = "w2"
    CONJ_Z1 = "conj_z1"
    CONJ_Z2 = "conj_z2"

    @classmethod
    def parse(cls, name: str) -> "Var":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace(" ", "_")
        for var in cls:
            if key in (var.value, var.name.lower()):
                return var
        raise ValueError(f"Unknown derivative variable {name!r}. Known: {[v.value for v in cls]}")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    n_terms: int
    tail_bound: float
    route: Route
    err_est: float = 0.0


@dataclass(frozen=True)
class LeadingTerm:
    """Explicit residue-sum part of the kernel; ``parts`` sum to ``value``."""

    value: complex
    parts: dict[str, complex] = field(default_factory=dict)
    prefactor: complex = 1.0
    err_est: float = 0.0


# ----------------------------
# Guards
# ----------------------------
def _require_interior(params: DomainParams, w: Point, label: str) -> None:
    bad = violated_inequality(params, w)
    if bad is not None:
        raise OutsideDomain(f"Point {label}={w} is not in D'_beta: violates {bad}.", violated=bad)


def _require_D(tl: TauLambda) -> None:
    if not tl.in_D:
        raise OutsideDomain(
            f"(tau, lam) = ({tl.tau}, {tl.lam}) outside the reduced domain: "
            f"Im tau - log|lam|^2 = {tl.strip_offset if tl.lam != 0 else float('nan'):.6g}.",
            violated="(tau, lam) in D",
        )


def _reduced(params: DomainParams, w: Point, z: Point) -> TauLambda:
    _require_interior(params, w, "w")
    _require_interior(params, z, "z")
    return reduce(params, w, z)


# ----------------------------
# Route selection
# ----------------------------
def choose_route(params: DomainParams, tl: TauLambda) -> Route:
    n = kernel_terms.predicted_terms(params, tl)
    if n <= config.DIRECT_SERIES_CAP:
        logger.debug("route DirectSeries: %d predicted shells", n)
        return Route.DIRECT_SERIES
    logger.warning(
        "Direct series would need %d shells (cap %d); using the half-period cell.", n, config.DIRECT_SERIES_CAP
    )
    return Route.HALF_PERIOD_CELL


# ----------------------------
# Direct series
# ----------------------------
def _direct_terms(params: DomainParams, tl: TauLambda, *, d_tau: bool = False, d_lam: bool = False):
    def terms(js: np.ndarray) -> tuple[np.ndarray, float]:
        res = kernel_terms.I_terms(params, tl, js, weighted=True, d_tau=d_tau)
        vals = np.asarray(res.value)
        err = res.err_est
        if d_lam:
            vals = vals * js / tl.lam
            err = err * float(np.max(np.abs(js))) / abs(tl.lam)
        return vals, err

    return terms


def _as_kernel_value(s: kernel_terms.SeriesSum, route: Route) -> KernelValue:
    tail = s.tail_bound / EIGHT_PI
    return KernelValue(
        value=s.value / EIGHT_PI,
        n_terms=s.n_terms,
        tail_bound=tail,
        route=route,
        err_est=tail + s.quad_err / EIGHT_PI,
    )


def direct_series(params: DomainParams, tl: TauLambda) -> KernelValue:
    _require_D(tl)
    s = kernel_terms.sum_over_j(
        _direct_terms(params, tl),
        tol=params.tol_series,
        predicted_n=kernel_terms.predicted_terms(params, tl),
    )
    return _as_kernel_value(s, Route.DIRECT_SERIES)


# ----------------------------
# Residue sum plus contour
# ----------------------------
def _remainder_sum(params: DomainParams, tl: TauLambda, sign: int | None = None) -> kernel_terms.SeriesSum:
    def terms(js: np.ndarray) -> tuple[np.ndarray, float]:
        res = kernel_terms.J_terms(params, tl, js, weighted=True, sign=sign)
        return np.asarray(res.value), res.err_est

    return kernel_terms.sum_over_j(
        terms, tol=params.tol_series, predicted_n=kernel_terms.predicted_terms(params, tl)
    )


def remainder(params: DomainParams, tl: TauLambda) -> KernelValue:
    """K - leading: (1/8 pi) sum_j lam^j J_j, computed directly rather than by subtraction."""
    _require_D(tl)
    return _as_kernel_value(_remainder_sum(params, tl), Route.RESIDUE_PLUS_CONTOUR)


def _residue_plus_contour_branch(params: DomainParams, tl: TauLambda, sign: int | None) -> KernelValue:
    rs = kernel_terms.residue_sum_parts(params, tl, sign=sign)
    rest = _as_kernel_value(_remainder_sum(params, tl, sign), Route.RESIDUE_PLUS_CONTOUR)
    return KernelValue(
        value=rs.total / EIGHT_PI + rest.value,
        n_terms=rest.n_terms,
        tail_bound=rest.tail_bound,
        route=Route.RESIDUE_PLUS_CONTOUR,
        err_est=rest.err_est + abs(rs.prefactor) * rs.truncation / EIGHT_PI,
    )


def residue_plus_contour(params: DomainParams, tl: TauLambda) -> KernelValue:
    """
    Residue sum plus contour remainder.

    On Re tau = 0 both contour branches are valid; they are averaged when they
    agree to 1e-9 and the disagreement is logged otherwise.
    """
    _require_D(tl)
    if tl.tau.real != 0.0:
        return _residue_plus_contour_branch(params, tl, None)
    up = _residue_plus_contour_branch(params, tl, +1)
    down = _residue_plus_contour_branch(params, tl, -1)
    gap = abs(up.value - down.value)
    if gap <= 1e-9 * max(abs(up.value), 1e-300):
        return KernelValue(
            value=0.5 * (up.value + down.value),
            n_terms=max(up.n_terms, down.n_terms),
            tail_bound=max(up.tail_bound, down.tail_bound),
            route=Route.RESIDUE_PLUS_CONTOUR,
            err_est=max(up.err_est, down.err_est) + gap,
        )
    logger.warning("Contour branches disagree on Re tau = 0 by %.3e; keeping the upper branch.", gap)
    return KernelValue(
        value=up.value,
        n_terms=up.n_terms,
        tail_bound=up.tail_bound,
        route=Route.RESIDUE_PLUS_CONTOUR,
        err_est=up.err_est + gap,
    )


# ----------------------------
# Half-period cell
# ----------------------------
def _cell_rows(params: DomainParams, tl: TauLambda, with_derivatives: bool):
    """
    Integrand rows on u in [0, 1/2]: e^{i tau u} S T, and optionally the
    integrands of d/dtau and d/dlam.
    """
    b = params.width
    tau, lam = tl.tau, tl.lam
    half_phase = np.exp(0.5j * tau)
    mu = lam * half_phase
    m = np.arange(config.CELL_TERMS, dtype=float)[:, None]
    odd = 2.0 * m + 1.0
    alt = 2.0 * np.where(m % 2 == 0, 1.0, -1.0)
    c_pi = np.exp(-0.5 * odd * PI)
    c_b = np.exp(-0.5 * odd * b)
    q = mu * c_pi
    p = c_pi / mu
    r = lam * c_b
    s = c_b / lam
    inv = kernel_terms.inv_cosh

    def f(u: np.ndarray) -> np.ndarray:
        x = u[None, :]
        e_q = np.exp(-odd * PI * (x + 0.5))
        e_p = np.exp(odd * PI * (x - 1.0))
        e_r = np.exp(odd * b * (x - 1.0))
        e_s = np.exp(-odd * b * (x + 0.5))
        ch_pi_shift = inv(PI * (u - 0.5))
        ch_b_shift = inv(b * (u - 0.5))

        T = inv(PI * u) + ch_pi_shift / mu + np.sum(alt * (mu * e_q / (1 - q) + e_p / (mu**2 * (1 - p))), axis=0)
        S = inv(b * u) + lam * ch_b_shift + np.sum(alt * (lam**2 * e_r / (1 - r) + e_s / (lam * (1 - s))), axis=0)
        phase = np.exp(1j * tau * u)
        value = phase * S * T
        if not with_derivatives:
            return value[None, :]

        T_mu = -ch_pi_shift / mu**2 + np.sum(
            alt * (e_q / (1 - q) ** 2 - e_p * (2 - p) / (mu**3 * (1 - p) ** 2)), axis=0
        )
        S_lam = ch_b_shift + np.sum(
            alt * (lam * e_r * (2 - r) / (1 - r) ** 2 - e_s / (lam**2 * (1 - s) ** 2)), axis=0
        )
        d_tau = phase * (1j * u * S * T + S * (0.5j * mu) * T_mu)
        d_lam = phase * (S_lam * T + S * T_mu * half_phase)
        return np.stack([value, d_tau, d_lam])

    return f


def _cell_integrate(params: DomainParams, tl: TauLambda, with_derivatives: bool) -> tuple[np.ndarray, float, float]:
    _require_D(tl)
    f = _cell_rows(params, tl, with_derivatives)
    probe = np.linspace(0.0, 0.5, 65)
    peak = float(np.max(np.abs(f(probe))))
    width = config.MAX_PANEL_WIDTH
    if tl.tau.real != 0:
        width = min(width, config.PANELS_PER_PERIOD * 2.0 * PI / abs(tl.tau.real))
    value, err, evals = integrate_interval(f, [0.0, 0.5], params.tol_quad * peak, max_width=width)
    rho = max(abs(v) for v in kernel_terms.boundary_ratios(params, tl).values())
    tail = 0.5 * peak * math.exp(-(2 * config.CELL_TERMS + 1) * 0.5 * PI) / (1.0 - rho)
    logger.debug("half-period cell: %d evals, peak %.3e, rho %.6f", evals, peak, rho)
    return np.asarray(value) / EIGHT_PI, tail / EIGHT_PI, err / EIGHT_PI


def half_period_kernel(params: DomainParams, tl: TauLambda) -> KernelValue:
    value, tail, err = _cell_integrate(params, tl, with_derivatives=False)
    return KernelValue(
        value=complex(value[0]),
        n_terms=config.CELL_TERMS,
        tail_bound=tail,
        route=Route.HALF_PERIOD_CELL,
        err_est=tail + err,
    )


def half_period_derivatives(params: DomainParams, tl: TauLambda) -> tuple[KernelValue, KernelValue]:
    """(dK/dtau, dK/dlam) from the differentiated half-period integrand."""
    value, tail, err = _cell_integrate(params, tl, with_derivatives=True)

    def row(i: int) -> KernelValue:
        return KernelValue(
            value=complex(value[i]),
            n_terms=config.CELL_TERMS,
            tail_bound=tail,
            route=Route.HALF_PERIOD_CELL,
            err_est=tail + err,
        )

    return row(1), row(2)


# ----------------------------
# Public evaluation
# ----------------------------
def kernel_reduced(params: DomainParams, tl: TauLambda, *, route: Route = Route.AUTO) -> KernelValue:
    """K as a function of (tau, lam); lam = 0 keeps only the j = 0 term."""
    if tl.lam == 0:
        res = kernel_terms.I_terms(params, tl, [0])
        value = complex(np.asarray(res.value).ravel()[0])
        return KernelValue(
            value=value / EIGHT_PI, n_terms=0, tail_bound=0.0, route=Route.DIRECT_SERIES, err_est=res.err_est / EIGHT_PI
        )
    _require_D(tl)
    route = Route(route)
    if route is Route.AUTO:
        route = choose_route(params, tl)
    if route is Route.DIRECT_SERIES:
        return direct_series(params, tl)
    if route is Route.RESIDUE_PLUS_CONTOUR:
        return residue_plus_contour(params, tl)
    return half_period_kernel(params, tl)


def kernel(params: DomainParams, w: Point, z: Point, *, route: Route = Route.AUTO) -> KernelValue:
    return kernel_reduced(params, _reduced(params, w, z), route=route)


def _lam_zero_row(params: DomainParams, tl: TauLambda, j: int, *, d_tau: bool) -> KernelValue:
    res = kernel_terms.I_terms(params, tl, [j], d_tau=d_tau)
    return KernelValue(
        value=complex(np.asarray(res.value).ravel()[0]) / EIGHT_PI,
        n_terms=0,
        tail_bound=0.0,
        route=Route.DIRECT_SERIES,
        err_est=res.err_est / EIGHT_PI,
    )


def derivative_values(
    params: DomainParams, tl: TauLambda, *, route: Route = Route.AUTO
) -> tuple[KernelValue, KernelValue]:
    """(dK/dtau, dK/dlam) with error estimates, each series differentiated term by term."""
    if tl.lam == 0:
        return _lam_zero_row(params, tl, 0, d_tau=True), _lam_zero_row(params, tl, 1, d_tau=False)
    _require_D(tl)
    route = Route(route)
    if route is Route.AUTO:
        route = choose_route(params, tl)
    if route is Route.HALF_PERIOD_CELL:
        return half_period_derivatives(params, tl)

    n = kernel_terms.predicted_terms(params, tl)
    d_tau = kernel_terms.sum_over_j(_direct_terms(params, tl, d_tau=True), tol=params.tol_series, predicted_n=n)
    d_lam = kernel_terms.sum_over_j(_direct_terms(params, tl, d_lam=True), tol=params.tol_series, predicted_n=n)
    return _as_kernel_value(d_tau, Route.DIRECT_SERIES), _as_kernel_value(d_lam, Route.DIRECT_SERIES)


def _chain_factor(var: Var, w: Point, z: Point) -> tuple[complex, bool]:
    """Multiplier of dK/dtau (flag True) or dK/dlam (flag False) giving dK/d(var)."""
    if var is Var.W1:
        return 1.0, True
    if var is Var.CONJ_Z1:
        return -1.0, True
    if var is Var.W2:
        return complex(z[1]).conjugate(), False
    return complex(w[1]), False


def kernel_derivative_value(
    params: DomainParams, var: Var | str, w: Point, z: Point, *, route: Route = Route.AUTO
) -> KernelValue:
    """
    First derivative of K(w, z) in w1, w2, conj(z1) or conj(z2), with its error estimate.

    K is holomorphic in (w1, w2) and antiholomorphic in (z1, z2); the four
    derivatives follow from dK/dtau and dK/dlam by the chain rule.
    """
    var = Var.parse(var) if isinstance(var, str) and not isinstance(var, Var) else Var(var)
    tl = _reduced(params, w, z)
    d_tau, d_lam = derivative_values(params, tl, route=route)
    factor, by_tau = _chain_factor(var, w, z)
    base = d_tau if by_tau else d_lam
    return KernelValue(
        value=factor * base.value,
        n_terms=base.n_terms,
        tail_bound=abs(factor) * base.tail_bound,
        route=base.route,
        err_est=abs(factor) * base.err_est,
    )


def kernel_derivative(
    params: DomainParams, var: Var | str, w: Point, z: Point, *, route: Route = Route.AUTO
) -> complex:
    return kernel_derivative_value(params, var, w, z, route=route).value


# ----------------------------
# Leading term and remainder
# ----------------------------
def leading_term_reduced(params: DomainParams, tl: TauLambda) -> LeadingTerm:
    _require_D(tl)
    rs = kernel_terms.residue_sum_parts(params, tl)
    scale = rs.prefactor / EIGHT_PI
    parts = {
        "right_oblique": scale * rs.right,
        "left_oblique": scale * rs.left,
        "constant": scale * rs.constant,
        "error_series": -scale * rs.error_series,
    }
    # closed form up to rounding, plus the dropped tail of the error series
    rounding = np.finfo(float).eps * sum(abs(p) for p in parts.values())
    return LeadingTerm(
        value=complex(sum(parts.values())),
        parts=parts,
        prefactor=complex(np.exp(-tl.sign * tl.tau * params.nu / 2.0)),
        err_est=float(abs(scale) * rs.truncation + rounding),
    )


def leading_term(params: DomainParams, w: Point, z: Point) -> LeadingTerm:
    tl = reduce(params, w, z)
    if not tl.in_D:
        raise OutsideDomain(f"Pair ({w}, {z}) does not reduce into D.", violated="(tau, lam) in D")
    return leading_term_reduced(params, tl)


def _decay_abscissae(params: DomainParams, path: Sequence[tuple[Point, Point]]) -> list[TauLambda]:
    if len(path) < 6:
        raise ValueError(f"Decay fits need at least 6 points: got {len(path)}.")
    tls = [reduce(params, w, z) for w, z in path]
    re = np.abs([tl.tau.real for tl in tls])
    if not (np.min(re) > 0 and np.max(re) >= 4.0 * np.min(re)):
        raise ValueError(f"|Re tau| must span at least a factor of 4: got {re.min():.4g}..{re.max():.4g}.")
    for (w, z), tl in zip(path, tls):
        if not (contains(params, w) and contains(params, z)):
            raise OutsideDomain(f"Sweep point ({w}, {z}) is not interior.")
    return tls


def remainder_decay(
    params: DomainParams, path: Sequence[tuple[Point, Point]], *, residual_max: float = config.FIT_RESIDUAL_MAX
) -> ExponentFit:
    """
    Slope of log|K - leading| against |Re tau| along a sweep.

    The slope is at most -h; it equals -min(1/2, 3 nu/2) when the next two pole
    rows do not coincide. Coincident rows add a factor linear in Re tau, so
    callers loosen ``residual_max`` there.
    """
    tls = _decay_abscissae(params, path)
    values = [remainder(params, tl).value for tl in tls]
    return fit_exponent([abs(tl.tau.real) for tl in tls], values, log_x=False, residual_max=residual_max)


def leading_decay(
    params: DomainParams, path: Sequence[tuple[Point, Point]], *, residual_max: float = config.FIT_RESIDUAL_MAX
) -> ExponentFit:
    tls = _decay_abscissae(params, path)
    values = [leading_term_reduced(params, tl).value for tl in tls]
    return fit_exponent([abs(tl.tau.real) for tl in tls], values, log_x=False, residual_max=residual_max)


def re_tau_sweep(re_taus: Sequence[float]) -> list[tuple[Point, Point]]:
    """Pairs w = (t, 1), z = (0, 1): tau = t, lam = 1 on the centre line of D'_beta."""
    return [((complex(t, 0.0), 1.0 + 0j), (0j, 1.0 + 0j)) for t in re_taus]


def four_pi_sweep(k_values: Sequence[int]) -> list[tuple[Point, Point]]:
    """Re tau at multiples of 4 pi, where the residue-sum bracket is constant."""
    return re_tau_sweep([4.0 * PI * k for k in k_values])
