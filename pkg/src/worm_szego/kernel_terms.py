"""
Per-index quantities of the kernel series and their closed-form sums.

For an index j and reduced variables (tau, lam) the building block is

    g_j(zeta) = exp(i tau zeta) / (ch(pi zeta) ch(b (zeta - j/2))),   b = 2 beta - pi,

with I_j = integral of g_j over the real line. Shifting the contour to the line
Im zeta = s*h (s = sgn Re tau) crosses exactly one pole and splits

    I_j = R_j + J_j,        J_j = 4 e^{-s tau h} (M_j - E1_j - E2_j + E3_j).

Numerically every hyperbolic secant is evaluated through

    1/ch(z) = 2 exp(-sgn(Re z) z) / (1 + exp(-2 sgn(Re z) z)),

and all exponentials of one integrand (including the weight lam**j) are folded
into a single ``exp`` so rows stay finite for large |j|.

Batched ``*_terms`` functions integrate many j at once; their rows may carry
the weight lam**j so that the max-norm error control is on the summands of the
kernel series rather than on the raw integrals.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from . import config
from .domain import DomainParams, TauLambda
from .errors import SeriesDiverged, ToleranceNotMet
from .quadrature import Integrand, QuadResult, contour_residue, integrate_line

logger = logging.getLogger(__name__)

PI = math.pi


# ----------------------------
# Elementary pieces
# ----------------------------
def _sgn(x: np.ndarray) -> np.ndarray:
    """Sign with sgn(0) = +1."""
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


def inv_cosh_parts(z: np.ndarray | complex) -> tuple[np.ndarray, np.ndarray]:
    """Return (expo, denom) with 1/ch(z) = 2*exp(expo)/denom and |exp(expo)| <= 1, |denom| >= 0."""
    z = np.asarray(z, dtype=complex)
    sg = _sgn(z.real)
    return -sg * z, 1.0 + np.exp(-2.0 * sg * z)


def inv_cosh(z: np.ndarray | complex) -> np.ndarray:
    expo, denom = inv_cosh_parts(z)
    return 2.0 * np.exp(expo) / denom


def fundamental_equality(a: np.ndarray | float, b: np.ndarray | float) -> np.ndarray:
    """
    Right-hand side of e^{|a|}/ch(a+ib) = 2 e^{-i sgn(a) b} (1 - X/(1+X)), X = e^{-2 sgn(a)(a+ib)}.

    Compare against ``exp(|a|)/cosh(a + 1j*b)`` for the identity itself.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sg = _sgn(a)
    x = np.exp(-2.0 * sg * (a + 1j * b))
    return 2.0 * np.exp(-1j * sg * b) * (1.0 - x / (1.0 + x))


def exprel(u: np.ndarray | complex) -> np.ndarray:
    """(e^u - 1)/u for complex u, by Taylor series near 0."""
    u = np.asarray(u, dtype=complex)
    small = np.abs(u) < config.EXPREL_SERIES_BELOW
    safe = np.where(small, 1.0, u)
    direct = (np.exp(safe) - 1.0) / safe
    series = 1.0 + u / 2.0 + u**2 / 6.0 + u**3 / 24.0 + u**4 / 120.0
    return np.where(small, series, direct)


def _denominator_floor(phi: float) -> float:
    """Lower bound of |1 + r e^{i phi}| over 0 <= r <= 1."""
    return 1.0 if math.cos(phi) >= 0 else abs(math.sin(phi))


def next_pole_rate(params: DomainParams) -> float:
    """Height of the first pole row above the contour, min(1/2, 3 nu/2)."""
    return min(0.5, 1.5 * params.nu)


def pole_rows_coincide(params: DomainParams) -> bool:
    """True when the second b-row meets the first pi-row at height 1/2 (beta = 2 pi)."""
    return abs(1.5 * params.nu - 0.5) < 1e-9


# ----------------------------
# Contexts and records
# ----------------------------
@dataclass(frozen=True)
class TermContext:
    params: DomainParams
    j: int
    tl: TauLambda
    sign: int

    @classmethod
    def build(cls, params: DomainParams, tl: TauLambda, j: int) -> "TermContext":
        return cls(params=params, j=int(j), tl=tl, sign=tl.sign)

    @property
    def h_signed(self) -> float:
        return self.sign * self.params.h


@dataclass(frozen=True)
class PoleList:
    """Poles of g_j with |Im zeta| <= window; ``orders`` runs parallel to ``poles``."""

    poles: tuple[complex, ...]
    orders: tuple[int, ...]
    residues_at_first_row: tuple[complex, complex]


@dataclass(frozen=True)
class ResidueSumParts:
    """
    The residue sum split as prefactor * (right + left + constant - error_series).

    ``right`` carries 1/(lam e^{(i tau + pi)/2} - 1) and is singular on the right
    oblique line; ``left`` carries 1/(1 - lam e^{(i tau - pi)/2}) and is singular
    on the left one.
    """

    prefactor: complex
    right: complex
    left: complex
    constant: float
    error_series: complex
    n_terms: int
    truncation: float = 0.0  # bound on the dropped tail of ``error_series``

    @property
    def total(self) -> complex:
        return self.prefactor * (self.right + self.left + self.constant - self.error_series)


@dataclass(frozen=True)
class MSumParts:
    """Eight closed-form summands of 4 e^{-s tau h} sum_j M_j lam^j (before the prefactor)."""

    prefactor: complex
    terms: tuple[complex, ...]
    psi: tuple[complex, complex, complex, complex]

    @property
    def total(self) -> complex:
        return self.prefactor * complex(sum(self.terms))


@dataclass(frozen=True)
class SeriesSum:
    value: complex
    n_terms: int
    tail_bound: float
    quad_err: float


# ----------------------------
# g_j and its poles
# ----------------------------
def g_j(params: DomainParams, tau: complex, j: int, zeta: np.ndarray | complex) -> np.ndarray:
    """The integrand e^{i tau zeta}/(ch(pi zeta) ch(b(zeta - j/2))) at complex ``zeta``."""
    zeta = np.asarray(zeta, dtype=complex)
    e1, d1 = inv_cosh_parts(PI * zeta)
    e2, d2 = inv_cosh_parts(params.width * (zeta - 0.5 * j))
    return 4.0 * np.exp(1j * tau * zeta + e1 + e2) / (d1 * d2)


def _first_row_residue(ctx: TermContext, side: int) -> complex:
    b = ctx.params.width
    zeta0 = 0.5 * ctx.j + 0.5j * side * ctx.params.nu
    return complex(side * np.exp(1j * ctx.tl.tau * zeta0) * inv_cosh(PI * zeta0) / (1j * b))


def poles_and_residues(ctx: TermContext, window: float) -> PoleList:
    if not window > 0:
        raise ValueError(f"window must be positive: got {window}.")
    nu = ctx.params.nu
    found: list[complex] = []
    kmax = int(math.ceil(window / min(nu, 1.0))) + 1
    for k in range(-kmax, kmax + 1):
        y = 0.5 + k
        if abs(y) <= window + 1e-12:
            found.append(complex(0.0, y))
        y = nu * (0.5 + k)
        if abs(y) <= window + 1e-12:
            found.append(complex(0.5 * ctx.j, y))

    poles: list[complex] = []
    orders: list[int] = []
    for p in sorted(found, key=lambda c: (c.imag, c.real)):
        if poles and abs(p - poles[-1]) < 1e-12:
            orders[-1] += 1
            continue
        poles.append(p)
        orders.append(1)
    upper, lower = _first_row_residue(ctx, +1), _first_row_residue(ctx, -1)
    return PoleList(poles=tuple(poles), orders=tuple(orders), residues_at_first_row=(upper, lower))


def residue_by_contour(ctx: TermContext, side: int = +1, n: int = config.CIRCLE_NODES) -> complex:
    """Residue at j/2 + i*side*nu/2 by trapezoid quadrature on a small circle."""
    nu = ctx.params.nu
    center = complex(0.5 * ctx.j, 0.5 * side * nu)
    radius = 0.25 * min(nu, 1.0 - nu)
    return contour_residue(lambda z: g_j(ctx.params, ctx.tl.tau, ctx.j, z), center, radius, n)


# ----------------------------
# Batched rows
# ----------------------------
def _log_weight(tl: TauLambda, weighted: bool) -> complex:
    return complex(np.log(tl.lam)) if weighted else 0.0


def _row_log_peaks(params: DomainParams, tl: TauLambda, js: np.ndarray, log_w: complex) -> np.ndarray:
    """log of the numerator envelope max_xi |lam^j e^{i tau xi - pi|xi| - b|xi - j/2|}| (attained at a kink)."""
    b = params.width
    at_zero = -0.5 * b * np.abs(js)
    at_half = -0.5 * tl.tau.imag * js - 0.5 * PI * np.abs(js)
    return js * log_w.real + np.maximum(at_zero, at_half)


def _kinks(js: np.ndarray) -> tuple[float, ...]:
    return tuple(sorted({0.0, *(0.5 * float(j) for j in js)}))


def _line_integrand(
    params: DomainParams,
    tl: TauLambda,
    js: np.ndarray,
    shift: float,
    *,
    weighted: bool,
    d_tau: bool,
) -> Integrand:
    tau = tl.tau
    b = params.width
    log_w = _log_weight(tl, weighted)
    jcol = js.astype(float)[:, None]

    def f(xi: np.ndarray) -> np.ndarray:
        zeta = xi[None, :] + 1j * shift
        e1, d1 = inv_cosh_parts(PI * zeta)
        e2, d2 = inv_cosh_parts(b * (zeta - 0.5 * jcol))
        out = 4.0 * np.exp(1j * tau * zeta + e1 + e2 + jcol * log_w) / (d1 * d2)
        if d_tau:
            out = out * (1j * zeta)
        return out

    decay = 2.0 * params.beta - abs(tau.imag)
    floor = _denominator_floor(2.0 * PI * shift) * _denominator_floor(2.0 * b * shift)
    log_peak = float(np.max(_row_log_peaks(params, tl, js, log_w)))
    scale = 4.0 * math.exp(log_peak - tau.real * shift) / floor
    kinks = _kinks(js)
    if d_tau:
        reach = max(abs(k) for k in kinks) + abs(shift)
        scale *= reach + 1.0 / decay
        decay *= 0.5
    return Integrand(eval=f, decay_rate=decay, osc_freq=abs(tau.real), kink_points=kinks, scale=scale)


def _integrate(f: Integrand, tol_rel: float) -> QuadResult:
    return integrate_line(f, tol_rel * f.scale)


def I_terms(
    params: DomainParams,
    tl: TauLambda,
    js: Sequence[int],
    *,
    weighted: bool = False,
    d_tau: bool = False,
) -> QuadResult:
    """Rows I_j (or lam^j I_j, or their tau-derivatives) for every j in ``js``."""
    js = np.asarray(js, dtype=int)
    f = _line_integrand(params, tl, js, 0.0, weighted=weighted, d_tau=d_tau)
    return _integrate(f, params.tol_quad)


def J_terms(
    params: DomainParams,
    tl: TauLambda,
    js: Sequence[int],
    *,
    weighted: bool = False,
    d_tau: bool = False,
    sign: int | None = None,
) -> QuadResult:
    """
    Rows J_j: the integral of g_j along Im zeta = s*h.

    ``sign`` overrides s = sgn(Re tau); both branches are valid on Re tau = 0.
    """
    js = np.asarray(js, dtype=int)
    s = tl.sign if sign is None else sign
    f = _line_integrand(params, tl, js, s * params.h, weighted=weighted, d_tau=d_tau)
    return _integrate(f, params.tol_quad)


def R_terms(
    params: DomainParams,
    tl: TauLambda,
    js: Sequence[int],
    *,
    weighted: bool = False,
    sign: int | None = None,
) -> np.ndarray:
    """Closed form R_j = 2 nu e^{i tau zeta0}/ch(pi zeta0), zeta0 = j/2 + i s nu/2."""
    js = np.asarray(js, dtype=float)
    s = tl.sign if sign is None else sign
    zeta0 = 0.5 * js + 0.5j * s * params.nu
    expo, denom = inv_cosh_parts(PI * zeta0)
    log_w = _log_weight(tl, weighted)
    return 4.0 * params.nu * np.exp(1j * tl.tau * zeta0 + expo + js * log_w) / denom


def I_over_tau(params: DomainParams, taus: np.ndarray, j: int) -> QuadResult:
    """I_j at many tau at once (one row per tau), sharing the xi nodes."""
    taus = np.asarray(taus, dtype=complex).ravel()
    tcol = taus[:, None]
    b = params.width

    def f(xi: np.ndarray) -> np.ndarray:
        zeta = xi[None, :]
        e1, d1 = inv_cosh_parts(PI * zeta)
        e2, d2 = inv_cosh_parts(b * (zeta - 0.5 * j))
        return 4.0 * np.exp(1j * tcol * zeta + e1 + e2) / (d1 * d2)

    im = taus.imag
    at_zero = -0.5 * b * abs(j)
    at_half = float(np.max(-0.5 * im * j)) - 0.5 * PI * abs(j)
    integrand = Integrand(
        eval=f,
        decay_rate=2.0 * params.beta - float(np.max(np.abs(im))),
        osc_freq=float(np.max(np.abs(taus.real))) if taus.size else 0.0,
        kink_points=(0.0, 0.5 * j),
        scale=4.0 * math.exp(max(at_zero, at_half)),
    )
    return _integrate(integrand, params.tol_quad)


DECOMPOSITION_PARTS = ("M", "E1", "E2", "E3")


def decomposition_terms(
    params: DomainParams,
    tl: TauLambda,
    js: Sequence[int],
    part: str,
    *,
    weighted: bool = False,
) -> QuadResult:
    """
    Rows of M_j or E^{(k)}_j, integrals over the real line of

        sigma(xi) e^{i tau xi - pi|xi| - b|xi - j/2|} * {1, Q1/(1+Q1), Q2/(1+Q2), Q1 Q2/((1+Q1)(1+Q2))}

    with Q1 = e^{-2 sgn(xi) pi (xi + i h_s)} and Q2 = e^{-2 sgn(xi - j/2) b (xi - j/2 + i h_s)}.
    """
    if part not in DECOMPOSITION_PARTS:
        raise ValueError(f"Unknown decomposition part {part!r}. Known: {DECOMPOSITION_PARTS}")
    js = np.asarray(js, dtype=int)
    jcol = js.astype(float)[:, None]
    tau = tl.tau
    b = params.width
    hs = tl.sign * params.h
    log_w = _log_weight(tl, weighted)

    def f(xi: np.ndarray) -> np.ndarray:
        x = xi[None, :]
        s1 = _sgn(x)
        s2 = _sgn(x - 0.5 * jcol)
        expo = (
            -1j * hs * (s1 * PI + s2 * b)
            + 1j * tau * x
            - PI * np.abs(x)
            - b * np.abs(x - 0.5 * jcol)
            + jcol * log_w
        )
        base = np.exp(expo)
        if part == "M":
            return base
        q1 = np.exp(-2.0 * s1 * PI * (x + 1j * hs))
        if part == "E1":
            return base * q1 / (1.0 + q1)
        q2 = np.exp(-2.0 * s2 * b * (x - 0.5 * jcol + 1j * hs))
        if part == "E2":
            return base * q2 / (1.0 + q2)
        return base * q1 * q2 / ((1.0 + q1) * (1.0 + q2))

    log_peak = float(np.max(_row_log_peaks(params, tl, js, log_w)))
    integrand = Integrand(
        eval=f,
        decay_rate=2.0 * params.beta - abs(tau.imag),
        osc_freq=abs(tau.real),
        kink_points=_kinks(js),
        scale=math.exp(log_peak),
    )
    return _integrate(integrand, params.tol_quad)


# ----------------------------
# Scalar per-j operations
# ----------------------------
def _single(result: QuadResult) -> complex:
    return complex(np.asarray(result.value).ravel()[0])


def I_j(ctx: TermContext) -> complex:
    return _single(I_terms(ctx.params, ctx.tl, [ctx.j]))


def J_j(ctx: TermContext) -> complex:
    return _single(J_terms(ctx.params, ctx.tl, [ctx.j]))


def R_j(ctx: TermContext) -> complex:
    return complex(R_terms(ctx.params, ctx.tl, [ctx.j])[0])


def M_j(ctx: TermContext) -> complex:
    return _single(decomposition_terms(ctx.params, ctx.tl, [ctx.j], "M"))


def E_k_j(ctx: TermContext, k: int) -> complex:
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3: got {k}.")
    return _single(decomposition_terms(ctx.params, ctx.tl, [ctx.j], f"E{k}"))


def M_closed_form(ctx: TermContext) -> complex:
    """M_j from the three elementary pieces of the piecewise-exponential integral."""
    beta, b = ctx.params.beta, ctx.params.width
    hs = ctx.h_signed
    it = 1j * ctx.tl.tau
    j = ctx.j
    half = 0.5 * j
    if j >= 0:
        first = np.exp(2j * beta * hs - b * half) / (it + 2 * beta)
        middle = np.exp(2j * (beta - PI) * hs - b * half) * half * exprel((it + 2 * beta - 2 * PI) * half)
        last = -np.exp(-2j * beta * hs + (it - PI) * half) / (it - 2 * beta)
    else:
        first = np.exp(2j * beta * hs + (it + PI) * half) / (it + 2 * beta)
        # integral over (j/2, 0) of e^{(i tau - 2 beta + 2 pi) xi + b j/2}
        y = it - 2 * beta + 2 * PI
        middle = np.exp(-2j * (beta - PI) * hs + b * half) * (-half) * exprel(y * half)
        last = -np.exp(-2j * beta * hs + b * half) / (it - 2 * beta)
    return complex(first + middle + last)


def check_decomposition(ctx: TermContext) -> tuple[complex, complex]:
    """(J_j, 4 e^{-s tau h}(M_j - E1_j - E2_j + E3_j)) for side-by-side comparison."""
    parts = {p: _single(decomposition_terms(ctx.params, ctx.tl, [ctx.j], p)) for p in DECOMPOSITION_PARTS}
    rhs = 4.0 * np.exp(-ctx.tl.tau * ctx.h_signed) * (parts["M"] - parts["E1"] - parts["E2"] + parts["E3"])
    return J_j(ctx), complex(rhs)


# ----------------------------
# Geometric ratios
# ----------------------------
def boundary_ratios(params: DomainParams, tl: TauLambda) -> dict[str, complex]:
    """
    The four m = 0 geometric ratios of the series over j.

    Each is < 1 in modulus exactly on the corresponding side of the reduced
    domain: q0 (left oblique), p0 (right oblique), r0 (top), s0 (bottom).
    """
    lam = tl.lam
    mu = lam * np.exp(0.5j * tl.tau)
    c_pi = math.exp(-0.5 * PI)
    c_b = math.exp(-0.5 * params.width)
    return {
        "q0": complex(mu * c_pi),
        "p0": complex(c_pi / mu),
        "r0": complex(lam * c_b),
        "s0": complex(c_b / lam),
    }


def predicted_terms(params: DomainParams, tl: TauLambda, tol: float | None = None) -> int:
    """Shells |j| <= N needed for the geometric tail to fall below ``tol``."""
    tol = params.tol_series if tol is None else tol
    rho = max(abs(v) for v in boundary_ratios(params, tl).values())
    if not rho < 1.0:
        raise SeriesDiverged(f"Series over j does not converge: largest ratio {rho:.6g} >= 1.")
    return max(1, math.ceil(math.log(tol) / math.log(rho)))


def _tail_bound(mags: Sequence[float]) -> float | None:
    w = config.SERIES_RATIO_WINDOW
    if len(mags) < w:
        return None
    last = np.asarray(mags[-w:], dtype=float)
    if last[-1] == 0.0:
        return 0.0
    if np.any(last[:-1] == 0.0):
        return None
    ratio = float(np.max(last[1:] / last[:-1]))
    if ratio > config.SERIES_RATIO_CAP:
        return None
    return 2.0 * float(last[-1]) * ratio / (1.0 - ratio)


def sum_over_j(
    terms: Callable[[np.ndarray], tuple[np.ndarray, float]],
    *,
    tol: float,
    predicted_n: int,
    block: int = config.SERIES_BLOCK,
) -> SeriesSum:
    """
    Sum terms(j) over j in the fixed order 0, 1, -1, 2, -2, ...

    ``terms`` maps an integer array to (values, quadrature error). Stops when
    the geometric tail bound from the last shells drops below ``tol`` times
    the running sum; fails past SERIES_OVERRUN times ``predicted_n``.
    """
    vals0, err0 = terms(np.array([0]))
    total = complex(np.asarray(vals0).ravel()[0])
    quad_err = float(err0)
    mags: list[float] = []
    n = 0
    limit = config.SERIES_OVERRUN * max(int(predicted_n), block)
    while True:
        shells = np.arange(n + 1, n + block + 1)
        js = np.stack([shells, -shells], axis=1).ravel()
        vals, err = terms(js)
        pairs = np.asarray(vals).reshape(-1, 2)
        for pair in pairs:
            total += complex(pair[0]) + complex(pair[1])
            mags.append(float(np.max(np.abs(pair))))
        quad_err += float(err)
        n += block

        tail = _tail_bound(mags)
        if tail is not None and tail <= tol * max(abs(total), np.finfo(float).tiny):
            logger.debug("series over j: %d shells, tail %.3e", n, tail)
            return SeriesSum(value=total, n_terms=n, tail_bound=tail, quad_err=quad_err)
        if n >= limit:
            raise ToleranceNotMet(
                f"Series over j not converged after {n} shells (predicted {predicted_n}).",
                value=total,
                err_est=float("inf") if tail is None else tail,
            )


# ----------------------------
# Closed-form sums
# ----------------------------
def residue_sum_parts(params: DomainParams, tl: TauLambda, *, sign: int | None = None) -> ResidueSumParts:
    """
    Sum over j of R_j lam^j in closed form.

    With s = sgn(Re tau), A = lam e^{(i tau - pi)/2} and D = lam e^{(i tau + pi)/2}:

        4 nu e^{-s tau nu/2} [ e^{is pi nu/2}/(D - 1) + e^{-is pi nu/2} A/(1 - A)
                               + 1/(2 cos(pi nu/2)) - E ]

    where E collects the corrections from 1/(1+x) = 1 - x/(1+x) in each R_j.
    """
    nu = params.nu
    s = tl.sign if sign is None else sign
    tau, lam = tl.tau, tl.lam
    A = lam * np.exp(0.5 * (1j * tau - PI))
    D = lam * np.exp(0.5 * (1j * tau + PI))
    if not (abs(A) < 1.0 and abs(D) > 1.0):
        raise SeriesDiverged(
            f"Residue sum outside its domain: |lam e^((i tau - pi)/2)| = {abs(A):.6g}, "
            f"|lam e^((i tau + pi)/2)| = {abs(D):.6g}. Expected < 1 and > 1."
        )
    phase = np.exp(0.5j * s * PI * nu)
    right = phase / (D - 1.0)
    left = A / (phase * (1.0 - A))
    constant = 0.5 / math.cos(0.5 * PI * nu)

    # j > 0 terms have ratio |A| e^{-pi}, j < 0 terms |1/D| e^{-pi}
    rate = max(abs(A), 1.0 / abs(D)) * math.exp(-PI)
    n = max(1, math.ceil(math.log(params.tol_series * 1e-2) / math.log(rate)))
    k = np.arange(1, n + 1, dtype=float)
    pos = (A * math.exp(-PI)) ** k * phase ** (-3) / (1.0 + np.exp(-PI * (k + 1j * s * nu)))
    neg = (1.0 / (D * math.exp(PI))) ** k * phase**3 / (1.0 + np.exp(-PI * (k - 1j * s * nu)))
    error_series = complex(np.sum(pos) + np.sum(neg))
    # both series: |term k| <= rate^k / (1 - e^{-pi})
    truncation = 2.0 * rate ** (n + 1) / ((1.0 - rate) * (1.0 - math.exp(-PI)))

    prefactor = complex(4.0 * nu * np.exp(-s * tau * nu / 2.0))
    return ResidueSumParts(
        prefactor=prefactor,
        right=complex(right),
        left=complex(left),
        constant=constant,
        error_series=error_series,
        n_terms=n,
        truncation=truncation,
    )


def residue_sum(params: DomainParams, tl: TauLambda) -> complex:
    return residue_sum_parts(params, tl).total


def M_sum(params: DomainParams, tl: TauLambda) -> MSumParts:
    """
    Closed form of 4 e^{-s tau h} sum_j M_j lam^j.

    With A = lam e^{(i tau - pi)/2}, B = lam e^{-(beta - pi/2)}, C = lam e^{beta - pi/2}
    and D = lam e^{(i tau + pi)/2} the eight summands are the j = 0 pair and the
    geometric sums of the three elementary pieces on each side of j = 0.
    """
    beta, b = params.beta, params.width
    hs = tl.sign * params.h
    tau, lam = tl.tau, tl.lam
    it = 1j * tau
    P = it + 2 * beta
    N = it - 2 * beta
    A = lam * np.exp(0.5 * (it - PI))
    B = lam * math.exp(-0.5 * b)
    C = lam * math.exp(0.5 * b)
    D = lam * np.exp(0.5 * (it + PI))
    if not (abs(A) < 1 and abs(B) < 1 and abs(C) > 1 and abs(D) > 1):
        raise SeriesDiverged(
            f"M-sum outside its domain: |A|={abs(A):.6g}, |B|={abs(B):.6g}, |C|={abs(C):.6g}, |D|={abs(D):.6g}."
        )
    up = np.exp(2j * beta * hs)
    down = np.exp(-2j * beta * hs)
    psi1 = lam * up * math.exp(-(beta - 0.5 * PI))
    psi2 = -lam * down * np.exp(0.5 * (it - PI))
    psi3 = lam * math.exp(-(beta - 0.5 * PI)) * np.exp(2j * (beta - PI) * hs) * 0.5 * exprel(0.5 * it + beta - PI)
    psi4 = lam * math.exp(beta - 0.5 * PI) * np.exp(-2j * (beta - PI) * hs) * 0.5 * exprel(0.5 * it - beta + PI)

    terms = (
        up / P,
        -down / N,
        up / (P * (D - 1.0)),
        -down / (N * (C - 1.0)),
        psi1 / (P * (1.0 - B)),
        psi2 / (N * (1.0 - A)),
        psi3 / ((1.0 - A) * (1.0 - B)),
        psi4 / ((C - 1.0) * (D - 1.0)),
    )
    return MSumParts(
        prefactor=complex(4.0 * np.exp(-tau * hs)),
        terms=tuple(complex(t) for t in terms),
        psi=(complex(psi1), complex(psi2), complex(psi3), complex(psi4)),
    )
