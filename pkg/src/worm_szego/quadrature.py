"""
Error-controlled quadrature over the real line and finite intervals.

The integrands met in this package are smooth between a few known kink points
and decay like ``C * exp(-a|xi|)`` with oscillation ``exp(i Re(tau) xi)``.
The strategy is explicit truncation followed by adaptive Gauss-Legendre panels:

  - half of the error budget goes to the two tails (``truncation_radius``),
  - the other half to panel refinement, distributed in proportion to length,
  - the line is pre-split at the kink points and panels are never wider than
    one oscillation period.

Integrands are vectorised: ``eval(x)`` receives a 1-D array of nodes and
returns an array whose last axis runs over those nodes. Leading axes are a
batch (for example one row per Fourier index j) and are integrated together
under a max-norm error control.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from . import config
from .errors import NoDecay, ToleranceNotMet

logger = logging.getLogger(__name__)

ArrayFunc = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Integrand:
    """
    A vectorised integrand with its exponential envelope.

    ``scale`` bounds |f| at the outermost kink points; beyond them
    |f(xi)| <= scale * exp(-decay_rate * distance).
    """

    eval: ArrayFunc
    decay_rate: float
    osc_freq: float = 0.0
    kink_points: tuple[float, ...] = ()
    scale: float = 1.0


@dataclass(frozen=True)
class QuadResult:
    value: complex | np.ndarray
    err_est: float
    truncation_radius: float
    evals: int


@functools.lru_cache(maxsize=8)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return np.asarray(nodes, dtype=float), np.asarray(weights, dtype=float)


def truncation_radius(decay_rate: float, magnitude_scale: float, tol: float) -> float:
    """Smallest T >= 0 with magnitude_scale * exp(-decay_rate*T) / decay_rate <= tol/4."""
    if not decay_rate > 0:
        raise NoDecay(f"Integrand envelope does not decay: decay_rate={decay_rate}.")
    if not tol > 0:
        raise ValueError(f"tol must be positive: got {tol}.")
    ratio = 4.0 * magnitude_scale / (decay_rate * tol)
    if ratio <= 1.0:
        return 0.0
    return math.log(ratio) / decay_rate


def _panel_sums(func: ArrayFunc, lo: np.ndarray, hi: np.ndarray, order: int) -> np.ndarray:
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    fx = np.asarray(func(x.ravel()))
    fx = fx.reshape(fx.shape[:-1] + x.shape)
    return (fx * weights).sum(axis=-1) * half


def _batch_norm(diff: np.ndarray) -> np.ndarray:
    """Max-norm over leading batch axes; result has one entry per panel."""
    a = np.abs(diff)
    if a.ndim == 1:
        return a
    return a.reshape(-1, a.shape[-1]).max(axis=0)


def integrate_interval(
    func: ArrayFunc,
    breakpoints: Sequence[float],
    tol: float,
    *,
    max_width: float = config.MAX_PANEL_WIDTH,
    order: int = config.GL_ORDER,
    max_panels: int = config.MAX_PANELS,
) -> tuple[complex | np.ndarray, float, int]:
    """
    Adaptive composite Gauss-Legendre over consecutive ``breakpoints``.

    Each panel is compared with the sum over its two halves; panels whose
    discrepancy exceeds their share of ``tol`` are bisected. Returns
    ``(value, err_est, evals)``.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if edges.size < 2:
        raise ValueError(f"Need at least two distinct breakpoints: got {list(breakpoints)}.")
    length = float(edges[-1] - edges[0])
    density = tol / length

    pieces = []
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(1, math.ceil((b - a) / max_width))
        pieces.append(np.linspace(a, b, n + 1))
    lo = np.concatenate([p[:-1] for p in pieces])
    hi = np.concatenate([p[1:] for p in pieces])

    coarse = _panel_sums(func, lo, hi, order)
    evals = lo.size * order
    total = np.zeros(coarse.shape[:-1], dtype=complex)
    err_total = 0.0
    n_accepted = 0
    min_width = 1e-13 * length

    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _panel_sums(func, lo, mid, order)
        right = _panel_sums(func, mid, hi, order)
        evals += 2 * lo.size * order
        fine = left + right
        err = _batch_norm(fine - coarse)
        ok = (err <= density * (hi - lo)) | ((hi - lo) <= min_width)

        total = total + fine[..., ok].sum(axis=-1)
        err_total += float(err[ok].sum())
        n_accepted += int(ok.sum())

        bad = ~ok
        if n_accepted + 2 * int(bad.sum()) > max_panels:
            total = total + fine[..., bad].sum(axis=-1)
            err_total += float(err[bad].sum())
            value = total if total.ndim else complex(total)
            raise ToleranceNotMet(
                f"Panel budget {max_panels} exhausted with error estimate {err_total:.3e} > tol {tol:.3e}.",
                value=value,
                err_est=err_total,
            )
        lo, hi = np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[..., bad], right[..., bad]], axis=-1)

    logger.debug("interval [%.4g, %.4g]: %d panels, err %.3e", edges[0], edges[-1], n_accepted, err_total)
    value = total if total.ndim else complex(total)
    return value, err_total, evals


def integrate_line(f: Integrand, tol: float, *, max_panels: int = config.MAX_PANELS) -> QuadResult:
    """Integral of ``f`` over the real line to absolute accuracy ``tol``."""
    if not tol > 0:
        raise ValueError(f"tol must be positive: got {tol}.")
    tail = truncation_radius(f.decay_rate, f.scale, tol)
    kinks = sorted(set(float(k) for k in f.kink_points)) or [0.0]
    lo, hi = kinks[0] - tail, kinks[-1] + tail
    if hi - lo <= 0:
        hi = lo + 1.0

    width = config.MAX_PANEL_WIDTH
    if f.osc_freq > 0:
        width = min(width, config.PANELS_PER_PERIOD * 2.0 * math.pi / f.osc_freq)

    try:
        value, err, evals = integrate_interval(
            f.eval, [lo, *kinks, hi], 0.5 * tol, max_width=width, max_panels=max_panels
        )
    except ToleranceNotMet as exc:
        exc.err_est += 2.0 * f.scale * math.exp(-f.decay_rate * tail) / f.decay_rate
        raise
    tail_err = 2.0 * f.scale * math.exp(-f.decay_rate * tail) / f.decay_rate
    logger.debug("line integral: radius %.4g beyond kinks, %d evals", tail, evals)
    return QuadResult(value=value, err_est=err + tail_err, truncation_radius=tail, evals=evals)


def contour_residue(
    func: Callable[[np.ndarray], np.ndarray], center: complex, radius: float, n: int = config.CIRCLE_NODES
) -> complex:
    """(1/2 pi i) times the integral of ``func`` around a circle; the trapezoid rule is spectral here."""
    theta = 2.0 * math.pi * np.arange(n) / n
    e = np.exp(1j * theta)
    zeta = center + radius * e
    return complex(np.mean(np.asarray(func(zeta)) * radius * e))
