"""
Exponent fits for blow-up and decay measurements.

``fit_exponent`` regresses log|y| on x (log-linear, decay rates) or on log x
(log-log, pole orders) with ``scipy.stats.linregress``. Quality is judged by
the RMS of the log residuals, not by r^2, so a flat (slope 0) series still
counts as a clean fit.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from . import config
from .errors import FitUnstable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r2: float
    n_points: int
    residual_rms: float = 0.0
    stderr: float = 0.0


def _log_magnitudes(values: Sequence[complex | float]) -> np.ndarray:
    mags = np.abs(np.asarray(values, dtype=complex))
    if np.any(~np.isfinite(mags)) or np.any(mags <= 0):
        raise FitUnstable(f"Cannot fit exponents of non-finite or zero magnitudes: {mags.tolist()}")
    return np.log(mags)


def fit_exponent(
    x: Sequence[float],
    values: Sequence[complex | float],
    *,
    log_x: bool,
    residual_max: float = config.FIT_RESIDUAL_MAX,
) -> ExponentFit:
    """Slope of log|values| against ``x`` (or log x when ``log_x``)."""
    xs = np.asarray(x, dtype=float)
    if xs.size != len(values):
        raise ValueError(f"x and values differ in length: {xs.size} vs {len(values)}.")
    if xs.size < config.MIN_FIT_POINTS:
        raise ValueError(f"Need at least {config.MIN_FIT_POINTS} points to fit: got {xs.size}.")
    if log_x:
        if np.any(xs <= 0):
            raise ValueError("log-log fit needs positive abscissae.")
        xs = np.log(xs)
    ys = _log_magnitudes(values)

    res = linregress(xs, ys)
    resid = ys - (res.intercept + res.slope * xs)
    rms = float(np.sqrt(np.mean(resid**2)))
    r2 = float(res.rvalue) ** 2 if math.isfinite(res.rvalue) else 0.0
    fit = ExponentFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        r2=r2,
        n_points=int(xs.size),
        residual_rms=rms,
        stderr=float(res.stderr) if math.isfinite(res.stderr) else 0.0,
    )
    logger.debug("fit slope %.5f, rms %.3e over %d points", fit.slope, rms, fit.n_points)
    if rms > residual_max:
        raise FitUnstable(
            f"Exponent fit residual too large: rms={rms:.4g} > {residual_max:.4g} (slope {fit.slope:.4g}).",
            fit=fit,
        )
    return fit


@dataclass(frozen=True)
class CornerFit:
    """log|y| = a*log(eps_oblique) + b*log(eps_horizontal) + c."""

    order_oblique: float
    order_horizontal: float
    intercept: float
    n_points: int
    residual_rms: float


def fit_two_factor(
    eps_oblique: Sequence[float],
    eps_horizontal: Sequence[float],
    values: Sequence[complex | float],
    *,
    residual_max: float = config.FIT_RESIDUAL_MAX,
) -> CornerFit:
    e1 = np.asarray(eps_oblique, dtype=float)
    e2 = np.asarray(eps_horizontal, dtype=float)
    if not (e1.size == e2.size == len(values)):
        raise ValueError("eps_oblique, eps_horizontal and values must have equal length.")
    if e1.size < config.MIN_FIT_POINTS:
        raise ValueError(f"Need at least {config.MIN_FIT_POINTS} points to fit: got {e1.size}.")
    ys = _log_magnitudes(values)
    design = np.column_stack([np.log(e1), np.log(e2), np.ones_like(e1)])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    fit = CornerFit(
        order_oblique=float(-coef[0]),
        order_horizontal=float(-coef[1]),
        intercept=float(coef[2]),
        n_points=int(e1.size),
        residual_rms=rms,
    )
    if rms > residual_max:
        raise FitUnstable(f"Two-factor fit residual too large: rms={rms:.4g} > {residual_max:.4g}.", fit=fit)
    return fit
