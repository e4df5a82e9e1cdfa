from __future__ import annotations

import numpy as np
import pytest

from worm_szego.errors import FitUnstable
from worm_szego.fits import fit_exponent, fit_two_factor


def test_log_log_slope_is_exact_for_power_law() -> None:
    eps = 0.02 * 0.5 ** np.arange(6)
    fit = fit_exponent(eps, 3.0 * eps**-2 * (1 + 0.5j), log_x=True)
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)
    assert fit.residual_rms <= 1e-12
    assert fit.n_points == 6


def test_log_linear_slope_is_exact_for_exponential() -> None:
    x = np.linspace(4.0, 40.0, 8)
    fit = fit_exponent(x, np.exp(-x / 6.0), log_x=False)
    assert fit.slope == pytest.approx(-1.0 / 6.0, abs=1e-12)


def test_flat_series_is_a_clean_fit() -> None:
    fit = fit_exponent([1.0, 2.0, 3.0, 4.0], [5.0, 5.0, 5.0, 5.0], log_x=False)
    assert fit.slope == pytest.approx(0.0, abs=1e-14)


def test_noisy_series_raises_with_fit_attached() -> None:
    x = np.arange(1.0, 7.0)
    values = np.exp(-x) * np.array([1.0, 5.0, 0.2, 4.0, 0.3, 6.0])
    with pytest.raises(FitUnstable) as info:
        fit_exponent(x, values, log_x=False)
    assert info.value.fit is not None
    # a looser threshold accepts the same data
    assert fit_exponent(x, values, log_x=False, residual_max=5.0).n_points == 6


def test_fit_input_errors() -> None:
    with pytest.raises(ValueError):
        fit_exponent([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], log_x=False)
    with pytest.raises(ValueError):
        fit_exponent([1.0, 2.0, 3.0, 4.0], [1.0, 2.0], log_x=False)
    with pytest.raises(ValueError):
        fit_exponent([0.0, 1.0, 2.0, 3.0], [1.0, 1.0, 1.0, 1.0], log_x=True)
    with pytest.raises(FitUnstable):
        fit_exponent([1.0, 2.0, 3.0, 4.0], [1.0, 0.0, 1.0, 1.0], log_x=False)


def test_two_factor_fit_recovers_both_orders() -> None:
    grid = [0.02, 0.01, 0.005, 0.0025]
    e_o = np.repeat(grid, len(grid))
    e_h = np.tile(grid, len(grid))
    values = 0.7 * e_o**-2.0 * e_h**-1.0
    fit = fit_two_factor(e_o, e_h, values)
    assert fit.order_oblique == pytest.approx(2.0, abs=1e-10)
    assert fit.order_horizontal == pytest.approx(1.0, abs=1e-10)
    assert fit.n_points == 16

    with pytest.raises(ValueError):
        fit_two_factor([0.1, 0.05], [0.1, 0.05], [1.0, 2.0])
