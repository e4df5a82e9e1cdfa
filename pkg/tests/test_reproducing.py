from __future__ import annotations

import math

import numpy as np
import pytest

from worm_szego import kernel_terms
from worm_szego.domain import tau_lambda
from worm_szego.errors import OutsideDomain, TestPointDegenerate
from worm_szego.reproducing import TestFunction, pair, reproduce_check, theta_coefficient

ORIGIN = (0j, 1.0 + 0j)


def test_gaussian_test_function(params) -> None:
    F = TestFunction.gaussian(params, 2, center=0.5)
    assert F.alpha == pytest.approx(1.0 / params.beta**2)
    assert F((0.5 + 0j, 2.0 + 0j)) == pytest.approx(4.0)
    assert F.scaled(1j)((0.5 + 0j, 1.0 + 0j)) == pytest.approx(1j)


def test_profile_tail_mass(params) -> None:
    F = TestFunction.gaussian(params, 0, amplitude=2.0)
    y = 1.5
    full = 2.0 * math.exp(F.alpha * y * y) * math.sqrt(math.pi / F.alpha)
    assert F.tail_mass(y, 0.0) == pytest.approx(full, rel=1e-12)
    # one standard deviation each side leaves erfc(1) of the mass
    assert F.tail_mass(y, 1.0 / math.sqrt(F.alpha)) == pytest.approx(full * math.erfc(1.0), rel=1e-12)
    cut = math.sqrt(y * y + math.log(1e12) / F.alpha)
    assert 0.0 < F.tail_mass(y, cut) <= 1e-12 * full


def test_degenerate_point_is_rejected(params) -> None:
    F = TestFunction(mode=1, amplitude=0.0)
    with pytest.raises(TestPointDegenerate):
        reproduce_check(params, F, ORIGIN)


def test_pairing_point_must_be_interior(params) -> None:
    with pytest.raises(OutsideDomain):
        pair(params, TestFunction.gaussian(params, 0), (2j, 1.0 + 0j))


def test_theta_coefficient_matches_series_term(params) -> None:
    w1, r = 0.3 + 0.2j, 1.0
    coeff = theta_coefficient(params, w1, r, ORIGIN, 1)
    tl = tau_lambda(params, w1, 1.0)
    I_1 = complex(np.asarray(kernel_terms.I_terms(params, tl, [1]).value).ravel()[0])
    assert coeff == pytest.approx(I_1 / (8.0 * math.pi), rel=1e-9)

    with pytest.raises(ValueError):
        theta_coefficient(params, w1, r, ORIGIN, 20, n_theta=32)


@pytest.mark.slow
def test_mode_zero_is_reproduced(params) -> None:
    res = reproduce_check(params, TestFunction.gaussian(params, 0), ORIGIN)
    assert res.residual <= 1e-4
    assert res.expected == pytest.approx(1.0)
    assert len(res.pairing.per_face) == 4


@pytest.mark.slow
def test_pairing_is_linear_in_the_test_function(params) -> None:
    z = (0.2 + 0.1j, 1.05 + 0.1j)
    F = TestFunction.gaussian(params, 1)
    a = pair(params, F, z).value
    b = pair(params, F.scaled(2.0 - 1.0j), z).value
    assert b == pytest.approx((2.0 - 1.0j) * a, rel=1e-10)
