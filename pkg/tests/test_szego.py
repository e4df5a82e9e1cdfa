from __future__ import annotations

import math

import numpy as np
import pytest

from worm_szego import kernel_terms, szego
from worm_szego.domain import BoundaryFace, Face, reduce, retreat, tau_lambda
from worm_szego.errors import OutsideDomain
from worm_szego.suites import five_point_derivative
from worm_szego.szego import Route, Var

W = (0.3 + 0.2j, 1.1 + 0.1j)
Z = (-0.2 - 0.1j, 0.9 - 0.2j)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(a), abs(b))


def test_routes_agree_at_interior_pair(params) -> None:
    direct = szego.kernel(params, W, Z, route=Route.DIRECT_SERIES)
    contour = szego.kernel(params, W, Z, route=Route.RESIDUE_PLUS_CONTOUR)
    cell = szego.kernel(params, W, Z, route=Route.HALF_PERIOD_CELL)
    assert direct.route is Route.DIRECT_SERIES
    assert cell.route is Route.HALF_PERIOD_CELL
    assert _rel(direct.value, contour.value) <= 1e-7
    assert _rel(direct.value, cell.value) <= 1e-7


def test_routes_agree_on_imaginary_axis(params) -> None:
    # Re tau = 0: both contour branches are valid and averaged
    w = (0.1j, 1.0 + 0j)
    z = (-0.05j, 1.0 + 0j)
    assert reduce(params, w, z).tau.real == 0.0
    a = szego.kernel(params, w, z, route=Route.DIRECT_SERIES)
    b = szego.kernel(params, w, z, route=Route.RESIDUE_PLUS_CONTOUR)
    assert _rel(a.value, b.value) <= 1e-7


def test_hermitian_symmetry_and_diagonal(params) -> None:
    k_wz = szego.kernel(params, W, Z, route=Route.DIRECT_SERIES).value
    k_zw = szego.kernel(params, Z, W, route=Route.DIRECT_SERIES).value
    assert _rel(k_wz, k_zw.conjugate()) <= 1e-10

    k_zz = szego.kernel(params, Z, Z).value
    assert k_zz.real > 0
    assert abs(k_zz.imag) <= 1e-10 * abs(k_zz)


def test_kernel_at_origin_pair(params) -> None:
    # tau = 0, lam = 1: real and positive
    k = szego.kernel(params, (0j, 1.0 + 0j), (0j, 1.0 + 0j))
    assert k.value.real > 0
    assert abs(k.value.imag) <= 1e-10 * abs(k.value)


def test_lam_zero_keeps_only_first_term(params) -> None:
    tl = tau_lambda(params, 0.5, 0.0)
    k = szego.kernel_reduced(params, tl)
    js = np.array([0])
    r0 = kernel_terms.R_terms(params, tl, js)[0]
    j0 = np.asarray(kernel_terms.J_terms(params, tl, js).value).ravel()[0]
    assert k.n_terms == 0
    assert _rel(k.value, (r0 + j0) / (8.0 * math.pi)) <= 1e-8


def test_points_outside_are_rejected(params) -> None:
    with pytest.raises(OutsideDomain) as info:
        szego.kernel(params, (2j, 1.0 + 0j), Z)
    assert "pi/2" in info.value.violated
    with pytest.raises(OutsideDomain):
        szego.kernel(params, W, (0j, 0j))
    with pytest.raises(OutsideDomain):
        szego.kernel_reduced(params, tau_lambda(params, 4j, 1.0))


@pytest.mark.parametrize("var", list(Var))
def test_derivatives_match_finite_differences(params, var) -> None:
    analytic = szego.kernel_derivative(params, var, W, Z)
    numeric = five_point_derivative(params, var, W, Z)
    assert _rel(analytic, numeric) <= 1e-6


@pytest.mark.parametrize("route", [Route.DIRECT_SERIES, Route.HALF_PERIOD_CELL])
def test_derivative_carries_error_estimate(params, route) -> None:
    dk = szego.kernel_derivative_value(params, Var.CONJ_Z2, W, Z, route=route)
    assert dk.route is route
    assert dk.value == szego.kernel_derivative(params, Var.CONJ_Z2, W, Z, route=route)
    assert 0.0 < dk.err_est <= 1e-6 * abs(dk.value)


def test_var_parse() -> None:
    assert Var.parse("w1") is Var.W1
    assert Var.parse("CONJ_Z2") is Var.CONJ_Z2
    assert Var.parse(Var.W2) is Var.W2
    with pytest.raises(ValueError):
        Var.parse("z3")


def test_leading_plus_remainder_is_kernel(params) -> None:
    lead = szego.leading_term(params, W, Z)
    assert sum(lead.parts.values()) == pytest.approx(lead.value, rel=1e-14)
    rest = szego.remainder(params, reduce(params, W, Z))
    k = szego.kernel(params, W, Z, route=Route.DIRECT_SERIES)
    assert _rel(lead.value + rest.value, k.value) <= 1e-8
    assert 0.0 < lead.err_est <= 1e-10 * abs(lead.value)


def test_route_choice_switches_near_the_boundary(params) -> None:
    tl = reduce(params, (0j, 1.0 + 0j), (0j, 1.0 + 0j))
    assert szego.choose_route(params, tl) is Route.DIRECT_SERIES

    p = retreat(params, BoundaryFace(Face.OBLIQUE_RIGHT), 1e-3, 0.0)
    near = reduce(params, p, p)
    assert kernel_terms.predicted_terms(params, near) > 160
    assert szego.choose_route(params, near) is Route.HALF_PERIOD_CELL


def test_decay_sweeps_need_enough_spread(params) -> None:
    with pytest.raises(ValueError):
        szego.leading_decay(params, szego.four_pi_sweep(range(1, 5)))
    with pytest.raises(ValueError):
        szego.leading_decay(params, szego.re_tau_sweep([10.0, 11.0, 12.0, 13.0, 14.0, 15.0]))


def test_leading_term_decays_at_half_nu(params) -> None:
    fit = szego.leading_decay(params, szego.four_pi_sweep(range(1, 7)))
    assert fit.slope == pytest.approx(-params.nu / 2.0, rel=0.1)


@pytest.mark.slow
def test_remainder_decays_at_next_pole_rate(params_3pi) -> None:
    assert not kernel_terms.pole_rows_coincide(params_3pi)
    fit = szego.remainder_decay(params_3pi, szego.four_pi_sweep(range(3, 14)))
    assert fit.slope == pytest.approx(-kernel_terms.next_pole_rate(params_3pi), rel=0.1)


@pytest.mark.slow
def test_remainder_decays_faster_than_h_with_coincident_rows(params) -> None:
    assert kernel_terms.pole_rows_coincide(params)
    fit = szego.remainder_decay(params, szego.four_pi_sweep(range(1, 7)), residual_max=0.5)
    assert fit.slope <= -params.h
