from __future__ import annotations

import math

import numpy as np
import pytest

from worm_szego import kernel_terms as kt
from worm_szego.domain import make_params, tau_lambda
from worm_szego.errors import SeriesDiverged, ToleranceNotMet

SQRT3 = math.sqrt(3.0)


def _ctx(params, tau, j, lam=1.0):
    return kt.TermContext.build(params, tau_lambda(params, tau, lam), j)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(a), abs(b))


def test_fundamental_equality_grid() -> None:
    a = np.linspace(-3.0, 3.0, 20)[:, None]  # even count: a = 0 is not on the grid
    b = np.linspace(-2.0, 2.0, 20)[None, :]
    lhs = np.exp(np.abs(a)) / np.cosh(a + 1j * b)
    np.testing.assert_allclose(kt.fundamental_equality(a, b), lhs, rtol=1e-13, atol=1e-13)


def test_inv_cosh_is_stable_for_large_arguments() -> None:
    z = np.array([800.0 + 0.3j, -800.0 - 0.1j, 0.2 + 0.1j])
    vals = kt.inv_cosh(z)
    assert np.all(np.isfinite(vals))
    assert vals[2] == pytest.approx(1.0 / np.cosh(z[2]), rel=1e-14)


def test_exprel_is_continuous_through_zero() -> None:
    assert complex(kt.exprel(0.0)) == pytest.approx(1.0)
    u = np.array([1e-4, 5e-2, 1j * 5e-4, 0.7 - 0.2j])
    np.testing.assert_allclose(kt.exprel(u), np.expm1(u) / u, rtol=1e-13)


def test_poles_in_unit_window(params) -> None:
    poles = kt.poles_and_residues(_ctx(params, 0.0, 0), window=1.0)
    expected = [-5j / 6, -0.5j, -1j / 6, 1j / 6, 0.5j, 5j / 6]
    np.testing.assert_allclose(poles.poles, expected, atol=1e-12)
    # i/2 is hit by the sech row and by the second b-row when beta = 2 pi
    assert poles.orders == (1, 2, 1, 1, 2, 1)

    with pytest.raises(ValueError):
        kt.poles_and_residues(_ctx(params, 0.0, 0), window=0.0)


def test_first_row_residue_closed_form(params) -> None:
    ctx = _ctx(params, 0.0, 0)
    upper, lower = kt.poles_and_residues(ctx, window=1.0).residues_at_first_row
    assert upper == pytest.approx(-2j / (3.0 * SQRT3 * math.pi), rel=1e-13)
    assert lower == pytest.approx(-upper, rel=1e-13)


@pytest.mark.parametrize("j,tau", [(0, 0.0), (2, 1.0 + 0.3j), (-3, 0.5)])
def test_residue_matches_circle_quadrature(params, j, tau) -> None:
    ctx = _ctx(params, tau, j)
    upper = kt.poles_and_residues(ctx, window=1.0).residues_at_first_row[0]
    assert abs(kt.residue_by_contour(ctx, +1) - upper) <= 1e-9 * abs(upper)


def test_R0_at_origin(params) -> None:
    assert kt.R_j(_ctx(params, 0.0, 0)) == pytest.approx(4.0 / (3.0 * SQRT3), rel=1e-13)


@pytest.mark.parametrize("tau", [0.5, 1.0 + 0.3j, 5.0, -2.0 + 0.2j])
def test_residue_theorem_identity(params, tau) -> None:
    tl = tau_lambda(params, tau, 1.0)
    js = np.arange(-5, 6)
    I = np.asarray(kt.I_terms(params, tl, js).value)
    J = np.asarray(kt.J_terms(params, tl, js).value)
    R = kt.R_terms(params, tl, js)
    np.testing.assert_allclose(R + J, I, rtol=1e-8)


def test_I_conjugation_symmetry(params) -> None:
    tau = 1.3 + 0.4j
    for j in (-2, 0, 3):
        a = kt.I_j(_ctx(params, tau, j))
        b = kt.I_j(_ctx(params, -tau.conjugate(), j))
        assert _rel(b, a.conjugate()) <= 1e-10


def test_J_is_independent_of_admissible_h() -> None:
    p1 = make_params(2.0 * math.pi, 0.25)
    p2 = make_params(2.0 * math.pi, 0.45)
    tl = tau_lambda(p1, 1.5 + 0.2j, 1.0)
    js = np.arange(-3, 4)
    j1 = np.asarray(kt.J_terms(p1, tl, js).value)
    j2 = np.asarray(kt.J_terms(p2, tl, js).value)
    np.testing.assert_allclose(j1, j2, rtol=1e-8)


@pytest.mark.parametrize("j", [-3, -1, 0, 1, 2, 3])
def test_decomposition_identity(params, j) -> None:
    J, rhs = kt.check_decomposition(_ctx(params, 1.0, j))
    assert _rel(J, rhs) <= 1e-8


@pytest.mark.parametrize("tau", [1.0, 0.7 + 0.4j, -1.2 - 0.3j])
def test_M_closed_form_matches_quadrature(params, tau) -> None:
    for j in (-4, -1, 0, 1, 5):
        ctx = _ctx(params, tau, j)
        assert _rel(kt.M_j(ctx), kt.M_closed_form(ctx)) <= 1e-10


def test_M0_two_term_form(params) -> None:
    ctx = _ctx(params, 0.9 + 0.1j, 0)
    beta, h, it = params.beta, params.h, 1j * ctx.tl.tau
    expected = np.exp(2j * beta * h) / (it + 2 * beta) - np.exp(-2j * beta * h) / (it - 2 * beta)
    assert kt.M_closed_form(ctx) == pytest.approx(complex(expected), rel=1e-14)


def _partial_R(params, tl, n=60):
    js = np.arange(-n, n + 1)
    return complex(np.sum(kt.R_terms(params, tl, js, weighted=True)))


def _partial_M(params, tl, n=60):
    total = sum(kt.M_closed_form(kt.TermContext.build(params, tl, j)) * tl.lam**j for j in range(-n, n + 1))
    return complex(4.0 * np.exp(-tl.tau * tl.sign * params.h) * total)


@pytest.mark.parametrize("tau,lam", [(0.8 + 0.3j, 1.1 + 0.2j), (-0.8 + 0.3j, 0.9 - 0.4j), (2.0 - 1.0j, 0.6)])
def test_closed_form_sums_match_partial_sums(params, tau, lam) -> None:
    tl = tau_lambda(params, tau, lam)
    assert tl.in_D
    assert _rel(_partial_R(params, tl), kt.residue_sum(params, tl)) <= 1e-8
    assert _rel(_partial_M(params, tl), kt.M_sum(params, tl).total) <= 1e-8


def test_M_sum_removable_singularity(params) -> None:
    # i tau/2 + beta - pi = 0, inside D with log|lam|^2 = 2 pi
    tau = 2j * (params.beta - math.pi)
    tl = tau_lambda(params, tau, math.exp(math.pi))
    assert tl.in_D
    parts = kt.M_sum(params, tl)
    assert all(np.isfinite(parts.psi))
    assert _rel(_partial_M(params, tl), parts.total) <= 1e-8


def test_residue_sum_parts_add_up(params) -> None:
    tl = tau_lambda(params, 0.8 + 0.3j, 1.1 + 0.2j)
    parts = kt.residue_sum_parts(params, tl)
    total = parts.prefactor * (parts.right + parts.left + parts.constant - parts.error_series)
    assert parts.total == pytest.approx(total)
    assert parts.constant == pytest.approx(0.5 / math.cos(math.pi / 6.0))
    assert 0.0 < parts.truncation <= params.tol_series * abs(parts.error_series)


def test_closed_forms_reject_points_outside_D(params) -> None:
    tl = tau_lambda(params, 4j, 1.0)
    with pytest.raises(SeriesDiverged):
        kt.residue_sum(params, tl)
    with pytest.raises(SeriesDiverged):
        kt.predicted_terms(params, tl)


def test_boundary_ratios_and_predicted_terms(params) -> None:
    tl = tau_lambda(params, 0.0, 1.0)
    ratios = kt.boundary_ratios(params, tl)
    assert abs(ratios["q0"]) == pytest.approx(math.exp(-0.5 * math.pi))
    assert abs(ratios["p0"]) == pytest.approx(math.exp(-0.5 * math.pi))
    assert abs(ratios["r0"]) == pytest.approx(math.exp(-0.5 * params.width))
    assert kt.predicted_terms(params, tl, 1e-12) == 18


def test_sum_over_j_geometric() -> None:
    def terms(js):
        return 0.5 ** np.abs(js).astype(float), 0.0

    s = kt.sum_over_j(terms, tol=1e-14, predicted_n=50)
    assert s.value == pytest.approx(3.0, abs=1e-12)
    assert s.n_terms % 8 == 0
    assert s.tail_bound <= 1e-13


def test_sum_over_j_fails_without_decay() -> None:
    def terms(js):
        return np.ones(js.shape), 0.0

    with pytest.raises(ToleranceNotMet) as info:
        kt.sum_over_j(terms, tol=1e-12, predicted_n=2)
    assert info.value.value is not None


def test_next_pole_rate(params, params_3pi) -> None:
    assert kt.next_pole_rate(params) == pytest.approx(0.5)
    assert kt.next_pole_rate(params_3pi) == pytest.approx(0.3)
    assert kt.pole_rows_coincide(params)
    assert not kt.pole_rows_coincide(params_3pi)
