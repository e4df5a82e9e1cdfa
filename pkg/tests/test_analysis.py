from __future__ import annotations

import logging

import pytest

from worm_szego import analysis
from worm_szego.analysis import (
    Quantity,
    SingularFactor,
    Term,
    active_factors,
    classify,
    compare_orders,
    factor_values,
    fit_blowup,
    fit_corner,
    template_order,
)
from worm_szego.domain import DISTINGUISHED, BoundaryFace, Face, make_path, reduce
from worm_szego.errors import NoMatchingTemplate
from worm_szego.szego import Var

APPROACH_EPS = [0.02 * 0.5**k for k in range(6)]


def _by_term(activations):
    return {a.term: a for a in activations}


def test_interior_pair_activates_nothing(params) -> None:
    assert active_factors(params, ("interior", "interior")) == ()
    assert not any(a.active for a in classify(params, ("interior", "interior")))


def test_e1_corner_activates_corner_terms(params) -> None:
    acts = _by_term(classify(params, ("E1", "E1")))
    assert acts[Term.KT4].predicted_order == 2
    assert acts[Term.KT7].predicted_order == 2
    assert acts[Term.KT4].worst_face is Face.E1
    assert {a.worst_face for a in acts.values()} <= {None, *DISTINGUISHED}
    assert acts[Term.K1].active and acts[Term.K1].predicted_order == 1
    assert not acts[Term.K2].active
    assert not acts[Term.KT5].active


def test_e4_corner_flags_ambiguous_term(params, caplog) -> None:
    with caplog.at_level(logging.WARNING, logger="worm_szego.analysis"):
        acts = _by_term(classify(params, (Face.E4, Face.E4)))
    kt3 = acts[Term.KT3]
    assert kt3.active and kt3.ambiguous
    assert kt3.predicted_order == 2
    assert kt3.factors == (SingularFactor.OBLIQUE_RIGHT, SingularFactor.HORIZ_BOTTOM)
    assert "Kt3" in caplog.text


def test_oblique_face_activates_one_factor(params) -> None:
    assert active_factors(params, (BoundaryFace(Face.OBLIQUE_LEFT), BoundaryFace(Face.OBLIQUE_LEFT))) == (
        SingularFactor.OBLIQUE_LEFT,
    )
    acts = _by_term(classify(params, ("oblique_left", "oblique_left")))
    assert acts[Term.K2].active and acts[Term.KT2].active
    assert acts[Term.K2].worst_face is None
    assert not acts[Term.K1].active


def test_template_orders() -> None:
    template, power = template_order(SingularFactor.OBLIQUE_RIGHT)
    assert power == 2
    assert template.power(SingularFactor.OBLIQUE_RIGHT) == 2
    assert template_order(SingularFactor.CORNER_TOP)[1] == 2
    assert template_order(SingularFactor.REFLECTED_OBLIQUE)[1] == 1


def test_compare_without_vanishing_factor_has_no_template(params) -> None:
    # w on E1 and z on E3 reduce to tau = 0, lam = 1
    path = make_path(params, (BoundaryFace(Face.E1), BoundaryFace(Face.E3)), [0.1, 0.05, 0.025, 0.0125])
    with pytest.raises(NoMatchingTemplate):
        compare_orders(params, path, Var.W1)


def test_corner_fit_retreats_each_point_from_its_own_face(params, monkeypatch) -> None:
    seen = []

    def model(params, w, z, what):
        # exact corner model: oblique order 1, horizontal order 2
        seen.append(z)
        vals = factor_values(params, reduce(params, w, z))
        return 1.0 / (vals[SingularFactor.OBLIQUE_RIGHT] * vals[SingularFactor.HORIZ_TOP] ** 2)

    monkeypatch.setattr(analysis, "_evaluate", model)
    gaps = [0.2, 0.1, 0.05, 0.025]
    w_face = BoundaryFace(Face.E1)
    z_face = BoundaryFace(Face.E1, x=0.3)
    fit = fit_corner(params, w_face, gaps, gaps, Var.W1, z_face=z_face)
    assert fit.order_oblique == pytest.approx(1.0, abs=1e-6)
    assert fit.order_horizontal == pytest.approx(2.0, abs=1e-6)
    assert len(seen) == 16
    assert all(z[0].real == pytest.approx(0.3) for z in seen)


def test_corner_fit_needs_a_common_corner(params) -> None:
    with pytest.raises(ValueError):
        fit_corner(params, Face.E1, [0.1, 0.05], [0.1, 0.05], z_face=Face.E3)


def test_blowup_needs_enough_points(params) -> None:
    face = BoundaryFace(Face.OBLIQUE_RIGHT)
    with pytest.raises(ValueError):
        fit_blowup(params, make_path(params, (face, face), [0.02, 0.01, 0.005]))
    with pytest.raises(ValueError):
        fit_blowup(params, make_path(params, (face, face), [0.02, 0.015, 0.012, 0.01]))


@pytest.mark.slow
@pytest.mark.parametrize("quantity,order", [(Quantity.KERNEL, 1.0), (Quantity.DW_KERNEL, 2.0)])
def test_oblique_blowup_orders(params, quantity, order) -> None:
    face = BoundaryFace(Face.OBLIQUE_RIGHT)
    fit = fit_blowup(params, make_path(params, (face, face), APPROACH_EPS), quantity)
    assert -fit.slope == pytest.approx(order, abs=0.1)


@pytest.mark.slow
def test_w1_derivative_matches_template_on_oblique_face(params) -> None:
    face = BoundaryFace(Face.OBLIQUE_RIGHT)
    report = compare_orders(params, make_path(params, (face, face), APPROACH_EPS), "w1")
    assert report.controlling_factor == SingularFactor.OBLIQUE_RIGHT.value
    assert report.bergman_order == 2
    assert report.passed
