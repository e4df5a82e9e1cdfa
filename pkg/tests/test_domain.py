from __future__ import annotations

import math

import numpy as np
import pytest

from worm_szego.domain import (
    BoundaryFace,
    Face,
    contains,
    face_point,
    gaps,
    make_params,
    make_path,
    reduce,
    retreat,
    sample_interior,
    tau_lambda,
    violated_inequality,
)
from worm_szego.errors import BetaOutOfRange, FaceRangeError, HOutOfRange, PathLeavesDomain, UnknownFace


def test_params_derived_quantities(params) -> None:
    assert params.nu == pytest.approx(1.0 / 3.0)
    assert params.h_window == pytest.approx((1.0 / 6.0, 0.5))
    # default h is the midpoint of the window
    assert params.h == pytest.approx(1.0 / 3.0)
    assert params.width == pytest.approx(3.0 * math.pi)
    assert params.half_log == pytest.approx(1.5 * math.pi)


def test_params_reject_bad_input() -> None:
    with pytest.raises(BetaOutOfRange):
        make_params(math.pi)
    with pytest.raises(HOutOfRange):
        make_params(2.0 * math.pi, 0.6)
    with pytest.raises(HOutOfRange):
        make_params(2.0 * math.pi, 1.0 / 6.0)
    with pytest.raises(ValueError):
        make_params(2.0 * math.pi, tol_quad=0.0)


def test_membership(params) -> None:
    assert contains(params, (0j, 1 + 0j))
    assert violated_inequality(params, (0j, 0j)) == "w2 != 0"

    # |Im z1 - log|z2|^2| = 2 > pi/2
    bad = violated_inequality(params, (2j, 1 + 0j))
    assert bad is not None and "pi/2" in bad

    r = math.exp(0.5 * (params.half_log + 0.1))
    bad = violated_inequality(params, (complex(0, params.half_log + 0.1), r + 0j))
    assert bad is not None and "beta - pi/2" in bad


def test_reduce_and_reduced_domain(params) -> None:
    w = (1.0 + 0.5j, 1.2 + 0.1j)
    z = (0.3 - 0.2j, 0.9 - 0.3j)
    tl = reduce(params, w, z)
    assert tl.tau == pytest.approx(w[0] - z[0].conjugate())
    assert tl.lam == pytest.approx(w[1] * z[1].conjugate())
    assert tl.in_D and tl.in_D_prime
    assert tl.sign == 1

    assert tau_lambda(params, -1.0 + 0j, 1.0).sign == -1
    assert tau_lambda(params, 0j, 1.0).sign == 1
    assert not tau_lambda(params, 4j, 1.0).in_D
    assert not tau_lambda(params, 1.0, 0.0).in_D


def test_face_points_saturate_inequalities(params) -> None:
    for face in (Face.E1, Face.E2, Face.E3, Face.E4):
        g_o, g_h = gaps(params, face_point(params, BoundaryFace(face, x=0.3, theta=0.25)))
        assert g_o == pytest.approx(0.0, abs=1e-12)
        assert g_h == pytest.approx(0.0, abs=1e-12)

    g_o, g_h = gaps(params, face_point(params, BoundaryFace(Face.OBLIQUE_LEFT, aux=1.0)))
    assert g_o == pytest.approx(0.0, abs=1e-12)
    assert g_h == pytest.approx(params.half_log - 1.0)


def test_retreat_opens_the_requested_gaps(params) -> None:
    p = retreat(params, BoundaryFace(Face.E3, x=-1.0, theta=0.5), 0.1, 0.2)
    assert contains(params, p)
    assert gaps(params, p) == pytest.approx((0.1, 0.2))
    assert p[0].real == pytest.approx(-1.0)
    assert p[1].real < 0

    # horizontal gap is ignored on an oblique face
    q = retreat(params, BoundaryFace(Face.OBLIQUE_RIGHT, aux=0.5), 0.05, 99.0)
    assert gaps(params, q)[0] == pytest.approx(0.05)


def test_retreat_errors(params) -> None:
    with pytest.raises(PathLeavesDomain):
        retreat(params, BoundaryFace(Face.E1), -0.1, 0.1)
    with pytest.raises(FaceRangeError):
        retreat(params, BoundaryFace(Face.HORIZ_TOP, aux=2.0), 0.1, 0.1)
    with pytest.raises(FaceRangeError):
        face_point(params, BoundaryFace(Face.E1, theta=1.0))


def test_face_parse() -> None:
    assert Face.parse("E2") is Face.E2
    assert Face.parse("e4") is Face.E4
    assert Face.parse("oblique_right") is Face.OBLIQUE_RIGHT
    assert Face.parse(Face.E1) is Face.E1
    with pytest.raises(UnknownFace):
        Face.parse("nowhere")


def test_make_path(params) -> None:
    face = BoundaryFace(Face.OBLIQUE_RIGHT)
    path = make_path(params, (face, face), [0.1, 0.05, 0.025])
    assert len(path) == 3
    for e, (w, z) in zip(path.epsilons, path.points):
        assert gaps(params, w)[0] == pytest.approx(e)
        assert gaps(params, z)[0] == pytest.approx(e)

    with pytest.raises(ValueError):
        make_path(params, (face, face), [0.1, 0.2])
    with pytest.raises(ValueError):
        make_path(params, (face, face), [])


def test_sample_interior_is_seeded_and_interior(params) -> None:
    a = sample_interior(params, np.random.default_rng(3), 10, margin=0.5)
    b = sample_interior(params, np.random.default_rng(3), 10, margin=0.5)
    assert a == b
    for p in a:
        g_o, g_h = gaps(params, p)
        assert g_o >= 0.5 * 0.5 * math.pi - 1e-12
        assert g_h >= 0.5 * params.half_log - 1e-12
