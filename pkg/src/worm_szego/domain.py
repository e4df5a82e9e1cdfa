"""
Geometry of the non-smooth worm domain D'_beta.

    D'_beta = { (z1, z2) : |Im z1 - log|z2|^2| < pi/2,  |log|z2|^2| < beta - pi/2 }

Points are plain ``(z1, z2)`` tuples of complex numbers. Everything that
needs the kernel's reduced variables goes through :func:`reduce`, which maps a
pair of points to ``tau = w1 - conj(z1)`` and ``lam = w2 * conj(z2)``.

Boundary faces are addressed in the coordinates of the boundary functional:
a face point is ``(x + i*Im z1, e^{l/2} e^{2 pi i theta})`` where the pair
``(diff, l) = (Im z1 - log|z2|^2, log|z2|^2)`` saturates one or both defining
inequalities. Approach paths retreat from a face by shrinking the saturated
gaps, at fixed ``x`` and ``theta``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import config
from .errors import BetaOutOfRange, FaceRangeError, HOutOfRange, PathLeavesDomain, UnknownFace

logger = logging.getLogger(__name__)

Point = tuple[complex, complex]

HALF_PI = 0.5 * math.pi


# ----------------------------
# Parameters
# ----------------------------
@dataclass(frozen=True)
class DomainParams:
    """
    Shape parameter and numerical settings for one family of evaluations.

    ``nu`` and the admissible contour-height window are derived from ``beta``;
    use :func:`make_params` rather than the constructor so the invariants are
    checked.
    """

    beta: float
    nu: float
    h: float
    tol_quad: float = config.TOL_QUAD
    tol_series: float = config.TOL_SERIES

    @property
    def width(self) -> float:
        """2*beta - pi, the rate of the second hyperbolic cosine."""
        return 2.0 * self.beta - math.pi

    @property
    def half_log(self) -> float:
        """beta - pi/2, the bound on |log|z2|^2|."""
        return self.beta - HALF_PI

    @property
    def h_window(self) -> tuple[float, float]:
        return h_window(self.nu)


def h_window(nu: float) -> tuple[float, float]:
    """Open interval of admissible contour heights between the first two pole rows."""
    return 0.5 * nu, min(0.5, 1.5 * nu)


def make_params(
    beta: float,
    h_opt: float | None = None,
    *,
    tol_quad: float = config.TOL_QUAD,
    tol_series: float = config.TOL_SERIES,
) -> DomainParams:
    beta = float(beta)
    if not beta > math.pi:
        raise BetaOutOfRange(f"beta must exceed pi: got beta={beta!r}.")
    if not (tol_quad > 0 and tol_series > 0):
        raise ValueError(
            f"Tolerances must be strictly positive: tol_quad={tol_quad}, tol_series={tol_series}."
        )

    nu = math.pi / (2.0 * beta - math.pi)
    lo, hi = h_window(nu)
    if h_opt is None:
        h = 0.5 * (lo + hi)
    else:
        h = float(h_opt)
        if not lo < h < hi:
            raise HOutOfRange(
                f"Contour height h={h} outside the open window ({lo:.6g}, {hi:.6g}) for beta={beta}."
            )
    return DomainParams(beta=beta, nu=nu, h=h, tol_quad=float(tol_quad), tol_series=float(tol_series))


# ----------------------------
# Membership
# ----------------------------
def _coords(w: Point) -> tuple[float, float]:
    """(Im w1 - log|w2|^2, log|w2|^2) for w2 != 0."""
    w1, w2 = w
    l = 2.0 * math.log(abs(w2))
    return complex(w1).imag - l, l


def violated_inequality(params: DomainParams, w: Point) -> str | None:
    """Human-readable name of the first defining inequality that ``w`` fails, else None."""
    if complex(w[1]) == 0:
        return "w2 != 0"
    diff, l = _coords(w)
    if not abs(diff) < HALF_PI:
        return f"|Im w1 - log|w2|^2| < pi/2 (got {abs(diff):.6g})"
    if not abs(l) < params.half_log:
        return f"|log|w2|^2| < beta - pi/2 (got {abs(l):.6g} vs {params.half_log:.6g})"
    return None


def contains(params: DomainParams, w: Point) -> bool:
    return violated_inequality(params, w) is None


def gaps(params: DomainParams, w: Point) -> tuple[float, float]:
    """Slack in the oblique and horizontal inequalities; both positive iff ``w`` is interior."""
    diff, l = _coords(w)
    return HALF_PI - abs(diff), params.half_log - abs(l)


# ----------------------------
# Reduced variables
# ----------------------------
@dataclass(frozen=True)
class TauLambda:
    tau: complex
    lam: complex
    in_D: bool
    in_D_prime: bool

    @property
    def sign(self) -> int:
        """sgn(Re tau) with sgn(0) = +1."""
        return 1 if self.tau.real >= 0 else -1

    @property
    def strip_offset(self) -> float:
        """Im tau - log|lam|^2 (the oblique coordinate of the pair)."""
        return self.tau.imag - 2.0 * math.log(abs(self.lam))


def tau_lambda(params: DomainParams, tau: complex, lam: complex) -> TauLambda:
    """Build reduced variables directly (no point pair), flagging membership in D and D'."""
    tau = complex(tau)
    lam = complex(lam)
    if lam == 0:
        return TauLambda(tau=tau, lam=lam, in_D=False, in_D_prime=False)
    log_lam2 = 2.0 * math.log(abs(lam))
    offset = abs(tau.imag - log_lam2)
    in_D = offset < math.pi and abs(log_lam2) < 2.0 * params.half_log
    in_D_prime = offset < 2.0 * math.pi and abs(log_lam2) < 2.0 * params.beta - HALF_PI
    return TauLambda(tau=tau, lam=lam, in_D=in_D, in_D_prime=in_D_prime)


def reduce(params: DomainParams, w: Point, z: Point) -> TauLambda:
    w1, w2 = complex(w[0]), complex(w[1])
    z1, z2 = complex(z[0]), complex(z[1])
    return tau_lambda(params, w1 - z1.conjugate(), w2 * z2.conjugate())


# ----------------------------
# Boundary faces
# ----------------------------
class Face(str, Enum):
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    OBLIQUE_RIGHT = "oblique_right"
    OBLIQUE_LEFT = "oblique_left"
    HORIZ_TOP = "horiz_top"
    HORIZ_BOTTOM = "horiz_bottom"

    @classmethod
    def parse(cls, name: str) -> "Face":
        if isinstance(name, cls):
            return name
        key = str(name).strip()
        for face in cls:
            if key in (face.value, face.name) or key.lower() == face.value.lower():
                return face
        raise UnknownFace(f"Unknown face {name!r}. Known: {[f.value for f in cls]}")


# (sign of saturated oblique coordinate, sign of saturated horizontal coordinate);
# None marks the free coordinate carried by ``aux``.
_SATURATION: dict[Face, tuple[int | None, int | None]] = {
    Face.E1: (+1, +1),
    Face.E2: (-1, +1),
    Face.E3: (-1, -1),
    Face.E4: (+1, -1),
    Face.OBLIQUE_RIGHT: (+1, None),
    Face.OBLIQUE_LEFT: (-1, None),
    Face.HORIZ_TOP: (None, +1),
    Face.HORIZ_BOTTOM: (None, -1),
}

DISTINGUISHED = (Face.E1, Face.E2, Face.E3, Face.E4)


def saturation(face: Face) -> tuple[int | None, int | None]:
    return _SATURATION[Face(face)]


@dataclass(frozen=True)
class BoundaryFace:
    """
    A point of the topological boundary.

    ``aux`` is the free coordinate of a non-distinguished face: ``log|z2|^2``
    along an oblique face, ``Im z1 - log|z2|^2`` along a horizontal one. It is
    ignored on E1..E4.
    """

    face: Face
    x: float = 0.0
    theta: float = 0.0
    aux: float = 0.0


def _face_coords(params: DomainParams, bf: BoundaryFace, gap_o: float, gap_h: float) -> tuple[float, float]:
    sig_o, sig_h = saturation(bf.face)
    L = params.half_log
    if sig_o is None:
        if not -HALF_PI <= bf.aux <= HALF_PI:
            raise FaceRangeError(f"aux={bf.aux} outside [-pi/2, pi/2] on face {bf.face.value}.")
        diff = bf.aux
    else:
        diff = sig_o * (HALF_PI - gap_o)
    if sig_h is None:
        if not -L <= bf.aux <= L:
            raise FaceRangeError(f"aux={bf.aux} outside [-{L:.6g}, {L:.6g}] on face {bf.face.value}.")
        l = bf.aux
    else:
        l = sig_h * (L - gap_h)
    return diff, l


def _point(bf: BoundaryFace, diff: float, l: float) -> Point:
    z1 = complex(bf.x, diff + l)
    z2 = math.exp(0.5 * l) * complex(math.cos(2 * math.pi * bf.theta), math.sin(2 * math.pi * bf.theta))
    return z1, z2


def face_point(params: DomainParams, bf: BoundaryFace) -> Point:
    if not 0.0 <= bf.theta < 1.0:
        raise FaceRangeError(f"theta={bf.theta} outside [0, 1).")
    diff, l = _face_coords(params, bf, 0.0, 0.0)
    return _point(bf, diff, l)


def retreat(params: DomainParams, bf: BoundaryFace, gap_oblique: float, gap_horizontal: float) -> Point:
    """
    Interior point obtained by opening the saturated gaps of ``bf``.

    Gaps belonging to a free coordinate of the face are ignored. Raises
    PathLeavesDomain when the result is not strictly interior.
    """
    if not 0.0 <= bf.theta < 1.0:
        raise FaceRangeError(f"theta={bf.theta} outside [0, 1).")
    diff, l = _face_coords(params, bf, gap_oblique, gap_horizontal)
    p = _point(bf, diff, l)
    bad = violated_inequality(params, p)
    if bad is not None:
        raise PathLeavesDomain(
            f"Retreat ({gap_oblique:.6g}, {gap_horizontal:.6g}) from {bf.face.value} leaves the domain: "
            f"violates {bad}."
        )
    return p


# ----------------------------
# Approach paths
# ----------------------------
@dataclass(frozen=True)
class ApproachPath:
    target: tuple[BoundaryFace, BoundaryFace]
    epsilons: tuple[float, ...]
    points: tuple[tuple[Point, Point], ...]

    def __len__(self) -> int:
        return len(self.points)


def make_path(
    params: DomainParams,
    target: tuple[BoundaryFace, BoundaryFace],
    eps_list: Sequence[float],
    direction: tuple[float, float] = (1.0, 1.0),
) -> ApproachPath:
    """
    Pairs (w, z) retreating by ``eps`` from the two target faces.

    ``direction`` weights the oblique and horizontal gaps; on a corner face the
    default retreats along the diagonal of the (oblique, horizontal) slack plane.
    """
    eps = [float(e) for e in eps_list]
    if not eps:
        raise ValueError("Approach path needs at least one epsilon.")
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError(f"Epsilons must be positive and strictly decreasing: got {eps}.")

    a, b = direction
    points = []
    for e in eps:
        w = retreat(params, target[0], a * e, b * e)
        z = retreat(params, target[1], a * e, b * e)
        points.append((w, z))
    logger.debug(
        "path %s x %s: %d points, eps %.3g..%.3g",
        target[0].face.value,
        target[1].face.value,
        len(points),
        eps[0],
        eps[-1],
    )
    return ApproachPath(target=tuple(target), epsilons=tuple(eps), points=tuple(points))


def sample_interior(
    params: DomainParams, rng: np.random.Generator, n: int, *, margin: float = 0.5, x_span: float = 2.0
) -> list[Point]:
    """
    ``n`` interior points whose slack is at least ``margin`` times the half-widths.

    Sampling is uniform in (x, Im z1 - log|z2|^2, log|z2|^2, theta), so the
    points are reproducible for a seeded generator.
    """
    if not 0.0 <= margin < 1.0:
        raise ValueError(f"margin must lie in [0, 1): got {margin}.")
    k = 1.0 - margin
    out: list[Point] = []
    for _ in range(int(n)):
        x = rng.uniform(-x_span, x_span)
        diff = rng.uniform(-k * HALF_PI, k * HALF_PI)
        l = rng.uniform(-k * params.half_log, k * params.half_log)
        theta = rng.uniform(0.0, 1.0)
        out.append(_point(BoundaryFace(Face.E1, x=x, theta=theta), diff, l))
    return out
