"""
Boundary singularities of the kernel: which expansion terms blow up where,
how fast, and how the derivative orders line up with the Bergman templates.

Everything is phrased through six boundary factors of (tau, lam):

    oblique_right  e^{-(i tau + pi)/2} - lam     (Im tau - log|lam|^2 -> pi)
    oblique_left   e^{(pi - i tau)/2} - lam      (Im tau - log|lam|^2 -> -pi)
    horiz_top      e^{beta - pi/2} - lam
    horiz_bottom   e^{-(beta - pi/2)} - lam
    corner_top     i tau + 2 beta                (E1 x E1)
    corner_bottom  i tau - 2 beta                (E3 x E3)

A factor is *active* at a boundary pair when it vanishes in the limit; a term
of the expansion is active when any of its factors is, and its predicted order
is the number of active factors.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import config, szego
from .domain import (
    ApproachPath,
    BoundaryFace,
    DomainParams,
    Face,
    Point,
    TauLambda,
    face_point,
    reduce,
    retreat,
    saturation,
)
from .errors import NoMatchingTemplate
from .fits import CornerFit, ExponentFit, fit_exponent, fit_two_factor

logger = logging.getLogger(__name__)

PI = math.pi

__all__ = [
    "BergmanTemplate",
    "ComparisonReport",
    "CornerFit",
    "ExponentFit",
    "Quantity",
    "SingularFactor",
    "Term",
    "TermActivation",
    "classify",
    "compare_orders",
    "factor_values",
    "fit_blowup",
    "fit_corner",
]


class SingularFactor(str, Enum):
    OBLIQUE_RIGHT = "oblique_right"
    OBLIQUE_LEFT = "oblique_left"
    HORIZ_TOP = "horiz_top"
    HORIZ_BOTTOM = "horiz_bottom"
    CORNER_TOP = "corner_top"
    CORNER_BOTTOM = "corner_bottom"
    # e^{(pi + i tau)/2} - lam: appears in one Bergman template only
    REFLECTED_OBLIQUE = "reflected_oblique"


BOUNDARY_FACTORS = (
    SingularFactor.OBLIQUE_RIGHT,
    SingularFactor.OBLIQUE_LEFT,
    SingularFactor.HORIZ_TOP,
    SingularFactor.HORIZ_BOTTOM,
)
CORNER_FACTORS = (SingularFactor.CORNER_TOP, SingularFactor.CORNER_BOTTOM)

_F = SingularFactor


def factor_values(params: DomainParams, tl: TauLambda) -> dict[SingularFactor, complex]:
    it = 1j * tl.tau
    lam = tl.lam
    L = params.half_log
    return {
        _F.OBLIQUE_RIGHT: complex(np.exp(-0.5 * (it + PI)) - lam),
        _F.OBLIQUE_LEFT: complex(np.exp(0.5 * (PI - it)) - lam),
        _F.HORIZ_TOP: complex(math.exp(L) - lam),
        _F.HORIZ_BOTTOM: complex(math.exp(-L) - lam),
        _F.CORNER_TOP: complex(it + 2.0 * params.beta),
        _F.CORNER_BOTTOM: complex(it - 2.0 * params.beta),
        _F.REFLECTED_OBLIQUE: complex(np.exp(0.5 * (PI + it)) - lam),
    }


# ----------------------------
# Expansion terms
# ----------------------------
class Term(str, Enum):
    K1 = "K1"
    K2 = "K2"
    KT1 = "Kt1"
    KT2 = "Kt2"
    KT3 = "Kt3"
    KT4 = "Kt4"
    KT5 = "Kt5"
    KT6 = "Kt6"
    KT7 = "Kt7"
    KT8 = "Kt8"


@dataclass(frozen=True)
class _TermSpec:
    factors: tuple[SingularFactor, ...]
    worst_face: Face | None
    ambiguous: bool = False


# Singular factors of each term and the component E1..E4 where they all vanish
# together. K1, K2 and their tilde partners have a single factor, singular along
# a whole oblique line, so no component is singled out.
TAXONOMY: dict[Term, _TermSpec] = {
    Term.K1: _TermSpec((_F.OBLIQUE_RIGHT,), None),
    Term.KT1: _TermSpec((_F.OBLIQUE_RIGHT,), None),
    Term.K2: _TermSpec((_F.OBLIQUE_LEFT,), None),
    Term.KT2: _TermSpec((_F.OBLIQUE_LEFT,), None),
    Term.KT3: _TermSpec((_F.OBLIQUE_RIGHT, _F.HORIZ_BOTTOM), Face.E4, ambiguous=True),
    Term.KT4: _TermSpec((_F.OBLIQUE_RIGHT, _F.CORNER_TOP), Face.E1),
    Term.KT5: _TermSpec((_F.OBLIQUE_LEFT, _F.CORNER_BOTTOM), Face.E3),
    Term.KT6: _TermSpec((_F.OBLIQUE_LEFT, _F.HORIZ_TOP), Face.E2),
    Term.KT7: _TermSpec((_F.HORIZ_TOP, _F.CORNER_TOP), Face.E1),
    Term.KT8: _TermSpec((_F.HORIZ_BOTTOM, _F.CORNER_BOTTOM), Face.E3),
}


@dataclass(frozen=True)
class TermActivation:
    """``worst_face`` is one of E1..E4; None when inactive or singular along a whole oblique line."""

    term: Term
    active: bool
    worst_face: Face | None
    predicted_order: int
    factors: tuple[SingularFactor, ...] = ()
    ambiguous: bool = False


# ----------------------------
# Bergman templates
# ----------------------------
@dataclass(frozen=True)
class BergmanTemplate:
    name: str
    factors: tuple[tuple[SingularFactor, int], ...]

    def power(self, factor: SingularFactor) -> int:
        return sum(p for f, p in self.factors if f is factor)


BERGMAN_TEMPLATES: tuple[BergmanTemplate, ...] = (
    BergmanTemplate("B1", ((_F.OBLIQUE_LEFT, 2),)),
    BergmanTemplate("B2", ((_F.OBLIQUE_RIGHT, 2),)),
    BergmanTemplate("Bt1", ((_F.CORNER_TOP, 2), (_F.HORIZ_TOP, 2))),
    BergmanTemplate("Bt2", ((_F.CORNER_TOP, 2), (_F.OBLIQUE_RIGHT, 2))),
    BergmanTemplate("Bt3", ((_F.OBLIQUE_LEFT, 2), (_F.HORIZ_TOP, 2))),
    BergmanTemplate("Bt4", ((_F.CORNER_BOTTOM, 2), (_F.OBLIQUE_LEFT, 2))),
    BergmanTemplate("Bt5", ((_F.CORNER_BOTTOM, 2), (_F.HORIZ_BOTTOM, 2))),
    BergmanTemplate("Bt6", ((_F.OBLIQUE_RIGHT, 2), (_F.HORIZ_BOTTOM, 2))),
    BergmanTemplate("Bt7", ((_F.CORNER_TOP, 2), (_F.HORIZ_TOP, 1), (_F.OBLIQUE_RIGHT, 1))),
    BergmanTemplate("Bt8", ((_F.CORNER_BOTTOM, 2), (_F.HORIZ_BOTTOM, 1), (_F.REFLECTED_OBLIQUE, 1))),
)


def template_order(factor: SingularFactor) -> tuple[BergmanTemplate, int]:
    """Template with the highest power of ``factor``, and that power."""
    best = max(BERGMAN_TEMPLATES, key=lambda t: t.power(factor))
    power = best.power(factor)
    if power == 0:
        raise NoMatchingTemplate(f"No Bergman template contains the factor {factor.value}.")
    return best, power


# ----------------------------
# Classification
# ----------------------------
_INTERIOR = "interior"


def _as_face(item: BoundaryFace | Face | str | None) -> BoundaryFace | None:
    if item is None:
        return None
    if isinstance(item, BoundaryFace):
        return item
    if isinstance(item, str) and not isinstance(item, Face) and item.strip().lower() == _INTERIOR:
        return None
    return BoundaryFace(Face.parse(item) if isinstance(item, str) else Face(item))


def _limit_point(params: DomainParams, bf: BoundaryFace | None) -> Point:
    if bf is None:
        return (0j, 1.0 + 0j)
    return face_point(params, bf)


def active_factors(
    params: DomainParams, pair: tuple[BoundaryFace | Face | str | None, BoundaryFace | Face | str | None]
) -> tuple[SingularFactor, ...]:
    """Factors that vanish at the boundary limit of the pair ``(w-face, z-face)``."""
    bw, bz = _as_face(pair[0]), _as_face(pair[1])
    tl = reduce(params, _limit_point(params, bw), _limit_point(params, bz))
    vals = factor_values(params, tl)
    out = []
    for f in BOUNDARY_FACTORS + CORNER_FACTORS:
        if abs(vals[f]) <= 1e-9 * (1.0 + abs(tl.lam) + params.beta):
            out.append(f)
    return tuple(out)


def classify(
    params: DomainParams, boundary_pair: tuple[BoundaryFace | Face | str | None, BoundaryFace | Face | str | None]
) -> list[TermActivation]:
    zeros = set(active_factors(params, boundary_pair))
    out = []
    for term in Term:
        spec = TAXONOMY[term]
        hit = tuple(f for f in spec.factors if f in zeros)
        active = bool(hit)
        if active and spec.ambiguous:
            logger.warning(
                "Term %s is active; its worst-face assignment (%s) is ambiguous.",
                term.value,
                spec.worst_face.value,
            )
        out.append(
            TermActivation(
                term=term,
                active=active,
                worst_face=spec.worst_face if active else None,
                predicted_order=len(hit),
                factors=hit,
                ambiguous=spec.ambiguous,
            )
        )
    return out


# ----------------------------
# Blow-up fits
# ----------------------------
class Quantity(str, Enum):
    KERNEL = "Kernel"
    DW_KERNEL = "DWKernel"


def _evaluate(params: DomainParams, w: Point, z: Point, what: Quantity | szego.Var) -> complex:
    if what is Quantity.KERNEL:
        return szego.kernel(params, w, z).value
    var = szego.Var.W1 if what is Quantity.DW_KERNEL else what
    return szego.kernel_derivative(params, var, w, z)


def _controlling(params: DomainParams, path: ApproachPath, prefer_horizontal: bool = False) -> SingularFactor | None:
    boundary = [f for f in active_factors(params, path.target) if f in BOUNDARY_FACTORS]
    if not boundary:
        return None
    horizontal = [f for f in boundary if f in (_F.HORIZ_TOP, _F.HORIZ_BOTTOM)]
    if prefer_horizontal and horizontal:
        return horizontal[0]
    return boundary[0]


def _path_eps(params: DomainParams, path: ApproachPath, factor: SingularFactor | None) -> np.ndarray:
    if factor is None:
        return np.asarray(path.epsilons, dtype=float)
    return np.asarray([abs(factor_values(params, reduce(params, w, z))[factor]) for w, z in path.points])


def fit_blowup(params: DomainParams, path: ApproachPath, quantity: Quantity | str = Quantity.KERNEL) -> ExponentFit:
    """
    Slope of log|quantity| against log(eps), eps the modulus of the controlling
    factor (the path epsilons when no factor vanishes). Pole order = -slope.
    """
    quantity = Quantity(quantity)
    eps = np.asarray(path.epsilons, dtype=float)
    if len(eps) < config.MIN_FIT_POINTS:
        raise ValueError(f"Need at least {config.MIN_FIT_POINTS} path points: got {len(eps)}.")
    if eps.max() < 8.0 * eps.min():
        raise ValueError(f"Epsilons must span a factor of 8: got {eps.min():.3g}..{eps.max():.3g}.")
    factor = _controlling(params, path)
    values = [_evaluate(params, w, z, quantity) for w, z in path.points]
    return fit_exponent(_path_eps(params, path, factor), values, log_x=True)


def _corner_factors(face: Face) -> tuple[SingularFactor, SingularFactor]:
    sig_o, sig_h = saturation(face)
    if sig_o is None or sig_h is None:
        raise ValueError(f"Face {face.value} is not a corner of the distinguished boundary.")
    oblique = _F.OBLIQUE_RIGHT if sig_o > 0 else _F.OBLIQUE_LEFT
    horizontal = _F.HORIZ_TOP if sig_h > 0 else _F.HORIZ_BOTTOM
    return oblique, horizontal


def _pair_corner_factors(bw: BoundaryFace, bz: BoundaryFace) -> tuple[SingularFactor, SingularFactor]:
    factors = _corner_factors(bw.face)
    if _corner_factors(bz.face) != factors:
        raise ValueError(f"Faces {bw.face.value} and {bz.face.value} do not meet at a common corner.")
    return factors


def fit_corner(
    params: DomainParams,
    face: BoundaryFace | Face | str,
    eps_oblique: Sequence[float],
    eps_horizontal: Sequence[float],
    quantity: Quantity | szego.Var | str = Quantity.KERNEL,
    *,
    z_face: BoundaryFace | Face | str | None = None,
) -> CornerFit:
    """
    Two-factor model log|y| = -a log|oblique| - b log|horizontal| + c over a grid of retreats.

    w retreats from ``face`` and z from ``z_face`` (the same point when omitted).
    """
    bw = _as_face(face)
    bz = bw if z_face is None else _as_face(z_face)
    if bw is None or bz is None:
        raise ValueError("fit_corner needs a boundary face for both points.")
    what = quantity
    if isinstance(quantity, str) and not isinstance(quantity, (Quantity, szego.Var)):
        what = Quantity(quantity) if quantity in {q.value for q in Quantity} else szego.Var.parse(quantity)
    oblique, horizontal = _pair_corner_factors(bw, bz)

    e_o, e_h, values = [], [], []
    for go in eps_oblique:
        for gh in eps_horizontal:
            w = retreat(params, bw, go, gh)
            z = w if bz is bw else retreat(params, bz, go, gh)
            vals = factor_values(params, reduce(params, w, z))
            e_o.append(abs(vals[oblique]))
            e_h.append(abs(vals[horizontal]))
            values.append(_evaluate(params, w, z, what))
    fit = fit_two_factor(e_o, e_h, values)
    logger.info(
        "corner %s x %s: orders %.3f (%s), %.3f (%s)",
        bw.face.value,
        bz.face.value,
        fit.order_oblique,
        oblique.value,
        fit.order_horizontal,
        horizontal.value,
    )
    return fit


# ----------------------------
# Comparison with Bergman templates
# ----------------------------
@dataclass(frozen=True)
class ComparisonReport:
    var: str
    target: tuple[str, str]
    controlling_factor: str
    szego_order: float
    bergman_order: int
    template: str
    passed: bool
    ratio_spread: float
    bounded: bool
    per_factor: dict[str, float] = field(default_factory=dict)
    note: str = "orders and bounded ratio only; the limit constant needs Bergman kernel values"


def _ratio_spread(derivs: Sequence[complex], model: Sequence[float]) -> float:
    ratios = np.abs(np.asarray(derivs)) * np.asarray(model)
    tail = ratios[len(ratios) // 2 :]
    return float(np.max(tail) / np.min(tail))


def compare_orders(params: DomainParams, path: ApproachPath, var: szego.Var | str) -> ComparisonReport:
    """
    Fitted order of d_var K along ``path`` against the Bergman template power of
    the controlling factor, plus the bounded-ratio test on the last half of the path.
    """
    var = szego.Var.parse(var) if not isinstance(var, szego.Var) else var
    lam_var = var in (szego.Var.W2, szego.Var.CONJ_Z2)
    boundary = [f for f in active_factors(params, path.target) if f in BOUNDARY_FACTORS]
    if not boundary:
        raise NoMatchingTemplate(
            f"Target {path.target[0].face.value} x {path.target[1].face.value} has no vanishing boundary factor."
        )
    derivs = [szego.kernel_derivative(params, var, w, z) for w, z in path.points]
    eps = np.asarray(path.epsilons, dtype=float)

    if len(boundary) == 1:
        factor = boundary[0]
        e = _path_eps(params, path, factor)
        order = -fit_exponent(e, derivs, log_x=True).slope
        per_factor = {factor.value: order}
        _, power = template_order(factor)
        model = e**power
    else:
        oblique, horizontal = _pair_corner_factors(*path.target)
        factor = horizontal if lam_var else oblique
        grid = eps[:: max(1, len(eps) // 4)][:4]
        corner = fit_corner(params, path.target[0], grid, grid, var, z_face=path.target[1])
        per_factor = {oblique.value: corner.order_oblique, horizontal.value: corner.order_horizontal}
        order = per_factor[factor.value]
        _, power = template_order(factor)
        other = horizontal if factor is oblique else oblique
        model = _path_eps(params, path, factor) ** power * _path_eps(params, path, other) ** per_factor[other.value]

    template, power = template_order(factor)
    spread = _ratio_spread(derivs, model)
    passed = abs(order - power) <= config.ORDER_MATCH_TOL
    logger.info(
        "compare %s on %s x %s: szego %.3f vs %s %d -> %s",
        var.value,
        path.target[0].face.value,
        path.target[1].face.value,
        order,
        template.name,
        power,
        "pass" if passed else "fail",
    )
    return ComparisonReport(
        var=var.value,
        target=(path.target[0].face.value, path.target[1].face.value),
        controlling_factor=factor.value,
        szego_order=float(order),
        bergman_order=int(power),
        template=template.name,
        passed=bool(passed),
        ratio_spread=spread,
        bounded=bool(spread < config.BOUNDED_RATIO_MAX),
        per_factor=per_factor,
    )
