"""
Reproducing-property checks on the distinguished boundary.

For a single-mode test function F(z1, z2) = A * g(z1) * z2^m the theta
integral of F * conj(K(., z)) over each face keeps only the j = m term of the
kernel series, so each face contributes

    (A / 8 pi) r^{2m} z2^m  integral over x of  g(x + i y) conj(I_m(x + i y - conj z1)) dx

with (y, r) the face's Im z1 and |z2|. Boundary values are taken at an
interior offset delta and delta/2 and extrapolated linearly to the face.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from . import config, kernel_terms
from .domain import DISTINGUISHED, BoundaryFace, DomainParams, Face, Point, contains, retreat, violated_inequality
from .errors import OutsideDomain, TestPointDegenerate
from .quadrature import integrate_interval
from .szego import kernel

logger = logging.getLogger(__name__)

EIGHT_PI = 8.0 * math.pi
_ROW_CHUNK = 256


@dataclass(frozen=True)
class TestFunction:
    """F(z1, z2) = amplitude * exp(-alpha (z1 - center)^2) * z2**mode."""

    __test__ = False  # keep pytest from collecting this as a test class

    mode: int
    center: float = 0.0
    alpha: float = 0.1
    amplitude: complex = 1.0

    @classmethod
    def gaussian(cls, params: DomainParams, mode: int, center: float = 0.0, amplitude: complex = 1.0) -> "TestFunction":
        """Profile width 1/beta^2, so |g| grows at most by e on the faces."""
        return cls(mode=int(mode), center=float(center), alpha=1.0 / params.beta**2, amplitude=complex(amplitude))

    def profile(self, z1: np.ndarray | complex) -> np.ndarray:
        return self.amplitude * np.exp(-self.alpha * (np.asarray(z1, dtype=complex) - self.center) ** 2)

    def __call__(self, z: Point) -> complex:
        return complex(self.profile(complex(z[0])) * complex(z[1]) ** self.mode)

    def tail_mass(self, y: float, reach: float) -> float:
        """Integral of |profile(x + iy)| over |x - center| > reach."""
        root = math.sqrt(self.alpha)
        return float(abs(self.amplitude) * math.exp(self.alpha * y * y) * math.sqrt(math.pi) / root * erfc(reach * root))

    def scaled(self, factor: complex) -> "TestFunction":
        return dataclasses.replace(self, amplitude=self.amplitude * factor)


@dataclass(frozen=True)
class PairingResult:
    value: complex
    per_face: dict[Face, complex]
    err_est: float
    per_face_err: dict[Face, float] = dataclasses.field(default_factory=dict)


@dataclass(frozen=True)
class ReproduceResult:
    residual: float
    err_est: float
    pairing: PairingResult
    expected: complex


def _face_contribution(params: DomainParams, F: TestFunction, z: Point, face_pt: Point) -> tuple[complex, float]:
    z1, z2 = complex(z[0]), complex(z[1])
    y = complex(face_pt[0]).imag
    r = abs(complex(face_pt[1]))
    m = F.mode
    inner = dataclasses.replace(params, tol_quad=max(params.tol_quad, config.PAIR_TOL))

    def kernel_row(x: np.ndarray) -> np.ndarray:
        taus = x + 1j * y - z1.conjugate()
        vals = np.empty(x.shape, dtype=complex)
        for start in range(0, x.size, _ROW_CHUNK):
            stop = start + _ROW_CHUNK
            vals[start:stop] = np.asarray(kernel_terms.I_over_tau(inner, taus[start:stop], m).value)
        return vals

    def f(x: np.ndarray) -> np.ndarray:
        return F.profile(x + 1j * y) * np.conj(kernel_row(x))

    # |g(x + iy)| = |A| exp(-alpha((x - c)^2 - y^2))
    reach = math.sqrt(y * y + math.log(1e12) / F.alpha)
    lo, hi = F.center - reach, F.center + reach
    probe = np.linspace(lo, hi, 33)
    probe_rows = kernel_row(probe)
    peak = float(np.max(np.abs(F.profile(probe + 1j * y) * np.conj(probe_rows)))) or 1.0
    value, err, _ = integrate_interval(f, [lo, F.center, hi], config.PAIR_TOL * peak, max_width=2.0)
    # |I_m| is largest inside the window
    tail = F.tail_mass(y, reach) * float(np.max(np.abs(probe_rows)))
    factor = r ** (2 * m) * z2**m / EIGHT_PI
    return complex(value) * factor, (float(err) + tail) * abs(factor)


def _pair_at_offset(
    params: DomainParams, F: TestFunction, z: Point, delta: float
) -> tuple[dict[Face, complex], dict[Face, float]]:
    out: dict[Face, complex] = {}
    errs: dict[Face, float] = {}
    for face in DISTINGUISHED:
        pt = retreat(params, BoundaryFace(face), delta, delta)
        out[face], errs[face] = _face_contribution(params, F, z, pt)
    return out, errs


def pair(params: DomainParams, F: TestFunction, z: Point, *, delta: float = config.BOUNDARY_OFFSET) -> PairingResult:
    """Boundary pairing <F, K(., z)> over the four faces E1..E4."""
    bad = violated_inequality(params, z)
    if bad is not None:
        raise OutsideDomain(f"Pairing point z={z} is not in D'_beta: violates {bad}.", violated=bad)
    f = config.RICHARDSON_FACTOR
    coarse, err_c = _pair_at_offset(params, F, z, delta)
    fine, err_f = _pair_at_offset(params, F, z, f * delta)
    per_face = {face: (fine[face] - f * coarse[face]) / (1.0 - f) for face in DISTINGUISHED}
    per_face_err = {face: abs(fine[face] - coarse[face]) + err_c[face] + err_f[face] for face in DISTINGUISHED}
    value = complex(sum(per_face.values()))
    logger.debug("pairing mode %d at z=%s: %s (err %.3e)", F.mode, z, value, sum(per_face_err.values()))
    return PairingResult(
        value=value,
        per_face=per_face,
        err_est=float(sum(per_face_err.values())),
        per_face_err=per_face_err,
    )


def reproduce_check(
    params: DomainParams, F: TestFunction, z: Point, *, delta: float = config.BOUNDARY_OFFSET
) -> ReproduceResult:
    expected = F(z)
    if abs(expected) <= config.DEGENERATE_VALUE:
        raise TestPointDegenerate(
            f"|F(z)| = {abs(expected):.3e} at z={z} is below {config.DEGENERATE_VALUE:g}; pick another point."
        )
    res = pair(params, F, z, delta=delta)
    residual = abs(res.value - expected) / abs(expected)
    return ReproduceResult(
        residual=float(residual),
        err_est=float(res.err_est / abs(expected)),
        pairing=res,
        expected=expected,
    )


def theta_coefficient(
    params: DomainParams, w1: complex, r: float, z: Point, m: int, n_theta: int = 32
) -> complex:
    """
    m-th Fourier coefficient in theta of K((w1, r e^{2 pi i theta}), z) from an
    FFT of full-kernel samples; equals (r conj z2)^m I_m(w1 - conj z1) / 8 pi.
    """
    if n_theta < 2 * abs(m) + 2:
        raise ValueError(f"n_theta={n_theta} too small for mode {m}.")
    theta = np.arange(n_theta) / n_theta
    samples = np.empty(n_theta, dtype=complex)
    for k, t in enumerate(theta):
        w = (complex(w1), r * complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t)))
        if not contains(params, w):
            raise OutsideDomain(f"Sample point {w} is not in D'_beta.")
        samples[k] = kernel(params, w, z).value
    return complex(np.fft.fft(samples)[m % n_theta] / n_theta)
