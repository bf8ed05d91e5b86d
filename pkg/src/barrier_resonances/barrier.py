"""Closed-form scattering data for the half-line square barrier.

Units are hbar = 2m = 1, so E = k**2.  The potential is zero on (0, a),
``v0`` on [a, b] and zero beyond ``b``; the wave function vanishes at x = 0.

All functions broadcast over numpy arrays of momenta/positions.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import DegenerateCoefficient, ZeroMomentum

# below this value of |k'|(b - a) the matching formulas switch to series
SMALL_KPRIME = 1e-4
MOMENTUM_FLOOR = 1e-12
COEFF_FLOOR = 1e-14

_COS_SERIES = np.array([(-1) ** n / factorial(2 * n) for n in range(6)])
_SINC_SERIES = np.array([(-1) ** n / factorial(2 * n + 1) for n in range(6)])
# derivative of sin(sqrt(u) d)/sqrt(u) w.r.t. u, in powers of z = u d^2
_DSINC_SERIES = np.array([(-1) ** n * n / factorial(2 * n + 1) for n in range(1, 12)])


@dataclass(frozen=True)
class BarrierParams:
    a: float
    b: float
    v0: float

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError(f"need 0 < a < b, got a={self.a}, b={self.b}")
        if not self.v0 > 0:
            raise ValueError(f"need v0 > 0, got {self.v0}")

    @property
    def width(self) -> float:
        return self.b - self.a

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), self.v0, 0.0)


@dataclass(frozen=True)
class CoefficientSet:
    """Matching coefficients of the piecewise eigenfunction at momentum k.

    ``alpha2``/``beta2`` depend on the branch of ``kprime`` (they swap under
    kprime -> -kprime); everything else is branch independent.
    """
    k: complex
    kprime: complex
    alpha1: complex
    alpha2: complex
    beta2: complex
    alpha3: complex
    beta3: complex


def internal_momentum(k, params: BarrierParams):
    """Momentum inside the barrier, principal branch of sqrt(k**2 - v0)."""
    k = np.asarray(k, dtype=complex)
    return np.sqrt(k * k - params.v0)


def _check_momentum(k):
    if np.any(np.abs(k) < MOMENTUM_FLOOR):
        raise ZeroMomentum("momentum too close to zero")


def alpha1(k):
    """Normalisation amplitude (2 pi k)**-1/2, continued with the principal root."""
    return 1.0 / np.sqrt(2 * np.pi * np.asarray(k, dtype=complex))


def _cos_sinc(u, d):
    """cos(sqrt(u) d) and sin(sqrt(u) d)/sqrt(u); even in sqrt(u)."""
    u = np.asarray(u, dtype=complex)
    kp = np.sqrt(u)
    small = np.abs(kp * d) < SMALL_KPRIME
    z = u * d * d
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(small, np.polyval(_COS_SERIES[::-1], z), np.cos(kp * d))
        s = np.where(small, d * np.polyval(_SINC_SERIES[::-1], z), np.sin(kp * d) / kp)
    return c, s


def _dsinc_du(u, d, c, s):
    u = np.asarray(u, dtype=complex)
    z = u * d * d
    small = np.abs(z) < 0.1
    with np.errstate(divide="ignore", invalid="ignore"):
        series = d ** 3 * np.polyval(_DSINC_SERIES[::-1], z)
        direct = (d * c - s) / (2 * u)
    return np.where(small, series, direct)


def _exterior(k, kp, params: BarrierParams):
    """(alpha3, beta3) without the alpha1 factor.

    Uses the matching formulas literally in k' and switches to the
    series form near k' = 0, where the k/(ik') terms are 0/0.
    """
    a, b, d = params.a, params.b, params.width
    k, kp = np.asarray(k, dtype=complex), np.asarray(kp, dtype=complex)
    s, c = np.sin(k * a), np.cos(k * a)
    small = np.abs(kp) * d < SMALL_KPRIME
    with np.errstate(divide="ignore", invalid="ignore"):
        plus = s + k / (1j * kp) * c
        minus = s - k / (1j * kp) * c
        ep, em = np.exp(1j * kp * d), np.exp(-1j * kp * d)
        r = kp / k
        a3 = 0.25 * np.exp(-1j * k * b) * ((1 + r) * ep * plus + (1 - r) * em * minus)
        b3 = 0.25 * np.exp(1j * k * b) * ((1 - r) * ep * plus + (1 + r) * em * minus)
    if np.any(small):
        u = k * k - params.v0
        cc, ss = _cos_sinc(u, d)
        a3s = 0.5 * np.exp(-1j * k * b) * (s * cc + 1j * (u / k) * s * ss + k * c * ss - 1j * c * cc)
        b3s = 0.5 * np.exp(1j * k * b) * (s * cc - 1j * (u / k) * s * ss + k * c * ss + 1j * c * cc)
        a3 = np.where(small, a3s, a3)
        b3 = np.where(small, b3s, b3)
    return a3, b3


def coefficients(k, params: BarrierParams, kprime=None) -> CoefficientSet:
    """All matching coefficients at (possibly complex) momentum ``k``.

    ``kprime`` may be given to select a branch explicitly; by default the
    principal root of k**2 - v0 is used.
    """
    k = complex(k)
    _check_momentum(k)
    kp = complex(internal_momentum(k, params)) if kprime is None else complex(kprime)
    a1 = complex(alpha1(k))
    a3, b3 = _exterior(k, kp, params)
    a, s, c = params.a, np.sin(k * params.a), np.cos(k * params.a)
    if kp == 0:
        a2 = b2 = complex("nan")
    else:
        a2 = 0.5 * np.exp(-1j * kp * a) * (s + k / (1j * kp) * c) * a1
        b2 = 0.5 * np.exp(1j * kp * a) * (s - k / (1j * kp) * c) * a1
    return CoefficientSet(k, kp, a1, complex(a2), complex(b2), complex(a3 * a1), complex(b3 * a1))


def beta3_continued(k, params: BarrierParams):
    """beta3 continued into the complex k plane (including alpha1)."""
    k = np.asarray(k, dtype=complex)
    _check_momentum(k)
    _, b3 = _exterior(k, internal_momentum(k, params), params)
    return b3 * alpha1(k)


def beta3_reduced(k, params: BarrierParams):
    """beta3 / alpha1: entire in k with the same zeros as beta3."""
    k = np.asarray(k, dtype=complex)
    _, b3 = _exterior(k, internal_momentum(k, params), params)
    return b3


def beta3_reduced_derivative(k, params: BarrierParams):
    """d/dk of :func:`beta3_reduced`, in closed form."""
    k = np.asarray(k, dtype=complex)
    a, b, d = params.a, params.b, params.width
    u = k * k - params.v0
    s, c = np.sin(k * a), np.cos(k * a)
    C, S = _cos_sinc(u, d)
    dS = _dsinc_du(u, d, C, S) * 2 * k
    dC = -k * d * S
    uk = u / k
    duk = 1 + params.v0 / (k * k)
    ds, dc = a * c, -a * s
    F = s * C - 1j * uk * s * S + k * c * S + 1j * c * C
    dF = (ds * C + s * dC
          - 1j * (duk * s * S + uk * (ds * S + s * dS))
          + c * S + k * (dc * S + c * dS)
          + 1j * (dc * C + c * dC))
    return 0.5 * np.exp(1j * k * b) * (1j * b * F + dF)


def _branches(k, x, params: BarrierParams, clip: bool = True):
    k = np.asarray(k, dtype=complex)
    x = np.asarray(x, dtype=float)
    a = params.a
    u = k * k - params.v0
    a3, b3 = _exterior(k, internal_momentum(k, params), params)
    inner = np.sin(k * x)
    C, S = _cos_sinc(u, np.clip(x - a, 0.0, params.width) if clip else x - a)
    middle = np.sin(k * a) * C + k * np.cos(k * a) * S
    outer = a3 * np.exp(1j * k * x) + b3 * np.exp(-1j * k * x)
    return inner, middle, outer, a3


def _psi_reduced(k, x, params: BarrierParams):
    """psi_E(x)/alpha1 and alpha3/alpha1 on the broadcast grid of k and x."""
    inner, middle, outer, a3 = _branches(k, x, params)
    x = np.asarray(x, dtype=float)
    psi = np.where(x <= params.a, inner, np.where(x < params.b, middle, outer))
    return psi, a3


def piecewise_branches(E, x, params: BarrierParams):
    """The three analytic pieces of psi_E, each evaluated at every x.

    Returns (left, barrier, right); psi_E uses them on [0, a], (a, b) and
    [b, inf).  Useful for checking the matching conditions.
    """
    k = np.sqrt(np.asarray(E, dtype=complex))
    _check_momentum(k)
    inner, middle, outer, _ = _branches(k, x, params, clip=False)
    a1 = alpha1(k)
    return inner * a1, middle * a1, outer * a1


def eigenfunction(E, x, params: BarrierParams):
    """Continuum eigenfunction psi_E(x) with alpha1 = (2 pi k)**-1/2."""
    k = np.sqrt(np.asarray(E, dtype=complex))
    _check_momentum(k)
    psi, _ = _psi_reduced(k, x, params)
    return psi * alpha1(k)


def ls_outgoing_k(k, x, params: BarrierParams):
    """Outgoing Lippmann-Schwinger state as a function of momentum."""
    k = np.asarray(k, dtype=complex)
    psi, a3 = _psi_reduced(k, x, params)
    if np.any(np.abs(a3) < COEFF_FLOOR):
        raise DegenerateCoefficient("alpha3 vanishes; outgoing state undefined")
    return alpha1(k) * psi / (2j * a3)


def ls_outgoing(E, x, params: BarrierParams):
    """<x|E-> = psi_E(x) / (2i alpha3), with alpha3 taken without its alpha1 factor.

    The result carries the (2 pi k)**-1/2 amplitude, so that
    <E-|E'-> = delta(E - E') / 2 in this normalisation.
    """
    k = np.sqrt(np.asarray(E, dtype=complex))
    _check_momentum(k)
    return ls_outgoing_k(k, x, params)


def s_matrix(E, params: BarrierParams):
    """Energy-representation S-matrix -alpha3/beta3 at real E > 0."""
    k = np.sqrt(np.asarray(E, dtype=complex))
    _check_momentum(k)
    a3, b3 = _exterior(k, internal_momentum(k, params), params)
    if np.any(np.abs(b3) < COEFF_FLOOR):
        raise DegenerateCoefficient("beta3 vanishes on the real axis")
    return -a3 / b3
