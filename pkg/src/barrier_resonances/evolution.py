"""Survival amplitude of the zero-order resonance state and its background term.

A(t) = N^-1 * integral over E > 0 of exp(-iEt)/|E - mu|^2, with N the same
integral at t = 0 in closed form.  Since every order-n state has the modulus
of the zero-order weight on the real axis, A(t) does not depend on the order;
:func:`survival_amplitude_for_state` simply forwards the distinguished pole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ToleranceNotMet
from .hardy import hardy_norm_sq
from .polefinder import Pole
from .quadrature import FilonRule, QuadratureSpec, integrate_lorentzian
from .resonance import ApproxState, zero_order_norm_sq


def _one(e):
    return np.ones_like(e)


def _as_mu(pole) -> complex:
    return complex(pole.mu) if isinstance(pole, Pole) else complex(pole)


@dataclass
class SurvivalCurve:
    pole: Pole | complex
    tgrid: np.ndarray
    a_t: np.ndarray
    r_t: np.ndarray | None = None
    bound: float = float("nan")
    error: np.ndarray | None = None

    @property
    def mu(self) -> complex:
        return _as_mu(self.pole)

    @property
    def survival(self) -> np.ndarray:
        return np.abs(self.a_t) ** 2


def background_bound(pole) -> float:
    """sqrt(||x_mu||^4/||psi0||^4 - 1), with both norms in closed form."""
    mu = _as_mu(pole)
    ratio = hardy_norm_sq(mu) / zero_order_norm_sq(mu)
    return math.sqrt(max(ratio * ratio - 1.0, 0.0))


def default_tgrid(pole, n: int = 2000, n_short: int = 200, t_short: float = 0.01,
                  lifetimes: float = 5.0) -> np.ndarray:
    """n points on [0, lifetimes/Gamma] merged with n_short points on [0, t_short]."""
    mu = _as_mu(pole)
    gamma = -2 * mu.imag
    return np.unique(np.concatenate([np.linspace(0.0, lifetimes / gamma, n),
                                     np.linspace(0.0, t_short, n_short)]))


def survival_amplitude(pole, tgrid=None, spec: QuadratureSpec = QuadratureSpec()) -> SurvivalCurve:
    """A(t) on ``tgrid`` with the bound and background filled in.

    Raises :class:`ToleranceNotMet` if any sample's error bound exceeds the
    spec tolerance relative to |A| = 1 scale.
    """
    mu = _as_mu(pole)
    if not mu.imag < 0:
        raise ValueError("pole must lie in the lower half plane")
    t = default_tgrid(mu) if tgrid is None else np.asarray(tgrid, dtype=float)
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    norm = zero_order_norm_sq(mu)
    rule = FilonRule(_one, mu, spec)
    values, errors = rule(t)
    at0 = t == 0
    if np.any(at0):
        zero = integrate_lorentzian(_one, mu, spec)
        values[at0], errors[at0] = zero.value, zero.error
    bad = errors > spec.tolerance(norm)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ToleranceNotMet(f"survival amplitude at t={t[i]} has error {errors[i]:.3g}",
                              values[i] / norm, errors[i] / norm)
    curve = SurvivalCurve(pole, t, values / norm, bound=background_bound(mu), error=errors / norm)
    return background(curve)


def background(curve: SurvivalCurve) -> SurvivalCurve:
    """R(t) = A(t) - exp(-i mu t)."""
    r = curve.a_t - np.exp(-1j * curve.mu * curve.tgrid)
    return replace(curve, r_t=r)


def survival_amplitude_for_state(state: ApproxState, tgrid=None,
                                 spec: QuadratureSpec = QuadratureSpec()) -> SurvivalCurve:
    """Survival amplitude of an order-n state: that of its zero-order pole."""
    return survival_amplitude(state.poles[state.j], tgrid, spec)


def short_time_exponent(curve: SurvivalCurve, t_max: float = 1e-3) -> float:
    """Log-log slope of 1 - |A(t)|^2 against t on (0, t_max]."""
    sel = (curve.tgrid > 0) & (curve.tgrid <= t_max)
    y = 1.0 - curve.survival[sel]
    ok = y > 0
    if ok.sum() < 2:
        raise ValueError("not enough positive samples for a fit")
    slope, _ = np.polyfit(np.log(curve.tgrid[sel][ok]), np.log(y[ok]), 1)
    return float(slope)
