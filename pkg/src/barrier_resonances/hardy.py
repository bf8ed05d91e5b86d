"""Blaschke products, Hardy-space resonance states and Cauchy transforms.

The +i0 boundary values of the Cauchy kernels are realised as +i eps; the
residue-expansion check composes the two transforms numerically and
compares against the closed residue formula for a sequence of eps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import PoleEvaluation
from .quadrature import QuadratureSpec, QuadResult, integrate_halfline, integrate_line, pole_breakpoints

POLE_FLOOR = 1e-14


@dataclass(frozen=True)
class HardyState:
    """x_mu(sigma) = 1/(sigma - mu), an element of H^2_+ for Im mu < 0."""
    mu: complex

    def __post_init__(self):
        if not complex(self.mu).imag < 0:
            raise ValueError("Hardy resonance state needs Im mu < 0")

    def __call__(self, sigma):
        return 1.0 / (np.asarray(sigma, dtype=complex) - self.mu)

    @property
    def norm_sq(self) -> float:
        return hardy_norm_sq(self.mu)


@dataclass(frozen=True)
class BlaschkeSpec:
    poles: tuple
    skip: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))
        object.__setattr__(self, "skip", frozenset(self.skip))
        if any(p.imag >= 0 for p in self.poles):
            raise ValueError("Blaschke poles must lie in the lower half plane")

    @property
    def active(self):
        return [p for i, p in enumerate(self.poles) if i not in self.skip]


def blaschke(z, spec: BlaschkeSpec):
    """prod over unskipped poles of (z - conj(mu))/(z - mu)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for mu in spec.active:
        if np.any(np.abs(z - mu) < POLE_FLOOR * (1 + abs(mu))):
            raise PoleEvaluation(f"Blaschke product evaluated at its pole {mu}")
        out = out * (z - mu.conjugate()) / (z - mu)
    return out


def hardy_norm_sq(mu: complex) -> float:
    """||x_mu||^2 over the real line, pi/|Im mu|."""
    mu = complex(mu)
    if not mu.imag < 0:
        raise ValueError("need Im mu < 0")
    return np.pi / abs(mu.imag)


def _kernel_breakpoints(centre: float, eps: float, levels: int = 14):
    pts = [centre]
    for m in range(levels):
        pts += [centre - eps * 4.0 ** m, centre + eps * 4.0 ** m]
    return pts


def cauchy_plus(f: Callable, sigma: float, eps: float,
                spec: QuadratureSpec = QuadratureSpec(),
                breakpoints: Sequence[float] = ()) -> QuadResult:
    """(1/2 pi i) * integral of f(s)/(sigma - s + i eps) ds over the real line."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    bp = list(breakpoints) + _kernel_breakpoints(sigma, eps)
    r = integrate_line(lambda s: f(s) / (sigma - s + 1j * eps), spec, bp)
    return QuadResult(r.value / (2j * np.pi), r.error / (2 * np.pi), r.panels)


def thetabar_star(g: Callable, sigma: float, eps: float,
                  spec: QuadratureSpec = QuadratureSpec(),
                  breakpoints: Sequence[float] = ()) -> QuadResult:
    """(1/2 pi i) * integral over E > 0 of g(E)/(E - sigma + i eps)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    bp = list(breakpoints) + _kernel_breakpoints(sigma, eps) + _kernel_breakpoints(0.0, eps)
    r = integrate_halfline(lambda e: g(e) / (e - sigma + 1j * eps), spec, bp)
    return QuadResult(r.value / (2j * np.pi), r.error / (2 * np.pi), r.panels)


@dataclass
class ResidueCheck:
    eps: np.ndarray
    discrepancies: np.ndarray   # max over the sigma grid, one per eps
    rhs: np.ndarray             # residue formula on the sigma grid
    lhs: np.ndarray             # (len(eps), len(sigma)) composed transforms

    @property
    def rhs_scale(self) -> float:
        return float(np.max(np.abs(self.rhs))) if self.rhs.size else 0.0

    @property
    def max_discrepancy(self) -> float:
        return float(self.discrepancies[-1]) if self.discrepancies.size else 0.0


def residue_rhs(poles: Sequence[complex], g: Callable, sigma,
                spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Residue side of the multi-pole expansion at real points ``sigma``."""
    poles = [complex(p) for p in poles]
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    bp = [b for p in poles for b in pole_breakpoints(p, 0.0, spec.e_max)]
    out = np.zeros(sigma.shape, dtype=complex)
    for j, mj in enumerate(poles):
        others = [p for i, p in enumerate(poles) if i != j]
        coef = np.prod([(mj - p.conjugate()) / (mj - p) for p in others]) if others else 1.0

        def integrand(e, mj=mj, others=others):
            w = g(e) / (e - mj.conjugate())
            for p in others:
                w = w * (e - p) / (e - p.conjugate())
            return w

        weight = integrate_halfline(integrand, spec, bp).value
        out += abs(mj.imag) / np.pi * coef * weight / (sigma - mj)
    return out


def residue_identity_check(poles: Sequence[complex], g: Callable, sigma_grid,
                           eps_sequence=(1e-1, 1e-2, 1e-3),
                           spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-8)) -> ResidueCheck:
    """Compare the composed eps-regularised transforms with the residue formula.

    The left side is P_+ [B * thetabar*[g / B]] evaluated by nested
    quadrature (B the Blaschke product of ``poles``); the right side is
    :func:`residue_rhs`.  Verification grade: slow, meant for small grids.
    """
    poles = [complex(p) for p in poles]
    sigma_grid = np.atleast_1d(np.asarray(sigma_grid, dtype=float))
    eps_sequence = np.asarray(eps_sequence, dtype=float)
    bspec = BlaschkeSpec(tuple(poles))
    rhs = residue_rhs(poles, g, sigma_grid, spec)
    pole_bp = [b for p in poles for b in pole_breakpoints(p, -np.inf, np.inf, levels=8)]
    lhs = np.zeros((len(eps_sequence), len(sigma_grid)), dtype=complex)

    def inner_g(e):
        return g(e) * np.conj(blaschke(e, bspec))

    for a, eps in enumerate(eps_sequence):
        cache: dict[float, complex] = {}

        def outer_base(s, eps=eps, cache=cache):
            vals = np.empty(len(s), dtype=complex)
            for n, sv in enumerate(s):
                v = cache.get(sv)
                if v is None:
                    v = thetabar_star(inner_g, sv, eps, spec, pole_bp).value
                    cache[sv] = v
                vals[n] = v
            return blaschke(s, bspec) * vals

        for b, sigma in enumerate(sigma_grid):
            bp = pole_bp + _kernel_breakpoints(0.0, eps, levels=10)
            lhs[a, b] = cauchy_plus(outer_base, sigma, eps, spec, bp).value
    disc = np.max(np.abs(lhs - rhs[None, :]), axis=1) if sigma_grid.size else np.zeros(len(eps_sequence))
    return ResidueCheck(eps_sequence, disc, rhs, lhs)
