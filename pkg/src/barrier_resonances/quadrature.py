"""Half-line integration engines.

Every engine works on panels carrying a 15-point Gauss-Legendre rule.  The
Legendre coefficients of the integrand on each panel double as an error
estimate (size of the highest three coefficients) and, for the oscillatory
engine, as the interpolant that is integrated against exp(-iEt) exactly
(Filon-type treatment: the moments of P_n(x) exp(-iwx) are spherical Bessel
functions).

Integrands are callables accepting a 1-D float array and returning an array
of the same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss, legvander
from scipy.special import spherical_jn

from .errors import ToleranceNotMet

NODES, WEIGHTS = leggauss(15)
_DEG = np.arange(15)
# maps node values to Legendre coefficients (exact for degree <= 14)
_PROJ = ((2 * _DEG + 1) / 2)[:, None] * legvander(NODES, 14).T * WEIGHTS[None, :]
# moments of P_n(x) exp(-iwx) on [-1, 1] are 2 (-i)^n j_n(w)
_MOMENT_PHASE = 2 * (-1j) ** _DEG
_EPS = np.finfo(float).eps
MAX_DOUBLINGS = 640


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    e_max: float = 50.0
    max_panels: int = 20000
    osc_panel_per_period: int = 8
    # geometric panels [E, 2E] appended beyond e_max before the tail bound
    tail_doublings: int = 40

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.e_max > 0:
            raise ValueError("e_max must be positive")
        if self.max_panels < 1 or self.osc_panel_per_period < 2:
            raise ValueError("need max_panels >= 1 and osc_panel_per_period >= 2")

    def for_pole(self, mu: complex) -> "QuadratureSpec":
        """Widen e_max so that the Lorentzian around ``mu`` lies well inside it."""
        e = max(self.e_max, mu.real + 200 * abs(mu.imag))
        return replace(self, e_max=e)

    @property
    def e_far(self) -> float:
        return self.e_max * 2.0 ** self.tail_doublings

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


class QuadResult(NamedTuple):
    value: complex
    error: float
    panels: int


def csum(values) -> complex:
    """Compensated, order-deterministic complex sum."""
    values = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))


@dataclass
class Panels:
    """Accepted panels of an adaptive rule; rows sorted by left edge."""
    lo: np.ndarray
    hi: np.ndarray
    coeffs: np.ndarray      # (n, 15) Legendre coefficients on [-1, 1]
    integrals: np.ndarray
    errors: np.ndarray

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def half(self):
        return 0.5 * (self.hi - self.lo)

    def total(self):
        if self.integrals.ndim == 1:
            return csum(self.integrals)
        flat = self.integrals.reshape(len(self.integrals), -1)
        out = np.array([csum(col) for col in flat.T])
        return out.reshape(self.integrals.shape[1:])

    def error(self) -> float:
        return math.fsum(self.errors)


def _evaluate(fun, lo, hi):
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    f = np.asarray(fun(x.ravel()), dtype=complex)
    f = f.reshape(x.shape + f.shape[1:])
    coeffs = np.einsum("nj,pj...->pn...", _PROJ, f)
    integrals = np.einsum("p,j,pj...->p...", half, WEIGHTS, f)
    tail = np.abs(coeffs[:, -3:]).sum(axis=1)
    if tail.ndim > 1:
        tail = tail.max(axis=tuple(range(1, tail.ndim)))
    errors = 2 * half * tail
    return coeffs, integrals, errors


def _scale(integrals) -> float:
    total = integrals.sum(axis=0)
    return float(np.max(np.abs(total))) if np.ndim(total) else abs(csum(integrals))


def refine(fun: Callable, edges: Sequence[float], spec: QuadratureSpec,
           tol: float | None = None) -> Panels:
    """Adaptive bisection until the summed error estimate meets tolerance.

    ``fun`` may return an array of shape (len(x), m) for m integrands sharing
    one panel set; the error estimate is then the worst component and the
    tolerance is relative to the largest component.  ``tol`` overrides the
    spec-derived tolerance.  Raises :class:`ToleranceNotMet` when
    ``max_panels`` would be exceeded.
    """
    edges = np.unique(np.asarray(edges, dtype=float))
    lo, hi = edges[:-1], edges[1:]
    coeffs, integrals, errors = _evaluate(fun, lo, hi)
    while True:
        value = _scale(integrals)
        target = spec.tolerance(value) if tol is None else tol
        total = math.fsum(errors)
        if total <= target:
            break
        n = len(lo)
        splittable = (hi - lo) > 64 * _EPS * np.maximum(np.abs(hi), np.abs(lo))
        cand = np.nonzero((errors > target / (2 * n)) & splittable)[0]
        room = spec.max_panels - n
        if len(cand) == 0 or room <= 0:
            raise ToleranceNotMet(
                f"error estimate {total:.3g} above tolerance {target:.3g} "
                f"with {n} panels", value=value, error=total)
        if len(cand) > room:
            cand = cand[np.argsort(errors[cand])[::-1][:room]]
        mid = 0.5 * (lo[cand] + hi[cand])
        new_lo = np.concatenate([lo[cand], mid])
        new_hi = np.concatenate([mid, hi[cand]])
        c2, i2, e2 = _evaluate(fun, new_lo, new_hi)
        keep = np.ones(n, dtype=bool)
        keep[cand] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        coeffs = np.concatenate([coeffs[keep], c2])
        integrals = np.concatenate([integrals[keep], i2])
        errors = np.concatenate([errors[keep], e2])
    order = np.argsort(lo)
    return Panels(lo[order], hi[order], coeffs[order], integrals[order], errors[order])


def pole_breakpoints(mu: complex, lower: float, upper: float, levels: int = 12) -> list[float]:
    """Geometrically graded breakpoints around Re mu, spaced in units of |Im mu|."""
    width = abs(mu.imag)
    pts = [mu.real]
    for m in range(levels):
        step = width * 4.0 ** m
        pts += [mu.real - step, mu.real + step]
    return [p for p in pts if lower < p < upper]


def halfline_edges(spec: QuadratureSpec, breakpoints: Sequence[float] = (), initial: int = 8):
    inner = np.linspace(0.0, spec.e_max, initial + 1)
    bp = [p for p in breakpoints if 0 < p < spec.e_max]
    geometric = spec.e_max * 2.0 ** np.arange(1, spec.tail_doublings + 1)
    return np.unique(np.concatenate([inner, bp, geometric]))


def tail_bound(fun: Callable, e_far: float, decay: float) -> float:
    """Bound on the integral of |f| over (e_far, inf) assuming |f| <= C E**-decay.

    C is estimated from samples on the last geometric panel.
    """
    x = e_far * (1.0 + 0.5 * (NODES + 1.0)) / 2.0
    C = float(np.max(np.abs(fun(x)) * x ** decay))
    return C * e_far ** (1.0 - decay) / (decay - 1.0)


def integrate_halfline(f: Callable, spec: QuadratureSpec = QuadratureSpec(),
                       breakpoints: Sequence[float] = (), decay: float = 2.0) -> QuadResult:
    """Integral of f over (0, inf).

    Adaptive panels cover (0, e_max]; geometric panels continue to
    ``spec.e_far`` and the remainder is bounded assuming |f| ~ E**-decay.
    The geometric extension is lengthened while that bound dominates.
    """
    while True:
        panels = refine(f, halfline_edges(spec, breakpoints), spec)
        value = panels.total()
        tail = tail_bound(f, spec.e_far, decay)
        err = panels.error() + tail
        if err <= spec.tolerance(value):
            return QuadResult(value, err, len(panels.lo))
        if tail < 0.5 * err or spec.tail_doublings >= MAX_DOUBLINGS:
            raise ToleranceNotMet(f"error bound {err:.3g} above tolerance", value, err)
        spec = replace(spec, tail_doublings=min(2 * spec.tail_doublings, MAX_DOUBLINGS))


def integrate_line(f: Callable, spec: QuadratureSpec = QuadratureSpec(),
                   breakpoints: Sequence[float] = (), decay: float = 2.0) -> QuadResult:
    """Integral over the real line, as two half-line integrals."""
    right = integrate_halfline(f, spec, [p for p in breakpoints if p > 0], decay)
    left = integrate_halfline(lambda x: f(-x), spec, [-p for p in breakpoints if p < 0], decay)
    return QuadResult(right.value + left.value, right.error + left.error,
                      right.panels + left.panels)


def integrate_lorentzian(g: Callable, mu: complex, spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integral of g(E)/|E - mu|**2 over (0, inf).

    Substitutes E = Re mu + |Im mu| cot(phi), which turns the Lorentzian
    into the flat weight dphi/|Im mu|; the rule is exact for constant g.
    """
    mu = complex(mu)
    if not mu.imag < 0:
        raise ValueError("pole must lie in the lower half plane")
    gam, er = -mu.imag, mu.real
    top = 0.5 * np.pi + math.atan(er / gam)
    spec = spec.for_pole(mu)
    # phi at which E reaches e_far; panels halve down to it, then [0, phi_far]
    phi_far = math.atan2(gam, spec.e_far - er)
    levels = max(1, int(math.ceil(math.log2(top / phi_far))))
    edges = np.concatenate([[0.0], top * 2.0 ** -np.arange(levels, -1, -1.0)])
    edges = np.concatenate([edges, np.linspace(top / 2, top, 9)])

    def integrand(phi):
        return g(er + gam / np.tan(phi)) / gam

    panels = refine(integrand, edges, spec)
    value = panels.total()
    return QuadResult(value, panels.error(), len(panels.lo))


class FilonRule:
    """Panels resolving h(E) = g(E)/|E - mu|**2, reusable for many times t.

    Build once, then call with an array of t >= 0 to get the integrals of
    h(E) exp(-iEt) over (0, inf) and their error bounds.
    """

    def __init__(self, g: Callable, mu: complex, spec: QuadratureSpec = QuadratureSpec(),
                 breakpoints: Sequence[float] = (), decay: float = 2.0,
                 tol: float | None = None):
        mu = complex(mu)
        if not mu.imag < 0:
            raise ValueError("pole must lie in the lower half plane")
        self.mu = mu
        self.spec = spec = spec.for_pole(mu)
        self.h = lambda e: g(e) / np.abs(e - mu) ** 2
        bp = list(breakpoints) + pole_breakpoints(mu, 0.0, spec.e_max)
        self.panels = refine(self.h, halfline_edges(spec, bp), spec, tol)
        self.decay = decay
        self._tail = tail_bound(self.h, spec.e_far, decay)
        C = self._tail * (decay - 1.0) * spec.e_far ** (decay - 1.0)
        self._tail_coeff = C

    def __call__(self, t, chunk: int = 64):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t < 0):
            raise ValueError("times must be non-negative")
        p = self.panels
        mid, half = p.mid, p.half
        out = np.empty(t.shape, dtype=complex)
        for s in range(0, len(t), chunk):
            tt = t[s:s + chunk]
            w = tt[:, None] * half[None, :]
            J = spherical_jn(_DEG[None, None, :], w[..., None])
            S = np.einsum("pn,tpn->tp", p.coeffs * _MOMENT_PHASE, J)
            terms = half[None, :] * np.exp(-1j * tt[:, None] * mid[None, :]) * S
            out[s:s + chunk] = [csum(row) for row in terms]
        e_far = self.spec.e_far
        with np.errstate(divide="ignore"):
            osc_tail = np.where(t > 0, 2 * self._tail_coeff * e_far ** -self.decay / np.where(t > 0, t, 1), np.inf)
        err = p.error() + np.minimum(self._tail, osc_tail)
        return out, err


def integrate_oscillatory(g: Callable, t: float, mu: complex,
                          spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integral of g(E) exp(-iEt)/|E - mu|**2 over (0, inf)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return integrate_lorentzian(g, mu, spec)
    rule = FilonRule(g, mu, spec)
    value, err = rule([t])
    # the panels were refined for the t = 0 integral; tighten for a small value
    for _ in range(4):
        target = spec.tolerance(value[0])
        if err[0] <= target or rule.panels.error() < 0.1 * target:
            break
        rule = FilonRule(g, mu, spec, tol=0.5 * target)
        value, err = rule([t])
    if err[0] > spec.tolerance(value[0]):
        raise ToleranceNotMet("oscillatory rule did not meet tolerance", value[0], err[0])
    return QuadResult(complex(value[0]), float(err[0]), len(rule.panels.lo))
