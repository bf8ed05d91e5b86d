"""Order-n approximate resonance states.

The energy weight of the state attached to pole mu_j in a set of poles is

    w_j(E) = prod_{i != j} (E - conj(mu_i))/(E - mu_i) * 1/(E - mu_j),

whose modulus on the real axis is that of the zero-order weight 1/(E - mu_j).
Gram entries therefore depend only on the two poles involved; both the
direct quadrature and the two-pole closed form are computed and compared.

Spatial samples are obtained by synthesising w_j(E) <x|E-> over energy, done
in the momentum variable (dE = 2k dk) where the continuum states oscillate
with a fixed period in k.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import fresnel

from .barrier import BarrierParams, ls_outgoing_k
from .errors import Disagreement, GridMismatch, IndexOutOfRange, PoleEvaluation
from .polefinder import ResonanceSet
from .quadrature import QuadratureSpec, integrate_halfline, pole_breakpoints, refine

POLE_FLOOR = 1e-14
TWO_PI_I = 2j * math.pi


def weight(E, j: int, poles: ResonanceSet, prefactor: bool = False):
    """Energy weight w_j(E) of the state for pole ``j`` of ``poles``.

    With ``prefactor`` the single-pole normalisation 1/(2 pi i) is included.
    """
    mus = [complex(m) for m in poles.energies]
    if not 0 <= j < len(mus):
        raise IndexOutOfRange(f"pole index {j} out of range for {len(mus)} poles")
    E = np.asarray(E, dtype=complex)
    for mu in mus:
        if np.any(np.abs(E - mu) < POLE_FLOOR * (1 + abs(mu))):
            raise PoleEvaluation(f"weight evaluated at pole {mu}")
    mj = mus[j]
    out = 1.0 / (E - mj)
    for i, mu in enumerate(mus):
        if i != j:
            out = out * (E - mu.conjugate()) / (E - mu)
    return out / TWO_PI_I if prefactor else out


def zero_order_norm_sq(mu: complex) -> float:
    """Integral of 1/|E - mu|^2 over E > 0 in closed form."""
    mu = complex(mu)
    if not mu.imag < 0:
        raise ValueError("need Im mu < 0")
    g = -mu.imag
    return (0.5 * math.pi + math.atan(mu.real / g)) / g


def two_pole_integral(mu_j: complex, mu_k: complex) -> complex:
    """Integral over E > 0 of 1/((E - mu_j)(E - conj(mu_k))), principal logs."""
    p, q = complex(mu_j), complex(mu_k).conjugate()
    return (cmath.log(-q) - cmath.log(-p)) / (p - q)


def _breakpoints(poles: ResonanceSet, spec: QuadratureSpec):
    return [b for mu in poles.energies for b in pole_breakpoints(complex(mu), 0.0, spec.e_max)]


def gram_routes(j: int, k: int, poles: ResonanceSet,
                spec: QuadratureSpec = QuadratureSpec()):
    """(quadrature of conj(w_j) w_k over E > 0, two-pole closed integral)."""
    n = len(poles)
    for i in (j, k):
        if not 0 <= i < n:
            raise IndexOutOfRange(f"pole index {i} out of range for {n} poles")
    mj, mk = complex(poles[j].mu), complex(poles[k].mu)
    spec = spec.for_pole(mj).for_pole(mk)
    numeric = integrate_halfline(
        lambda e: np.conj(weight(e, j, poles)) * weight(e, k, poles),
        spec, _breakpoints(poles, spec))
    return numeric, two_pole_integral(mj, mk)


def gram_entry(j: int, k: int, poles: ResonanceSet,
               spec: QuadratureSpec = QuadratureSpec()) -> complex:
    """Inner product of the states for poles j and k of ``poles``.

    Returns the closed two-pole integral after checking it against direct
    quadrature of conj(w_j) w_k; raises :class:`Disagreement` otherwise.
    """
    numeric, closed = gram_routes(j, k, poles, spec)
    allowed = numeric.error + spec.tolerance(closed)
    if abs(numeric.value - closed) > allowed:
        raise Disagreement(
            f"Gram entry ({j},{k}): quadrature {numeric.value} vs closed form {closed}")
    return closed


@dataclass
class GramMatrix:
    entries: np.ndarray
    poles: ResonanceSet

    @property
    def hermitian_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    @property
    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(h).min())

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


def gram_matrix(poles: ResonanceSet, spec: QuadratureSpec = QuadratureSpec()) -> GramMatrix:
    n = len(poles)
    G = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(j, n):
            G[j, k] = gram_entry(j, k, poles, spec)
            G[k, j] = G[j, k].conjugate() if k != j else G[j, k].real
    return GramMatrix(G, poles)


@dataclass
class SampledState:
    """A state sampled on an x grid.  ``error`` is the quadrature error bound."""
    x: np.ndarray
    psi: np.ndarray
    error: float = 0.0
    normalized: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2


@dataclass
class ApproxState:
    """State attached to pole ``j`` of ``poles``; order is len(poles) - 1."""
    j: int
    poles: ResonanceSet
    prefactor: bool = False
    spatial: SampledState | None = None

    def __post_init__(self):
        if not 0 <= self.j < len(self.poles):
            raise IndexOutOfRange(f"pole index {self.j} out of range for {len(self.poles)} poles")

    @property
    def order(self) -> int:
        return len(self.poles) - 1

    @property
    def mu(self) -> complex:
        return complex(self.poles[self.j].mu)

    def weight(self, E):
        return weight(E, self.j, self.poles, self.prefactor)

    @property
    def norm_sq(self) -> float:
        scale = 1.0 / (4 * math.pi ** 2) if self.prefactor else 1.0
        return scale * zero_order_norm_sq(self.mu)

    def sample(self, xgrid, params: BarrierParams | None = None,
               spec: QuadratureSpec = QuadratureSpec(), normalize: bool = True) -> SampledState:
        params = self.poles.params if params is None else params
        self.spatial = spatial_state(self.j, self.poles, xgrid, params, spec,
                                     normalize=normalize, prefactor=self.prefactor)
        return self.spatial


def approximate_state(poles: ResonanceSet, j: int, order: int, prefactor: bool = False) -> ApproxState:
    """State for pole ``j`` of ``poles`` built with it and the ``order`` lowest others."""
    try:
        chosen, jj = poles.order_set(j, order)
    except IndexError as exc:
        raise IndexOutOfRange(str(exc)) from None
    return ApproxState(jj, chosen, prefactor)


def default_xgrid(params: BarrierParams, n: int = 600, x_max: float | None = None) -> np.ndarray:
    return np.linspace(0.0, 3 * params.b if x_max is None else x_max, n)


def _grid_weights(x: np.ndarray) -> np.ndarray:
    """Trapezoid weights of the grid."""
    if len(x) < 2:
        return np.ones_like(x)
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    return w


def _gauge(x: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Make psi at the first interior grid point real and positive."""
    interior = np.nonzero(x > 0)[0]
    if len(interior) == 0:
        return psi
    v = psi[interior[0]]
    return psi * (abs(v) / v) if v != 0 else psi


def normalize_samples(x, psi):
    """Unit discrete L2 norm on the grid, gauge fixed."""
    x = np.asarray(x, dtype=float)
    psi = np.asarray(psi, dtype=complex)
    nrm = math.sqrt(float(np.sum(_grid_weights(x) * np.abs(psi) ** 2)))
    if nrm == 0:
        return psi
    return _gauge(x, psi / nrm)


def free_tail(x, k_max: float):
    """Integral over k > k_max of 2k * k^-2 * (2 pi k)^-1/2 * sin(kx).

    This is the large-momentum limit of the synthesis integrand (the barrier
    and the other poles only enter at relative order 1/k), in closed form
    through Fresnel integrals.
    """
    x = np.asarray(x, dtype=float)
    X = k_max * x
    _, C = fresnel(np.sqrt(2 * X / math.pi))
    # integral over u > X of u^-3/2 sin(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail_u = np.where(X > 0, 2 * np.sin(X) / np.sqrt(np.where(X > 0, X, 1.0)), 0.0) \
            + 2 * math.sqrt(2 * math.pi) * (0.5 - C)
    return 2 / math.sqrt(2 * math.pi) * np.sqrt(x) * tail_u


def spatial_state(j: int, poles: ResonanceSet, xgrid, params: BarrierParams,
                  spec: QuadratureSpec = QuadratureSpec(), normalize: bool = True,
                  prefactor: bool = False, k_max: float | None = None) -> SampledState:
    """psi(x) = integral over E > 0 of w_j(E) <x|E-> on ``xgrid``.

    Integrated over momentum k in (0, k_max] with one adaptive panel set
    shared by all x (error: worst grid point).  Initial panels hold about
    ``osc_panel_per_period`` nodes per oscillation period 2 pi/x_max and are
    graded around every pole's momentum.  The truncation at k_max is
    handled by adding the free-particle tail (:func:`free_tail`); the
    remainder, which decays like k^-5/2, is bounded and reported in ``error``.
    """
    x = np.asarray(xgrid, dtype=float)
    if x.ndim != 1 or len(x) == 0 or np.any(np.diff(x) <= 0) or x[0] < 0:
        raise ValueError("xgrid must be a non-empty increasing grid of x >= 0")
    ks = [complex(p.k) for p in poles]
    if k_max is None:
        k_max = max(math.sqrt(spec.e_max), 4 * max((k.real for k in ks), default=0.0), 60.0)
    x_max = max(float(x[-1]), 1e-12)
    width = (2 * math.pi / x_max) * 15 / spec.osc_panel_per_period
    edges = list(np.linspace(0.0, k_max, int(math.ceil(k_max / width)) + 1))
    for k in ks:
        edges += pole_breakpoints(k, 0.0, k_max, levels=8)

    def integrand(kk):
        kk = np.asarray(kk, dtype=float)
        w = weight(kk * kk, j, poles, prefactor)
        psi = ls_outgoing_k(kk[:, None], x[None, :], params)
        return (2 * kk * w)[:, None] * psi

    panels = refine(integrand, edges, spec)
    scale = 1 / TWO_PI_I if prefactor else 1.0
    psi = panels.total() + scale * free_tail(x, k_max)
    # remainder beyond k_max ~ C k^-5/2
    kt = k_max * (1 + 0.5 * (np.arange(8) + 0.5) / 8)
    free = scale * 2 / np.sqrt(2 * math.pi) * kt[:, None] ** -1.5 * np.sin(kt[:, None] * x[None, :])
    env = float(np.max(np.abs(integrand(kt) - free) * kt[:, None] ** 2.5))
    err = panels.error() + env * k_max ** -1.5 / 1.5
    meta = {"pole_index": j, "order": len(poles) - 1, "k_max": k_max,
            "panels": len(panels.lo)}
    if normalize:
        nrm = math.sqrt(float(np.sum(_grid_weights(x) * np.abs(psi) ** 2)))
        psi = normalize_samples(x, psi)
        err = err / nrm if nrm else err
    return SampledState(x, psi, err, normalize, meta)


def l2_distance(s1: SampledState, s2: SampledState) -> float:
    """Discrete L2 distance of the unit-normalised, gauge-fixed samples."""
    if s1.x.shape != s2.x.shape or not np.array_equal(s1.x, s2.x):
        raise GridMismatch("states sampled on different grids")
    a = normalize_samples(s1.x, s1.psi)
    b = normalize_samples(s2.x, s2.psi)
    return math.sqrt(float(np.sum(_grid_weights(s1.x) * np.abs(a - b) ** 2)))


def density_distance(s1: SampledState, s2: SampledState) -> float:
    """L1 distance between unit-normalised densities (gauge-free)."""
    if s1.x.shape != s2.x.shape or not np.array_equal(s1.x, s2.x):
        raise GridMismatch("states sampled on different grids")
    a = np.abs(normalize_samples(s1.x, s1.psi)) ** 2
    b = np.abs(normalize_samples(s2.x, s2.psi)) ** 2
    return float(np.sum(_grid_weights(s1.x) * np.abs(a - b)))
