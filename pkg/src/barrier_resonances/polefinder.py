"""Resonance poles as zeros of beta3(k) in the fourth quadrant of the k plane.

Zeros are counted with the argument principle (phase continuation along
the rectangle boundary), isolated by recursive bisection and polished with
Newton's method.  Energies are mu = k**2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .barrier import BarrierParams, beta3_continued, beta3_reduced, beta3_reduced_derivative
from .errors import BoundaryZero, Incomplete, NoConvergence

BOUNDARY_FLOOR = 1e-10
MAX_JITTER = 5
ACCEPT_RESIDUAL = 1e-10
_SPLITS = (0.5123, 0.4377, 0.5871, 0.3619)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in the complex k plane."""
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @property
    def area(self) -> float:
        return max(self.re_max - self.re_min, 0.0) * max(self.im_max - self.im_min, 0.0)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    @property
    def centre(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.re_min - margin <= z.real <= self.re_max + margin
                and self.im_min - margin <= z.imag <= self.im_max + margin)

    def expand(self, delta: float) -> "Rect":
        return Rect(self.re_min - delta, self.re_max + delta, self.im_min - delta, self.im_max + delta)

    def scale(self, factor: float) -> "Rect":
        c, hr, hi = self.centre, 0.5 * (self.re_max - self.re_min), 0.5 * (self.im_max - self.im_min)
        return Rect(c.real - factor * hr, c.real + factor * hr, c.imag - factor * hi, c.imag + factor * hi)

    def split(self, frac: float = 0.5) -> tuple["Rect", "Rect"]:
        if self.re_max - self.re_min >= self.im_max - self.im_min:
            cut = self.re_min + frac * (self.re_max - self.re_min)
            return (Rect(self.re_min, cut, self.im_min, self.im_max),
                    Rect(cut, self.re_max, self.im_min, self.im_max))
        cut = self.im_min + frac * (self.im_max - self.im_min)
        return (Rect(self.re_min, self.re_max, self.im_min, cut),
                Rect(self.re_min, self.re_max, cut, self.im_max))

    def boundary(self, n: int = 32):
        """Counter-clockwise closed polyline, ``n`` intervals per edge."""
        t = np.linspace(0.0, 1.0, n + 1)[:-1]
        z0, z1 = complex(self.re_min, self.im_min), complex(self.re_max, self.im_min)
        z2, z3 = complex(self.re_max, self.im_max), complex(self.re_min, self.im_max)
        pts = [a + (b - a) * t for a, b in ((z0, z1), (z1, z2), (z2, z3), (z3, z0))]
        return np.concatenate(pts + [[z0]])


@dataclass(frozen=True)
class Pole:
    mu: complex
    k: complex
    residual: float

    @classmethod
    def from_k(cls, k: complex, params: BarrierParams) -> "Pole":
        k = complex(k)
        return cls(k * k, k, float(abs(beta3_continued(k, params))))

    @property
    def e_r(self) -> float:
        return self.mu.real

    @property
    def gamma(self) -> float:
        return -2.0 * self.mu.imag


@dataclass(frozen=True)
class ResonanceSet:
    params: BarrierParams | None
    poles: tuple = ()
    region: Rect | None = None

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(sorted(self.poles, key=lambda p: p.e_r)))

    @classmethod
    def from_energies(cls, mus: Sequence[complex], params: BarrierParams | None = None) -> "ResonanceSet":
        """Build a set from bare pole energies (k is the fourth-quadrant root)."""
        poles = []
        for mu in mus:
            k = np.sqrt(complex(mu))
            res = float(abs(beta3_continued(k, params))) if params is not None else float("nan")
            poles.append(Pole(complex(mu), complex(k), res))
        return cls(params, tuple(poles))

    def __len__(self):
        return len(self.poles)

    def __getitem__(self, i):
        return self.poles[i]

    @property
    def energies(self) -> list[complex]:
        return [p.mu for p in self.poles]

    def lowest(self, n: int) -> "ResonanceSet":
        return ResonanceSet(self.params, self.poles[:n], self.region)

    def order_set(self, j: int, order: int) -> tuple["ResonanceSet", int]:
        """Pole j plus the ``order`` lowest others; returns the set and j's index in it."""
        if not 0 <= j < len(self.poles):
            raise IndexError(f"pole index {j} out of range for {len(self.poles)} poles")
        others = [p for i, p in enumerate(self.poles) if i != j]
        if order > len(others):
            raise IndexError(f"order {order} needs {order + 1} poles, have {len(self.poles)}")
        chosen = ResonanceSet(self.params, tuple(others[:order]) + (self.poles[j],), self.region)
        return chosen, chosen.poles.index(self.poles[j])


def _phase_walk(f, z, max_points: int = 1 << 16, max_step: float = 0.5 * math.pi):
    """Refine the closed polyline z until consecutive phase steps are < max_step."""
    fz = f(z)
    while True:
        dphi = np.angle(fz[1:] / fz[:-1])
        bad = np.nonzero(np.abs(dphi) >= max_step)[0]
        if len(bad) == 0 or len(z) >= max_points:
            return z, fz, dphi
        mids = 0.5 * (z[bad] + z[bad + 1])
        z = np.insert(z, bad + 1, mids)
        fz = np.insert(fz, bad + 1, f(mids))


def _contour(rect: Rect, params: BarrierParams, max_step=0.5 * math.pi):
    f = lambda z: beta3_reduced(z, params)
    z, fz, dphi = _phase_walk(f, rect.boundary(), max_step=max_step)
    mag = np.abs(fz)
    if mag.min() < BOUNDARY_FLOOR * max(1.0, float(np.median(mag))):
        raise BoundaryZero(f"beta3 nearly vanishes on the boundary of {rect}")
    return z, fz, dphi


def count_zeros(rect: Rect, params: BarrierParams) -> int:
    """Number of zeros of beta3 inside ``rect`` (argument principle).

    beta3/alpha1 is entire, and alpha1 has no zeros, so the winding number
    counts the zeros of beta3 itself.  On a near-zero boundary value the
    rectangle is enlarged slightly and the count retried.
    """
    if rect.area == 0:
        return 0
    for attempt in range(MAX_JITTER + 1):
        r = rect if attempt == 0 else rect.expand(1e-3 * attempt * rect.diagonal)
        try:
            _, _, dphi = _contour(r, params)
        except BoundaryZero:
            continue
        return int(round(float(math.fsum(dphi)) / (2 * math.pi)))
    raise BoundaryZero(f"beta3 vanishes on the boundary of {rect} after {MAX_JITTER} jitters")


def _single_root_estimate(rect: Rect, params: BarrierParams) -> complex:
    """First moment (1/2 pi i) * contour integral of z f'/f for a cell holding one zero."""
    z, fz, _ = _contour(rect, params, max_step=0.05)
    dlog = np.log(fz[1:] / fz[:-1])
    zm = 0.5 * (z[1:] + z[:-1])
    return complex(np.sum(zm * dlog) / (2j * math.pi))


def refine_root(k0: complex, params: BarrierParams, tol: float = 1e-12, maxiter: int = 50,
                radius: float = 1.0, history: list | None = None) -> complex:
    """Newton iteration on beta3 (closed-form derivative) starting at ``k0``.

    Stops when the Newton step is below ``tol`` relative to |k|.  Raises
    :class:`NoConvergence` after ``maxiter`` steps or when an iterate leaves
    the disc of ``radius`` around ``k0``.
    """
    k = complex(k0)
    for _ in range(maxiter):
        f = complex(beta3_reduced(k, params))
        df = complex(beta3_reduced_derivative(k, params))
        if history is not None:
            history.append(abs(f))
        if f == 0:
            return k
        if df == 0:
            raise NoConvergence(f"vanishing derivative at k={k}")
        step = f / df
        if abs(step) <= tol * max(abs(k), 1.0):
            return k
        k = k - step
        if abs(k - k0) > radius:
            raise NoConvergence(f"Newton left the search disc around {k0}")
    raise NoConvergence(f"no convergence from {k0} in {maxiter} iterations")


def _count_cell(cell: Rect, params: BarrierParams):
    if cell.area == 0:
        return 0
    _, _, dphi = _contour(cell, params)
    return int(round(float(math.fsum(dphi)) / (2 * math.pi)))


def _split_counted(cell: Rect, params: BarrierParams):
    for frac in _SPLITS:
        parts = cell.split(frac)
        try:
            return [(p, _count_cell(p, params)) for p in parts]
        except BoundaryZero:
            continue
    raise BoundaryZero(f"no clean split of {cell}")


def find_poles(params: BarrierParams, region: Rect | None = None, max_count: int = 64,
               min_cell: float = 1e-6) -> ResonanceSet:
    """All zeros of beta3 in ``region`` as a ResonanceSet sorted by Re mu."""
    region = default_region(params) if region is None else region
    if region.area == 0:
        return ResonanceSet(params, (), region)
    total = count_zeros(region, params)
    if total > max_count:
        raise Incomplete(f"{total} zeros in region exceed max_count={max_count}")
    roots: list[complex] = []
    if total > 0:
        stack = [(region, total)]
        while stack:
            cell, n = stack.pop()
            if n == 0:
                continue
            if n == 1 or cell.diagonal < min_cell:
                try:
                    guess = _single_root_estimate(cell, params)
                    if not cell.contains(guess):
                        guess = cell.centre
                    root = refine_root(guess, params, radius=2 * cell.diagonal + min_cell)
                    if cell.contains(root, margin=1e-9 * max(1.0, abs(root))) or cell.diagonal < min_cell:
                        roots.append(root)
                        continue
                except (NoConvergence, BoundaryZero):
                    if cell.diagonal < min_cell:
                        raise
            stack.extend(_split_counted(cell, params))
    poles = _dedup([Pole.from_k(k, params) for k in roots])
    if len(poles) != total:
        raise Incomplete(f"argument principle counted {total} zeros, isolated {len(poles)}")
    return ResonanceSet(params, tuple(poles), region)


def _dedup(poles: list[Pole]) -> list[Pole]:
    kept: list[Pole] = []
    for p in sorted(poles, key=lambda p: p.residual):
        if all(abs(p.mu - q.mu) > 1e-6 * (1 + abs(p.mu)) for q in kept):
            kept.append(p)
    return sorted(kept, key=lambda p: p.e_r)


def default_region(params: BarrierParams, count: int = 0) -> Rect:
    """Search rectangle in the k plane.

    Re k runs to sqrt(3 v0), or further when ``count`` poles are wanted
    (roughly pi/b apart in Re k).  Im k covers [-2.5, -1e-8].
    """
    re_max = max(math.sqrt(3 * params.v0), (count + 2) * math.pi / params.b)
    return Rect(0.05, re_max, -2.5, -1e-8)


def lowest_poles(params: BarrierParams, count: int, region: Rect | None = None,
                 max_count: int = 64, grow: float = 1.5, attempts: int = 4) -> ResonanceSet:
    """The ``count`` poles with the lowest resonance energy.

    The search region is widened in Re k until enough poles are found.
    """
    if count <= 0:
        return ResonanceSet(params, (), region)
    region = default_region(params, count) if region is None else region
    for _ in range(attempts):
        found = find_poles(params, region, max_count=max_count)
        if len(found) >= count:
            return found.lowest(count)
        region = Rect(region.re_min, region.re_max * grow, region.im_min, region.im_max)
    raise Incomplete(f"found only {len(found)} of {count} poles in {region}")
