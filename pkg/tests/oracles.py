"""Independent reference computations used by the tests."""
import cmath

import numpy as np
from scipy.special import exp1


def matching_solve(k, a, b, v0):
    """(alpha2, beta2, alpha3, beta3) by solving the four matching equations.

    Region 1 is sin(kx) (1/sqrt(2 pi k) applied afterwards); region 2 uses
    exp(+-ik'x) with the principal k'; regions are matched in value and
    slope at x = a and x = b by a dense linear solve.
    """
    k = complex(k)
    kp = cmath.sqrt(k * k - v0)
    e = cmath.exp
    A = np.array([
        [e(1j * kp * a), e(-1j * kp * a), 0, 0],
        [1j * kp * e(1j * kp * a), -1j * kp * e(-1j * kp * a), 0, 0],
        [e(1j * kp * b), e(-1j * kp * b), -e(1j * k * b), -e(-1j * k * b)],
        [1j * kp * e(1j * kp * b), -1j * kp * e(-1j * kp * b),
         -1j * k * e(1j * k * b), 1j * k * e(-1j * k * b)],
    ], dtype=complex)
    rhs = np.array([cmath.sin(k * a), k * cmath.cos(k * a), 0, 0], dtype=complex)
    a1 = 1 / cmath.sqrt(2 * cmath.pi * k)
    return np.linalg.solve(A, rhs) * a1


def halfline_cauchy(z, t):
    """Integral over E > 0 of exp(-iEt)/(E - z) for t > 0 and z off the positive axis."""
    w = -1j * z * t
    val = cmath.exp(w) * complex(exp1(w))
    if z.imag < 0 and z.real > 0:
        # -izt crossed the cut of E1 along the negative real axis
        val -= 2j * cmath.pi * cmath.exp(w)
    return val


def lorentzian_fourier(mu, t):
    """Integral over E > 0 of exp(-iEt)/|E - mu|^2 via partial fractions."""
    mu = complex(mu)
    if t == 0:
        g = -mu.imag
        return (np.pi / 2 + np.arctan(mu.real / g)) / g
    return (halfline_cauchy(mu, t) - halfline_cauchy(mu.conjugate(), t)) / (mu - mu.conjugate())


def two_pole_log(p, q):
    """Integral over E > 0 of 1/((E - p)(E - q)) for p, q off the positive axis."""
    return (cmath.log(-q) - cmath.log(-p)) / (p - q)
