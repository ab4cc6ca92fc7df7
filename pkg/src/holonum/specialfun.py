"""Legendre polynomials, spherical harmonics and the Airy series pair."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .series import PowerSeries


@dataclass(frozen=True)
class SphericalHarmonicIndex:
    ell: int
    m: int

    def __post_init__(self):
        if self.ell < 0:
            raise DomainError("ell must be nonnegative")
        if not -self.ell <= self.m <= self.ell:
            raise DomainError("|m| must not exceed ell")


def legendre_exact(ell: int) -> list[Fraction]:
    """Monomial coefficients of P_ell from the Rodrigues formula, exact."""
    if ell < 0:
        raise DomainError("ell must be nonnegative")
    # (x^2 - 1)^ell
    poly = [Fraction(0)] * (2 * ell + 1)
    for k in range(ell + 1):
        poly[2 * k] = Fraction(math.comb(ell, k) * (-1) ** (ell - k))
    # differentiate ell times
    for _ in range(ell):
        poly = [Fraction(n) * poly[n] for n in range(1, len(poly))]
    scale = Fraction(1, 2 ** ell * math.factorial(ell))
    return [c * scale for c in poly]


def legendre(ell: int) -> PowerSeries:
    return PowerSeries([float(c) for c in legendre_exact(ell)])


def _legendre_derivative(ell: int, m: int) -> PowerSeries:
    coeffs = legendre_exact(ell)
    for _ in range(m):
        coeffs = [Fraction(n) * coeffs[n] for n in range(1, len(coeffs))] or [Fraction(0)]
    return PowerSeries([float(c) for c in coeffs])


def associated_legendre(idx: SphericalHarmonicIndex):
    """P_ell^m on [-1, 1] with the Condon-Shortley (-1)^m phase."""
    ell, m = idx.ell, idx.m
    if m < 0:
        pos = associated_legendre(SphericalHarmonicIndex(ell, -m))
        factor = (-1) ** (-m) * math.factorial(ell + m) / math.factorial(ell - m)
        return lambda x: factor * pos(x)
    dpoly = _legendre_derivative(ell, m)

    def p(x):
        x = np.asarray(x, dtype=float)
        val = (-1) ** m * (1.0 - x * x) ** (m / 2.0) * dpoly(x).real
        return val if val.shape else float(val)

    return p


def spherical_harmonic(idx: SphericalHarmonicIndex, theta, phi) -> complex:
    """Y_{ell m}(theta, phi), unit-normalized over the sphere."""
    ell, m = idx.ell, idx.m
    norm = math.sqrt((2 * ell + 1) / (4 * math.pi)
                     * math.factorial(ell - m) / math.factorial(ell + m))
    p = associated_legendre(idx)
    return norm * p(np.cos(theta)) * np.exp(1j * m * np.asarray(phi))


def airy_pair(order: int) -> tuple[PowerSeries, PowerSeries]:
    """The two power-series solutions of w'' = z w:

    Ai1 = 1 + sum 1*4*...*(3n-2)/(3n)! z^{3n}
    Ai2 = z + sum 2*5*...*(3n-1)/(3n+1)! z^{3n+1}
    """
    c1 = [0.0] * (order + 1)
    c2 = [0.0] * (order + 1)
    c1[0] = 1.0
    if order >= 1:
        c2[1] = 1.0
    prod1 = 1.0
    prod2 = 1.0
    n = 1
    while 3 * n <= order or 3 * n + 1 <= order:
        prod1 *= (3 * n - 2)
        prod2 *= (3 * n - 1)
        if 3 * n <= order:
            c1[3 * n] = prod1 / math.factorial(3 * n)
        if 3 * n + 1 <= order:
            c2[3 * n + 1] = prod2 / math.factorial(3 * n + 1)
        n += 1
    return PowerSeries(c1), PowerSeries(c2)
