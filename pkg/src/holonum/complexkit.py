"""Contour-based complex analysis: Laurent expansions, residues, series
summation by residues, Abel-Plana-type summation, series reversion and
argument-principle zero counting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .contours import ContourPath, integrate_contour
from .errors import DomainError, InconclusiveError, ToleranceNotMet
from .series import PowerSeries, QuadratureRule, adaptive_quad, series_inverse


# ---------------------------------------------------------------------------
# Laurent expansion and residues
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentExpansion:
    center: complex
    negative: tuple      # A_{-1} ... A_{-M}
    nonnegative: tuple   # A_0 ... A_N
    annulus: tuple       # (R1, R2) with R1 < R2
    tolerance: float     # estimated coefficient accuracy

    def __post_init__(self):
        if not self.annulus[0] < self.annulus[1]:
            raise DomainError("annulus must satisfy R1 < R2")

    def __call__(self, z):
        w = np.asarray(z, dtype=complex) - self.center
        total = np.zeros_like(w)
        for n, c in enumerate(self.nonnegative):
            total = total + c * w ** n
        for n, c in enumerate(self.negative, start=1):
            total = total + c * w ** (-n)
        return total if total.shape else complex(total)

    def residue(self) -> complex:
        return self.negative[0] if self.negative else 0.0


def laurent_coefficients(f: Callable, center: complex, radius: float,
                         neg_order: int, pos_order: int,
                         rule: QuadratureRule | None = None) -> LaurentExpansion:
    """A_n = (1/2 pi i) contour-int f(z) (z - z0)^{-n-1} dz on the circle.

    Evaluated by the trapezoid rule on equispaced circle samples (spectrally
    accurate for periodic integrands), with node doubling until the requested
    coefficients stabilize.
    """
    rule = rule or QuadratureRule()
    center = complex(center)
    if radius <= 0:
        raise DomainError("expansion radius must be positive")
    span = max(neg_order, pos_order)
    k = max(64, 1 << (span + 1).bit_length())
    prev = None
    while k <= 1 << 20:
        theta = 2.0 * math.pi * np.arange(k) / k
        vals = np.asarray(f(center + radius * np.exp(1j * theta)), dtype=complex)
        spec = np.fft.fft(vals) / k
        coeff = {}
        for n in range(-neg_order, pos_order + 1):
            coeff[n] = spec[n % k] * radius ** (-n)
        if prev is not None:
            err = max(abs(coeff[n] - prev[n]) for n in coeff)
            scale = max(max(abs(v) for v in coeff.values()), 1.0)
            if err < max(rule.abs_tol, rule.rel_tol * scale):
                return LaurentExpansion(
                    center,
                    tuple(coeff[-n] for n in range(1, neg_order + 1)),
                    tuple(coeff[n] for n in range(pos_order + 1)),
                    (radius * 0.999, radius * 1.001), err)
        prev = coeff
        k *= 2
    raise ToleranceNotMet("Laurent coefficients did not stabilize",
                          best_estimate=prev)


def residue_at_pole(f: Callable, z0: complex, order: int = 1,
                    radius: float = 0.1,
                    rule: QuadratureRule | None = None) -> complex:
    """Residue as A_{-1} of a small-circle Laurent expansion.

    The expansion is repeated on half the radius; a drift between the two
    values beyond tolerance signals a misdeclared pole order.
    """
    if order < 1:
        raise DomainError("pole order must be at least 1")
    rule = rule or QuadratureRule()
    r1 = laurent_coefficients(f, z0, radius, order, 0, rule).residue()
    r2 = laurent_coefficients(f, z0, radius / 2.0, order, 0, rule).residue()
    scale = max(abs(r1), abs(r2), 1.0)
    if abs(r1 - r2) > 1e-7 * scale:
        raise InconclusiveError(
            f"residue unstable across radii ({r1} vs {r2}); pole order misdeclared?")
    return r2


def cauchy_derivative(f: Callable, z0: complex, k: int = 1,
                      radius: float = 0.1,
                      rule: QuadratureRule | None = None) -> complex:
    """k-th derivative of an analytic f via circle quadrature (no step-size
    dilemma, spectral accuracy)."""
    exp = laurent_coefficients(f, z0, radius, 0, k, rule)
    return exp.nonnegative[k] * math.factorial(k)


def taylor_from_function(f: Callable, z0: complex, order: int,
                         radius: float, rule: QuadratureRule | None = None) -> PowerSeries:
    """Taylor coefficients of an analytic f about z0 by circle quadrature."""
    exp = laurent_coefficients(f, z0, radius, 0, order, rule)
    return PowerSeries(exp.nonnegative, z0)


# ---------------------------------------------------------------------------
# Summation of R(n) e^{inx} by residues
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFunction:
    """P(z)/Q(z) with real coefficients (ascending order), deg Q >= deg P + 2."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        num = tuple(float(c) for c in self.numerator)
        den = tuple(float(c) for c in self.denominator)
        while len(num) > 1 and num[-1] == 0.0:
            num = num[:-1]
        while len(den) > 1 and den[-1] == 0.0:
            den = den[:-1]
        if len(den) < len(num) + 2:
            raise DomainError("need deg Q >= deg P + 2 for summability")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        num = np.zeros_like(z)
        for c in reversed(self.numerator):
            num = num * z + c
        den = np.zeros_like(z)
        for c in reversed(self.denominator):
            den = den * z + c
        return num / den

    def poles(self) -> list[tuple[complex, int]]:
        """Denominator roots grouped into (location, multiplicity) clusters."""
        roots = np.roots(list(reversed(self.denominator)))
        groups: list[list[complex]] = []
        for r in sorted(roots, key=lambda z: (z.real, z.imag)):
            for g in groups:
                if abs(r - g[0]) < 1e-7:
                    g.append(r)
                    break
            else:
                groups.append([r])
        out = []
        for g in groups:
            loc = sum(g) / len(g)
            if abs(loc - round(loc.real)) < 1e-9 and abs(loc.imag) < 1e-9:
                raise DomainError(f"pole at integer lattice point {loc}")
            out.append((complex(loc), len(g)))
        return out


@dataclass(frozen=True)
class RationalExpSumResult:
    residue_form: complex
    direct_sum: complex
    direct_tail_bound: float
    discrepancy: float
    #: The paper's worked closed form for 1/(n^2+w^2) evaluates to the
    #: negative of the direct sum; the leading-minus master formula itself
    #: agrees with the lattice sum, which is what residue_form follows.
    printed_example_sign_note: str = (
        "residue form pinned to the direct-sum oracle; the printed worked "
        "closed form for 1/(n^2+w^2) carries the opposite overall sign")


def rational_exp_sum(R: RationalFunction, x: float,
                     direct_limit: int = 10 ** 6,
                     rule: QuadratureRule | None = None) -> RationalExpSumResult:
    """sum_{n in Z} R(n) e^{inx} two ways: minus the sum of residues of
    R(z) * 2 pi i e^{izx} / (e^{2 pi i z} - 1) over the poles of R, and the
    direct lattice partial sum with a tail estimate."""
    if not 0.0 <= x <= 2.0 * math.pi:
        raise DomainError("x must lie in [0, 2*pi]")
    poles = R.poles()

    def kernel_fn(z):
        # e^{2 pi i z} - 1 overflows for large |Im z|; poles of R are fixed,
        # small circles keep us in safe range for any sane input.
        return R(z) * 2j * math.pi * np.exp(1j * z * x) / np.expm1(2j * math.pi * z)

    residue_total = 0.0 + 0.0j
    locs = [p for p, _ in poles]
    for (z0, mult) in poles:
        others = [abs(z0 - w) for w in locs if abs(z0 - w) > 1e-12]
        d_int = min(abs(z0 - round(z0.real)), abs(z0 - round(z0.real) - 1),
                    abs(z0 - round(z0.real) + 1))
        radius = 0.45 * min([d_int] + others) if (others or d_int) else 0.1
        radius = max(min(radius, 1.0), 1e-4)
        residue_total += residue_at_pole(kernel_fn, z0, mult, radius,
                                         rule or QuadratureRule())
    residue_form = -residue_total

    # direct lattice sum, vectorized in chunks
    direct = complex(R(0.0))
    chunk = 200_000
    n0 = 1
    while n0 <= direct_limit:
        n1 = min(n0 + chunk - 1, direct_limit)
        n = np.arange(n0, n1 + 1, dtype=float)
        direct += np.sum(R(n) * np.exp(1j * n * x) + R(-n) * np.exp(-1j * n * x))
        n0 = n1 + 1
    # tail: |R(n)| <= c / n^gap beyond the last pole; integral comparison
    gap = len(R.denominator) - len(R.numerator)
    c = abs(R(float(direct_limit))) * direct_limit ** gap
    tail = 2.0 * c * direct_limit ** (1 - gap) / (gap - 1)
    disc = abs(residue_form - direct)
    return RationalExpSumResult(residue_form, complex(direct), float(tail), float(disc))


# ---------------------------------------------------------------------------
# Abel-Plana-type summation
# ---------------------------------------------------------------------------

def abel_plana_like_sum(G: Callable, x: float,
                        rule: QuadratureRule | None = None,
                        tail_span: float = 40.0) -> complex:
    """G(0)/2 + int_0^inf G(t) e^{2 pi i t x} dt
    + i int_0^inf [G(iy) e^{-2 pi x y} - G(-iy) e^{+2 pi x y}] / (e^{2 pi y} - 1) dy.

    The caller asserts the decay hypotheses; the semi-infinite integrals are
    truncated once an additional span contributes below tolerance.
    """
    rule = rule or QuadratureRule(abs_tol=1e-12, rel_tol=1e-12)

    def real_axis(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(G(t), dtype=complex) * np.exp(2j * math.pi * t * x)

    def imag_axis(y):
        y = np.asarray(y, dtype=float)
        up = np.asarray(G(1j * y), dtype=complex) * np.exp(-2.0 * math.pi * x * y)
        dn = np.asarray(G(-1j * y), dtype=complex) * np.exp(2.0 * math.pi * x * y)
        return (up - dn) / np.expm1(2.0 * math.pi * y)

    def semi_infinite(fn):
        total = 0.0 + 0.0j
        lo = 0.0
        span = tail_span
        for _ in range(30):
            piece, _ = adaptive_quad(fn, lo, lo + span, rule)
            total += piece
            if abs(piece) < rule.abs_tol:
                return total
            lo += span
        raise ToleranceNotMet("semi-infinite tail did not fall below tolerance",
                              best_estimate=total)

    g0 = complex(np.asarray(G(np.array([0.0])), dtype=complex)[0])
    return g0 / 2.0 + semi_infinite(real_axis) + 1j * semi_infinite(imag_axis)


# ---------------------------------------------------------------------------
# Series reversion: inverse-function and Burmann-Lagrange expansions
# ---------------------------------------------------------------------------

def inverse_function_series(f: PowerSeries, order: int) -> PowerSeries:
    """Coefficients of the local inverse z = g(w) of w = f(z).

    b_n = (1/n) [z^{n-1}] (z / (f(z) - f(0)))^n, realized with truncated
    series powers; g(f(z)) = z + O(z^{order+1}).
    """
    if abs(f[1]) == 0.0:
        raise DomainError("f'(z0) = 0: function is not locally invertible")
    n = order
    phi = PowerSeries([f[k + 1] for k in range(min(f.order, n))], f.center).pad(n - 1)
    phi_inv = series_inverse(phi)  # z/(f - f(0)) as a series
    b = [0.0, 1.0 / f[1]]
    power = phi_inv
    for k in range(2, n + 1):
        power = (power * phi_inv).pad(n - 1)
        b.append(power[k - 1] / k)
    return PowerSeries(b[: n + 1], f[0])


def burmann_lagrange(f: PowerSeries, w: PowerSeries, order: int) -> list[complex]:
    """Coefficients d_n of the expansion f(z) = sum d_n w(z)^n.

    d_0 = f(z0); d_n = (1/n) [z^{n-1}] ( f'(z) (z / w(z))^n ).
    """
    if abs(w[0]) > 1e-13:
        raise DomainError("w must vanish at the expansion point")
    if abs(w[1]) == 0.0:
        raise DomainError("w must have a simple zero (w'(z0) != 0)")
    n = order
    psi = PowerSeries([w[k + 1] for k in range(min(w.order, n))], w.center).pad(n - 1)
    psi_inv = series_inverse(psi)  # z/w(z)
    fp = f.deriv().pad(n - 1)
    d = [f[0]]
    power = psi_inv
    for k in range(1, n + 1):
        d.append((fp * power).pad(n - 1)[k - 1] / k)
        if k < n:
            power = (power * psi_inv).pad(n - 1)
    return d


# ---------------------------------------------------------------------------
# Argument-principle zero counting
# ---------------------------------------------------------------------------

def count_zeros(f: Callable, path: ContourPath,
                rule: QuadratureRule | None = None,
                fprime: Callable | None = None,
                min_samples: int = 512) -> int:
    """(1/2 pi i) contour-int f'/f, rounded to the nearest integer.

    With an analytic derivative supplied the logarithmic integral is done by
    quadrature; otherwise the winding is accumulated as the total argument
    variation of f along the path (the same integral, evaluated by phase
    unwrapping with adaptive sample refinement).
    """
    if not path.is_closed:
        raise DomainError("zero counting needs a closed contour")
    if fprime is not None:
        res = integrate_contour(lambda z: np.asarray(fprime(z)) / np.asarray(f(z)),
                                path, rule or QuadratureRule())
        raw = res.value / (2j * math.pi)
        n = round(raw.real)
        if abs(raw - n) > 0.1:
            raise InconclusiveError(f"logarithmic integral {raw} is not near an integer")
        return int(n)

    per_seg = max(min_samples // len(path.segments), 64)
    for _ in range(8):
        pts = path.points(per_seg)
        vals = np.asarray(f(pts), dtype=complex)
        if np.min(np.abs(vals)) == 0.0:
            raise DomainError("f vanishes on the contour")
        phases = np.angle(np.concatenate([vals, vals[:1]]))
        jumps = np.diff(phases)
        jumps = (jumps + math.pi) % (2.0 * math.pi) - math.pi
        if np.max(np.abs(jumps)) < math.pi / 2.0:
            raw = np.sum(jumps) / (2.0 * math.pi)
            n = round(raw)
            if abs(raw - n) > 0.1:
                raise InconclusiveError(f"argument variation {raw} is not near an integer")
            return int(n)
        per_seg *= 2
    raise InconclusiveError("phase sampling did not resolve the winding number")
