"""Riemann zeta laboratory: eta-series zeta evaluation with functional
equation continuation, the entire xi function, its even Taylor coefficients
by quadrature, the horizontal-shift B-hat table, and critical-line zero
scanning."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import loggamma

from .contours import ContourPath
from .complexkit import count_zeros
from .errors import ConvergenceError, DomainError
from .series import PowerSeries, QuadratureRule, adaptive_quad

_LN2 = math.log(2.0)
_LNPI = math.log(math.pi)

# Stieltjes constants for the Laurent expansion of (z - 1) zeta(z) near z = 1
_STIELTJES = (0.5772156649015329, -0.0728158454836767, -0.00969036319287092,
              0.00205383442030335, 0.00232537006546730)


def _near_one_product(z: complex) -> complex:
    """(z - 1) zeta(z) = 1 + sum_n (-1)^{n-1} gamma_{n-1} (z-1)^n / (n-1)!,
    accurate for |z - 1| well inside the unit disk."""
    w = complex(z) - 1.0
    t = 1.0 + 0.0j
    for n, g in enumerate(_STIELTJES, start=1):
        t += (-1.0) ** (n - 1) * g * w ** n / math.factorial(n - 1)
    return t


@dataclass(frozen=True)
class ZetaEvaluator:
    """Alternating (eta) series with Euler-transform acceleration:

    zeta(s) = (1 - 2^{1-s})^{-1} sum_{n>=1} (-1)^{n-1} n^{-s},  Re s > 0,

    continued to Re s < 1/2 through the functional equation
    zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s).
    """

    eta_terms: int = 64
    acceleration_depth: int = 24
    derivative_orders: int = 80

    def __post_init__(self):
        if self.eta_terms < 1 or self.acceleration_depth < 0:
            raise DomainError("need eta_terms >= 1 and acceleration_depth >= 0")

    def _eta(self, s: complex, log_power: int = 0) -> complex:
        """Termwise derivative (-1)^k eta^{(k)} uses terms (ln n)^k n^{-s}."""
        m = self.eta_terms
        d = self.acceleration_depth

        def term(n):
            return math.log(n) ** log_power * cmath.exp(-s * math.log(n)) if n > 1 \
                else (0.0 if log_power else 1.0)

        total = 0.0 + 0.0j
        sign = 1.0
        for n in range(1, m + 1):
            total += sign * term(n)
            sign = -sign
        # Euler transform of the tail sum_{j>=0} (-1)^j b_j, b_j = term(m+1+j)
        b = [term(m + 1 + j) for j in range(d + 1)]
        tail = 0.0 + 0.0j
        half = 0.5
        for k in range(d + 1):
            tail += half * b[0]
            half *= 0.5
            b = [x - y for x, y in zip(b, b[1:])]
        return total + sign * tail

    def _eta_zeta_direct(self, s: complex) -> complex:
        return self._eta(s) / (1.0 - cmath.exp((1.0 - s) * _LN2))

    def __call__(self, s: complex) -> complex:
        return self.zeta(s)

    def zeta(self, s: complex) -> complex:
        s = complex(s)
        if s == 1.0:
            raise DomainError("zeta has its pole at s = 1")
        if abs(s.imag) > 30.0:
            warnings.warn("|Im s| > 30: accuracy degrades at default eta "
                          "settings", stacklevel=2)
        if s.real >= 0.5:
            if abs(1.0 - cmath.exp((1.0 - s) * _LN2)) <= 1e-12:
                # 2^{1-s} = 1 (s on Re s = 1, Im s a multiple of 2 pi/ln 2):
                # the series prefactor degenerates; Richardson-extrapolated
                # symmetric average around the removable direction
                d1 = 1e-5
                f = self._eta_zeta_direct
                a1 = 0.5 * (f(s + d1) + f(s - d1))
                a2 = 0.5 * (f(s + d1 / 2) + f(s - d1 / 2))
                return (4.0 * a2 - a1) / 3.0
            return self._eta_zeta_direct(s)
        w = 1.0 - s
        if abs(s) < 1e-6:
            # zeta(w) has its pole here, but sin(pi s/2) cancels it:
            # sin(pi s/2) zeta(w) = -(sin(pi s/2)/s) (w - 1) zeta(w)
            ratio = math.pi / 2.0 if s == 0.0 else cmath.sin(math.pi * s / 2.0) / s
            return -cmath.exp(s * _LN2 + (s - 1.0) * _LNPI + loggamma(w)) \
                * ratio * _near_one_product(w)
        return cmath.exp(s * _LN2 + (s - 1.0) * _LNPI + loggamma(w)) \
            * cmath.sin(math.pi * s / 2.0) * self.zeta(w)

    def taylor(self, x0: float, order: int) -> PowerSeries:
        """Taylor coefficients of zeta about a real point x0 in (0, 1),
        from the termwise-differentiated eta series and series division."""
        if not 0.0 < x0 < 1.0:
            raise DomainError("expansion point must lie in (0, 1)")
        if order > self.derivative_orders:
            raise DomainError(f"order {order} above supported "
                              f"{self.derivative_orders}")
        eta_c = [(-1.0) ** k * self._eta(complex(x0), k).real / math.factorial(k)
                 for k in range(order + 1)]
        p = 2.0 ** (1.0 - x0)
        den_c = [1.0 - p] + [-p * (-_LN2) ** k / math.factorial(k)
                             for k in range(1, order + 1)]
        return PowerSeries(eta_c, x0) / PowerSeries(den_c, x0)


_DEFAULT_ZETA = ZetaEvaluator()


def zeta(s: complex, evaluator: ZetaEvaluator | None = None) -> complex:
    return (evaluator or _DEFAULT_ZETA).zeta(s)


def xi(z: complex, evaluator: ZetaEvaluator | None = None) -> complex:
    """xi(z) = Gamma(z/2 + 1) (z - 1) pi^{-z/2} zeta(z): entire, symmetric
    under z -> 1 - z, real on the critical line."""
    z = complex(z)
    if abs(z - 1.0) < 1e-6:
        t = _near_one_product(z)
    else:
        t = (z - 1.0) * zeta(z, evaluator)
    return cmath.exp(loggamma(z / 2.0 + 1.0) - z / 2.0 * _LNPI) * t


# ---------------------------------------------------------------------------
# xi Taylor coefficients about 1/2 by quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XiSeries:
    """Even Taylor coefficients: xi(s) = sum_n a[n] (s - 1/2)^{2n}."""

    a: tuple
    p_max: int
    x_max: float
    rule: QuadratureRule
    p_tail_bound: float
    quad_tail_bound: float

    def __call__(self, s: complex) -> complex:
        w = (complex(s) - 0.5) ** 2
        total = 0.0 + 0.0j
        for c in reversed(self.a):
            total = total * w + c
        return total


def _theta_kernel(u: np.ndarray, p_max: int) -> np.ndarray:
    """2 x^{5/4} sum_p (p^4 pi^2 x - 3/2 p^2 pi) e^{-p^2 pi x} at x = e^{2u}."""
    x = np.exp(2.0 * u)
    p = np.arange(1, p_max + 1, dtype=float)
    pp = p[:, None] ** 2
    terms = (pp ** 2 * math.pi ** 2 * x[None, :]
             - 1.5 * pp * math.pi) * np.exp(-pp * math.pi * x[None, :])
    return 2.0 * x ** 1.25 * np.sum(terms, axis=0)


def xi_coefficients(n_max: int, p_max: int = 40, x_max: float = 120.0,
                    rule: QuadratureRule | None = None,
                    tol: float = 1e-12) -> XiSeries:
    """a_{2n} = 4 int_1^{x_max} [sum_p (p^4 pi^2 x - 3/2 p^2 pi) e^{-p^2 pi x}]
    x^{1/4} ((ln x)/2)^{2n} / (2n)! dx, via the substitution x = e^{2u}.

    The p-series and x-cutoff tails are bounded by their leading dropped
    terms and recorded; bounds above `tol` raise with the binding parameter.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    rule = rule or QuadratureRule(abs_tol=1e-14, rel_tol=1e-13)
    u_max = 0.5 * math.log(x_max)

    p_tail = 8.0 * x_max ** 2.25 * (p_max + 1) ** 4 * math.pi ** 2 \
        * math.exp(-(p_max + 1) ** 2 * math.pi)
    if p_tail > tol:
        raise DomainError(f"p_max={p_max} leaves p-series tail {p_tail:.2e} > {tol}")
    quad_tail = 8.0 * x_max ** 2.25 * p_max ** 5 * math.pi ** 2 \
        * math.exp(-math.pi * x_max) * u_max ** (2 * n_max)
    if quad_tail > tol:
        raise DomainError(f"x_max={x_max} leaves quadrature tail {quad_tail:.2e} > {tol}")

    coeffs = []
    for n in range(n_max + 1):
        fact = math.factorial(2 * n)

        def g(u, n=n, fact=fact):
            u = np.asarray(u, dtype=float)
            return _theta_kernel(u, p_max) * u ** (2 * n) / fact

        val, _ = adaptive_quad(g, 0.0, u_max, rule)
        coeffs.append(4.0 * complex(val).real)
    return XiSeries(tuple(coeffs), p_max, x_max, rule, p_tail, quad_tail)


# ---------------------------------------------------------------------------
# Horizontal-shift table B-hat
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BhatTable:
    """values[m][i] = B_{2m}(b_grid[i]) = sum_{n>=m} a_{2n} (-1)^{n-m}
    b^{2(n-m)} C(2n, 2m); Re xi(x + i b) = sum_m values[m] (x - 1/2)^{2m}."""

    b_grid: tuple
    m_max: int
    values: tuple      # tuple of rows, one per m
    truncation_error_bound: tuple  # same shape

    def row(self, m: int) -> tuple:
        return self.values[m]


def bhat_table(xi_series: XiSeries, b_grid: Sequence[float],
               m_max: int) -> BhatTable:
    n_max = len(xi_series.a) - 1
    if m_max > n_max:
        raise DomainError(f"m_max={m_max} exceeds available n_max={n_max}")
    b_grid = tuple(float(b) for b in b_grid)
    values = []
    bounds = []
    for m in range(m_max + 1):
        row = []
        row_bound = []
        for b in b_grid:
            terms = [xi_series.a[n] * (-1.0) ** (n - m) * b ** (2 * (n - m))
                     * math.comb(2 * n, 2 * m) for n in range(m, n_max + 1)]
            tail = abs(terms[-1]) if len(terms) > 1 else 0.0
            if len(terms) >= 3 and abs(terms[-1]) > abs(terms[-2]):
                raise DomainError(
                    f"alternating tail still growing at n_max={n_max} for "
                    f"(m={m}, b={b}); increase n_max")
            row.append(math.fsum(terms))
            row_bound.append(tail)
        values.append(tuple(row))
        bounds.append(tuple(row_bound))
    return BhatTable(b_grid, m_max, tuple(values), tuple(bounds))


@dataclass(frozen=True)
class ScanReport:
    table: BhatTable
    #: per m: smallest grid b with value + tail bound certified negative,
    #: or None when the row stays positive on the grid
    first_negative_b: tuple

    def rows(self) -> list[dict]:
        out = []
        for m in range(self.table.m_max + 1):
            for b, v, e in zip(self.table.b_grid, self.table.values[m],
                               self.table.truncation_error_bound[m]):
                if v - e > 0:
                    flag = "positive"
                elif v + e < 0:
                    flag = "negative"
                else:
                    flag = "undecided"
                out.append({"m": m, "b": b, "b_hat": v, "tail_bound": e,
                            "sign_flag": flag})
        return out


def positivity_scan(table: BhatTable) -> ScanReport:
    first_neg = []
    for m in range(table.m_max + 1):
        hit = None
        for b, v, e in zip(table.b_grid, table.values[m],
                           table.truncation_error_bound[m]):
            if v + e < 0:
                hit = b
                break
        first_neg.append(hit)
    return ScanReport(table, tuple(first_neg))


# ---------------------------------------------------------------------------
# Horizontal Taylor evaluation of zeta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HorizontalTaylor:
    real_sum: float
    imag_sum: float
    remainder: float


def horizontal_taylor(x0: float, b: float, k_max: int,
                      evaluator: ZetaEvaluator | None = None) -> HorizontalTaylor:
    """zeta(x0 + i b) from the real-axis Taylor coefficients:

    Re = sum (-1)^n zeta^{(2n)}(x0) b^{2n} / (2n)!,
    Im = sum (-1)^n zeta^{(2n+1)}(x0) b^{2n+1} / (2n+1)!.

    The pole at s = 1 limits the radius to |1 - x0|; growth of the retained
    terms raises a radius-exceeded error.
    """
    ev = evaluator or _DEFAULT_ZETA
    series = ev.taylor(x0, k_max)
    terms = [series[k] * (1j * b) ** k for k in range(k_max + 1)]
    mags = [abs(t) for t in terms[-3:]]
    if b != 0.0 and len(mags) == 3 and mags[2] > mags[1] > mags[0] \
            and abs(b) >= abs(1.0 - x0):
        raise ConvergenceError("b exceeds the Taylor radius |1 - x0|",
                               best=sum(terms), residual=mags[2])
    total = sum(terms)
    return HorizontalTaylor(total.real, total.imag, abs(terms[-1]))


# ---------------------------------------------------------------------------
# Critical-line zero scan
# ---------------------------------------------------------------------------

def critical_line_zero_scan(t_min: float, t_max: float, step: float = 0.1,
                            evaluator: ZetaEvaluator | None = None,
                            bracket_width: float = 1e-6,
                            cross_validate: bool = True) -> list[tuple[float, float]]:
    """Sign-change brackets of the real function t -> xi(1/2 + i t),
    bisected to the requested width, each optionally confirmed by an
    argument-principle zero count on a small surrounding rectangle."""
    if step > 0.5:
        warnings.warn("step above 0.5 may miss sign changes", stacklevel=2)
    ev = evaluator or _DEFAULT_ZETA

    def f(t):
        return xi(0.5 + 1j * t, ev).real

    brackets = []
    t = t_min
    ft = f(t)
    while t < t_max:
        t2 = min(t + step, t_max)
        ft2 = f(t2)
        if ft == 0.0:
            brackets.append((t, t))
        elif ft * ft2 < 0.0:
            lo, hi, flo = t, t2, ft
            while hi - lo > bracket_width:
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    lo = hi = mid
                elif flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            brackets.append((lo, hi))
        t, ft = t2, ft2
    if cross_validate:
        for lo, hi in brackets:
            mid = 0.5 * (lo + hi)
            rect = ContourPath.rectangle(complex(0.3, mid - 0.05),
                                         complex(0.7, mid + 0.05))

            def g(z):
                return np.array([xi(w, ev) for w in np.atleast_1d(z)])

            n = count_zeros(g, rect, min_samples=256)
            if n != 1:
                raise ConvergenceError(
                    f"bracket near t={mid} failed zero-count validation",
                    best=(lo, hi), residual=float(n))
    return brackets
