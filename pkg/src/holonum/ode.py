"""Series solutions of linear second-order ODEs and Taylor IVPs for systems.

Covers ordinary points (analytic coefficients), regular singular points
(indicial roots and the three classical branch cases, with the removable
r-limits taken exactly as rational functions of the exponent), reduction of
order, variation of parameters, and a Taylor-mode solver for polynomial
first-order systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from .errors import DomainError, HolonumError
from .series import PowerSeries, series_exp, series_inverse

_GAP_TOL = 1e-9  # distance to nearest integer that classifies the root gap


@dataclass(frozen=True)
class OdeCoefficients:
    """Analytic coefficients of  y'' + a(x) y' + b(x) y = 0  (ordinary point)
    or  x^2 y'' + x a(x) y' + b(x) y = 0  (regular singular point)."""

    a: PowerSeries
    b: PowerSeries
    radius: float | None = None

    def __post_init__(self):
        if abs(complex(self.a.center) - complex(self.b.center)) > 1e-14:
            raise DomainError("coefficient series must share a center")


def solve_analytic_ode(coeffs: OdeCoefficients, y0: complex, y0_prime: complex,
                       order: int) -> PowerSeries:
    """Power-series solution of y'' + a y' + b y = 0 at an ordinary point.

    (n+1)(n+2) y_{n+2} = - sum_{k<=n} [ (k+1) a_{n-k} y_{k+1} + b_{n-k} y_k ].
    """
    if coeffs.a.order < max(0, order - 2) or coeffs.b.order < max(0, order - 2):
        raise DomainError("coefficient series shorter than requested order")
    a, b = coeffs.a, coeffs.b
    y = [complex(y0), complex(y0_prime)]
    for n in range(order - 1):
        s = sum((k + 1) * a[n - k] * y[k + 1] + b[n - k] * y[k] for k in range(n + 1))
        y.append(-s / ((n + 1) * (n + 2)))
    # solution radius is at least the common coefficient radius
    return PowerSeries(y[: order + 1], coeffs.a.center, coeffs.radius)


@dataclass(frozen=True)
class FrobeniusSolution:
    indicial_roots: tuple          # (r1, r2), Re r1 >= Re r2
    case: str                      # generic | double-root | integer-gap
    primary: PowerSeries
    primary_exponent: complex
    secondary_series: PowerSeries
    secondary_exponent: complex
    secondary_log_weight: complex  # y2 = weight * y1 * ln x + x^e2 * series

    def primary_eval(self, x):
        return x ** self.primary_exponent * self.primary(x)

    def secondary_eval(self, x):
        base = x ** self.secondary_exponent * self.secondary_series(x)
        if self.secondary_log_weight != 0:
            base = base + self.secondary_log_weight * np.log(x) * self.primary_eval(x)
        return base


def _indicial_roots(a0: complex, b0: complex):
    r = np.roots([1.0, complex(a0) - 1.0, complex(b0)])
    r = sorted(r, key=lambda z: (z.real, z.imag), reverse=True)
    return complex(r[0]), complex(r[1])


def _to_sympy_number(z: complex):
    z = complex(z)
    re = Fraction(z.real).limit_denominator(10 ** 12)
    im = Fraction(z.imag).limit_denominator(10 ** 12)
    out = sp.Rational(re.numerator, re.denominator)
    if im:
        out = out + sp.I * sp.Rational(im.numerator, im.denominator)
    return out


def _numeric_frobenius(a, b, r: complex, order: int, r1=None, r2=None):
    """y_n(r) by the plain recurrence; raises if a denominator vanishes."""
    y = [1.0 + 0.0j]
    for n in range(1, order + 1):
        rhs = -sum(y[k] * ((r + k) * a[n - k] + b[n - k]) for k in range(n))
        rho = r + n
        denom = rho * (rho - 1) + a[0] * rho + b[0]
        if abs(denom) < 1e-12:
            raise HolonumError(
                f"recurrence denominator vanishes at n={n}; case misclassified")
        y.append(rhs / denom)
    return y


def solve_frobenius(coeffs: OdeCoefficients, order: int) -> FrobeniusSolution:
    """Frobenius solutions of x^2 y'' + x a(x) y' + b(x) y = 0.

    Generic root gap: two plain series x^{r1}(...), x^{r2}(...).
    Double root: second solution d/dr y(x,r) at r1 (unit log weight).
    Integer gap: both solutions from (r - r2) y(x,r); the limit and its
    r-derivative are evaluated exactly on the rational functions y_n(r), so
    removable singularities cancel rather than being approximated.
    """
    a, b = coeffs.a, coeffs.b
    if a.order < order or b.order < order:
        raise DomainError("coefficient series shorter than requested order")
    r1, r2 = _indicial_roots(a[0], b[0])
    delta = r1 - r2
    nearest = round(delta.real)
    if abs(delta) < _GAP_TOL:
        case = "double-root"
    elif abs(delta.imag) < _GAP_TOL and abs(delta.real - nearest) < _GAP_TOL and nearest >= 1:
        case = "integer-gap"
    else:
        case = "generic"
    center = a.center

    if case == "generic":
        y1 = _numeric_frobenius(a, b, r1, order)
        y2 = _numeric_frobenius(a, b, r2, order)
        return FrobeniusSolution((r1, r2), case,
                                 PowerSeries(y1, center), r1,
                                 PowerSeries(y2, center), r2, 0.0)

    # symbolic recurrence in the exponent r
    r = sp.Symbol("r")
    a_sym = [_to_sympy_number(a[n]) for n in range(order + 1)]
    b_sym = [_to_sympy_number(b[n]) for n in range(order + 1)]
    poly = sp.Poly(r * (r - 1) + a_sym[0] * r + b_sym[0], r)
    roots_exact = sorted(sp.roots(poly, r, multiple=True),
                         key=lambda z: (sp.re(z), sp.im(z)), reverse=True)
    r1_s, r2_s = roots_exact[0], roots_exact[1]

    y_sym = [sp.Integer(1)]
    for n in range(1, order + 1):
        rhs = -sum(y_sym[k] * ((r + k) * a_sym[n - k] + b_sym[n - k]) for k in range(n))
        rho = r + n
        denom = rho * (rho - 1) + a_sym[0] * rho + b_sym[0]
        y_sym.append(sp.cancel(rhs / denom))

    if case == "double-root":
        y1 = [complex(expr.subs(r, r1_s)) for expr in y_sym]
        dy = [complex(sp.cancel(sp.diff(expr, r)).subs(r, r1_s)) for expr in y_sym]
        return FrobeniusSolution((r1, r2), case,
                                 PowerSeries(y1, center), r1,
                                 PowerSeries(dy, center), r1, 1.0)

    # integer gap: work with w_n(r) = (r - r2) y_n(r)
    w_sym = [sp.cancel((r - r2_s) * expr) for expr in y_sym]
    w_at = [complex(expr.subs(r, r2_s)) for expr in w_sym]
    if max(abs(v) for v in w_at) > 1e-13:
        # genuine log case: primary = lim (r-r2) y(x,r), supported from n = gap
        dw = [complex(sp.diff(expr, r).subs(r, r2_s)) for expr in w_sym]
        return FrobeniusSolution((r1, r2), case,
                                 PowerSeries(w_at, center), r2,
                                 PowerSeries(dw, center), r2, 1.0)
    # obstruction vanishes: y(x, r2) is itself regular, no log term
    y1 = _numeric_frobenius(a, b, r1, order)
    y2 = [complex(sp.limit(expr, r, r2_s)) for expr in y_sym]
    return FrobeniusSolution((r1, r2), case,
                             PowerSeries(y1, center), r1,
                             PowerSeries(y2, center), r2, 0.0)


def frobenius_residual(coeffs: OdeCoefficients, series: PowerSeries,
                       exponent: complex) -> float:
    """Max residual coefficient of x^2 y'' + x a y' + b y on x^r * series."""
    a, b = coeffs.a, coeffs.b
    y = series.coeffs
    worst = 0.0
    scale = max(max(abs(c) for c in y), 1.0)
    for n in range(len(y)):
        rho = exponent + n
        val = y[n] * (rho * (rho - 1) + a[0] * rho + b[0])
        val += sum(y[k] * ((exponent + k) * a[n - k] + b[n - k]) for k in range(n))
        worst = max(worst, abs(val) / scale)
    return worst


def second_solution_by_reduction(y1: PowerSeries, a: PowerSeries,
                                 order: int) -> PowerSeries:
    """y2 = y1 * integral( exp(-integral a) / y1^2 ), all in series arithmetic."""
    if abs(y1[0]) == 0.0:
        raise DomainError("reduction of order needs y1 with nonzero constant term")
    n = order
    y1p = y1.pad(n)
    ap = a.pad(n)
    expfac = series_exp(-(ap.integ()).truncate(n))
    integrand = expfac * series_inverse(y1p) * series_inverse(y1p)
    return (y1p * integrand.integ().truncate(n)).truncate(n)


def particular_solution(y1: PowerSeries, y2: PowerSeries, f: PowerSeries,
                        order: int) -> PowerSeries:
    """Variation of parameters: y_p = C1 y1 + C2 y2 with
    C1' = -f y2 / W and C2' = +f y1 / W, W the Wronskian series."""
    n = order
    y1p, y2p, fp = y1.pad(n), y2.pad(n), f.pad(n)
    w = y1p * y2p.deriv().pad(n) - y1p.deriv().pad(n) * y2p
    if abs(w[0]) == 0.0:
        raise DomainError("Wronskian constant term vanishes: solutions dependent")
    winv = series_inverse(w.pad(n))
    c1 = (-(fp * y2p) * winv).integ().truncate(n)
    c2 = ((fp * y1p) * winv).integ().truncate(n)
    return (c1 * y1p + c2 * y2p).truncate(n)


# ---------------------------------------------------------------------------
# Taylor IVP solver for polynomial first-order systems
# ---------------------------------------------------------------------------

class PolynomialRhs:
    """Multivariate polynomial in (x, y_1, ..., y_N).

    terms: mapping exponent-tuple (e_x, e_1, ..., e_N) -> coefficient.
    Evaluates on numbers and on PowerSeries alike, which keeps the Taylor
    coefficient recursion exact and rejects transcendental right-hand sides
    by construction.
    """

    def __init__(self, terms: dict, dimension: int):
        self.dimension = dimension
        self.terms = {}
        for expo, c in terms.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != dimension + 1 or any(e < 0 for e in expo):
                raise DomainError("bad exponent tuple in polynomial rhs")
            self.terms[expo] = complex(c)

    def __call__(self, x, ys: Sequence):
        acc = None
        for expo, c in self.terms.items():
            term = c
            if expo[0]:
                term = term * x ** expo[0] if not isinstance(x, PowerSeries) \
                    else x ** expo[0] * term
            for yi, e in zip(ys, expo[1:]):
                if e:
                    term = (yi ** e) * term if isinstance(yi, PowerSeries) \
                        else term * yi ** e
            acc = term if acc is None else acc + term
        if acc is None:
            return 0.0
        return acc


@dataclass(frozen=True)
class TaylorIvp:
    rhs: tuple                 # PolynomialRhs per component
    initial_point: float
    initial_state: tuple

    def __post_init__(self):
        if len(self.rhs) != len(self.initial_state):
            raise DomainError("rhs and initial state dimensions differ")

    @property
    def dimension(self) -> int:
        return len(self.rhs)


def taylor_ivp_series(ivp: TaylorIvp, order: int) -> list[PowerSeries]:
    """Taylor coefficients of the solution about the initial point.

    Coefficient k+1 of y_i is coefficient k of F_i(x, y(x)) over (k+1); the
    x-series is centered at the initial point.
    """
    dim = ivp.dimension
    coeffs = [[complex(v)] for v in ivp.initial_state]
    x0 = ivp.initial_point
    for k in range(order):
        x_series = PowerSeries([x0, 1.0] + [0.0] * max(0, k - 1), x0).pad(k)
        ys = [PowerSeries(c, x0).pad(k) for c in coeffs]
        for i in range(dim):
            val = ivp.rhs[i](x_series, ys)
            fk = val[k] if isinstance(val, PowerSeries) else (complex(val) if k == 0 else 0.0)
            coeffs[i].append(fk / (k + 1))
    return [PowerSeries(c, x0) for c in coeffs]
