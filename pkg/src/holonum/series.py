"""Truncated power series arithmetic and convergence-radius estimation.

A :class:`PowerSeries` is a finite list of complex Taylor coefficients about
a common center.  Truncation is explicit: every binary operation truncates
the result to the shorter operand, and no operation ever reads coefficients
beyond the stored order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, SingularInverseError

#: Sentinel returned by :func:`ratio_radius` when the trailing-coefficient
#: pattern does not support a ratio estimate (lacunary series etc.).
UNDECIDED = None


@dataclass(frozen=True)
class PowerSeries:
    """Truncated complex power series  sum_n coeffs[n] * (z - center)**n."""

    coeffs: tuple
    center: complex = 0.0
    radius: float | None = None  # positive estimate, or None when unknown

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if not self.coeffs:
            raise DomainError("a power series needs at least one coefficient")
        if self.radius is not None and not self.radius > 0:
            raise DomainError("radius estimate must be positive")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> complex:
        return self.coeffs[n] if 0 <= n <= self.order else 0.0

    def __call__(self, z) -> complex:
        """Horner evaluation at a point (or numpy array of points)."""
        w = np.asarray(z) - self.center
        acc = np.zeros_like(w, dtype=complex) + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * w + c
        return acc if acc.shape else complex(acc)

    def truncate(self, order: int) -> "PowerSeries":
        if order >= self.order:
            return self
        return PowerSeries(self.coeffs[: order + 1], self.center, self.radius)

    def pad(self, order: int) -> "PowerSeries":
        if order <= self.order:
            return self.truncate(order)
        return PowerSeries(self.coeffs + (0.0,) * (order - self.order), self.center, self.radius)

    # -- arithmetic -------------------------------------------------------

    def _check_center(self, other: "PowerSeries"):
        if abs(complex(self.center) - complex(other.center)) > 1e-14:
            raise DomainError("series centers differ")

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            c = list(self.coeffs)
            c[0] += complex(other)
            return PowerSeries(c, self.center, self.radius)
        self._check_center(other)
        n = min(self.order, other.order)
        return PowerSeries(
            [self[k] + other[k] for k in range(n + 1)], self.center,
            _min_radius(self.radius, other.radius))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], self.center, self.radius)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PowerSeries) else -complex(other))

    def __rsub__(self, other):
        return (-self) + complex(other)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            s = complex(other)
            return PowerSeries([c * s for c in self.coeffs], self.center, self.radius)
        self._check_center(other)
        n = min(self.order, other.order)
        out = [sum(self[j] * other[k - j] for j in range(k + 1)) for k in range(n + 1)]
        return PowerSeries(out, self.center, _min_radius(self.radius, other.radius))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, PowerSeries):
            return self * (1.0 / complex(other))
        return self * series_inverse(other.truncate(min(self.order, other.order)))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("series powers must be nonnegative integers")
        out = PowerSeries([1.0] + [0.0] * self.order, self.center)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus ---------------------------------------------------------

    def deriv(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries([0.0], self.center, self.radius)
        return PowerSeries(
            [n * self.coeffs[n] for n in range(1, self.order + 1)], self.center, self.radius)

    def integ(self, const: complex = 0.0) -> "PowerSeries":
        """Antiderivative with prescribed constant term; order grows by one."""
        return PowerSeries(
            [const] + [self.coeffs[n] / (n + 1) for n in range(self.order + 1)],
            self.center, self.radius)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(z)); inner must have vanishing constant term."""
        if abs(inner[0]) > 1e-13:
            raise DomainError("composition requires inner constant term 0")
        n = min(self.order, inner.order)
        acc = PowerSeries([0.0] * (n + 1), inner.center)
        for c in reversed(self.coeffs[: n + 1]):
            acc = acc * inner + c
        return acc

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "center": [self.center.real if isinstance(self.center, complex) else float(self.center),
                       self.center.imag if isinstance(self.center, complex) else 0.0],
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PowerSeries":
        center = complex(obj["center"][0], obj["center"][1])
        coeffs = [complex(re, im) for re, im in obj["coeffs"]]
        return cls(coeffs, center)


def _min_radius(r1, r2):
    if r1 is None:
        return r2
    if r2 is None:
        return r1
    return min(r1, r2)


def series_add(p: PowerSeries, q: PowerSeries) -> PowerSeries:
    return p + q


def series_mul(p: PowerSeries, q: PowerSeries) -> PowerSeries:
    return p * q


def series_inverse(p: PowerSeries) -> PowerSeries:
    """Multiplicative inverse by the triangular recurrence.

    b0 = 1/a0,  b_n = -(1/a0) * sum_{k=1..n} a_k b_{n-k}.
    """
    a0 = p[0]
    if abs(a0) == 0.0:
        raise SingularInverseError("constant term vanishes; series is not invertible")
    b = [1.0 / a0]
    for n in range(1, p.order + 1):
        b.append(-sum(p[k] * b[n - k] for k in range(1, n + 1)) / a0)
    return PowerSeries(b, p.center)


def series_exp(p: PowerSeries) -> PowerSeries:
    """exp of a series with vanishing constant term, via u' = p' u."""
    if abs(p[0]) > 1e-13:
        raise DomainError("series_exp requires constant term 0")
    n = p.order
    u = [1.0]
    for k in range(1, n + 1):
        # k * u_k = sum_{j=1..k} j * p_j * u_{k-j}
        u.append(sum(j * p[j] * u[k - j] for j in range(1, k + 1)) / k)
    return PowerSeries(u, p.center)


def unit_series(order: int, center: complex = 0.0) -> PowerSeries:
    return PowerSeries([1.0] + [0.0] * order, center)


def identity_series(order: int, center: complex = 0.0) -> PowerSeries:
    c = [0.0] * (order + 1)
    if order >= 1:
        c[1] = 1.0
    return PowerSeries(c, center)


def ratio_radius(p: PowerSeries) -> float | None:
    """Convergence-radius estimate from trailing coefficient ratios.

    Averages |a_n / a_{n+1}| over the last ceil(N/4) ratios with one
    Richardson-style extrapolation step.  Returns ``UNDECIDED`` (None) when
    fewer than 4 consecutive trailing coefficients are nonzero, and
    ``math.inf`` when the ratios indicate a superexponentially decaying tail.
    """
    a = p.coeffs
    n = len(a) - 1
    tail = []
    for k in range(n, -1, -1):
        if abs(a[k]) > 0:
            tail.append(k)
        else:
            break
    tail.reverse()
    if len(tail) < 4:
        return UNDECIDED
    window = max(3, math.ceil((p.order + 1) / 4))
    idx = tail[-(window + 1):]
    ratios = [abs(a[idx[i]]) / abs(a[idx[i + 1]]) for i in range(len(idx) - 1)]
    if ratios[-1] > 1e12:
        return math.inf
    # |a_n|/|a_{n+1}| growing without its increments decaying marks a
    # superexponentially small tail (e.g. 1/n!): report an infinite radius.
    diffs = [ratios[i + 1] - ratios[i] for i in range(len(ratios) - 1)]
    if (len(diffs) >= 2 and all(d > 0 for d in diffs)
            and diffs[-1] > 0.25 * diffs[0]
            and ratios[-1] > 1.2 * ratios[0]):
        return math.inf
    est = sum(ratios) / len(ratios)
    # Richardson step: ratios r_n ~ R (1 + c/n) so 2*r_{2k} - r_k cancels 1/n
    if len(ratios) >= 2:
        half = ratios[: len(ratios) // 2]
        est = 2 * est - sum(half) / len(half)
    if est > 1e12:
        return math.inf
    if est <= 0:
        return UNDECIDED
    return est


# ---------------------------------------------------------------------------
# Quadrature rule and generic adaptive panel integration
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadratureRule:
    """Tolerances and budget for adaptive panel integration."""

    kind: str = "adaptive-segment"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_refinements: int = 10_000

    def __post_init__(self):
        if self.kind not in ("adaptive-segment", "fixed-node-count"):
            raise DomainError(f"unknown quadrature kind {self.kind!r}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")


def _gl_panel(f, a, b):
    h = 0.5 * (b - a)
    x = a + h * (_GL_NODES + 1.0)
    vals = f(x)
    return h * np.dot(_GL_WEIGHTS, vals)


def adaptive_quad(f: Callable, a: float, b: float, rule: QuadratureRule,
                  breakpoints: Sequence[float] = ()) -> tuple[complex, float]:
    """Integrate a (possibly complex-valued, vectorized) f over [a, b].

    Composite 15-point Gauss panels with adaptive bisection; the per-panel
    error estimate is the difference between the whole-panel value and the
    two-half sum.  Returns (value, achieved-error estimate).

    Raises :class:`ToleranceNotMet` with the best estimate if the refinement
    budget runs out.
    """
    from .errors import ToleranceNotMet

    pts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    stack = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    if rule.kind == "fixed-node-count":
        total = sum(_gl_panel(f, lo, hi) for lo, hi in stack)
        return total, float("nan")

    done_val = 0.0 + 0.0j
    done_err = 0.0
    refinements = 0
    work = [(lo, hi, _gl_panel(f, lo, hi)) for lo, hi in stack]
    while work:
        if refinements > rule.max_refinements:
            best = done_val + sum(w[2] for w in work)
            raise ToleranceNotMet(
                "refinement budget exhausted", best_estimate=best,
                error_estimate=done_err + sum(abs(w[2]) for w in work) * 0.1)
        lo, hi, coarse = work.pop()
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid)
        right = _gl_panel(f, mid, hi)
        fine = left + right
        err = abs(fine - coarse)
        scale = max(abs(done_val + fine), 1.0) if rule.rel_tol else 1.0
        # panel budget: proportional share of the global tolerance
        tol_here = max(rule.abs_tol, rule.rel_tol * scale) * (hi - lo) / (b - a)
        if err < tol_here or (hi - lo) < 1e-15 * (b - a):
            done_val += fine
            done_err += err
        else:
            refinements += 1
            work.append((lo, mid, left))
            work.append((mid, hi, right))
    return done_val, done_err


# ---------------------------------------------------------------------------
# Double-series integral test (sandwich of partial sums by shifted integrals)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleSeriesProbe:
    """Nonnegative double series a_{n,m} paired with its comparison integrand."""

    term: Callable[[int, int], float]
    integrand: Callable[[float, float], float]
    truncation: int = 64

    def __post_init__(self):
        if self.truncation < 4:
            raise DomainError("truncation must be at least 4")


def _check_monotone(probe: DoubleSeriesProbe):
    t = probe.term
    grid = [0, 1, 2, probe.truncation // 2, probe.truncation - 2]
    for n in grid:
        for m in grid:
            v = t(n, m)
            if v < 0:
                raise DomainError("term must be nonnegative")
            if t(n + 1, m) > v + 1e-15 or t(n, m + 1) > v + 1e-15:
                raise DomainError("term must be monotone non-increasing in each index")
            # sandwich consistency: a_{n+1,m+1} <= cell integral <= a_{n,m}
            cell = _cell_integral(probe.integrand, n, m)
            if not (t(n + 1, m + 1) <= cell + 1e-12 and cell <= v + 1e-12):
                raise DomainError("integrand does not sandwich the term on sampled cells")


def _cell_integral(g, n, m, k=4):
    # small fixed Gauss product rule on the unit cell [n,n+1]x[m,m+1]
    x, w = np.polynomial.legendre.leggauss(k)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    total = 0.0
    for xi, wi in zip(x, w):
        for yj, wj in zip(x, w):
            total += wi * wj * g(n + xi, m + yj)
    return total


def double_series_integral_test(probe: DoubleSeriesProbe) -> str:
    """Convergence verdict for a nonnegative monotone double series.

    The partial sums over dyadic shells are sandwiched by the shifted cell
    integrals of the comparison integrand; the verdict is 'converges' when
    the shell sums decay geometrically (finite tail bound), 'diverges' when
    they fail to decay, and 'undecided' otherwise.
    """
    _check_monotone(probe)
    t = probe.term
    T = probe.truncation

    def square_sum(size):
        return sum(t(n, m) for n in range(size) for m in range(size))

    sizes = [max(4, T // 8), max(8, T // 4), max(16, T // 2), T]
    sums = [square_sum(s) for s in sizes]
    shells = [sums[i + 1] - sums[i] for i in range(len(sums) - 1)]
    if all(s <= 1e-300 for s in shells):
        return "converges"
    ratios = []
    for i in range(len(shells) - 1):
        if shells[i] > 0:
            ratios.append(shells[i + 1] / shells[i])
    if ratios and max(ratios) < 0.95:
        return "converges"
    if ratios and min(ratios) > 0.999:
        return "diverges"
    if sums[-1] > 1e12:
        return "diverges"
    return "undecided"
