"""Fourier analysis on a period: coefficients, Dirichlet/Fejer summation,
Chebyshev approximation, the Weierstrass pathological function, the periodic
RLC solver and the Wiener-algebra kernel equation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError
from .series import QuadratureRule, adaptive_quad

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FourierCoeffs:
    """Trigonometric coefficient table  a0/2 + sum a_n cos + b_n sin."""

    a0: float
    a: tuple
    b: tuple
    period: float = TWO_PI

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise DomainError("a and b lists must have equal length")
        if self.period <= 0:
            raise DomainError("period must be positive")
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))

    @property
    def order(self) -> int:
        return len(self.a)

    def complex_view(self) -> np.ndarray:
        """c_{-N}..c_N with c_n = (a_n - i b_n)/2, c_0 = a0/2."""
        n = self.order
        c = np.zeros(2 * n + 1, dtype=complex)
        c[n] = self.a0 / 2.0
        for k in range(1, n + 1):
            c[n + k] = (self.a[k - 1] - 1j * self.b[k - 1]) / 2.0
            c[n - k] = (self.a[k - 1] + 1j * self.b[k - 1]) / 2.0
        return c


@dataclass(frozen=True)
class SampledFunction:
    evaluator: Callable
    jump_points: tuple = ()          # (location, jump magnitude) pairs
    smoothness_tag: str = "continuous-only"
    period: float = TWO_PI

    def __post_init__(self):
        if self.smoothness_tag not in ("C1", "piecewise-C1", "continuous-only"):
            raise DomainError(f"unknown smoothness tag {self.smoothness_tag!r}")
        jp = tuple(sorted((float(loc), float(j)) for loc, j in self.jump_points))
        half = self.period / 2.0
        for loc, _ in jp:
            if not -half <= loc <= half:
                raise DomainError("jump point outside the period")
        object.__setattr__(self, "jump_points", jp)

    def __call__(self, x):
        return self.evaluator(x)


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

def dirichlet_kernel(n: int, x):
    """D_n(x) = sin((n + 1/2) x) / sin(x/2), the value 2n+1 at x = 0."""
    x = np.asarray(x, dtype=float)
    s = np.sin(x / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(np.abs(s) < 1e-9,
                       2.0 * n + 1.0,
                       np.sin((n + 0.5) * x) / np.where(np.abs(s) < 1e-9, 1.0, s))
    return val if val.shape else float(val)


def fejer_kernel(n: int, x):
    """K_n(x) = (1/(n+1)) (1 - cos((n+1)x)) / (1 - cos x), nonnegative,
    with (1/2pi) integral K_n = 1."""
    x = np.asarray(x, dtype=float)
    denom = 1.0 - np.cos(x)
    small = np.abs(denom) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(small, float(n + 1),
                       (1.0 - np.cos((n + 1.0) * x)) / ((n + 1.0) * np.where(small, 1.0, denom)))
    return val if val.shape else float(val)


@dataclass(frozen=True)
class TrigKernel:
    order: int
    kind: str = "fejer"

    def __post_init__(self):
        if self.kind not in ("dirichlet", "fejer"):
            raise DomainError("kernel kind must be 'dirichlet' or 'fejer'")
        if self.order < 0:
            raise DomainError("kernel order must be nonnegative")

    def __call__(self, x):
        if self.kind == "dirichlet":
            return dirichlet_kernel(self.order, x)
        return fejer_kernel(self.order, x)


# ---------------------------------------------------------------------------
# Coefficients and summation
# ---------------------------------------------------------------------------

def _pullback(f: SampledFunction):
    """Rescale a period-T function to the internal 2*pi convention."""
    scale = f.period / TWO_PI
    g = lambda th: np.asarray(f.evaluator(np.asarray(th) * scale), dtype=float)
    breaks = [loc / scale for loc, _ in f.jump_points]
    return g, breaks


def fourier_coefficients(f: SampledFunction, order: int,
                         rule: QuadratureRule | None = None) -> FourierCoeffs:
    """a_n, b_n by adaptive quadrature; panels never straddle a jump."""
    rule = rule or QuadratureRule(abs_tol=1e-12, rel_tol=1e-12)
    g, breaks = _pullback(f)
    a0, _ = adaptive_quad(g, -math.pi, math.pi, rule, breakpoints=breaks)
    a0 = a0.real / math.pi
    a, b = [], []
    for n in range(1, order + 1):
        va, _ = adaptive_quad(lambda t: g(t) * np.cos(n * t), -math.pi, math.pi,
                              rule, breakpoints=breaks)
        vb, _ = adaptive_quad(lambda t: g(t) * np.sin(n * t), -math.pi, math.pi,
                              rule, breakpoints=breaks)
        a.append(va.real / math.pi)
        b.append(vb.real / math.pi)
    return FourierCoeffs(a0, a, b, period=f.period)


def partial_sum(c: FourierCoeffs, n: int, x):
    if n > c.order:
        raise DomainError("partial sum order exceeds stored coefficients")
    th = np.asarray(x, dtype=float) * (TWO_PI / c.period)
    total = c.a0 / 2.0 + sum(c.a[k - 1] * np.cos(k * th) + c.b[k - 1] * np.sin(k * th)
                             for k in range(1, n + 1))
    return total


def dirichlet_form(f: SampledFunction, n: int, x: float,
                   rule: QuadratureRule | None = None) -> float:
    """S_n via the Dirichlet integral
    (1/2pi) int_0^pi D_n(t) [f(x+t) + f(x-t)] dt."""
    rule = rule or QuadratureRule(abs_tol=1e-11, rel_tol=1e-11)
    g, breaks = _pullback(f)
    th = float(x) * (TWO_PI / f.period)

    def wrap(t):
        return np.mod(t + math.pi, TWO_PI) - math.pi

    def integrand(t):
        return dirichlet_kernel(n, t) * (g(wrap(th + t)) + g(wrap(th - t)))

    bp = sorted({wrap(b - th) for b in breaks} | {wrap(th - b) for b in breaks})
    bp = [abs(p) for p in bp if 0 < abs(p) < math.pi]
    val, _ = adaptive_quad(integrand, 0.0, math.pi, rule, breakpoints=bp)
    return val.real / TWO_PI


def cesaro_sum(c: FourierCoeffs, n: int, x):
    """Cesaro weighted sum: a0/2 unweighted, harmonics weighted (n-k)/n."""
    if n < 1 or n - 1 > c.order:
        raise DomainError("Cesaro order out of range for stored coefficients")
    th = np.asarray(x, dtype=float) * (TWO_PI / c.period)
    total = c.a0 / 2.0 + sum(((n - k) / n) * (c.a[k - 1] * np.cos(k * th)
                                              + c.b[k - 1] * np.sin(k * th))
                             for k in range(1, n))
    return total


def fejer_form(f: SampledFunction, n: int, x: float,
               rule: QuadratureRule | None = None) -> float:
    """sigma_n via the kernel integral (1/2pi) int K_{n-1}(t) f(x-t) dt."""
    rule = rule or QuadratureRule(abs_tol=1e-11, rel_tol=1e-11)
    g, breaks = _pullback(f)
    th = float(x) * (TWO_PI / f.period)

    def wrap(t):
        return np.mod(t + math.pi, TWO_PI) - math.pi

    def integrand(t):
        return fejer_kernel(n - 1, t) * g(wrap(th - t))

    bp = [p for p in (wrap(th - b) for b in breaks) if -math.pi < p < math.pi]
    val, _ = adaptive_quad(integrand, -math.pi, math.pi, rule, breakpoints=sorted(bp))
    return val.real / TWO_PI


def fejer_recover(c: FourierCoeffs, grid) -> np.ndarray:
    """Evaluate the Cesaro mean at the stored order on a grid; canonical
    coefficients -> function inverse used after the kernel equation."""
    return np.asarray(cesaro_sum(c, max(c.order, 1), np.asarray(grid, dtype=float)))


# ---------------------------------------------------------------------------
# Chebyshev approximation on [-1, 1]
# ---------------------------------------------------------------------------

def chebyshev_t_coeffs(n: int) -> list[int]:
    """Monomial coefficients of T_n by the recurrence T_{n+1} = 2x T_n - T_{n-1}."""
    if n == 0:
        return [1]
    prev, cur = [1], [0, 1]
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True)
class ChebyshevApprox:
    cheb: tuple        # c_0 ... c_N with f ~ c_0/2 + sum c_n T_n
    monomial: tuple    # B_0 ... B_N of the same partial sum

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.monomial):
            acc = acc * x + c
        return acc if acc.shape else float(acc)


def chebyshev_approx(f: Callable, order: int,
                     rule: QuadratureRule | None = None) -> ChebyshevApprox:
    """Chebyshev coefficients via the cos-substituted weight integrals
    c_n = (2/pi) int_0^pi f(cos t) cos(n t) dt."""
    rule = rule or QuadratureRule(abs_tol=1e-12, rel_tol=1e-12)
    cheb = []
    for n in range(order + 1):
        val, _ = adaptive_quad(lambda t: np.asarray(f(np.cos(t))) * np.cos(n * t),
                               0.0, math.pi, rule)
        cheb.append(2.0 * val.real / math.pi)
    mono = [0.0] * (order + 1)
    mono[0] = cheb[0] / 2.0
    for n in range(1, order + 1):
        for k, c in enumerate(chebyshev_t_coeffs(n)):
            mono[k] += cheb[n] * c
    return ChebyshevApprox(tuple(cheb), tuple(mono))


# ---------------------------------------------------------------------------
# Weierstrass non-differentiable function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeierstrassParams:
    a: int
    b: float

    def __post_init__(self):
        if self.a < 1 or self.a % 2 == 0:
            raise DomainError("a must be an odd positive integer")
        if not 0.0 < self.b < 1.0:
            raise DomainError("b must lie in (0, 1)")
        if not self.a * self.b > 1.0 + 1.5 * math.pi:
            raise DomainError("need a*b > 1 + 3*pi/2")


def _weierstrass_terms(p: WeierstrassParams, requested: int | None) -> int:
    if requested is not None:
        return requested
    # geometric tail: b^{M+1}/(1-b) < 1e-14
    return int(math.ceil(math.log(1e-14 * (1.0 - p.b)) / math.log(p.b))) + 1


def weierstrass_eval(p: WeierstrassParams, x, terms: int | None = None) -> float:
    """sum b^n cos(a^n pi x), truncated at the geometric 1e-14 tail.

    a^n overflows the double mantissa almost immediately, so the cosine
    argument is reduced mod 2 in exact rational arithmetic before evaluating.
    """
    m = _weierstrass_terms(p, terms)
    xf = x if isinstance(x, Fraction) else Fraction(float(x))
    total = 0.0
    an = 1
    bn = 1.0
    for _ in range(m):
        arg = (an * xf) % 2
        total += bn * math.cos(math.pi * float(arg))
        an *= p.a
        bn *= p.b
    return total


def weierstrass_quotient_probe(p: WeierstrassParams, x: float, m: int) -> float:
    """|f(x+h) - f(x)| / h for h = (1 - xi_m)/a^m, where a^m x = alpha_m + xi_m
    with xi_m in [-1/2, 1/2)."""
    xf = Fraction(float(x))
    am = p.a ** m
    alpha = math.floor(am * xf + Fraction(1, 2))   # xi in [-1/2, 1/2)
    xi = am * xf - alpha
    h = (1 - xi) / am
    return abs(weierstrass_eval(p, xf + h) - weierstrass_eval(p, xf)) / float(h)


def weierstrass_lower_bound(p: WeierstrassParams, m: int) -> float:
    return (2.0 / 3.0 - math.pi / (p.a * p.b - 1.0)) * (p.a * p.b) ** m


# ---------------------------------------------------------------------------
# Periodic RLC solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircuitParams:
    R: float
    L: float
    C: float            # capacitance; math.inf means no capacitor term
    source: FourierCoeffs

    def __post_init__(self):
        if self.R < 0 or self.L < 0 or self.C <= 0:
            raise DomainError("R, L must be nonnegative and C positive")


@dataclass(frozen=True)
class RlcSolution:
    current: FourierCoeffs
    mean_constraint_residual: float   # E0/2 - (1/C) sum b_n(I)/n


def rlc_solve(params: CircuitParams, order: int) -> RlcSolution:
    """Harmonic-by-harmonic 2x2 solve of
    R a_n + (nL - 1/(nC)) b_n = a_n(E),  R b_n - (nL - 1/(nC)) a_n = b_n(E)."""
    e = params.source
    if order > e.order:
        raise DomainError("source coefficients shorter than requested order")
    inv_c = 0.0 if math.isinf(params.C) else 1.0 / params.C
    a_out, b_out = [], []
    for n in range(1, order + 1):
        x = n * params.L - inv_c / n
        det = params.R ** 2 + x ** 2
        if det < 1e-300:
            raise DomainError(f"exact resonance at harmonic n={n} with R=0")
        ae, be = e.a[n - 1], e.b[n - 1]
        a_out.append((params.R * ae - x * be) / det)
        b_out.append((x * ae + params.R * be) / det)
    residual = e.a0 / 2.0 - inv_c * sum(b_out[n - 1] / n for n in range(1, order + 1))
    current = FourierCoeffs(0.0, a_out, b_out, period=e.period)
    return RlcSolution(current, residual)


# ---------------------------------------------------------------------------
# Wiener-algebra kernel integral equation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSystem:
    """Truncated system  sum_m g_{nm} f_m = h_n  for |n|, |m| <= N."""

    g: np.ndarray      # (2N+1, 2N+1)
    h: np.ndarray      # (2N+1,)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        h = np.asarray(self.h, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] != h.size \
                or g.shape[0] % 2 != 1:
            raise DomainError("g must be square of odd size matching h")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)

    @property
    def contraction_norm(self) -> float:
        eye = np.eye(self.g.shape[0])
        return float(np.max(np.sum(np.abs(eye - self.g), axis=1)))


def kernel_equation_solve(sys: KernelSystem, max_iter: int = 500,
                          tol: float = 1e-12) -> np.ndarray:
    """Picard iteration  f <- h + (I - g) f  from f0 = h.

    Requires the contraction norm sup_n sum_m |delta_{nm} - g_{nm}| < 1 (the
    reading under which the iteration actually contracts)."""
    q = sys.contraction_norm
    if q >= 1.0:
        raise DomainError(f"contraction norm {q:.3f} >= 1; iteration would not converge")
    eye = np.eye(sys.g.shape[0])
    k = eye - sys.g
    f = sys.h.copy()
    for _ in range(max_iter):
        nxt = sys.h + k @ f
        if np.max(np.abs(nxt - f)) < tol:
            f = nxt
            break
        f = nxt
    else:
        raise ConvergenceError("Picard iteration budget exhausted", best=f,
                               residual=float(np.max(np.abs(sys.g @ f - sys.h))))
    return f
