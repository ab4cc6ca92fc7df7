"""Disk-to-polygon conformal maps via the Cisotti integral representation,
a prevertex parameter solver, and the Lavrentiev near-circle map."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, ToleranceNotMet
from .series import QuadratureRule, adaptive_quad

_BOUNDARY_MARGIN = 1e-6


# ---------------------------------------------------------------------------
# Polygon bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonSpec:
    """A counterclockwise polygon with its boundary tangent-angle data.

    vertices[k] corresponds to prevertex prevertices[k]; the boundary arc
    (prevertices[k], prevertices[k+1]) maps onto the side from vertex k to
    vertex k+1.  exterior_increments[k] is the tangent angle psi_k held on
    that arc; it jumps by pi - alpha at each vertex.
    """

    vertices: tuple
    interior_angles: tuple = ()
    exterior_increments: tuple = ()
    prevertices: tuple | None = None

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        n = len(verts)
        if n < 3:
            raise DomainError("a polygon needs at least 3 vertices")
        area = sum((verts[k].real * verts[(k + 1) % n].imag
                    - verts[(k + 1) % n].real * verts[k].imag) for k in range(n))
        if area <= 0:
            raise DomainError("vertices must be listed counterclockwise")
        turns = []
        for k in range(n):
            before = verts[k] - verts[k - 1]
            after = verts[(k + 1) % n] - verts[k]
            turns.append(cmath.phase(after / before))
        alphas = tuple(math.pi - t for t in turns)
        if self.interior_angles:
            if len(self.interior_angles) != n:
                raise DomainError("angle count must match vertex count")
            if max(abs(a - b) for a, b in zip(alphas, self.interior_angles)) > 1e-9:
                raise DomainError("interior angles inconsistent with vertices")
        gauss = sum(a / math.pi - 1.0 for a in alphas)
        if abs(gauss + 2.0) > 1e-12:
            raise DomainError(f"angle sum violates the Gauss constraint ({gauss} != -2)")
        psi = [cmath.phase(verts[1] - verts[0])]
        for k in range(1, n):
            psi.append(psi[-1] + (math.pi - alphas[k]))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "interior_angles", alphas)
        object.__setattr__(self, "exterior_increments", tuple(psi))
        if self.prevertices is not None:
            th = tuple(float(t) for t in self.prevertices)
            if len(th) != n:
                raise DomainError("prevertex count must match vertex count")
            if any(b <= a for a, b in zip(th, th[1:])) or not 0.0 <= th[0] < 2 * math.pi \
                    or th[-1] >= 2 * math.pi:
                raise DomainError("prevertices must increase strictly within [0, 2*pi)")
            object.__setattr__(self, "prevertices", th)

    @property
    def turn_angles(self) -> tuple:
        """Exterior turns pi - alpha_k at each vertex (they sum to 2*pi)."""
        return tuple(math.pi - a for a in self.interior_angles)

    @property
    def side_lengths(self) -> tuple:
        n = len(self.vertices)
        return tuple(abs(self.vertices[(k + 1) % n] - self.vertices[k])
                     for k in range(n))

    @property
    def centroid(self) -> complex:
        return sum(self.vertices) / len(self.vertices)

    def with_prevertices(self, prevertices: Sequence[float]) -> "PolygonSpec":
        return PolygonSpec(self.vertices, prevertices=tuple(prevertices))


def step_angle_function(polygon: PolygonSpec) -> Callable:
    """The piecewise-constant boundary tangent angle v(theta).

    v equals psi_k on [prevertices[k], prevertices[k+1]) and wraps to
    psi_{n-1} - 2*pi ahead of the first prevertex; right-continuous, with
    jump pi - alpha_k at each prevertex.
    """
    if polygon.prevertices is None:
        raise DomainError("polygon carries no prevertices")
    th = np.asarray(polygon.prevertices)
    psi = np.asarray(polygon.exterior_increments)

    def v(theta):
        t = np.mod(np.asarray(theta, dtype=float), 2.0 * math.pi)
        idx = np.searchsorted(th, t, side="right") - 1
        out = np.where(idx >= 0, psi[np.maximum(idx, 0)], psi[-1] - 2.0 * math.pi)
        return out if out.shape else float(out)

    return v


# ---------------------------------------------------------------------------
# Schwarz integral
# ---------------------------------------------------------------------------

def schwarz_integral(boundary: Callable, z: complex,
                     rule: QuadratureRule | None = None,
                     breakpoints: Sequence[float] = ()) -> complex:
    """g(z) = (1/2 pi) int_0^{2 pi} v(t) (e^{it} + z)/(e^{it} - z) dt.

    Re g is the Poisson harmonic extension of v; Im g(0) = 0.
    """
    z = complex(z)
    if abs(z) > 1.0 - _BOUNDARY_MARGIN:
        raise DomainError("z must stay 1e-6 away from the unit circle; "
                          "use the closed-form derivative on the boundary")
    rule = rule or QuadratureRule()

    def integrand(t):
        t = np.asarray(t, dtype=float)
        e = np.exp(1j * t)
        return np.asarray(boundary(t), dtype=complex) * (e + z) / (e - z)

    pts = sorted(float(b) % (2.0 * math.pi) for b in breakpoints)
    val, _ = adaptive_quad(integrand, 0.0, 2.0 * math.pi, rule,
                           breakpoints=pts)
    return val / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# The Cisotti map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CisottiMap:
    """f(z) = base_value + prefactor * int_{z0}^{z} prod_k
    (1 - z' e^{-i theta_k})^{-(pi - alpha_k)/pi} dz'.

    The product is the exactly evaluated closed form of the derivative: the
    exponential of the Schwarz integral of the step function v divided by
    (1 - z)^2, with every prevertex (including theta_0) appearing
    symmetrically.  Each factor has positive real part on the disk, so the
    principal branch is single-valued there.
    """

    polygon: PolygonSpec
    base_point: complex = 0.0
    base_value: complex = 0.0
    prefactor: complex = 1.0
    rule: QuadratureRule = field(default_factory=QuadratureRule)

    def __post_init__(self):
        if self.polygon.prevertices is None:
            raise DomainError("CisottiMap needs prevertices")
        if abs(complex(self.base_point)) > 1.0 - _BOUNDARY_MARGIN:
            raise DomainError("base point must lie inside the disk")

    def _raw_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for th, beta in zip(self.polygon.prevertices, self._betas()):
            out = out * (1.0 - z * cmath.exp(-1j * th)) ** (-beta)
        return out

    def _betas(self) -> tuple:
        return tuple(t / math.pi for t in self.polygon.turn_angles)

    def derivative(self, z) -> complex:
        return self.prefactor * self._raw_derivative(z)

    def boundary_speed(self, theta) -> np.ndarray:
        """|f'(e^{i theta})| away from prevertices (corner singularities)."""
        theta = np.asarray(theta, dtype=float)
        return np.abs(self.prefactor) * np.abs(self._raw_derivative(np.exp(1j * theta)))

    def _regular_speed(self, theta: np.ndarray, skip: int) -> np.ndarray:
        """|raw f'| on the circle with the prevertex-`skip` factor removed.

        Uses |1 - e^{i phi}| = 2 |sin(phi/2)| for each remaining factor, which
        is stable arbitrarily close to the skipped corner.
        """
        out = np.ones_like(theta)
        for j, (th, beta) in enumerate(zip(self.polygon.prevertices, self._betas())):
            if j == skip:
                continue
            out = out * (2.0 * np.abs(np.sin(0.5 * (theta - th)))) ** (-beta)
        return out

    def raw_side_length(self, k: int) -> float:
        """Arc-length integral of |raw f'| over side k, with the corner
        singularities removed by the substitution t = u^{1/(1 - beta)}."""
        th = self.polygon.prevertices
        n = len(th)
        lo = th[k]
        hi = th[k + 1] if k + 1 < n else th[0] + 2.0 * math.pi
        betas = self._betas()
        mid = 0.5 * (lo + hi)

        total = 0.0
        for (a, b, idx, anchor, sign) in (
                (lo, mid, k, lo, 1.0), (mid, hi, (k + 1) % n, hi, -1.0)):
            beta = betas[idx]
            if beta <= 0.0:
                # reflex corner: the speed vanishes there, integrate directly
                def g0(theta, idx=idx, beta=beta, anchor=anchor):
                    theta = np.asarray(theta, dtype=float)
                    fac = (2.0 * np.abs(np.sin(0.5 * (theta - anchor)))) ** (-beta)
                    return fac * self._regular_speed(theta, idx)

                val, _ = adaptive_quad(g0, a, b, self.rule)
                total += complex(val).real
                continue
            # theta = anchor + sign * u^{1/(1-beta)}; the du-measure cancels
            # the |theta - anchor|^{-beta} corner blowup exactly, so the
            # anchor factor is folded in analytically (u^p underflows long
            # before the quadrature nodes reach zero).
            p = 1.0 / (1.0 - beta)
            umax = abs(b - a) ** (1.0 - beta)

            def g(u, beta=beta, idx=idx, anchor=anchor, sign=sign, p=p):
                u = np.asarray(u, dtype=float)
                phi = u ** p
                theta = anchor + sign * phi
                # (2 sin(phi/2) / phi)^{-beta} -> 1 as phi -> 0
                ratio = np.ones_like(u)
                mask = phi > 1e-12
                ratio[mask] = (2.0 * np.sin(0.5 * phi[mask]) / phi[mask]) ** (-beta)
                return p * ratio * self._regular_speed(theta, idx)

            val, _ = adaptive_quad(g, 0.0, umax, self.rule)
            total += complex(val).real
        return float(total)

    def raw_vertex_image(self, k: int) -> complex:
        """int of raw f' from 0 to e^{i theta_k} along the radius, with the
        endpoint singularity handled by the same substitution."""
        th = self.polygon.prevertices[k]
        beta = self._betas()[k]
        e = cmath.exp(1j * th)

        def inner(t):
            t = np.asarray(t, dtype=float)
            return self._raw_derivative(t * e) * e

        if beta <= 0.0:
            val, _ = adaptive_quad(inner, 0.0, 1.0, self.rule)
            return complex(val)
        part1, _ = adaptive_quad(inner, 0.0, 0.5, self.rule)
        p = 1.0 / (1.0 - beta)
        umax = 0.5 ** (1.0 - beta)
        others = [(t, b) for j, (t, b) in
                  enumerate(zip(self.polygon.prevertices, self._betas())) if j != k]

        def outer(u):
            # along the radius 1 - rho = u^p, so the anchor factor
            # (1 - rho)^{-beta} cancels the substitution measure exactly
            u = np.asarray(u, dtype=float)
            rho = 1.0 - u ** p
            rest = np.ones_like(u, dtype=complex)
            for t, b in others:
                rest = rest * (1.0 - rho * cmath.exp(1j * (th - t))) ** (-b)
            return p * rest * e

        part2, _ = adaptive_quad(outer, 0.0, umax, self.rule)
        return complex(part1 + part2)

    def vertex_images(self) -> list[complex]:
        z0 = complex(self.base_point)
        base_shift = self._segment_integral(0.0, z0) if z0 != 0 else 0.0
        return [complex(self.base_value)
                + self.prefactor * (self.raw_vertex_image(k) - base_shift)
                for k in range(len(self.polygon.vertices))]

    def _segment_integral(self, a: complex, b: complex) -> complex:
        if a == b:
            return 0.0 + 0.0j

        def g(t):
            t = np.asarray(t, dtype=float)
            return self._raw_derivative(a + (b - a) * t) * (b - a)

        val, _ = adaptive_quad(g, 0.0, 1.0, self.rule)
        return val

    def __call__(self, z) -> complex:
        return cisotti_eval(self, z)


def cisotti_eval(cmap: CisottiMap, z: complex) -> complex:
    """Path integral of the closed-form derivative from the base point.

    Straight segment by default; if the chord grazes the unit circle the
    path is rerouted through the origin (analyticity makes the value
    path-independent).
    """
    z = complex(z)
    if abs(z) > 1.0 - _BOUNDARY_MARGIN:
        raise DomainError("z must stay 1e-6 away from the unit circle")
    z0 = complex(cmap.base_point)
    t = np.linspace(0.0, 1.0, 65)
    chord_max = np.max(np.abs(z0 + (z - z0) * t))
    if 1.0 - chord_max < _BOUNDARY_MARGIN:
        raw = cmap._segment_integral(z0, 0.0) + cmap._segment_integral(0.0, z)
    else:
        raw = cmap._segment_integral(z0, z)
    return complex(cmap.base_value) + cmap.prefactor * raw


def cisotti_derivative(cmap: CisottiMap, r: float, theta: float) -> complex:
    """Closed-form f'(r e^{i theta}); singular only at r = 1 on a prevertex."""
    if r >= 1.0:
        raise DomainError("derivative defined for r < 1")
    return complex(cmap.derivative(r * cmath.exp(1j * theta)))


def build_map(polygon: PolygonSpec,
              rule: QuadratureRule | None = None) -> CisottiMap:
    """Normalized map: f(0) = polygon centroid, arg f'(0) = 0, scale chosen
    so the first image side length matches the target."""
    rule = rule or QuadratureRule()
    raw = CisottiMap(polygon, 0.0, 0.0, 1.0, rule)
    scale = polygon.side_lengths[0] / raw.raw_side_length(0)
    return CisottiMap(polygon, 0.0, polygon.centroid, scale, rule)


def side_ratio_residuals(polygon: PolygonSpec,
                         rule: QuadratureRule | None = None) -> np.ndarray:
    """Image side-length ratios minus target ratios (all against side 0)."""
    cmap = CisottiMap(polygon, 0.0, 0.0, 1.0, rule or QuadratureRule())
    n = len(polygon.vertices)
    lengths = np.array([cmap.raw_side_length(k) for k in range(n)])
    target = np.asarray(polygon.side_lengths)
    return lengths[1:] / lengths[0] - target[1:] / target[0]


def solve_prevertices(vertices: Sequence[complex],
                      initial_guess: Sequence[float] | None = None,
                      tol: float = 1e-8, max_iter: int = 60,
                      rule: QuadratureRule | None = None) -> PolygonSpec:
    """Prevertex parameter problem by damped Newton iteration.

    theta_0 = 0 is fixed; the free unknowns are log gap sizes (which keeps
    the ordering automatic), and the residuals are image-vs-target
    side-length ratios.  Quadrature of |f'| supplies the side lengths.
    """
    poly = PolygonSpec(tuple(complex(v) for v in vertices))
    n = len(poly.vertices)
    rule = rule or QuadratureRule(abs_tol=1e-11, rel_tol=1e-11)

    if initial_guess is not None:
        th = [float(t) for t in initial_guess]
        gaps = np.diff(th + [th[0] + 2.0 * math.pi])
    else:
        gaps = np.full(n, 2.0 * math.pi / n)
    x = np.log(gaps[1:] / gaps[0])  # n-1 free log-ratio variables

    def unpack(x):
        w = np.concatenate([[1.0], np.exp(np.clip(x, -12.0, 12.0))])
        gaps = 2.0 * math.pi * w / np.sum(w)
        th = np.concatenate([[0.0], np.cumsum(gaps[:-1])])
        return tuple(th)

    def residual(x):
        # crowded exploratory configurations can defeat the quadrature;
        # report them as unusable rather than aborting the whole solve
        try:
            return side_ratio_residuals(poly.with_prevertices(unpack(x)), rule)
        except ToleranceNotMet:
            return None

    r = residual(x)
    if r is None:
        raise ConvergenceError("side-length quadrature failed at the initial guess",
                               best=unpack(x), residual=math.inf)
    best = (np.linalg.norm(r), x.copy())
    for _ in range(max_iter):
        norm = np.linalg.norm(r)
        if norm < tol:
            return poly.with_prevertices(unpack(x))
        jac = np.empty((n - 1, n - 1))
        h = 1e-6
        singular = False
        for j in range(n - 1):
            xp = x.copy()
            xp[j] += h
            rp = residual(xp)
            if rp is None:
                singular = True
                break
            jac[:, j] = (rp - r) / h
        if singular:
            break
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        lam = 1.0
        while lam > 1e-6:
            xn = x + lam * step
            rn = residual(xn)
            if rn is not None and np.linalg.norm(rn) < norm:
                x, r = xn, rn
                break
            lam /= 2.0
        else:
            break
        if np.linalg.norm(r) < best[0]:
            best = (np.linalg.norm(r), x.copy())
    if best[0] < tol:
        return poly.with_prevertices(unpack(best[1]))
    raise ConvergenceError("prevertex iteration stalled",
                           best=unpack(best[1]), residual=best[0])


# ---------------------------------------------------------------------------
# Lavrentiev near-circle map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPerturbation:
    """Radial boundary perturbation r(t) = 1 + epsilon * sigma(t), with sigma
    stored through its Fourier coefficients A_n, |n| <= N."""

    epsilon: float
    sigma_coeffs: dict  # n -> A_n, sigma(t) = sum A_n e^{i n t}

    def __post_init__(self):
        peak = sum(abs(c) for c in self.sigma_coeffs.values())
        if self.epsilon * peak > 0.1:
            warnings.warn("epsilon * max|sigma| above 0.1: first-order map "
                          "is unreliable", stacklevel=2)

    @classmethod
    def from_function(cls, sigma: Callable, epsilon: float,
                      n_modes: int = 32) -> "BoundaryPerturbation":
        k = 8 * n_modes
        t = 2.0 * math.pi * np.arange(k) / k
        spec = np.fft.fft(np.asarray(sigma(t), dtype=complex)) / k
        coeffs = {}
        for n in range(-n_modes, n_modes + 1):
            c = spec[n % k]
            if abs(c) > 1e-14:
                coeffs[n] = complex(c)
        return cls(epsilon, coeffs)

    def sigma(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t, dtype=complex)
        for n, c in self.sigma_coeffs.items():
            out = out + c * np.exp(1j * n * t)
        return out.real


def lavrentiev_map(p: BoundaryPerturbation, z) -> complex:
    """First-order near-circle map omega(z) = z (1 + epsilon S[sigma](z)).

    The Schwarz integral of sigma collapses to A_0 + 2 sum_{n>=1} A_n z^n,
    so the map is a short polynomial; the boundary image has radial
    deviation O(epsilon^2) from 1 + epsilon sigma.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("|z| must not exceed 1")
    s = np.full_like(z, complex(p.sigma_coeffs.get(0, 0.0)))
    for n, c in p.sigma_coeffs.items():
        if n >= 1:
            s = s + 2.0 * c * z ** n
    out = z * (1.0 + p.epsilon * s)
    return out if out.shape else complex(out)
