"""End-to-end acceptance suite.

Each test covers one release criterion at its stated tolerance and runtime
budget and emits a single PASS/FAIL line on the terminal.
"""

import math
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from holonum.complexkit import (RationalFunction, count_zeros,
                                laurent_coefficients, rational_exp_sum,
                                residue_at_pole)
from holonum.conformal import (BoundaryPerturbation, PolygonSpec, build_map,
                               lavrentiev_map, side_ratio_residuals,
                               solve_prevertices)
from holonum.contours import ContourPath
from holonum.errors import DomainError
from holonum.fourier import (FourierCoeffs, SampledFunction, cesaro_sum,
                             fejer_kernel, fourier_coefficients, partial_sum,
                             weierstrass_eval, weierstrass_lower_bound,
                             weierstrass_quotient_probe, WeierstrassParams)
from holonum.ode import OdeCoefficients, frobenius_residual, solve_frobenius
from holonum.series import PowerSeries, series_inverse
from holonum.specialfun import legendre
from holonum.zeta import (bhat_table, critical_line_zero_scan, xi,
                          xi_coefficients, zeta)

SEED = 20260823


@contextmanager
def criterion(number: int, label: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"criterion {number:2d} ({label}): FAIL", file=sys.__stdout__,
              flush=True)
        raise
    elapsed = time.perf_counter() - start
    status = "PASS" if elapsed < budget_s else "FAIL (over time budget)"
    print(f"criterion {number:2d} ({label}): {status} in {elapsed:.2f}s "
          f"(budget {budget_s:g}s)", file=sys.__stdout__, flush=True)
    assert elapsed < budget_s, f"runtime {elapsed:.2f}s over budget {budget_s}s"


def test_criterion_01_frobenius_golden():
    with criterion(1, "Frobenius golden test", 1.0):
        coeffs = OdeCoefficients(PowerSeries([-3.0]).pad(8),
                                 PowerSeries([0.0, 0.0, 1.0]).pad(8))
        sol = solve_frobenius(coeffs, 8)
        roots = sorted(complex(r).real for r in sol.indicial_roots)
        assert roots == pytest.approx([0.0, 4.0], abs=1e-12)
        assert abs(complex(sol.primary[4]).real - (-1.0 / 16.0)) < 1e-12
        assert abs(complex(sol.primary[6]).real - (1.0 / 192.0)) < 1e-12


def test_criterion_02_poisson_fourier():
    with criterion(2, "Poisson-kernel Fourier test", 1.0):
        a = 0.5
        f = SampledFunction(
            lambda x: a * np.sin(np.asarray(x))
            / (1.0 - 2.0 * a * np.cos(np.asarray(x)) + a * a),
            smoothness_tag="C1")
        c = fourier_coefficients(f, 12)
        for n in range(1, 13):
            assert abs(c.b[n - 1] - a ** n) < 1e-10
            assert abs(c.a[n - 1]) < 1e-10


def test_criterion_03_residue_summation():
    with criterion(3, "residue summation", 10.0):
        R = RationalFunction((1.0,), (1.0, 0.0, 1.0))
        results = {x: rational_exp_sum(R, x, direct_limit=10 ** 6)
                   for x in (0.0, 0.7)}
        for x, res in results.items():
            assert res.discrepancy < 1e-5
        coth = math.pi / math.tanh(math.pi)
        assert abs(complex(results[0.0].residue_form).real - coth) < 1e-8
        assert "sign" in results[0.0].printed_example_sign_note


def test_criterion_04_fejer_parseval():
    with criterion(4, "Fejer/Parseval suite", 5.0):
        # kernel positivity and exact normalization (periodic trapezoid is
        # exact for trig polynomials)
        for n in (16, 64, 256):
            m = 8 * (n + 2)
            x = -math.pi + 2.0 * math.pi * np.arange(m) / m
            vals = fejer_kernel(n, x)
            assert np.min(vals) >= 0.0
            assert abs(np.mean(vals) - 1.0) < 1e-10
        # f = |x|: numerically verify the leading coefficients, then extend
        # with the closed form a_n = -4/(pi n^2) (n odd) up to N = 256
        sampled = SampledFunction(
            lambda x: np.abs(np.mod(np.asarray(x, dtype=float) + math.pi,
                                    2.0 * math.pi) - math.pi),
            smoothness_tag="continuous-only")
        numeric = fourier_coefficients(sampled, 12)
        exact_a = [(-4.0 / (math.pi * n * n)) if n % 2 else 0.0
                   for n in range(1, 257)]
        assert abs(numeric.a0 - math.pi) < 1e-10
        for n in range(1, 13):
            assert abs(numeric.a[n - 1] - exact_a[n - 1]) < 1e-10
        abs_coeffs = FourierCoeffs(math.pi, tuple(exact_a), (0.0,) * 256)
        err = {n: abs(float(cesaro_sum(abs_coeffs, n, 0.0)))
               for n in (16, 256)}
        assert err[256] < 0.05
        assert err[256] < err[16]
        # square wave: L2 error of the partial sums decreases with N
        grid = np.linspace(-math.pi, math.pi, 4096, endpoint=False)
        target = np.sign(grid)
        sq_b = [(4.0 / (math.pi * n)) if n % 2 else 0.0 for n in range(1, 257)]
        sq = FourierCoeffs(0.0, (0.0,) * 256, tuple(sq_b))
        l2 = []
        for n in (4, 16, 64, 256):
            diff = partial_sum(sq, n, grid) - target
            l2.append(math.sqrt(float(np.mean(diff ** 2))))
        assert all(b < a for a, b in zip(l2, l2[1:]))


def test_criterion_05_weierstrass_probe():
    with criterion(5, "Weierstrass probe", 1.0):
        p = WeierstrassParams(9, 0.9)
        for m in range(1, 7):
            q = weierstrass_quotient_probe(p, 0.3, m)
            assert abs(q) > weierstrass_lower_bound(p, m)


def test_criterion_06_conformal_suite():
    with criterion(6, "conformal suite", 30.0):
        poly = PolygonSpec((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j),
                           prevertices=(0.0, 0.5 * math.pi, math.pi,
                                        1.5 * math.pi))
        gauss = sum(a / math.pi - 1.0 for a in poly.interior_angles)
        assert gauss == pytest.approx(-2.0, abs=1e-12)
        cmap = build_map(poly)
        images = cmap.vertex_images()
        sides = [abs(images[(k + 1) % 4] - images[k]) for k in range(4)]
        for s in sides[1:]:
            assert abs(s / sides[0] - 1.0) < 1e-5
        # closed-form derivative vs central differences at 20 seeded points
        rng = np.random.default_rng(SEED)
        pts = (rng.uniform(0.05, 0.85, 20)
               * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, 20)))
        h = 1e-6
        for z in pts:
            z = complex(z)
            fd = (cmap(z + h) - cmap(z - h)) / (2.0 * h)
            assert abs(fd - cmap.derivative(z)) < 1e-6
        # winding of the near-boundary image curve about the centroid
        path = ContourPath.circle(0.0, 1.0 - 1e-3)
        f = lambda z: np.array([complex(cmap(complex(w)))
                                for w in np.atleast_1d(z)])
        assert count_zeros(f, path, min_samples=256) == 1
        # prevertex solver on the 2:1 rectangle
        rect = solve_prevertices((2 + 1j, -2 + 1j, -2 - 1j, 2 - 1j))
        assert np.max(np.abs(side_ratio_residuals(rect))) < 1e-6


def test_criterion_07_lavrentiev():
    with criterion(7, "Lavrentiev near-circle map", 2.0):
        eps = 0.01
        p = BoundaryPerturbation.from_function(np.cos, eps)
        t = np.linspace(0.0, 2.0 * math.pi, 1441)
        w = lavrentiev_map(p, np.exp(1j * t))
        dev = np.abs(w) - (1.0 + eps * np.cos(np.angle(w)))
        assert np.max(np.abs(dev)) <= 5e-4


def test_criterion_08_zeta_core():
    with criterion(8, "zeta core", 5.0):
        assert abs(zeta(2.0) - math.pi ** 2 / 6.0) < 1e-10
        rng = np.random.default_rng(SEED)
        from scipy.special import loggamma
        worst_fe = 0.0
        for x, y in zip(rng.uniform(0.5, 0.99, 50), rng.uniform(-10, 10, 50)):
            s = complex(x, y)
            w = 1.0 - s
            rhs = (np.exp(s * math.log(2.0) + (s - 1) * math.log(math.pi)
                          + loggamma(w))
                   * np.sin(math.pi * s / 2.0) * zeta(w))
            worst_fe = max(worst_fe,
                           abs(zeta(s) - rhs) / max(1.0, abs(zeta(s))))
        assert worst_fe < 1e-8
        worst_sym = 0.0
        for x, y in zip(rng.uniform(-2.0, 3.0, 50), rng.uniform(-8, 8, 50)):
            z = complex(x, y)
            if min(abs(z - 1.0), abs(z)) < 0.05:
                z += 0.1
            worst_sym = max(worst_sym, abs(xi(z) - xi(1.0 - z)))
        assert worst_sym < 1e-9


def test_criterion_09_xi_coefficient_experiment():
    with criterion(9, "xi-coefficient experiment", 60.0):
        xs = xi_coefficients(24)
        for n in range(21):
            assert xs.a[n] > 0.0
        assert abs(xs.a[0] - xi(0.5).real) < 1e-8
        b_grid = [0.5 * k for k in range(21)]   # 0 .. 10
        table = bhat_table(xs, b_grid, 5)
        for m in range(6):
            assert table.values[m][0] == xs.a[m]   # exact at b = 0
        for i, b in enumerate(b_grid):
            assert abs(table.values[0][i] - xi(complex(0.5, b)).real) < 1e-7
        brackets = critical_line_zero_scan(14.0, 14.3, 0.05)
        assert len(brackets) == 1
        mid = 0.5 * (brackets[0][0] + brackets[0][1])
        assert 14.12 <= mid <= 14.15


def test_criterion_10_property_suite_spot_checks():
    with criterion(10, "property suites", 30.0):
        rng = np.random.default_rng(SEED)
        # series inverse round-trip
        for _ in range(20):
            c = rng.uniform(-1.0, 1.0, 9)
            c[0] = c[0] + np.sign(c[0]) + (c[0] == 0)
            p = PowerSeries(list(c))
            prod = p * series_inverse(p)
            assert abs(complex(prod[0]) - 1.0) < 1e-10
            assert max(abs(complex(prod[k])) for k in range(1, 9)) < 1e-9
        # Laurent reconstruction and residue closure
        f = lambda z: np.exp(z) / (z * (2.0 - z))
        exp = laurent_coefficients(f, 0.0, 1.0, 3, 28)
        for z in (0.7, 0.5j, -0.6 + 0.3j):
            assert abs(complex(exp(z)) - complex(f(z))) < 1e-8
        res0 = residue_at_pole(f, 0.0)
        res2 = residue_at_pole(f, 2.0)
        circ = ContourPath.circle(1.0, 2.0)
        from holonum.contours import integrate_contour
        total = integrate_contour(f, circ).value / (2j * math.pi)
        assert abs(total - (res0 + res2)) < 1e-9
        # argument principle vs root oracle
        coeffs = [1.0, 0.0, -2.0, 1.0]        # descending: z^3 - 2z + 1
        roots = np.roots(coeffs)
        g = lambda z: np.polyval(coeffs, z)
        inside = int(np.sum(np.abs(roots) < 1.3))
        assert count_zeros(g, ContourPath.circle(0.0, 1.3)) == inside
        # Legendre orthogonality spot check
        from holonum.series import QuadratureRule, adaptive_quad
        rule = QuadratureRule(abs_tol=1e-13, rel_tol=1e-13)
        p3, p5 = legendre(3), legendre(5)
        v, _ = adaptive_quad(lambda x: (p3(x) * p5(x)).real, -1.0, 1.0, rule)
        assert abs(v) < 1e-10
        v, _ = adaptive_quad(lambda x: (p3(x) * p3(x)).real, -1.0, 1.0, rule)
        assert abs(v - 2.0 / 7.0) < 1e-10
        # ODE residual check
        coeffs_ode = OdeCoefficients(PowerSeries([1.0]).pad(8),
                                     PowerSeries([0.0, 1.0]).pad(8))
        sol = solve_frobenius(coeffs_ode, 8)
        assert frobenius_residual(coeffs_ode, sol.primary,
                                  sol.primary_exponent) < 1e-12
        # zeta reflection symmetry
        for t in (0.0, 2.5, 6.0):
            z = complex(0.3, t)
            assert abs(xi(z) - xi(1.0 - z)) < 1e-9
