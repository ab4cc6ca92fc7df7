"""Cisotti disk-to-polygon map, prevertex solver, Lavrentiev map."""

import cmath
import math

import numpy as np
import pytest

from holonum.conformal import (BoundaryPerturbation, CisottiMap, PolygonSpec,
                               build_map, cisotti_derivative, cisotti_eval,
                               lavrentiev_map, schwarz_integral,
                               side_ratio_residuals, solve_prevertices,
                               step_angle_function)
from holonum.complexkit import count_zeros
from holonum.contours import ContourPath
from holonum.errors import DomainError
from holonum.series import QuadratureRule

RNG = np.random.default_rng(20260823)

SQUARE_VERTS = (1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j)
SQUARE_PREV = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


def square_polygon():
    return PolygonSpec(SQUARE_VERTS, prevertices=SQUARE_PREV)


class TestPolygonSpec:
    def test_square_angles(self):
        poly = square_polygon()
        for a in poly.interior_angles:
            assert a == pytest.approx(math.pi / 2, abs=1e-12)
        assert poly.side_lengths == pytest.approx((2.0,) * 4)
        assert poly.centroid == pytest.approx(0.0)

    def test_gauss_sum_exact(self):
        for verts in (SQUARE_VERTS, (0, 2, 1 + 2j), (0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j)):
            poly = PolygonSpec(tuple(complex(v) for v in verts))
            gauss = sum(a / math.pi - 1 for a in poly.interior_angles)
            assert gauss == pytest.approx(-2.0, abs=1e-12)

    def test_clockwise_rejected(self):
        with pytest.raises(DomainError):
            PolygonSpec(tuple(reversed(SQUARE_VERTS)))

    def test_too_few_vertices(self):
        with pytest.raises(DomainError):
            PolygonSpec((0.0, 1.0))

    def test_bad_prevertices(self):
        with pytest.raises(DomainError):
            PolygonSpec(SQUARE_VERTS, prevertices=(0.0, 2.0, 1.0, 3.0))
        with pytest.raises(DomainError):
            PolygonSpec(SQUARE_VERTS, prevertices=(0.0, 1.0, 2.0))

    def test_step_angle_jumps_by_turns(self):
        poly = square_polygon()
        v = step_angle_function(poly)
        eps = 1e-9
        for k, th in enumerate(poly.prevertices):
            jump = v(th + eps) - v(th - eps)
            expect = poly.turn_angles[k] if k > 0 else poly.turn_angles[0] - 2 * math.pi
            # at theta_0 the wrap branch applies below the prevertex
            assert float(jump) % (2 * math.pi) == pytest.approx(
                poly.turn_angles[k] % (2 * math.pi), abs=1e-9)


class TestSchwarzIntegral:
    def test_harmonic_extension_of_cosine(self):
        # boundary value cos t extends to Re g = Re z, with g(z) = z
        g = schwarz_integral(np.cos, 0.3 + 0.2j)
        assert g == pytest.approx(0.3 + 0.2j, abs=1e-10)

    def test_imaginary_part_vanishes_at_origin(self):
        g = schwarz_integral(lambda t: np.cos(t) ** 2, 0.0)
        assert abs(g.imag) < 1e-12

    def test_boundary_guard(self):
        with pytest.raises(DomainError):
            schwarz_integral(np.cos, 0.9999999)


@pytest.fixture(scope="module")
def cmap():
    return build_map(square_polygon())


class TestSquareMap:
    def test_center_and_scale_normalization(self, cmap):
        assert complex(cmap(0.0)) == pytest.approx(0.0, abs=1e-12)
        assert cmap.prefactor.imag == pytest.approx(0.0, abs=1e-12)
        assert cmap.prefactor.real > 0

    def test_vertex_images_form_square(self, cmap):
        images = cmap.vertex_images()
        sides = [abs(images[(k + 1) % 4] - images[k]) for k in range(4)]
        for s in sides:
            assert s == pytest.approx(2.0, abs=2e-5)
        diag = abs(images[2] - images[0])
        assert diag / sides[0] == pytest.approx(math.sqrt(2.0), abs=1e-10)

    def test_side_ratio_residuals(self, cmap):
        res = side_ratio_residuals(cmap.polygon)
        assert np.max(np.abs(res)) < 1e-10

    def test_closed_form_derivative_vs_finite_difference(self, cmap):
        h = 1e-6
        pts = 0.8 * np.exp(1j * RNG.uniform(0, 2 * math.pi, 20)) \
            * RNG.uniform(0.1, 1.0, 20)
        for z in pts:
            z = complex(z)
            fd = (cmap(z + h) - cmap(z - h)) / (2 * h)
            assert abs(fd - cmap.derivative(z)) < 1e-6

    def test_derivative_polar_accessor(self, cmap):
        z = 0.5 * cmath.exp(0.7j)
        assert cisotti_derivative(cmap, 0.5, 0.7) == pytest.approx(
            complex(cmap.derivative(z)))
        with pytest.raises(DomainError):
            cisotti_derivative(cmap, 1.0, 0.0)

    def test_path_independence(self, cmap):
        z = 0.4 + 0.3j
        direct = cisotti_eval(cmap, z)
        via_origin = (cmap._segment_integral(0.0, 0.2j)
                      + cmap._segment_integral(0.2j, z)) * cmap.prefactor \
            + cmap.base_value
        assert complex(direct) == pytest.approx(complex(via_origin), abs=1e-10)

    def test_winding_number_about_centroid(self, cmap):
        path = ContourPath.circle(0.0, 1.0 - 1e-3)
        f = lambda z: np.array([complex(cmap(complex(w))) for w in np.atleast_1d(z)])
        assert count_zeros(f, path, min_samples=256) == 1

    def test_symmetry(self, cmap):
        # the square setup commutes with rotation by i
        z = 0.37 + 0.22j
        assert complex(cmap(1j * z)) == pytest.approx(1j * complex(cmap(z)),
                                                      abs=1e-9)

    def test_boundary_guard(self, cmap):
        with pytest.raises(DomainError):
            cmap(0.99999999)


class TestPrevertexSolver:
    def test_square_is_exact_fixed_point(self):
        poly = solve_prevertices(SQUARE_VERTS)
        for th, expect in zip(poly.prevertices, SQUARE_PREV):
            assert th == pytest.approx(expect, abs=1e-7)

    def test_rectangle_two_to_one(self):
        verts = (2 + 1j, -2 + 1j, -2 - 1j, 2 - 1j)
        poly = solve_prevertices(verts)
        res = side_ratio_residuals(poly)
        assert np.max(np.abs(res)) < 1e-6

    def test_triangle_consistency(self):
        verts = (0.0, 2.0, 1.0 + 1.5j)
        poly = solve_prevertices(verts)
        images = build_map(poly).vertex_images()
        target = poly.side_lengths
        got = [abs(images[(k + 1) % 3] - images[k]) for k in range(3)]
        for g, t in zip(got, target):
            assert g / got[0] == pytest.approx(t / target[0], abs=1e-5)


class TestLavrentiev:
    def test_from_function_cosine(self):
        p = BoundaryPerturbation.from_function(np.cos, 0.01)
        assert p.sigma_coeffs[1] == pytest.approx(0.5, abs=1e-12)
        assert p.sigma_coeffs[-1] == pytest.approx(0.5, abs=1e-12)
        t = np.linspace(0, 2 * math.pi, 64)
        assert np.max(np.abs(p.sigma(t) - np.cos(t))) < 1e-12

    def test_boundary_deviation_is_second_order(self):
        eps = 0.01
        p = BoundaryPerturbation.from_function(np.cos, eps)
        t = np.linspace(0, 2 * math.pi, 721)
        w = lavrentiev_map(p, np.exp(1j * t))
        dev = np.abs(w) - (1.0 + eps * p.sigma(np.angle(w)))
        assert np.max(np.abs(dev)) <= 5e-4

    def test_large_epsilon_warns(self):
        with pytest.warns(UserWarning):
            BoundaryPerturbation.from_function(np.cos, 0.5)

    def test_domain_guard(self):
        p = BoundaryPerturbation.from_function(np.cos, 0.01)
        with pytest.raises(DomainError):
            lavrentiev_map(p, 1.5)
