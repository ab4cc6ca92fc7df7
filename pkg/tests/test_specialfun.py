"""Legendre polynomials, spherical harmonics and the Airy series pair."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonum.errors import DomainError
from holonum.series import QuadratureRule, adaptive_quad
from holonum.specialfun import (SphericalHarmonicIndex, airy_pair,
                                associated_legendre, legendre, legendre_exact,
                                spherical_harmonic)

KNOWN = {
    0: [Fraction(1)],
    1: [Fraction(0), Fraction(1)],
    2: [Fraction(-1, 2), Fraction(0), Fraction(3, 2)],
    3: [Fraction(0), Fraction(-3, 2), Fraction(0), Fraction(5, 2)],
    4: [Fraction(3, 8), Fraction(0), Fraction(-30, 8), Fraction(0),
        Fraction(35, 8)],
}


class TestLegendre:
    @pytest.mark.parametrize("ell", sorted(KNOWN))
    def test_exact_low_orders(self, ell):
        assert legendre_exact(ell) == KNOWN[ell]

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            legendre_exact(-1)

    @settings(max_examples=12, deadline=None)
    @given(st.integers(min_value=1, max_value=12))
    def test_three_term_recurrence_exact(self, n):
        # (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}, exact in rationals
        p_prev, p_cur, p_next = (legendre_exact(n - 1), legendre_exact(n),
                                 legendre_exact(n + 1))
        lhs = [Fraction(n + 1) * c for c in p_next]
        rhs = [Fraction(0)] * (n + 2)
        for k, c in enumerate(p_cur):
            rhs[k + 1] += Fraction(2 * n + 1) * c
        for k, c in enumerate(p_prev):
            rhs[k] -= Fraction(n) * c
        assert lhs == rhs

    def test_endpoint_value(self):
        for ell in range(8):
            assert legendre(ell)(1.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("ell,m", [(l, m) for l in range(7)
                                       for m in range(l + 1)])
    def test_orthogonality(self, ell, m):
        rule = QuadratureRule(abs_tol=1e-13, rel_tol=1e-13)
        pl, pm = legendre(ell), legendre(m)
        val, _ = adaptive_quad(lambda x: (pl(x) * pm(x)).real, -1.0, 1.0, rule)
        expect = 2.0 / (2 * ell + 1) if ell == m else 0.0
        assert val == pytest.approx(expect, abs=1e-10)


class TestAssociatedLegendre:
    def test_p11(self):
        p = associated_legendre(SphericalHarmonicIndex(1, 1))
        for x in (-0.7, 0.0, 0.4):
            assert p(x) == pytest.approx(-math.sqrt(1 - x * x), abs=1e-13)

    def test_p21(self):
        p = associated_legendre(SphericalHarmonicIndex(2, 1))
        for x in (-0.5, 0.3, 0.9):
            assert p(x) == pytest.approx(-3 * x * math.sqrt(1 - x * x), abs=1e-12)

    def test_negative_m_relation(self):
        ell, m = 3, 2
        pos = associated_legendre(SphericalHarmonicIndex(ell, m))
        neg = associated_legendre(SphericalHarmonicIndex(ell, -m))
        factor = (-1) ** m * math.factorial(ell - m) / math.factorial(ell + m)
        for x in (-0.6, 0.1, 0.8):
            assert neg(x) == pytest.approx(factor * pos(x), abs=1e-12)

    def test_bad_index(self):
        with pytest.raises(DomainError):
            SphericalHarmonicIndex(2, 3)


class TestSphericalHarmonics:
    @pytest.mark.parametrize("ell,m", [(0, 0), (1, 0), (1, 1), (2, 1), (3, -2)])
    def test_unit_norm(self, ell, m):
        idx = SphericalHarmonicIndex(ell, m)
        rule = QuadratureRule(abs_tol=1e-12, rel_tol=1e-12)
        # phi integral of |Y|^2 is 2 pi |norm * P(cos theta)|^2
        val, _ = adaptive_quad(
            lambda th: 2 * math.pi * np.abs(
                spherical_harmonic(idx, th, 0.0)) ** 2 * np.sin(th),
            0.0, math.pi, rule)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_y00(self):
        idx = SphericalHarmonicIndex(0, 0)
        assert spherical_harmonic(idx, 0.7, 1.3) == pytest.approx(
            1.0 / math.sqrt(4 * math.pi))

    def test_orthogonality_same_m(self):
        rule = QuadratureRule(abs_tol=1e-12, rel_tol=1e-12)
        i1 = SphericalHarmonicIndex(1, 0)
        i2 = SphericalHarmonicIndex(2, 0)
        val, _ = adaptive_quad(
            lambda th: 2 * math.pi * (spherical_harmonic(i1, th, 0.0)
                                      * spherical_harmonic(i2, th, 0.0)).real
            * np.sin(th), 0.0, math.pi, rule)
        assert abs(val) < 1e-10


class TestAiry:
    def test_series_satisfy_equation(self):
        # w'' = z w termwise: (n+2)(n+1) c_{n+2} = c_{n-1}
        a1, a2 = airy_pair(15)
        for s in (a1, a2):
            for n in range(1, 14):
                lhs = (n + 2) * (n + 1) * complex(s[n + 2]).real
                assert lhs == pytest.approx(complex(s[n - 1]).real, abs=1e-15)

    def test_leading_terms(self):
        a1, a2 = airy_pair(7)
        assert complex(a1[0]).real == 1.0
        assert complex(a1[3]).real == pytest.approx(1.0 / 6.0)
        assert complex(a1[6]).real == pytest.approx(4.0 / 720.0)
        assert complex(a2[1]).real == 1.0
        assert complex(a2[4]).real == pytest.approx(2.0 / 24.0)
        assert complex(a2[7]).real == pytest.approx(10.0 / math.factorial(7))

    def test_wronskian_constant(self):
        # W(w1, w2) = w1 w2' - w1' w2 = 1 for this normalization
        a1, a2 = airy_pair(12)
        n = 10
        w = (a1.pad(n) * a2.deriv().pad(n)
             - a1.deriv().pad(n) * a2.pad(n))
        assert complex(w[0]).real == pytest.approx(1.0)
        assert max(abs(complex(w[k])) for k in range(1, n + 1)) < 1e-15
