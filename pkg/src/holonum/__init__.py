"""holonum: power-series, Fourier, complex-analytic, conformal-mapping and
Riemann-zeta numerics behind a reproducible experiment runner."""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, HolonumError,
                     InconclusiveError, SingularInverseError, ToleranceNotMet)
from .series import (PowerSeries, QuadratureRule, adaptive_quad, ratio_radius,
                     series_exp, series_inverse)
from .contours import ContourPath, IntegralResult, Segment, integrate_contour
from .ode import (FrobeniusSolution, OdeCoefficients, PolynomialRhs, TaylorIvp,
                  solve_analytic_ode, solve_frobenius, taylor_ivp_series)
from .specialfun import SphericalHarmonicIndex, airy_pair, legendre, spherical_harmonic
from .fourier import (FourierCoeffs, SampledFunction, WeierstrassParams,
                      cesaro_sum, fejer_kernel, fourier_coefficients, partial_sum)
from .complexkit import (LaurentExpansion, RationalFunction, burmann_lagrange,
                         count_zeros, inverse_function_series,
                         laurent_coefficients, rational_exp_sum, residue_at_pole)
from .conformal import (BoundaryPerturbation, CisottiMap, PolygonSpec,
                        cisotti_derivative, cisotti_eval, lavrentiev_map,
                        schwarz_integral, solve_prevertices, step_angle_function)
from .zeta import (BhatTable, XiSeries, ZetaEvaluator, bhat_table,
                   critical_line_zero_scan, horizontal_taylor, positivity_scan,
                   xi, xi_coefficients, zeta)

__all__ = [name for name in dir() if not name.startswith("_")]
