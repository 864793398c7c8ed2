"""Orthogonal polynomials on [-1, 1] and numerical checks of bulk universality limits."""

from .errors import (ConfigError, DegeneracyError, DomainError, OrthoKernelError,
                     PreconditionError)
from .kernel import (christoffel, correlation_det, deriv_kernel, eval_polys, kernel, kernel_at,
                     normalized_kernel, sinc)
from .measure import (Chebyshev1, Constant, Interval, Jacobi, Legendre, Measure, Perturbed,
                      Piecewise, Smoothed, dominates, eval_weight, measure_from_dict,
                      smooth_weight)
from .quadrature import composite_scheme, discretize, gauss_legendre, integrate
from .recurrence import (RecurrenceTable, jacobi_closed_form, nevai_diagnostic,
                         orthonormality_residual, regularity_diagnostic, stieltjes)
from .universality import (ConvergenceReport, ScalingConfig, christoffel_limit_error,
                           christoffel_sweep, correlation_limit_error, correlation_sweep,
                           localization_check, localization_decay, lp_error,
                           smoothing_diagnostic, tau, tau_limit_error, tau_sweep,
                           universality_error)

__version__ = "0.1.0"
