"""Moving-average low-pass filters on functions and Fourier series."""

from .filter_kernels import (DivergentSeriesError, PiecewiseKernel, convolve,
                             first_order_kernel, kernel_series, multiplier, order_n_kernel)
from .filter_ops import (FilterSpec, commutation_residual, eigenfunction_check, filter_samples,
                         filter_series, filtered_derivative_at, midpoint_limit_check)
from .fourier_core import (Convergence, ConvergenceReport, Extension, FourierSeries,
                           SampledFunction, classify_convergence, coefficients_from_samples,
                           evaluate, sample_function)
from .pde_examples import (Curve, Field, FieldQuery, ModalSolution, Problem,
                           box_Ex_top_pair_form, cylinder_flux_pair_form, divergence_scan,
                           evaluate_field, make_solution, string_acceleration_traveling)

__version__ = "0.1.0"

__all__ = [
    "FourierSeries", "SampledFunction", "Extension", "Convergence", "ConvergenceReport",
    "evaluate", "coefficients_from_samples", "classify_convergence", "sample_function",
    "PiecewiseKernel", "first_order_kernel", "convolve", "order_n_kernel", "multiplier",
    "kernel_series", "DivergentSeriesError",
    "FilterSpec", "filter_samples", "filter_series", "filtered_derivative_at",
    "midpoint_limit_check", "commutation_residual", "eigenfunction_check",
    "Problem", "Field", "Curve", "ModalSolution", "FieldQuery", "make_solution",
    "evaluate_field", "string_acceleration_traveling", "box_Ex_top_pair_form",
    "cylinder_flux_pair_form", "divergence_scan",
]
