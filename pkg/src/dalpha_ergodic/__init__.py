"""Numerical diagnostics for multiplication operators on weighted Dirichlet spaces.

Modules: ``series`` (truncated power series), ``spaces`` (D_alpha norms and
kernels), ``operators`` (matrices, operator norms, power and Cesaro
sequences), ``quadrature`` (disc integrals, Carleson and UBSCM probes),
``zoo`` (named examples), ``classify`` and ``cli`` (the report pipeline).
"""

from .classify import ConfigError, ErgodicClassifier, ExperimentConfig, Verdict, run_classify, run_paper_examples
from .growth import GrowthFit, GrowthReport, GrowthSeq, growth_fit, growth_verdict
from .operators import (
    NormResult,
    OperatorMatrix,
    acb_probe,
    adjoint,
    cesaro_norm_seq,
    dense_operator,
    media_residual,
    multiplier_matrix,
    operator_norm,
    power_norm_seq,
    roots_of_unity,
    weighted_backward_shift,
)
from .quadrature import QuadResult, cb_integral_mz, carleson_probe, integrate_disc, sup_norm_check, ubscm_probe
from .series import CoeffSeries, cesaro_symbol, derivative, exp_series, from_coeffs, mul, power
from .spaces import SpaceParams, coeff_norm_sq, integral_norm_sq, kernel, kernel_norm_sq
from .zoo import ZOO, make_assani, make_backward_shift, make_tz_block, phi_cusp, phi_mz, phi_power_half

__version__ = "0.1.0"
