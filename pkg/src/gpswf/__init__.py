"""Generalized prolate spheroidal wave functions.

Spectra of the weighted finite Fourier transform operator and its
self-adjoint composition, the commuting Sturm-Liouville eigenproblem,
uniform Bessel- and Jacobi-form approximations of the eigenfunctions with
certified error envelopes, super-exponential eigenvalue decay diagnostics,
and trace-based eigenvalue counting bounds.
"""

from .approx import (
    ApproxReport,
    WkbFrame,
    a_alpha_exact,
    approximant_norm_check,
    approximant_norm_sq,
    bessel_report,
    bessel_uniform,
    g_bound,
    jacobi_report,
    jacobi_uniform,
    make_frame,
)
from .specfun import (
    BesselEnvelopeConstants,
    JacobiParams,
    QuadratureRule,
    bessel_j,
    bessel_y,
    beta_fn,
    elliptic_E,
    elliptic_K,
    envelope_constants,
    eta_fn,
    gamma_fn,
    gauss_jacobi,
    incomplete_K,
    jacobi_p,
    jacobi_p_deriv,
    jacobi_p_normalized,
    s_map,
    weight_modulus,
)
from .spectrum import (
    CountingReport,
    DecayReport,
    OperatorSpectrum,
    SincLikeKernel,
    TraceAndNorm,
    counting,
    decay_check,
    f_n_moment,
    kernel_eval,
    log_lambda_explicit,
    mu_eigenrelation,
    mu_explicit,
    nystrom_spectrum,
    trace_and_norm,
)
from .sturm import (
    ChiSpectrum,
    GpswfFunction,
    ProblemParams,
    TruncationError,
    chi_spectrum,
    gpswf_deriv,
    gpswf_eval,
    ode_residual,
)

__all__ = [
    "ApproxReport", "BesselEnvelopeConstants", "ChiSpectrum", "CountingReport",
    "DecayReport", "GpswfFunction", "JacobiParams", "OperatorSpectrum",
    "ProblemParams", "QuadratureRule", "SincLikeKernel", "TraceAndNorm",
    "TruncationError", "WkbFrame", "a_alpha_exact", "approximant_norm_check",
    "approximant_norm_sq", "bessel_j", "bessel_report", "bessel_uniform",
    "bessel_y", "beta_fn", "chi_spectrum", "counting", "decay_check",
    "elliptic_E", "elliptic_K", "envelope_constants", "eta_fn", "f_n_moment",
    "g_bound", "gamma_fn", "gauss_jacobi", "gpswf_deriv", "gpswf_eval",
    "incomplete_K", "jacobi_p", "jacobi_p_deriv", "jacobi_p_normalized",
    "jacobi_report", "jacobi_uniform", "kernel_eval", "log_lambda_explicit",
    "make_frame", "mu_eigenrelation", "mu_explicit", "nystrom_spectrum",
    "ode_residual", "s_map", "trace_and_norm", "weight_modulus",
]

__version__ = "0.1.0"
