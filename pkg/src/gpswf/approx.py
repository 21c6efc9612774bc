"""Uniform asymptotic approximations of the eigenfunctions.

Two regimes:

* Bessel form (WKB / Liouville transform): on [0, 1] the eigenfunction is
  approximated by

      psi_n(x) ~ A * chi^(1/4) sqrt(S(x)) J_alpha(sqrt(chi) S(x))
                 / ((1-x^2)^(1/4+alpha/2) (1-q x^2)^(1/4)),

  with q = c^2/chi_n, S the elliptic arc-length map and, in the fully
  explicit variant, A replaced by Ahat = sqrt(pi / (2 K(sqrt(q)))).  The
  accompanying envelope is rigorous on admissible frames: it combines the
  eps_n-scaled Olver modulus bound with the exactly computed difference
  |A - Ahat| times the main term.

* Jacobi form: for 0 < alpha < 3/2 and q bounded away from 1, psi_n is
  approximated by A_n Ptilde_n^(alpha, alpha) where A_n is the orthogonal
  projection coefficient (the n-th Jacobi coefficient of psi_n).  The error
  constant in front of c^2/(n + 2 alpha + 1) is empirical: it is reported
  and its stability is asserted across sweeps, never assumed a priori.

Admissibility for the Bessel form means q < 1 together with
(1 - q) sqrt(chi) >= pi (7/4 + 3 alpha^2) m_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    BesselEnvelopeConstants,
    bessel_j,
    elliptic_K,
    envelope_constants,
    gamma_fn,
    incomplete_K,
    jacobi_series_eval,
    s_map,
    weight_modulus,
)
from .sturm import ChiSpectrum

_X_ENDPOINT = 1e-10   # below this distance to x=1 the 0/0 forms switch to limits


@dataclass(frozen=True)
class WkbFrame:
    """Scalars of the Bessel-form approximation for one mode."""

    alpha: float
    c: float
    n: int
    chi: float
    q: float
    s0: float
    eps: float
    constants: BesselEnvelopeConstants
    admissible: bool
    failure: str | None


def make_frame(spectrum: ChiSpectrum, n: int) -> WkbFrame:
    alpha, c = spectrum.params.alpha, spectrum.params.c
    chi = spectrum.chi(n)
    q = c * c / chi
    cst = envelope_constants(alpha)
    threshold = math.pi * (1.75 + 3.0 * alpha * alpha) * cst.m_alpha
    failure = None
    if q >= 1.0:
        failure = f"q = c^2/chi_n = {q:.6g} >= 1 (oscillatory regime required)"
        eps = math.inf
        s0 = math.nan
    else:
        s0 = s_map(0.0, q)
        margin = (1.0 - q) * math.sqrt(chi)
        if margin < threshold:
            failure = (f"(1-q) sqrt(chi) = {margin:.6g} < "
                       f"pi (7/4 + 3 alpha^2) m_alpha = {threshold:.6g}")
        eps = math.pi * (math.e - 1.0) * (1.75 + 3.0 * alpha * alpha) * cst.m_alpha \
            / ((1.0 - q) * math.sqrt(chi))
    return WkbFrame(alpha=alpha, c=c, n=n, chi=chi, q=q, s0=s0, eps=eps,
                    constants=cst, admissible=failure is None, failure=failure)


def leading_amplitude(q: float) -> float:
    """Explicit leading constant Ahat = sqrt(pi / (2 K(sqrt(q))))."""
    return math.sqrt(math.pi / (2.0 * elliptic_K(math.sqrt(q))))


def g_bound(alpha: float, q: float, x):
    """Integrated bound g_{alpha,q}(x) on the Liouville-transform perturbation.

    g(x) = (3 + 2q + 12 a^2)/(4(1-q)) * (q x sqrt(1-x^2)/sqrt(1-q x^2) + S(x))
           + a(a+1) K(x, sqrt(q)); at x = 0 this is the complete-integral
    expression in E(sqrt(q)) and K(sqrt(q)), at x = 1 it vanishes.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("g_bound requires x in [0, 1]")
    s = s_map(arr, q)
    k_inc = incomplete_K(arr, q)
    front = (3.0 + 2.0 * q + 12.0 * alpha * alpha) / (4.0 * (1.0 - q))
    out = front * (q * arr * np.sqrt(1.0 - arr * arr) / np.sqrt(1.0 - q * arr * arr) + s) \
        + alpha * (alpha + 1.0) * k_inc
    return out if np.ndim(x) else float(out)


def a_alpha_exact(spectrum: ChiSpectrum, n: int) -> float:
    """Normalization constant of the Bessel form from the endpoint value.

    A = 2^alpha Gamma(1+alpha) psi_n(1) / ((1-q)^(alpha/2) chi^(1/4+alpha/2));
    positive under the psi_n(1) > 0 sign convention.
    """
    frame = make_frame(spectrum, n)
    if frame.q >= 1.0:
        raise ValueError(frame.failure)
    alpha, chi, q = frame.alpha, frame.chi, frame.q
    psi1 = spectrum.eigenfunction(n).value(1.0)
    return (2.0 ** alpha) * gamma_fn(1.0 + alpha) * psi1 \
        / ((1.0 - q) ** (alpha / 2.0) * chi ** (0.25 + alpha / 2.0))


def _main_term(frame: WkbFrame, x: np.ndarray) -> np.ndarray:
    """chi^(1/4) sqrt(S) J_alpha(sqrt(chi) S) / ((1-x^2)^(1/4+a/2) (1-q x^2)^(1/4)).

    The x -> 1 limit chi^(1/4+a/2) (1-q)^(a/2) / (2^a Gamma(1+a)) replaces
    the 0/0 expression near the endpoint.
    """
    alpha, chi, q = frame.alpha, frame.chi, frame.q
    out = np.empty_like(x)
    near = 1.0 - x < _X_ENDPOINT
    if np.any(near):
        out[near] = chi ** (0.25 + alpha / 2.0) * (1.0 - q) ** (alpha / 2.0) \
            / (2.0 ** alpha * gamma_fn(1.0 + alpha))
    reg = ~near
    if np.any(reg):
        xr = x[reg]
        s = s_map(xr, q)
        z = math.sqrt(chi) * s
        out[reg] = chi ** 0.25 * np.sqrt(s) * bessel_j(alpha, z) \
            / ((1.0 - xr * xr) ** (0.25 + alpha / 2.0) * (1.0 - q * xr * xr) ** 0.25)
    return out


def _envelope_factor(frame: WkbFrame, x: np.ndarray) -> np.ndarray:
    """Olver-modulus envelope factor; tends to 0 as x -> 1."""
    alpha, chi, q = frame.alpha, frame.chi, frame.q
    out = np.zeros_like(x)
    reg = 1.0 - x >= _X_ENDPOINT
    if np.any(reg):
        xr = x[reg]
        s = s_map(xr, q)
        z = math.sqrt(chi) * s
        e_a, m_a = weight_modulus(alpha, z)
        one_mx2 = 1.0 - xr * xr
        out[reg] = (one_mx2 ** 0.25 / (1.0 - q * xr * xr) ** 0.75) \
            * chi ** 0.25 * np.sqrt(s) * m_a / (one_mx2 ** (alpha / 2.0) * e_a)
    return out


def bessel_uniform(spectrum: ChiSpectrum, n: int, x):
    """Explicit Bessel-form approximation and its rigorous error envelope.

    Returns (value, envelope): value uses the leading constant Ahat, and the
    envelope is eps_n A Env(x) + |A - Ahat| |main term|, where A is the exact
    normalization constant computed from psi_n(1).  Raises on inadmissible
    frames, naming the violated hypothesis.
    """
    frame = make_frame(spectrum, n)
    if not frame.admissible:
        raise ValueError(f"Bessel-form frame inadmissible for n={n}: {frame.failure}")
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("bessel_uniform is defined on [0, 1]")
    a_hat = leading_amplitude(frame.q)
    a_exact = a_alpha_exact(spectrum, n)
    main = _main_term(frame, arr)
    value = a_hat * main
    envelope = frame.eps * a_exact * _envelope_factor(frame, arr) \
        + abs(a_exact - a_hat) * np.abs(main)
    if np.ndim(x) == 0:
        return float(value[0]), float(envelope[0])
    return value, envelope


def approximant_norm_sq(spectrum: ChiSpectrum, n: int, n_nodes: int | None = None) -> float:
    """Weighted L2([0,1]) norm squared of the Bessel-form approximant A * main.

    The substitution x = sin(theta) removes the (1-x)^(-1/2) endpoint
    singularity of the integrand; a Gauss-Legendre rule in theta does the
    rest.
    """
    frame = make_frame(spectrum, n)
    if frame.q >= 1.0:
        raise ValueError(frame.failure)
    a_exact = a_alpha_exact(spectrum, n)
    chi, q, alpha = frame.chi, frame.q, frame.alpha
    m = n_nodes or max(256, int(3.0 * math.sqrt(chi)) + 64)
    t, w = np.polynomial.legendre.leggauss(m)
    theta = 0.25 * math.pi * (t + 1.0)
    wt = 0.25 * math.pi * w
    xs = np.sin(theta)
    s = s_map(xs, q)
    z = np.sqrt(chi) * s
    integrand = math.sqrt(chi) * s * bessel_j(alpha, z) ** 2 / np.sqrt(1.0 - q * xs * xs)
    return float(a_exact ** 2 * np.dot(wt, integrand))


def approximant_norm_check(spectrum: ChiSpectrum, n: int) -> float:
    """Deviation |  ||approximant||^2 - A^2 K(sqrt(q))/pi  |.

    On admissible frames this is bounded by A^2 M_cap / ((1-q) sqrt(chi))
    with M_cap the eta bound from the envelope constants.
    """
    frame = make_frame(spectrum, n)
    a_exact = a_alpha_exact(spectrum, n)
    norm2 = approximant_norm_sq(spectrum, n)
    target = a_exact ** 2 * elliptic_K(math.sqrt(frame.q)) / math.pi
    return abs(norm2 - target)


def jacobi_uniform(spectrum: ChiSpectrum, n: int, x, q0: float = 0.9):
    """Jacobi-polynomial approximation A_n Ptilde_n(x) of psi_n.

    A_n is the orthogonal projection of psi_n onto Ptilde_n, i.e. the n-th
    coefficient of its Jacobi expansion.  Requires 0 < alpha < 3/2 and
    q = c^2/chi_n <= q0.  Returns (value, a_n).
    """
    alpha = spectrum.params.alpha
    if not 0.0 < alpha < 1.5:
        raise ValueError("alpha must lie in (0,3/2) for the Jacobi-form approximation")
    q = spectrum.q(n)
    if q > q0:
        raise ValueError(f"q = c^2/chi_n = {q:.6g} exceeds q0 = {q0}; increase n")
    a_n = float(spectrum.coeffs[n, n])
    base = np.zeros(n + 1)
    base[n] = 1.0
    p_n = jacobi_series_eval(base, alpha, x)
    value = a_n * p_n
    return (value, a_n) if np.ndim(x) else (float(value), a_n)


def default_grid(m: int = 2001) -> np.ndarray:
    """Chebyshev-distributed points on [0, 1], clustered toward x = 1."""
    return np.sin(np.linspace(0.0, 0.5 * math.pi, m))


def symmetric_grid(m: int = 2001) -> np.ndarray:
    """Chebyshev points on [-1, 1], ascending."""
    return np.cos(np.linspace(math.pi, 0.0, m))


@dataclass(frozen=True)
class ApproxReport:
    """Grid comparison of an approximation against the reference psi_n."""

    kind: str
    alpha: float
    c: float
    n: int
    chi: float
    grid: np.ndarray
    approx: np.ndarray
    reference: np.ndarray
    envelope: np.ndarray
    sup_error: float
    sup_envelope: float
    envelope_violated: bool
    a_n: float | None = None
    scaled_error: float | None = None
    a_n_scaled: float | None = None


def bessel_report(spectrum: ChiSpectrum, n: int, grid=None) -> ApproxReport:
    """Theorem-style report for the Bessel form on [0, 1]."""
    xs = default_grid() if grid is None else np.asarray(grid, dtype=float)
    approx, env = bessel_uniform(spectrum, n, xs)
    ref = spectrum.eigenfunction(n).value(xs)
    err = float(np.max(np.abs(approx - ref)))
    sup_env = float(np.max(env))
    return ApproxReport(
        kind="bessel", alpha=spectrum.params.alpha, c=spectrum.params.c, n=n,
        chi=spectrum.chi(n), grid=xs, approx=approx, reference=ref, envelope=env,
        sup_error=err, sup_envelope=sup_env, envelope_violated=bool(err > sup_env),
    )


def jacobi_report(spectrum: ChiSpectrum, n: int, grid=None, q0: float = 0.9) -> ApproxReport:
    """Report for the Jacobi form on [-1, 1], with the empirical constants.

    scaled_error = sup_error (n + 2 alpha + 1) / c^2 and
    a_n_scaled = |1 - A_n| (2n + 2 alpha + 1) / c^2 are the quantities whose
    boundedness across sweeps reflects the O(c^2/n) error law.
    """
    xs = symmetric_grid() if grid is None else np.asarray(grid, dtype=float)
    approx, a_n = jacobi_uniform(spectrum, n, xs, q0=q0)
    ref = spectrum.eigenfunction(n).value(xs)
    err = float(np.max(np.abs(approx - ref)))
    alpha, c = spectrum.params.alpha, spectrum.params.c
    if c > 0:
        scaled = err * (n + 2 * alpha + 1) / c ** 2
        a_scaled = abs(1.0 - a_n) * (2 * n + 2 * alpha + 1) / c ** 2
    else:
        scaled = 0.0
        a_scaled = 0.0
    bound = np.full_like(xs, err)
    return ApproxReport(
        kind="jacobi", alpha=alpha, c=c, n=n, chi=spectrum.chi(n), grid=xs,
        approx=approx, reference=ref, envelope=bound, sup_error=err,
        sup_envelope=float(err), envelope_violated=False,
        a_n=a_n, scaled_error=scaled, a_n_scaled=a_scaled,
    )
