"""Uniform-approximation tests: envelopes, normalization constants, rates."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

import gpswf as g
from gpswf.approx import default_grid, make_frame, symmetric_grid


def g_bound_quad_oracle(alpha, q, x):
    """Integrate the perturbation bound along the arc length, u = original variable."""
    def integrand(u):
        h = (3 + 2 * q + 12 * alpha * alpha) / (4 * (1 - q * u * u) ** 2) \
            + alpha * (alpha + 1) / (1 - q * u * u)
        return h * math.sqrt((1 - q * u * u) / (1 - u * u))
    return quad(integrand, x, 1.0, limit=400, epsabs=1e-12)[0]


# ---------------------------------------------------------------------------
# g bound
# ---------------------------------------------------------------------------

def test_g_bound_at_zero():
    alpha, q = 0.5, 0.3
    expect = (3 + 2 * q + 12 * alpha ** 2) / (4 * (1 - q)) * g.elliptic_E(math.sqrt(q)) \
        + alpha * (alpha + 1) * g.elliptic_K(math.sqrt(q))
    assert_allclose(g.g_bound(alpha, q, 0.0), expect, rtol=1e-14)


def test_g_bound_small_q_limit():
    assert_allclose(g.g_bound(0.0, 1e-14, 0.0), 0.75 * math.pi / 2, rtol=1e-10)


def test_g_bound_endpoint():
    assert g.g_bound(0.5, 0.3, 1.0) == 0.0


def test_g_bound_quad_oracle():
    assert_allclose(g.g_bound(0.5, 0.3, 0.6), g_bound_quad_oracle(0.5, 0.3, 0.6),
                    atol=1e-11)


# ---------------------------------------------------------------------------
# Bessel-form approximation (frame, value, envelope)
# ---------------------------------------------------------------------------

def test_frame_admissibility():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=5.0), 40)
    fr = make_frame(spec, 40)
    assert fr.admissible and fr.q < 1
    expect_eps = math.pi * (math.e - 1) * (1.75 + 3 * 0.25) \
        * g.envelope_constants(0.5).m_alpha / ((1 - fr.q) * math.sqrt(fr.chi))
    assert_allclose(fr.eps, expect_eps, rtol=1e-14)


def test_inadmissible_frame_refused_with_reason():
    # low mode at large bandwidth: q >= 1
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=5.0), 2)
    with pytest.raises(ValueError, match="q ="):
        g.bessel_uniform(spec, 2, 0.5)


def test_eps_halves_when_sqrt_chi_doubles_at_fixed_q():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=5.0), 40)
    fr = make_frame(spec, 40)
    # pick c' so that q is identical at quadrupled chi
    chi2 = 4.0 * fr.chi
    c2 = math.sqrt(fr.q * chi2)
    eps2 = math.pi * (math.e - 1) * (1.75 + 3 * 0.25) \
        * g.envelope_constants(0.5).m_alpha / ((1 - fr.q) * math.sqrt(chi2))
    assert abs(eps2 / fr.eps - 0.5) <= 0.05 * 0.5
    assert c2 > fr.c


def test_bessel_value_at_endpoint():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=5.0), 40)
    fr = make_frame(spec, 40)
    val, _ = g.bessel_uniform(spec, 40, 1.0)
    a_hat = math.sqrt(math.pi / (2 * g.elliptic_K(math.sqrt(fr.q))))
    expect = a_hat * fr.chi ** (0.25 + 0.25) * (1 - fr.q) ** 0.25 \
        / (2 ** 0.5 * g.gamma_fn(1.5))
    assert_allclose(val, expect, rtol=1e-12)


def test_envelope_dominates_sup_error():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=5.0), 40)
    rep = g.bessel_report(spec, 40)
    assert not rep.envelope_violated
    assert rep.sup_error <= rep.sup_envelope


def test_a_alpha_exact_inside_prop2_bracket():
    # bracket with the empirically calibrated constant, stable under n-doubling
    params = g.ProblemParams(alpha=0.5, c=5.0)
    cs = []
    for n in (40, 80, 160):
        spec = g.chi_spectrum(params, n)
        fr = make_frame(spec, n)
        a = g.a_alpha_exact(spec, n)
        a_hat = math.sqrt(math.pi / (2 * g.elliptic_K(math.sqrt(fr.q))))
        cs.append(abs(a - a_hat) / (a_hat * fr.eps))
    # non-growth across doublings (the fitted constant actually decays)
    assert cs[1] <= 1.25 * cs[0] and cs[2] <= 1.25 * cs[1]
    c_cal = 2.0 * max(cs)
    for n in (40, 80, 160):
        spec = g.chi_spectrum(params, n)
        fr = make_frame(spec, n)
        a = g.a_alpha_exact(spec, n)
        a_hat = math.sqrt(math.pi / (2 * g.elliptic_K(math.sqrt(fr.q))))
        assert a_hat / (1 + fr.eps * c_cal) <= a <= a_hat / (1 - fr.eps * c_cal)


def test_a_alpha_small_c_matches_bracket_midpoint():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=0.01), 40)
    fr = make_frame(spec, 40)
    a = g.a_alpha_exact(spec, 40)
    midpoint = math.sqrt(math.pi / (2 * g.elliptic_K(math.sqrt(fr.q))))
    assert abs(a - midpoint) <= 1e-3


def test_a_alpha_positive():
    spec = g.chi_spectrum(g.ProblemParams(alpha=1.2, c=3.0), 25)
    assert g.a_alpha_exact(spec, 25) > 0


# ---------------------------------------------------------------------------
# approximant norm
# ---------------------------------------------------------------------------

def test_norm_check_bound():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.8, c=4.0), 50)
    fr = make_frame(spec, 50)
    a = g.a_alpha_exact(spec, 50)
    dev = g.approximant_norm_check(spec, 50)
    bound = a * a * g.envelope_constants(0.8).m_alpha_cap / ((1 - fr.q) * math.sqrt(fr.chi))
    assert dev <= bound


def test_norm_small_q_limit():
    # K(0) = pi/2, so the squared norm tends to A^2/2
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=0.2), 60)
    a = g.a_alpha_exact(spec, 60)
    norm2 = g.approximant_norm_sq(spec, 60)
    assert abs(norm2 - a * a / 2) / norm2 <= 1e-3


def test_norm_adaptive_integration_oracle():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.8, c=4.0), 50)
    fr = make_frame(spec, 50)
    a = g.a_alpha_exact(spec, 50)
    alpha, q, chi = 0.8, fr.q, fr.chi

    def integrand_theta(t):
        x = math.sin(t)
        s = g.s_map(x, q)
        j = g.bessel_j(alpha, math.sqrt(chi) * s)
        return a * a * math.sqrt(chi) * s * j * j / math.sqrt(1 - q * x * x)

    oracle = quad(integrand_theta, 0.0, math.pi / 2, limit=500,
                  epsabs=1e-13, epsrel=1e-13)[0]
    assert abs(g.approximant_norm_sq(spec, 50) - oracle) <= 1e-10


# ---------------------------------------------------------------------------
# boundedness / limit invariants of the envelope machinery
# ---------------------------------------------------------------------------

def test_remark_boundedness_stable_under_grid_refinement():
    from gpswf.approx import _envelope_factor

    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=5.0), 40)
    fr = make_frame(spec, 40)
    coarse = np.max(_envelope_factor(fr, default_grid(2001)))
    fine = np.max(_envelope_factor(fr, default_grid(8001)))
    assert np.isfinite(coarse) and np.isfinite(fine)
    assert abs(fine - coarse) / coarse <= 0.01


def test_s_map_endpoint_ratio():
    # S(x)/sqrt((1-x^2)(1-q x^2)) -> 1 as x -> 1
    q = 0.3
    x = 1.0 - 1e-8
    ratio = g.s_map(x, q) / math.sqrt((1 - x * x) * (1 - q * x * x))
    assert abs(ratio - 1.0) <= 1e-6


# ---------------------------------------------------------------------------
# Jacobi-form approximation
# ---------------------------------------------------------------------------

def test_jacobi_c_zero_exact():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=0.0), 12)
    rep = g.jacobi_report(spec, 12)
    assert rep.a_n == 1.0
    assert rep.sup_error == 0.0


def test_jacobi_error_decays_like_inverse_n():
    sups = []
    for n in (50, 100, 200):
        spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=2.0), n)
        sups.append(g.jacobi_report(spec, n).sup_error)
    assert 0.4 <= sups[1] / sups[0] <= 0.6
    assert 0.4 <= sups[2] / sups[1] <= 0.6


def test_jacobi_a_n_scaling_bounded():
    scaled = []
    for n in (50, 100, 200):
        spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=2.0), n)
        scaled.append(g.jacobi_report(spec, n).a_n_scaled)
    assert scaled[1] <= 1.2 * scaled[0] and scaled[2] <= 1.2 * scaled[1]


def test_jacobi_refuses_alpha_out_of_range():
    spec = g.chi_spectrum(g.ProblemParams(alpha=2.0, c=2.0), 10)
    with pytest.raises(ValueError, match=r"alpha must lie in \(0,3/2\)"):
        g.jacobi_uniform(spec, 10, 0.1)


def test_jacobi_refuses_large_q():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=8.0), 4)
    with pytest.raises(ValueError, match="q ="):
        g.jacobi_uniform(spec, 4, 0.1, q0=0.5)


def test_jacobi_two_parameter_rate_sweep():
    # log-log slopes: ~ -1 in n at fixed c, ~ +2 in c at fixed n
    ns = np.array([40, 80, 160])
    errs_n = []
    for n in ns:
        spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=2.0), int(n))
        errs_n.append(g.jacobi_report(spec, int(n)).sup_error)
    slope_n = np.polyfit(np.log(ns), np.log(errs_n), 1)[0]
    assert abs(slope_n + 1.0) <= 0.15

    cs = np.array([0.5, 1.0, 2.0])
    errs_c = []
    for c in cs:
        spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=float(c)), 100)
        errs_c.append(g.jacobi_report(spec, 100).sup_error)
    slope_c = np.polyfit(np.log(cs), np.log(errs_c), 1)[0]
    assert abs(slope_c - 2.0) <= 0.15


def test_reports_on_custom_grid():
    spec = g.chi_spectrum(g.ProblemParams(alpha=0.5, c=3.0), 30)
    rep = g.bessel_report(spec, 30, grid=default_grid(301))
    assert rep.grid.shape == rep.approx.shape == rep.reference.shape
    rep2 = g.jacobi_report(spec, 30, grid=symmetric_grid(301))
    assert rep2.grid.shape == (301,)
