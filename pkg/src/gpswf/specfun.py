"""Special functions and quadrature for the GPSWF solver stack.

Everything here is double precision, pure and deterministic: Gamma/Beta,
Bessel J/Y of real order, complete and incomplete Legendre elliptic
integrals, the elliptic arc-length map S used by the Liouville transform,
symmetric Jacobi polynomials with their orthonormal normalization,
Gauss-Jacobi quadrature for the weight (1-y^2)^alpha, and the envelope
constants (m_alpha, c_alpha, kappa_alpha, X_alpha, ...) that control the
Bessel-form error bounds.

Elliptic integrals follow the modulus convention: K(r), E(r) with
0 <= r < 1, i.e. ``K(r) = int_0^1 dt / sqrt((1-t^2)(1-r^2 t^2))``.
SciPy's ellipk/ellipe take the parameter m = r^2, so calls below square
the modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as _sp
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq


def _as_float_array(x):
    return np.asarray(x, dtype=float)


def _maybe_scalar(out, x):
    if np.ndim(x) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Gamma / Beta
# ---------------------------------------------------------------------------

def gamma_fn(x: float) -> float:
    """Gamma function on the positive half line."""
    if x <= 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return float(_sp.gamma(x))


def beta_fn(a: float, b: float) -> float:
    """Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError(f"beta_fn requires positive arguments, got ({a}, {b})")
    return float(_sp.beta(a, b))


def total_mass(alpha: float) -> float:
    """Total mass of the weight: int_{-1}^{1} (1-y^2)^alpha dy."""
    if alpha <= -1:
        raise ValueError(f"weight exponent must exceed -1, got {alpha}")
    return 2.0 ** (2 * alpha + 1) * beta_fn(alpha + 1.0, alpha + 1.0)


# ---------------------------------------------------------------------------
# Bessel functions of real order
# ---------------------------------------------------------------------------

def bessel_j(nu: float, x):
    """J_nu(x) for real order nu >= -1/2 and x >= 0. Accepts arrays."""
    if nu < -0.5:
        raise ValueError(f"bessel_j requires nu >= -1/2, got {nu}")
    arr = _as_float_array(x)
    if np.any(arr < 0):
        raise ValueError("bessel_j requires x >= 0")
    return _maybe_scalar(_sp.jv(nu, arr), x)


def bessel_y(nu: float, x):
    """Y_nu(x) for real order nu >= -1/2 and x > 0. Accepts arrays."""
    if nu < -0.5:
        raise ValueError(f"bessel_y requires nu >= -1/2, got {nu}")
    arr = _as_float_array(x)
    if np.any(arr <= 0):
        raise ValueError("bessel_y requires x > 0")
    return _maybe_scalar(_sp.yv(nu, arr), x)


# ---------------------------------------------------------------------------
# Elliptic integrals and the arc-length map S
# ---------------------------------------------------------------------------

def elliptic_K(r: float) -> float:
    """Complete elliptic integral of the first kind, modulus r in [0, 1)."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"elliptic_K requires 0 <= r < 1, got {r}")
    return float(_sp.ellipk(r * r))


def elliptic_E(r: float) -> float:
    """Complete elliptic integral of the second kind, modulus r in [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"elliptic_E requires 0 <= r <= 1, got {r}")
    return float(_sp.ellipe(r * r))


def s_map(x, q: float):
    """Arc-length map S(x) = int_x^1 sqrt((1-q t^2)/(1-t^2)) dt.

    Decreasing on [0, 1] with S(1) = 0 and S(0) = E(sqrt(q)).  Evaluated
    through the incomplete elliptic integral of the second kind after the
    substitution t = sin(theta), which removes the endpoint singularity.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"s_map requires 0 <= q < 1, got q={q}")
    arr = _as_float_array(x)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("s_map requires x in [0, 1]")
    out = _sp.ellipe(q) - _sp.ellipeinc(np.arcsin(arr), q)
    return _maybe_scalar(out, x)


def incomplete_K(x, q: float):
    """Incomplete first-kind integral K(x, sqrt(q)) = int_x^1 dt/sqrt((1-t^2)(1-q t^2))."""
    if not 0.0 <= q < 1.0:
        raise ValueError(f"incomplete_K requires 0 <= q < 1, got q={q}")
    arr = _as_float_array(x)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("incomplete_K requires x in [0, 1]")
    out = _sp.ellipk(q) - _sp.ellipkinc(np.arcsin(arr), q)
    return _maybe_scalar(out, x)


# ---------------------------------------------------------------------------
# Jacobi polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiParams:
    """Degree and exponents of a Jacobi polynomial P_n^(alpha, beta)."""

    alpha: float
    beta: float
    n: int

    def __post_init__(self):
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError("Jacobi exponents must exceed -1")
        if self.n < 0:
            raise ValueError("Jacobi degree must be nonnegative")


def _check_unit_interval(x):
    arr = _as_float_array(x)
    if np.any(np.abs(arr) > 1.0 + 1e-14):
        raise ValueError("Jacobi polynomials are evaluated on [-1, 1]")
    return arr


def jacobi_p(params: JacobiParams, x):
    """P_n^(alpha, beta)(x) by the three-term recurrence."""
    a, b, n = params.alpha, params.beta, params.n
    arr = _check_unit_interval(x)
    p_prev = np.ones_like(arr)
    if n == 0:
        return _maybe_scalar(p_prev, x)
    p = 0.5 * (a + b + 2) * arr + 0.5 * (a - b)
    for k in range(1, n):
        s = 2 * k + a + b
        ak = (s + 1) * (s + 2) / (2 * (k + 1) * (k + a + b + 1))
        bk = (a * a - b * b) * (s + 1) / (2 * (k + 1) * (k + a + b + 1) * s)
        ck = (k + a) * (k + b) * (s + 2) / ((k + 1) * (k + a + b + 1) * s)
        p, p_prev = (ak * arr + bk) * p - ck * p_prev, p
    return _maybe_scalar(p, x)


def jacobi_h(n: int, alpha: float, beta: float) -> float:
    """Squared weighted L2 norm h_n of P_n^(alpha, beta).

    Computed in log space so it stays finite for degrees far beyond the
    overflow point of the Gamma function.
    """
    a, b = float(alpha), float(beta)
    if n == 0:
        return 2.0 ** (a + b + 1) * beta_fn(a + 1, b + 1)
    log_h = (
        (a + b + 1) * math.log(2.0)
        + _sp.gammaln(n + a + 1)
        + _sp.gammaln(n + b + 1)
        + math.log(n + a + b + 1)
        - _sp.gammaln(n + 1)
        - math.log(2 * n + a + b + 1)
        - _sp.gammaln(n + a + b + 2)
    )
    return float(math.exp(log_h))


def jacobi_p_normalized(params: JacobiParams, x):
    """Orthonormal Jacobi polynomial: unit weighted L2 norm on [-1, 1]."""
    scale = 1.0 / math.sqrt(jacobi_h(params.n, params.alpha, params.beta))
    return jacobi_p(params, x) * scale


def jacobi_p_deriv(params: JacobiParams, x):
    """d/dx P_n^(alpha, beta) via the parameter-shift identity.

    d/dx P_n^(a,b) = (n + a + b + 1)/2 * P_{n-1}^(a+1, b+1); exact for the
    stored recurrence, no numerical differentiation.
    """
    a, b, n = params.alpha, params.beta, params.n
    if n == 0:
        arr = _check_unit_interval(x)
        return _maybe_scalar(np.zeros_like(arr), x)
    shifted = JacobiParams(a + 1.0, b + 1.0, n - 1)
    return jacobi_p(shifted, x) * (0.5 * (n + a + b + 1))


def sym_offdiag(alpha: float, kmax: int) -> np.ndarray:
    """Off-diagonal entries b_k of the orthonormal symmetric-Jacobi recurrence.

    x Ptilde_k = b_{k+1} Ptilde_{k+1} + b_k Ptilde_{k-1} for the weight
    (1-x^2)^alpha.  Entry [k] holds b_k; b_0 = 0 by convention.  The k = 1
    entry is written in its cancelled form 1/(3+2a) so alpha = -1/2 stays
    finite.
    """
    b2 = np.zeros(kmax + 1)
    if kmax >= 1:
        b2[1] = 1.0 / (3.0 + 2.0 * alpha)
    if kmax >= 2:
        k = np.arange(2, kmax + 1, dtype=float)
        b2[2:] = k * (k + 2 * alpha) / ((2 * k + 2 * alpha + 1) * (2 * k + 2 * alpha - 1))
    return np.sqrt(b2)


def jacobi_series_eval(coeffs: np.ndarray, alpha: float, x):
    """Clenshaw evaluation of sum_k coeffs[k] * Ptilde_k^(alpha, alpha)(x)."""
    arr = _check_unit_interval(x)
    c = np.asarray(coeffs, dtype=float)
    n = len(c) - 1
    b = sym_offdiag(alpha, n + 2)
    u1 = np.zeros_like(arr)
    u2 = np.zeros_like(arr)
    for k in range(n, -1, -1):
        u1, u2 = c[k] + arr * u1 / b[k + 1] - (b[k + 1] / b[k + 2]) * u2, u1
    out = u1 / math.sqrt(jacobi_h(0, alpha, alpha))
    return _maybe_scalar(out, x)


def jacobi_series_deriv_coeffs(coeffs: np.ndarray, alpha: float) -> np.ndarray:
    """Coefficients of d/dx sum_k c_k Ptilde_k^(a,a) in the Ptilde^(a+1,a+1) basis.

    Uses d/dx Ptilde_k^(a,a) = sqrt(k (k + 2a + 1)) Ptilde_{k-1}^(a+1,a+1).
    """
    c = np.asarray(coeffs, dtype=float)
    k = np.arange(1, len(c), dtype=float)
    return c[1:] * np.sqrt(k * (k + 2 * alpha + 1))


def jacobi_normalized_table(n_max: int, alpha: float, x) -> np.ndarray:
    """Array of Ptilde_k^(alpha, alpha)(x) for k = 0..n_max, shape (n_max+1, len(x))."""
    arr = np.atleast_1d(_check_unit_interval(x))
    b = sym_offdiag(alpha, n_max + 1)
    table = np.empty((n_max + 1, arr.size))
    table[0] = 1.0 / math.sqrt(jacobi_h(0, alpha, alpha))
    if n_max >= 1:
        table[1] = arr * table[0] / b[1]
    for k in range(1, n_max):
        table[k + 1] = (arr * table[k] - b[k] * table[k - 1]) / b[k + 1]
    return table


# ---------------------------------------------------------------------------
# Gauss-Jacobi quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights exact to degree 2N-1 against (1-y^2)^alpha."""

    nodes: np.ndarray
    weights: np.ndarray
    alpha: float

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def gauss_jacobi(n_nodes: int, alpha: float) -> QuadratureRule:
    """N-node Gauss-Jacobi rule for the symmetric weight (1-y^2)^alpha.

    Golub-Welsch on the symmetric tridiagonal recurrence matrix; weights come
    from the squared first eigenvector components times the total mass.
    """
    if n_nodes < 1:
        raise ValueError("quadrature rule needs at least one node")
    if alpha <= -1:
        raise ValueError(f"weight exponent must exceed -1, got {alpha}")
    b = sym_offdiag(alpha, n_nodes - 1)
    try:
        vals, vecs = eigh_tridiagonal(np.zeros(n_nodes), b[1:])
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(
            f"Gauss-Jacobi eigen-iteration failed for N={n_nodes}, alpha={alpha}: {exc}"
        ) from exc
    weights = total_mass(alpha) * vecs[0, :] ** 2
    if np.any(np.diff(vals) <= 0) or np.any(weights <= 0):
        raise RuntimeError(
            f"Gauss-Jacobi rule invalid for N={n_nodes}, alpha={alpha}: "
            "nodes not increasing or weights not positive"
        )
    return QuadratureRule(nodes=vals, weights=weights, alpha=alpha)


# ---------------------------------------------------------------------------
# Envelope machinery for the Bessel-form error bounds
# ---------------------------------------------------------------------------

def eta_fn(alpha: float, x):
    """Oscillatory remainder of the Bessel moment int_0^x t J_alpha^2 dt - x/pi.

    Closed form: x^2/2 [J_a^2 + J_{a+1}^2] - alpha x J_a J_{a+1} - x/pi,
    written so the x -> 0 limit needs no special casing.
    """
    if alpha < -0.5:
        raise ValueError(f"eta_fn requires alpha >= -1/2, got {alpha}")
    arr = _as_float_array(x)
    if np.any(arr < 0):
        raise ValueError("eta_fn requires x >= 0")
    ja = _sp.jv(alpha, arr)
    jb = _sp.jv(alpha + 1.0, arr)
    out = 0.5 * arr * arr * (ja * ja + jb * jb) - alpha * arr * ja * jb - arr / math.pi
    return _maybe_scalar(out, x)


@dataclass(frozen=True)
class BesselEnvelopeConstants:
    """Order-dependent constants entering the Bessel-form error envelope."""

    alpha: float
    mu_alpha: float
    c_alpha: float
    m_alpha: float
    m_alpha_cap: float
    kappa_alpha: float
    x_alpha: float


def _sup_sqrt_x_j(alpha: float) -> float:
    # Olenko-style bound for sup_x sqrt(x) |J_alpha(x)|.
    if abs(alpha) <= 0.5:
        return math.sqrt(2.0 / math.pi)
    a3 = alpha ** (1.0 / 3.0)
    return 0.675 * math.sqrt(a3 + 1.9 / a3 + 1.1 / alpha)


def _first_zero_j_plus_y(alpha: float) -> float:
    """First positive root of J_alpha + Y_alpha, located by scan + brentq."""
    lo = max(1e-3, alpha if alpha >= 0.5 else 1e-3)
    hi = alpha + 6.0 if alpha > 0 else 6.0
    xs = np.linspace(lo, hi, 4096)
    f = _sp.jv(alpha, xs) + _sp.yv(alpha, xs)
    if f[0] > 0:
        # degenerate small-alpha case: the ratio -Y/J never reaches 1
        return 0.0
    idx = np.nonzero(f > 0)[0]
    if idx.size == 0:
        raise RuntimeError(f"failed to bracket the first zero of J+Y for alpha={alpha}")
    i = idx[0]
    fn = lambda t: _sp.jv(alpha, t) + _sp.yv(alpha, t)
    return float(brentq(fn, xs[i - 1], xs[i], xtol=1e-12, rtol=8.9e-16))


@lru_cache(maxsize=256)
def envelope_constants(alpha: float) -> BesselEnvelopeConstants:
    """All order-dependent envelope constants for a given alpha >= -1/2."""
    if alpha < -0.5:
        raise ValueError(f"envelope constants require alpha >= -1/2, got {alpha}")
    mu_a = abs(alpha * alpha - 0.25)
    mu_a1 = abs((alpha + 1.0) ** 2 - 0.25)
    c_a = _sup_sqrt_x_j(alpha)
    c_a1 = _sup_sqrt_x_j(alpha + 1.0)
    if abs(alpha) <= 0.5:
        m_a = 2.0 / math.pi
    else:
        ja = float(_sp.jv(alpha, alpha))
        ya = float(_sp.yv(alpha, alpha))
        m_a = max(-2.0 * alpha * ja * ya + 4.0 * alpha / math.pi,
                  alpha * (ja * ja + ya * ya))
    kappa = (0.8 * math.sqrt(2.0 / math.pi) * (mu_a + mu_a1)
             + 0.32 * (mu_a * mu_a + mu_a1 * mu_a1)
             + abs(alpha) * c_a * c_a1)
    m_cap = max(1.0 / math.pi, c_a * c_a - 1.0 / math.pi, kappa)
    x_a = _first_zero_j_plus_y(alpha)
    return BesselEnvelopeConstants(
        alpha=alpha, mu_alpha=mu_a, c_alpha=c_a, m_alpha=m_a,
        m_alpha_cap=m_cap, kappa_alpha=kappa, x_alpha=x_a,
    )


def weight_modulus(alpha: float, x):
    """Olver weight and modulus functions (E_alpha(x), M_alpha(x)) for x > 0.

    Piecewise about X_alpha, the first zero of J_alpha + Y_alpha; below it
    E = sqrt(-Y/J), M = sqrt(2 |Y| J), above it E = 1, M = sqrt(J^2 + Y^2),
    so M/E = sqrt(2) J below and the Hankel modulus above.
    """
    cst = envelope_constants(alpha)
    arr = _as_float_array(x)
    if np.any(arr <= 0):
        raise ValueError("weight_modulus requires x > 0")
    arr1 = np.atleast_1d(arr)
    j = _sp.jv(alpha, arr1)
    y = _sp.yv(alpha, arr1)
    e_out = np.ones_like(arr1)
    m_out = np.hypot(j, y)
    small = arr1 <= cst.x_alpha
    if np.any(small):
        e_out[small] = np.sqrt(-y[small] / j[small])
        m_out[small] = np.sqrt(2.0 * np.abs(y[small]) * j[small])
    if np.ndim(x) == 0:
        return float(e_out[0]), float(m_out[0])
    return e_out, m_out
