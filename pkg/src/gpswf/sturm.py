"""Sturm-Liouville eigenproblem for the generalized prolate functions.

The differential operator commuting with the weighted finite Fourier
transform is discretized in the orthonormal symmetric-Jacobi basis
Ptilde_k^(alpha, alpha).  There the curvature part is diagonal with entries
k (k + 2 alpha + 1) and the c^2 x^2 potential couples k-2, k, k+2 through
the squared multiplication-by-x recurrence, so the operator splits into two
symmetric tridiagonal blocks (even and odd degrees).  Eigenvalues chi_n and
Jacobi coefficient vectors of the eigenfunctions psi_n come out of a
symmetric tridiagonal eigensolve per parity block.

Normalization: int psi_n^2 (1-x^2)^alpha dx = 1 (automatic, the basis is
orthonormal) and psi_n(1) > 0 (sign fixed after the solve).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .specfun import (
    jacobi_h,
    jacobi_series_deriv_coeffs,
    jacobi_series_eval,
    sym_offdiag,
)


@dataclass(frozen=True)
class ProblemParams:
    """Weight exponent alpha and bandwidth c of the operator family."""

    alpha: float
    c: float

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if not self.c >= 0:
            raise ValueError(f"bandwidth c must be nonnegative, got {self.c}")


class TruncationError(RuntimeError):
    """Raised when the Jacobi basis is too short for the requested modes."""

    def __init__(self, msg: str, required: int):
        super().__init__(msg)
        self.required = required


def default_truncation(n_max: int, c: float) -> int:
    # coefficient decay is super-exponential past the turning region,
    # so a fixed margin beyond n_max + O(c) is ample
    return n_max + max(32, math.ceil(1.2 * c) + 10)


def _normalized_value_at_one(alpha: float, n_trunc: int) -> np.ndarray:
    # Ptilde_k(1) = binom(k+alpha, k) / sqrt(h_k), in log space
    k = np.arange(n_trunc, dtype=float)
    log_p1 = gammaln(k + alpha + 1.0) - gammaln(alpha + 1.0) - gammaln(k + 1.0)
    log_h = np.array([math.log(jacobi_h(int(m), alpha, alpha)) for m in range(n_trunc)])
    return np.exp(log_p1 - 0.5 * log_h)


@dataclass(frozen=True)
class ChiSpectrum:
    """Eigenvalues chi_n and Jacobi coefficient vectors of psi_0..psi_n_max."""

    params: ProblemParams
    n_max: int
    n_trunc: int
    chis: np.ndarray     # shape (n_max+1,)
    coeffs: np.ndarray   # shape (n_max+1, n_trunc); opposite-parity rows are 0

    def chi(self, n: int) -> float:
        return float(self.chis[n])

    def q(self, n: int) -> float:
        """Spectral ratio c^2 / chi_n (the oscillatory regime has q < 1)."""
        return self.params.c ** 2 / self.chi(n)

    @property
    def parities(self) -> np.ndarray:
        """Per-mode parity flags; psi_n(-x) = (-1)^n psi_n(x)."""
        return np.arange(self.n_max + 1) % 2

    def eigenfunction(self, n: int) -> "GpswfFunction":
        if not 0 <= n <= self.n_max:
            raise ValueError(f"mode index {n} outside computed range 0..{self.n_max}")
        return GpswfFunction(spectrum=self, n=n)


@dataclass(frozen=True)
class GpswfFunction:
    """Evaluable eigenfunction psi_n with value and derivatives on [-1, 1]."""

    spectrum: ChiSpectrum
    n: int

    @property
    def params(self) -> ProblemParams:
        return self.spectrum.params

    @property
    def chi(self) -> float:
        return self.spectrum.chi(self.n)

    @property
    def coeffs(self) -> np.ndarray:
        return self.spectrum.coeffs[self.n]

    def value(self, x):
        return jacobi_series_eval(self.coeffs, self.params.alpha, x)

    __call__ = value

    def derivative(self, x):
        a = self.params.alpha
        d1 = jacobi_series_deriv_coeffs(self.coeffs, a)
        if len(d1) == 0:
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        return jacobi_series_eval(d1, a + 1.0, x)

    def second_derivative(self, x):
        a = self.params.alpha
        d1 = jacobi_series_deriv_coeffs(self.coeffs, a)
        if len(d1) <= 1:
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        d2 = jacobi_series_deriv_coeffs(d1, a + 1.0)
        return jacobi_series_eval(d2, a + 2.0, x)


def gpswf_eval(f: GpswfFunction, x):
    return f.value(x)


def gpswf_deriv(f: GpswfFunction, x):
    return f.derivative(x)


def ode_residual(f: GpswfFunction, x, chi: float | None = None):
    """Left-hand side of (1-x^2) psi'' - 2(alpha+1) x psi' + (chi - c^2 x^2) psi.

    Vanishes (to solver accuracy) at the computed chi; a perturbed chi makes
    it grow, which is the diagnostic use.
    """
    p = f.params
    chi_val = f.chi if chi is None else chi
    arr = np.asarray(x, dtype=float)
    val = f.value(arr)
    d1 = f.derivative(arr)
    d2 = f.second_derivative(arr)
    out = (1.0 - arr * arr) * d2 - 2.0 * (p.alpha + 1.0) * arr * d1 \
        + (chi_val - p.c ** 2 * arr * arr) * val
    return out if np.ndim(x) else float(out)


_TAIL_TOL = 1e-12


@lru_cache(maxsize=512)
def _solve(alpha: float, c: float, n_max: int, n_trunc: int) -> ChiSpectrum:
    params = ProblemParams(alpha=alpha, c=c)
    b = sym_offdiag(alpha, n_trunc + 1)
    b2 = b * b
    k = np.arange(n_trunc, dtype=float)
    diag_full = k * (k + 2 * alpha + 1) + c * c * (b2[:n_trunc] + b2[1:n_trunc + 1])

    chis = np.empty(n_max + 1)
    coeffs = np.zeros((n_max + 1, n_trunc))
    p1 = _normalized_value_at_one(alpha, n_trunc)

    for parity in (0, 1):
        idx = np.arange(parity, n_trunc, 2)
        if idx.size == 0:
            continue
        d = diag_full[idx]
        e = c * c * b[idx[:-1] + 1] * b[idx[:-1] + 2]
        vals, vecs = eigh_tridiagonal(d, e)
        n_here = np.arange(parity, n_max + 1, 2)
        for m, n in enumerate(n_here):
            v = vecs[:, m]
            tail = float(v[-2] ** 2 + v[-1] ** 2)
            if tail > _TAIL_TOL:
                raise TruncationError(
                    f"truncation N={n_trunc} too small for mode n={n} at "
                    f"(alpha={alpha}, c={c}): trailing coefficient mass {tail:.3e}; "
                    f"retry with n_trunc={2 * n_trunc}",
                    required=2 * n_trunc,
                )
            if float(np.dot(v, p1[idx])) < 0:
                v = -v
            chis[n] = vals[m]
            coeffs[n, idx] = v

    # cached instances are shared; freeze the arrays
    chis.flags.writeable = False
    coeffs.flags.writeable = False
    return ChiSpectrum(params=params, n_max=n_max, n_trunc=n_trunc,
                       chis=chis, coeffs=coeffs)


def chi_spectrum(params: ProblemParams, n_max: int, n_trunc: int | None = None) -> ChiSpectrum:
    """Solve for chi_0..chi_n_max and the eigenfunction coefficient vectors.

    Results are cached per (alpha, c, n_max, n_trunc) and immutable, so
    repeated calls (e.g. along a bandwidth sweep) are cheap.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    n = default_truncation(n_max, params.c) if n_trunc is None else n_trunc
    if n < n_max + 3:
        raise ValueError(f"n_trunc={n} too small for n_max={n_max}")
    return _solve(params.alpha, params.c, n_max, n)
