"""Gap-probability generating functions: Nystrom Fredholm determinants and
trace corrections for the bulk kernels, the exact finite-N circular-unitary
generating function, and the beta = 1, 4 combination formulas."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import KernelSpec, kernel_eval
from .numerics import (chebyshev_interpolate, chebyshev_points, gauss_legendre,
                       spectral_derivative)


class AccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GapResult:
    s: float
    xi: float
    beta: int
    E0: float
    E1: float
    quad_order: int


@lru_cache(maxsize=256)
def _gl_cached(n: int):
    rule = gauss_legendre(n, 0.0, 1.0)
    return rule.nodes, rule.weights


def _nystrom_matrix(kernel: KernelSpec, s: float, xi: float, n: int):
    x01, w01 = _gl_cached(n)
    x = s * x01
    sw = np.sqrt(s * w01)
    K = kernel_eval(kernel, x[:, None], x[None, :])
    return np.eye(n) - xi * (sw[:, None] * K * sw[None, :]), x, sw


def _det_fixed(kernel: KernelSpec, s: float, xi: float, n: int) -> float:
    M, _, _ = _nystrom_matrix(kernel, s, xi, n)
    return float(np.linalg.det(M))


def fredholm_det(kernel: KernelSpec, s: float, xi: float, n: int = 64,
                 converge: bool = True) -> float:
    """det(I - xi K restricted to (0, s)) by Nystrom discretization.

    With converge=True the order doubles (up to 256) until the value moves by
    less than 1e-10; an AccuracyWarning is issued if that is never reached.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s == 0.0 or xi == 0.0:
        return 1.0
    n = max(n, 16)
    val = _det_fixed(kernel, s, xi, n)
    if not converge:
        return val
    while n < 256:
        n *= 2
        new = _det_fixed(kernel, s, xi, n)
        if abs(new - val) < 1e-10:
            return new
        val = new
    warnings.warn(f"Fredholm determinant not converged at order {n}", AccuracyWarning)
    return val


def fredholm_trace_correction(kernel_k: KernelSpec, kernel_l: KernelSpec, s: float,
                              xi: float, n: int = 64, converge: bool = True) -> float:
    """-det(I - xi K) Tr((I - xi K)^{-1} xi L) on (0, s), shared Nystrom grid."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s == 0.0 or xi == 0.0:
        return 0.0

    def value(order):
        M, x, sw = _nystrom_matrix(kernel_k, s, xi, order)
        L = xi * (sw[:, None] * kernel_eval(kernel_l, x[:, None], x[None, :]) * sw[None, :])
        return -float(np.linalg.det(M)) * float(np.trace(np.linalg.solve(M, L)))

    n = max(n, 16)
    val = value(n)
    if not converge:
        return val
    while n < 256:
        n *= 2
        new = value(n)
        if abs(new - val) < 1e-10:
            return new
        val = new
    warnings.warn(f"trace correction not converged at order {n}", AccuracyWarning)
    return val


_K = {+1: KernelSpec("plus"), -1: KernelSpec("minus")}
_L = {+1: KernelSpec("l_plus"), -1: KernelSpec("l_minus")}
_SINE = KernelSpec("sine")
_LKER = KernelSpec("l")


def e_pm(sign: int, order: int, s: float, xi: float, n: int = 64,
         converge: bool = False) -> float:
    """E_order^+- (s; xi): Fredholm data of the +- kernels on (0, s/2)."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if order == 0:
        return fredholm_det(_K[sign], s / 2.0, xi, n, converge)
    if order == 1:
        return fredholm_trace_correction(_K[sign], _L[sign], s / 2.0, xi, n, converge)
    raise ValueError("order must be 0 or 1")


def e_bulk(beta: int, order: int, s: float, xi: float, n: int = 64,
           converge: bool = False) -> float:
    """Bulk gap generating function term E_order for beta in {1, 2, 4}.

    order 0 is the limit, order 1 the coefficient of 1/N^2.
    """
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    if s < 0:
        raise ValueError("s must be nonnegative")
    if xi == 0.0 or s == 0.0:
        return 1.0 if order == 0 else 0.0
    if beta == 2:
        if order == 0:
            return fredholm_det(_SINE, s, xi, n, converge)
        return fredholm_trace_correction(_SINE, _LKER, s, xi, n, converge)
    if beta == 1:
        xh = 2.0 * xi - xi * xi
        minus = e_pm(-1, order, s, xh, n, converge)
        plus = e_pm(+1, order, s, xh, n, converge)
        return ((1.0 - xi) * minus + plus) / (2.0 - xi)
    if beta == 4:
        # orthogonal-group dimension 2N+1: operators act on (0, s) and the
        # correction picks up a further factor 1/4
        minus = e_pm(-1, order, 2.0 * s, xi, n, converge)
        plus = e_pm(+1, order, 2.0 * s, xi, n, converge)
        return (minus + plus) / (2.0 if order == 0 else 8.0)
    raise ValueError("beta must be 1, 2, or 4")


def gap_probabilities(beta: int, s: float, xi: float, n: int = 64) -> GapResult:
    return GapResult(s, xi, beta, e_bulk(beta, 0, s, xi, n), e_bulk(beta, 1, s, xi, n), n)


def e_finite_cue(N: int, phi: float, xi: float) -> float:
    """Exact generating function of the interval count on (0, phi) for the
    N-dimensional circular unitary ensemble (rank-N Toeplitz determinant)."""
    if N < 1:
        raise ValueError("N must be positive")
    if not 0.0 <= phi <= 2.0 * np.pi + 1e-12:
        raise ValueError("phi must lie in [0, 2 pi]")
    if xi == 0.0 or phi == 0.0:
        return 1.0
    j = np.arange(N)
    dif = j[:, None] - j[None, :]
    A = np.empty((N, N), dtype=complex)
    nz = dif != 0
    A[nz] = (np.exp(1j * dif[nz] * phi) - 1.0) / (2j * np.pi * dif[nz])
    A[~nz] = phi / (2.0 * np.pi)
    ev = np.linalg.eigvalsh(A)
    return float(np.prod(1.0 - xi * ev))


@dataclass(frozen=True)
class CorrectionEstimate:
    E0: float
    E1: float
    residual_order: float


def extract_correction(N_list, s: float, xi: float) -> CorrectionEstimate:
    """Richardson extrapolation of e_finite_cue(N, 2 pi s / N, xi) in powers
    of 1/N^2: limit, first correction, and the empirical order of what is
    left after removing them."""
    Ns = np.asarray(sorted(N_list), float)
    if Ns.size < 3:
        raise ValueError("need at least 3 values of N")
    F = np.array([e_finite_cue(int(N), 2.0 * np.pi * s / N, xi) for N in Ns])
    diffs = np.diff(F)
    if np.any(diffs == 0) or np.any(np.sign(diffs) != np.sign(diffs[0])):
        warnings.warn("non-monotone data; fit may be unreliable", AccuracyWarning)
    h = 1.0 / Ns ** 2
    # exact three-term fit {1, h, h^2} through the finest three values
    A = np.vander(h[-3:], 3, increasing=True)
    c = np.linalg.solve(A, F[-3:])
    e0, e1 = float(c[0]), float(c[1])
    # pairwise Richardson limits; their defect from the limit decays like N^-4
    R = (F[1:] * h[:-1] - F[:-1] * h[1:]) / (h[:-1] - h[1:])
    if Ns.size >= 4:
        d = np.abs(np.diff(R))
        orders = np.log(d[:-1] / d[1:]) / np.log(Ns[1:-1] / Ns[:-2])
    else:
        d = np.abs(R - e0)
        orders = np.log(d[:-1] / d[1:]) / np.log(Ns[1:-1] / Ns[:-2])
    return CorrectionEstimate(e0, e1, float(np.mean(orders)))


def verify_gap_identity(beta: int, s_grid, xi: float, n_cheb: int = 64,
                        n_quad: int = 64) -> float:
    """Max residual of E_1 = -(s^2 / c_beta)(d^2/ds^2) E_0 with
    c_beta = 12, 6, 24 for beta = 2, 1, 4."""
    c = {1: 6.0, 2: 12.0, 4: 24.0}[beta]
    s_grid = np.asarray(s_grid, float)
    hi = 1.05 * float(s_grid.max())
    xs = chebyshev_points(n_cheb, 0.0, hi)
    e0 = np.array([e_bulk(beta, 0, s, xi, n_quad) for s in xs])
    d2 = spectral_derivative(e0, 2, 0.0, hi)
    e1 = np.array([e_bulk(beta, 1, s, xi, n_quad) for s in xs])
    resid = e1 + xs ** 2 / c * d2
    return float(np.max(np.abs(chebyshev_interpolate(resid, 0.0, hi, s_grid))))


def verify_pm_identity(sign: int, s_grid, xi: float, n_cheb: int = 64,
                       n_quad: int = 64) -> float:
    """Max residual of E_1^+- = -(s^2/6)(d^2/ds^2) E_0^+-."""
    s_grid = np.asarray(s_grid, float)
    hi = 1.05 * float(s_grid.max())
    xs = chebyshev_points(n_cheb, 0.0, hi)
    e0 = np.array([e_pm(sign, 0, s, xi, n_quad) if s > 0 else 1.0 for s in xs])
    d2 = spectral_derivative(e0, 2, 0.0, hi)
    e1 = np.array([e_pm(sign, 1, s, xi, n_quad) if s > 0 else 0.0 for s in xs])
    resid = e1 + xs ** 2 / 6.0 * d2
    return float(np.max(np.abs(chebyshev_interpolate(resid, 0.0, hi, s_grid))))
