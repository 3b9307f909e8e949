"""Nonlinear-ODE route to the beta = 2 gap generating function: integrate the
second-order sigma transcendent through its differentiated third-order form,
build the first-correction transcendent from the proved algebraic relation,
and exponentiate the tau-function integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numerics import IntegrationFailure, OdeProblem, clenshaw_curtis, ode_integrate

# Exact series coefficients of sigma_0 at t = 0 as polynomials in xi over
# powers of pi: each coefficient is a dict {(xi_power, pi_power): Fraction}
# with the value sum Frac * xi^a / pi^b.


def _poly_mul(p, q):
    out = {}
    for (a1, b1), f1 in p.items():
        for (a2, b2), f2 in q.items():
            key = (a1 + a2, b1 + b2)
            out[key] = out.get(key, Fraction(0)) + f1 * f2
    return {k: v for k, v in out.items() if v != 0}


def _poly_add(p, q, scale=Fraction(1)):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, Fraction(0)) + scale * v
    return {k: v for k, v in out.items() if v != 0}


@lru_cache(maxsize=None)
def _sigma0_coeffs_exact(n_max: int):
    """Taylor coefficients c_1 .. c_n_max solving
    (t c'')^2 + 4 (t c' - c)(t c' - c + (c')^2) = 0 order by order."""
    c = [dict() for _ in range(n_max + 1)]
    if n_max >= 1:
        c[1] = {(1, 1): Fraction(-1)}
    if n_max >= 2:
        c[2] = {(2, 2): Fraction(-1)}
    for n in range(3, n_max + 1):
        rest = {}
        # (t sigma'')^2 at t^n: j + k = n + 2 with j, k >= 2, excluding the
        # c_n cross terms (j, k) = (2, n), (n, 2)
        for j in range(2, n + 1):
            k = n + 2 - j
            if 2 <= k <= n and not (j == 2 and k == n) and not (j == n and k == 2):
                term = _poly_mul(c[j], c[k])
                rest = _poly_add(rest, term, Fraction(j * (j - 1) * k * (k - 1)))
        # 4 A^2 at t^n, A_k = (k - 1) c_k
        for j in range(2, n - 1):
            k = n - j
            if k >= 2:
                rest = _poly_add(rest, _poly_mul(c[j], c[k]),
                                 Fraction(4 * (j - 1) * (k - 1)))
        # 4 A B at t^n, B = (sigma')^2; skip the linear (p, j, k) = (n, 1, 1)
        for p in range(2, n + 1):
            for j in range(1, n + 2 - p):
                k = n + 2 - p - j
                if k < 1 or (p == n and j == k == 1):
                    continue
                term = _poly_mul(c[p], _poly_mul(c[j], c[k]))
                rest = _poly_add(rest, term, Fraction(4 * (p - 1) * j * k))
        # linear coefficient of c_n is -4 (n-1)^2 c_1^2 = -4 (n-1)^2 xi^2/pi^2
        cn = {}
        for (a, b), f in rest.items():
            cn[(a - 2, b - 2)] = f / (4 * (n - 1) ** 2)
        c[n] = cn
    return tuple(tuple(sorted(ci.items())) for ci in c)


def _eval_poly(items, xi: float) -> float:
    return sum(float(f) * xi ** a / math.pi ** b for (a, b), f in items)


def sigma0_series(xi: float, n_terms: int) -> np.ndarray:
    """Taylor coefficients [c_0 .. c_n_terms] of the gap transcendent at t = 0."""
    if n_terms < 2:
        raise ValueError("need n_terms >= 2")
    if n_terms > 12:
        raise ValueError("coefficients beyond order 12 are unreliable in "
                         "double precision; refusing")
    coeffs = _sigma0_coeffs_exact(n_terms)
    return np.array([_eval_poly(ci, xi) for ci in coeffs])


def sigma1_series_exact(n_max: int):
    """Exact Taylor coefficients of -(1/12)(2 t s s' + t^2 s'') from the
    sigma_0 series, same dict-of-monomials representation."""
    c = [dict(ci) for ci in _sigma0_coeffs_exact(n_max)]
    out = [dict() for _ in range(n_max + 1)]
    for a in range(1, n_max + 1):
        for b in range(1, n_max + 1 - a):
            # 2 t sigma sigma' contributes 2 b c_a c_b at t^(a+b)
            out[a + b] = _poly_add(out[a + b], _poly_mul(c[a], c[b]), Fraction(2 * b))
    for a in range(2, n_max + 1):
        out[a] = _poly_add(out[a], c[a], Fraction(a * (a - 1)))
    return tuple(tuple(sorted(
        ((k, -v / 12) for k, v in oi.items() if v != 0))) for oi in out)


def sigma1_series(xi: float, n_terms: int) -> np.ndarray:
    return np.array([_eval_poly(ci, xi) for ci in sigma1_series_exact(n_terms)])


@dataclass(frozen=True)
class SigmaSolution:
    xi: float
    grid: np.ndarray
    sigma0: np.ndarray
    sigma0_prime: np.ndarray
    sigma0_doubleprime: np.ndarray
    ode_residual: np.ndarray
    t0: float
    sigma1: np.ndarray | None = None
    _dense: object = field(repr=False, default=None)

    @property
    def t_max(self) -> float:
        return float(self.grid[-1])


def _residual_d1y(t, s, sp, spp):
    return (t * spp) ** 2 + 4.0 * (t * sp - s) * (t * sp - s + sp * sp)


def solve_sigma0(xi: float, t_max: float, tol: float = 1e-12,
                 t0: float = 1e-2, residual_tol: float = 1e-8) -> SigmaSolution:
    """Integrate the third-order form of the sigma equation from series data
    at t0, monitoring the second-order residual pointwise."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError("xi must lie in [0, 1]")
    if t_max > 12.0 * np.pi:
        raise ValueError("t_max beyond supported range")
    if t_max <= t0 and xi > 0.0:
        raise ValueError("t_max must exceed the series start point")
    if xi == 0.0:
        grid = np.linspace(t0, max(t_max, t0), 32)
        z = np.zeros_like(grid)
        return SigmaSolution(0.0, grid, z, z.copy(), z.copy(), z.copy(), t0,
                             _dense=lambda t: np.zeros((3, np.size(t))))
    cs = sigma0_series(xi, 6)
    k = np.arange(cs.size)
    y0 = np.array([
        np.sum(cs * t0 ** k),
        np.sum(k[1:] * cs[1:] * t0 ** (k[1:] - 1)),
        np.sum(k[2:] * (k[2:] - 1) * cs[2:] * t0 ** (k[2:] - 2)),
    ])

    def rhs(t, y):
        s, sp, spp = y
        return np.array([sp, spp,
                         -(t * spp + 6.0 * t * sp * sp + 4.0 * t * t * sp
                           - 4.0 * s * (t + sp)) / (t * t)])

    traj = ode_integrate(OdeProblem(3, rhs, t0, y0), t_max, tol)
    s0, sp, spp = traj.states.T
    resid = _residual_d1y(traj.t, s0, sp, spp)
    bad = np.abs(resid) > residual_tol
    if np.any(bad):
        raise IntegrationFailure("sigma residual exceeded tolerance",
                                 float(traj.t[np.argmax(bad)]))
    return SigmaSolution(xi, traj.t, s0, sp, spp, resid, t0, _dense=traj.dense)


def sigma1_from_sigma0(sol: SigmaSolution) -> SigmaSolution:
    """Fill sigma_1 = -(2 t s s' + t^2 s'') / 12 pointwise."""
    t = sol.grid
    s1 = -(2.0 * t * sol.sigma0 * sol.sigma0_prime + t * t * sol.sigma0_doubleprime) / 12.0
    return SigmaSolution(sol.xi, t, sol.sigma0, sol.sigma0_prime,
                         sol.sigma0_doubleprime, sol.ode_residual, sol.t0, s1,
                         _dense=sol._dense)


def _tail_integral(sol: SigmaSolution, a: float, b: float, order: int, n: int = 128) -> float:
    rule = clenshaw_curtis(n, a, b)
    y = sol._dense(rule.nodes)
    t = rule.nodes
    if order == 0:
        vals = y[0]
    else:
        vals = -(2.0 * t * y[0] * y[1] + t * t * y[2]) / 12.0
    return float(np.sum(rule.weights * vals / t))


def _series_integral(xi: float, t0: float, order: int) -> float:
    coeffs = sigma0_series(xi, 8) if order == 0 else sigma1_series(xi, 8)
    k = np.arange(1, coeffs.size)
    return float(np.sum(coeffs[1:] * t0 ** k / k))


def e_tau(sol: SigmaSolution, s: float, order: int) -> float:
    """Gap generating function from the tau-function integrals:
    order 0 gives exp int_0^(pi s) sigma_0/t, order 1 gives E_0 times the
    corresponding sigma_1 integral."""
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    if s < 0:
        raise ValueError("s must be nonnegative")
    upper = np.pi * s
    if upper > sol.t_max + 1e-12:
        raise ValueError(f"s = {s} beyond trajectory (t_max = {sol.t_max})")
    if sol.xi == 0.0 or s == 0.0:
        return 1.0 if order == 0 else 0.0
    split = min(sol.t0, upper)
    i0 = _series_integral(sol.xi, split, 0)
    if upper > split:
        i0 += _tail_integral(sol, split, upper, 0)
    e0 = math.exp(i0)
    if order == 0:
        return e0
    i1 = _series_integral(sol.xi, split, 1)
    if upper > split:
        i1 += _tail_integral(sol, split, upper, 1)
    return e0 * i1
