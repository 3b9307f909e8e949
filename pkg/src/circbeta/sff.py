"""Structure functions (spectral form factors): exact finite-N values for
beta = 1, 2, 4, bulk expansion terms through order 1/N^4, the general-beta
small-tau series, and the differential/functional identities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numerics import digamma

F = Fraction
TWO_PI = 2.0 * math.pi


def sff_exact(beta: int, N: int, k: int) -> float:
    """Structure function S_{N, beta}(k); digamma-based for beta = 1, 4."""
    if N < 2:
        raise ValueError("need N >= 2")
    k = abs(int(k))
    if beta == 2:
        return min(k, N) / TWO_PI
    if beta == 1:
        if k < N:
            v = 2.0 * k - k * (digamma(k + (N + 1) / 2.0) - digamma((N + 1) / 2.0))
        else:
            v = 2.0 * N - k * (digamma(k + (N + 1) / 2.0) - digamma(k + (1 - N) / 2.0))
        return v / TWO_PI
    if beta == 4:
        if k >= 2 * N - 1:
            return N / TWO_PI
        arg = -N + k + 0.5
        psi = digamma(arg) if arg > 0 else digamma(1.0 - arg)  # reflection
        return (k / 2.0) * (1.0 + 0.5 * (digamma(N + 0.5) - psi)) / TWO_PI
    raise ValueError("beta must be 1, 2, or 4")


def sff_bulk_scaled(beta: int, N: int, tau: float) -> float:
    """(2 pi / N) S_{N, beta}(tau N); tau N is rounded to the integer lattice."""
    return TWO_PI * sff_exact(beta, N, round(tau * N)) / N


def _s0_derivs_beta1(t: float):
    """S0 and its first four derivatives for beta = 1 (branches at tau = 1)."""
    if t <= 1.0:
        u = 1.0 + 2.0 * t
        s0 = 2.0 * t - t * math.log(u)
        d2 = -2.0 / u - 2.0 / u ** 2
        d3 = 4.0 / u ** 2 + 8.0 / u ** 3
        d4 = -16.0 / u ** 3 - 48.0 / u ** 4
    else:
        q = 4.0 * t * t - 1.0
        s0 = 2.0 - t * math.log((2.0 * t + 1.0) / (2.0 * t - 1.0))
        d2 = -8.0 / q ** 2
        d3 = 128.0 * t / q ** 3
        d4 = 128.0 / q ** 3 - 3072.0 * t * t / q ** 4
    return s0, d2, d3, d4


def _s0_derivs_beta4(t: float):
    if t >= 2.0:
        return 1.0, 0.0, 0.0, 0.0
    a = 1.0 - t
    s0 = t / 2.0 - (t / 4.0) * math.log(abs(a))
    d2 = (2.0 - t) / (4.0 * a ** 2)
    d3 = (3.0 - t) / (4.0 * a ** 3)
    d4 = (4.0 - t) / (2.0 * a ** 4)
    return s0, d2, d3, d4


X6_C = {1: -1.0 / 6.0, 4: -1.0 / 24.0}
X6_D = {1: 7.0 / 360.0, 4: 7.0 / 5760.0}


def sff_bulk_term(beta: int, order: int, tau: float) -> float:
    """Bulk expansion term S_order(tau); order 0 is the limit curve."""
    t = abs(float(tau))
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1, or 2")
    if beta == 2:
        return min(t, 1.0) if order == 0 else 0.0
    if beta == 1:
        if order == 0:
            return _s0_derivs_beta1(t)[0]
        if order == 1:
            if t <= 1.0:
                return (t / 6.0) * (1.0 - 1.0 / (1.0 + 2.0 * t) ** 2)
            return 4.0 * t * t / (3.0 * (4.0 * t * t - 1.0) ** 2)
        _, d2, d3, d4 = _s0_derivs_beta1(t)
        return X6_D[1] * (t ** 4 * d4 + 8.0 * t ** 3 * d3 + 12.0 * t * t * d2)
    if beta == 4:
        if t == 1.0:
            raise ValueError("logarithmic singularity at tau = 1 for beta = 4")
        if order == 0:
            return _s0_derivs_beta4(t)[0]
        if order == 1:
            if t >= 2.0:
                return 0.0
            return (t / 96.0) * (1.0 - 1.0 / (t - 1.0) ** 2)
        _, d2, d3, d4 = _s0_derivs_beta4(t)
        return X6_D[4] * (t ** 4 * d4 + 8.0 * t ** 3 * d3 + 12.0 * t * t * d2)
    raise ValueError("beta must be 1, 2, or 4")


# ---------------------------------------------------------------------------
# Small-tau series for general beta > 0, kappa = beta/2, exact coefficients

ONE = (F(1),)
P2 = (F(1), F(-11, 6), F(1))
P4 = (F(1), F(-91, 30), F(62, 15), F(-91, 30), F(1))
Q2 = (F(1), F(-3, 2), F(1))
Q4 = (F(1), F(-37, 15), F(13, 4), F(-37, 15), F(1))
R2 = (F(1), F(15, 8), F(1))
R4 = (F(1), F(31, 42), F(-116, 42), F(31, 42), F(1))
P6 = (F(1), F(-1607, 420), F(2011, 280), F(-911, 105), F(2011, 280),
      F(-1607, 420), F(1))
Q6 = (F(1), F(-263, 84), F(1697, 315), F(-6337, 1008), F(1697, 315),
      F(-263, 84), F(1))

POLYNOMIALS = {"p2": P2, "p4": P4, "q2": Q2, "q4": Q4, "r2": R2, "r4": R4,
               "p6": P6, "q6": Q6}

# per (order, tau power): prefactor, power of (kappa - 1), polynomial, kappa power
_SERIES = {
    (0, 1): (F(1), 0, ONE, 1),
    (0, 2): (F(1), 1, ONE, 2),
    (0, 3): (F(1), 2, ONE, 3),
    (0, 4): (F(1), 1, P2, 4),
    (0, 5): (F(1), 2, Q2, 5),
    (0, 6): (F(1), 1, P4, 6),
    (0, 7): (F(1), 2, Q4, 7),
    (0, 8): (F(1), 1, P6, 8),     # p6 reading; see series_coefficient(tau8=...)
    (1, 2): (F(-1, 6), 1, ONE, 3),
    (1, 3): (F(-1, 2), 2, ONE, 4),
    (1, 4): (F(-1), 1, P2, 5),
    (1, 5): (F(-5, 3), 2, Q2, 6),
    (1, 6): (F(-5, 2), 1, P4, 7),
    (2, 2): (F(1, 30), 1, (F(1), F(1), F(1)), 5),
    (2, 3): (F(2, 15), 2, R2, 6),
    (2, 4): (F(7, 20), 1, R4, 7),
}

SERIES_POWERS = {0: tuple(range(1, 9)), 1: tuple(range(2, 7)), 2: (2, 3, 4)}


def _poly_at(poly, kappa):
    acc = 0 * kappa
    for c in reversed(poly):
        acc = acc * kappa + (c if isinstance(kappa, Fraction) else float(c))
    return acc


def series_coefficient(order: int, m: int, kappa, tau8: str = "p6"):
    """Coefficient of tau^m in the order-th expansion term; exact when kappa
    is a Fraction. tau8 selects the tau^8 polynomial ("p6" or the literal "p4")."""
    rec = _SERIES.get((order, m))
    if rec is None:
        raise ValueError(f"no stored coefficient at order {order}, power {m}")
    pref, e, poly, kpow = rec
    if (order, m) == (0, 8) and tau8 == "p4":
        poly = P4
    exact = isinstance(kappa, Fraction)
    one = F(1) if exact else 1.0
    pref = pref if exact else float(pref)
    return pref * (kappa - one) ** e * _poly_at(poly, kappa) / kappa ** kpow


def sff_series(beta: float, order: int, tau: float, tau8: str = "p6") -> float:
    """Truncated small-tau series of the order-th expansion term."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if order not in SERIES_POWERS:
        raise ValueError("order must be 0, 1, or 2")
    kappa = beta / 2.0
    t = abs(float(tau))
    return float(sum(series_coefficient(order, m, kappa, tau8) * t ** m
                     for m in SERIES_POWERS[order]))


def _c_coeff(kappa):
    one = F(1) if isinstance(kappa, Fraction) else 1.0
    return -one / (12 * kappa)


def _d_coeff(kappa):
    one = F(1) if isinstance(kappa, Fraction) else 1.0
    if kappa == one:
        return one * 3 / 720
    return (kappa ** 3 - one) / (720 * kappa ** 3 * (kappa - one))


@dataclass(frozen=True)
class X6Report:
    residual1: float
    residual2: float


def verify_x6(beta: float, tau_grid=None) -> X6Report:
    """Residuals of the two correction-to-limit differential relations.

    For beta in {1, 4} the closed forms are compared on tau_grid with analytic
    derivatives. For other beta the check is series-level: coefficients of the
    stored expansions against the relations with c = -1/(12 kappa) and
    d = (kappa^3 - 1)/(720 kappa^3 (kappa - 1)).
    """
    if beta in (1, 4):
        if tau_grid is None:
            # beta = 4 has a logarithmic singularity at tau = 1
            tau_grid = np.linspace(0.1, 0.9, 9) if beta == 1 else \
                np.concatenate([np.linspace(0.1, 0.9, 9), np.linspace(1.1, 1.9, 9)])
        derivs = _s0_derivs_beta1 if beta == 1 else _s0_derivs_beta4
        r1 = r2 = 0.0
        for t in np.asarray(tau_grid, float):
            _, d2, d3, d4 = derivs(float(t))
            s1 = sff_bulk_term(beta, 1, float(t))
            s2 = sff_bulk_term(beta, 2, float(t))
            r1 = max(r1, abs(s1 - X6_C[beta] * t * t * d2))
            r2 = max(r2, abs(s2 - X6_D[beta] * (t ** 4 * d4 + 8 * t ** 3 * d3
                                                + 12 * t * t * d2)))
        return X6Report(r1, r2)
    kappa = F(beta).limit_denominator(10 ** 6) / 2
    c, d = _c_coeff(kappa), _d_coeff(kappa)
    r1 = 0.0
    for m in SERIES_POWERS[1]:
        lhs = series_coefficient(1, m, kappa)
        rhs = c * m * (m - 1) * series_coefficient(0, m, kappa)
        r1 = max(r1, abs(float(lhs - rhs)))
    r2 = 0.0
    for m in SERIES_POWERS[2]:
        lhs = series_coefficient(2, m, kappa)
        rhs = d * m * (m - 1) * (m + 1) * (m + 2) * series_coefficient(0, m, kappa)
        r2 = max(r2, abs(float(lhs - rhs)))
    return X6Report(r1, r2)


# ---------------------------------------------------------------------------
# Functional symmetry and zero locations of the series polynomials

_SYMMETRY_KAPPAS = tuple(F(a, b) for a, b in
                         ((2, 1), (3, 1), (5, 2), (7, 3), (9, 4), (13, 5),
                          (4, 1), (11, 7), (17, 6), (23, 9)))


def _antisymmetry_holds(order: int, m: int, tau8: str) -> bool:
    """c(1/kappa) = (-1)^(m+1) kappa^(m + 2 order + 1) c(kappa), exactly."""
    for kap in _SYMMETRY_KAPPAS:
        lhs = series_coefficient(order, m, 1 / kap, tau8)
        rhs = (-1) ** (m + 1) * kap ** (m + 2 * order + 1) \
            * series_coefficient(order, m, kap, tau8)
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class SymmetryReport:
    antisymmetry_ok: bool
    tau8_p6_symmetric: bool
    tau8_p4_symmetric: bool
    max_root_modulus_deviation: float


def check_functional_symmetry_and_zeros() -> SymmetryReport:
    """Verify term-by-term antisymmetry of the series under kappa -> 1/kappa,
    tau -> -tau/kappa, and that the degree <= 4 polynomials have all zeros on
    the unit circle."""
    ok = all(_antisymmetry_holds(order, m, "p6")
             for order, powers in SERIES_POWERS.items() for m in powers)
    p6_ok = _antisymmetry_holds(0, 8, "p6")
    p4_ok = _antisymmetry_holds(0, 8, "p4")
    worst = 0.0
    for name in ("p2", "p4", "q2", "q4", "r2", "r4"):
        roots = np.roots([float(c) for c in reversed(POLYNOMIALS[name])])
        worst = max(worst, float(np.max(np.abs(np.abs(roots) - 1.0))))
    return SymmetryReport(ok, p6_ok, p4_ok, worst)
