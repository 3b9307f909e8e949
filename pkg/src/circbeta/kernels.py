"""Scalar correlation kernels (finite-N circular unitary, bulk limit, 1/N^2
correction, +- symmetrized) and the Pfaffian kernel entry functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TAYLOR_CUT = 1e-4


def _sinc_pi(d):
    """sin(pi d)/(pi d) with a 6th-order Taylor patch near d = 0."""
    d = np.asarray(d, float)
    z = np.pi * d
    small = np.abs(z) < _TAYLOR_CUT
    zs = np.where(small, z, 1.0)
    series = 1.0 - zs * zs / 6.0 + zs ** 4 / 120.0 - zs ** 6 / 5040.0
    with np.errstate(invalid="ignore", divide="ignore"):
        full = np.where(small, series, np.sin(z) / np.where(small, 1.0, z))
    return full


def _cue_scaled(d, N):
    """sin(pi d) / (N sin(pi d / N)): bulk-scaled finite-N kernel, unit density."""
    d = np.asarray(d, float)
    m = np.rint(d / N)
    e = d - m * N                       # distance to the nearest removable point
    # sin(pi d) = (-1)^(mN) sin(pi e); N sin(pi d/N) = (-1)^m N sin(pi e/N)
    sign = np.where((np.rint(m * (N - 1)) % 2) == 0, 1.0, -1.0)
    tiny = np.abs(e) < _TAYLOR_CUT / np.pi
    safe_denom = np.where(tiny, 1.0, N * np.sin(np.pi * e / N))
    out = np.where(tiny, _sinc_pi(e) / _sinc_pi(e / N), np.sin(np.pi * e) / safe_denom)
    return sign * out


_FAMILIES = ("cue", "sine", "l", "plus", "minus", "l_plus", "l_minus")


@dataclass(frozen=True)
class KernelSpec:
    """A scalar kernel on bulk-scaled coordinates (mean spacing one).

    family: "cue" (finite N), "sine", "l" (the 1/N^2 correction kernel),
    "plus"/"minus" (sine kernel +- its reflection), "l_plus"/"l_minus".
    """

    family: str
    N: int | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family == "cue" and (self.N is None or self.N < 1):
            raise ValueError("cue kernel needs a positive N")


def _l_kernel(d):
    d = np.asarray(d, float)
    return (np.pi * d / 6.0) * np.sin(np.pi * d)


def kernel_eval(spec: KernelSpec, x, y):
    """Evaluate the kernel at (x, y); broadcasts over array arguments."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    fam = spec.family
    if fam == "sine":
        return _sinc_pi(x - y)
    if fam == "cue":
        return _cue_scaled(x - y, spec.N)
    if fam == "l":
        return _l_kernel(x - y)
    if fam == "plus":
        return _sinc_pi(x - y) + _sinc_pi(x + y)
    if fam == "minus":
        return _sinc_pi(x - y) - _sinc_pi(x + y)
    if fam == "l_plus":
        return _l_kernel(x - y) + _l_kernel(x + y)
    return _l_kernel(x - y) - _l_kernel(x + y)


def cue_kernel_bulk_expansion(x, y, order: int):
    """Term of the 1/N^2 expansion of the bulk-scaled finite-N kernel."""
    if order == 0:
        return _sinc_pi(np.asarray(x, float) - np.asarray(y, float))
    if order == 1:
        return _l_kernel(np.asarray(x, float) - np.asarray(y, float))
    raise ValueError("order must be 0 or 1")


# ---------------------------------------------------------------------------
# Pfaffian kernel entries: exact finite trigonometric sums

@dataclass(frozen=True)
class PfaffianKernelEntries:
    """Entry functions s, d, i, j, eps of the 2x2 matrix kernel for index N.

    s is the scaled Dirichlet kernel with s(0) = N/2pi, d = s', i(t) = int_0^t s,
    j = i - eps with eps the parity-dependent step function.
    """

    N: int

    def _freqs(self):
        if self.N % 2:
            return np.arange(1, (self.N - 1) // 2 + 1, dtype=float)
        return np.arange(self.N // 2, dtype=float) + 0.5

    def s(self, theta):
        theta = np.asarray(theta, float)
        f = self._freqs()
        if self.N % 2:
            return (0.5 + np.cos(np.outer(np.atleast_1d(theta), f)).sum(axis=-1)) \
                .reshape(theta.shape) / np.pi
        return np.cos(np.outer(np.atleast_1d(theta), f)).sum(axis=-1) \
            .reshape(theta.shape) / np.pi

    def d(self, theta):
        theta = np.asarray(theta, float)
        f = self._freqs()
        return -(f * np.sin(np.outer(np.atleast_1d(theta), f))).sum(axis=-1) \
            .reshape(theta.shape) / np.pi

    def i(self, theta):
        theta = np.asarray(theta, float)
        f = self._freqs()
        base = (np.sin(np.outer(np.atleast_1d(theta), f)) / f).sum(axis=-1) \
            .reshape(theta.shape) / np.pi
        if self.N % 2:
            return base + theta / (2.0 * np.pi)
        return base

    def eps(self, theta):
        theta = np.asarray(theta, float)
        ratio = theta / (2.0 * np.pi)
        m_floor = np.floor(ratio)
        on_boundary = np.isclose(ratio, np.rint(ratio), atol=1e-12, rtol=0.0)
        m_bound = np.rint(ratio)
        if self.N % 2 == 0:
            val = 0.5 * (-1.0) ** m_floor
            return np.where(on_boundary, 0.0, val)
        val = m_floor + 0.5
        return np.where(on_boundary, m_bound, val)

    def j(self, theta):
        return self.i(theta) - self.eps(theta)


def pfaffian_entries(N: int) -> PfaffianKernelEntries:
    if N < 2:
        raise ValueError("need N >= 2")
    return PfaffianKernelEntries(N)
