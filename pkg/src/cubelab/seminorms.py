"""Finite-(N, H) estimates of the Host-Kra seminorms ``|||f|||_k``.

The recursive estimator replaces the limits by finite windows::

    |||f|||_1       ~ |(1/N) sum_{n<N} f(T^n x)|
    |||f|||_k^{2^k} ~ (1/H) sum_{h=1}^{H} |||f . f o T^h|||_{k-1}^{2^{k-1}}

On a cyclic group the same quantity is computed exactly by the box norm
``E_{x, h_1..h_k} prod_eps f(x + eps . h)``, and for ``k = 2`` by the
fourth moment of the normalised Fourier coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._kernels import neumaier_sum
from .orbits import OrbitSample

#: box-norm cost guard on ``p^{k+1}``
MAX_BOX_TERMS = 1 << 20

METHODS = ("recursive", "cyclic_box", "fourier_u2")


@dataclass(frozen=True)
class SeminormEstimate:
    value: float
    k: int
    N: int | None
    H: int | None
    method: str

    def __post_init__(self):
        if not self.value >= 0.0:
            raise ValueError(f"seminorm estimate must be nonnegative, got {self.value!r}")


def default_horizon(N):
    return max(1, math.isqrt(N))


def _as_real_array(orbit):
    vals = orbit.values if isinstance(orbit, OrbitSample) else orbit
    vals = np.asarray(vals)
    if np.iscomplexobj(vals):
        raise TypeError("seminorm estimation takes real-valued sequences only")
    return np.asarray(vals, dtype=np.float64)


def _powered(a, k, N, H):
    """Estimate of ``|||a|||_k^{2^k}`` using ``a[: N + (k-1) H]``."""
    if k == 1:
        m = math.fsum(a[:N]) / N
        return m * m
    if k == 2:
        # unrolled last level: mean of squared lag-h autocorrelations
        total = []
        for h in range(1, H + 1):
            c = math.fsum(a[:N] * a[h:h + N]) / N
            total.append(c * c)
        return math.fsum(total) / H
    need = N + (k - 2) * H
    total = [_powered(a[:need] * a[h:h + need], k - 1, N, H) for h in range(1, H + 1)]
    return math.fsum(total) / H


def seminorm_recursive(orbit, k, N, H=None):
    """Recursive finite estimate of ``|||f|||_k`` from one orbit.

    Needs ``N + (k - 1) H`` orbit values: every inner average is an honest
    ``N``-term mean of products shifted by at most ``(k - 1) H``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"level k must be an integer >= 1, got {k!r}")
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if H is None:
        H = default_horizon(N)
    if int(H) != H or H < 1:
        raise ValueError(f"H must be a positive integer, got {H!r}")
    a = _as_real_array(orbit)
    need = N + (k - 1) * H
    if len(a) < need:
        raise ValueError(f"orbit of length {len(a)} is too short: k={k}, N={N}, H={H} needs {need}")
    if k == 1:
        value = abs(math.fsum(a[:N]) / N)
    else:
        p = _powered(a[:need], int(k), int(N), int(H))
        value = p ** (1.0 / (1 << k)) if p > 0.0 else 0.0
    return SeminormEstimate(value, int(k), int(N), int(H), "recursive")


def box_norm_cyclic(table, k):
    """Exact box norm of a function on Z_p at level ``k``."""
    t = np.asarray(table, dtype=np.float64)
    if t.ndim != 1 or len(t) < 1:
        raise ValueError("table must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(t)):
        raise ValueError("table entries must be finite")
    if int(k) != k or k < 1:
        raise ValueError(f"level k must be an integer >= 1, got {k!r}")
    p = len(t)
    if p ** (k + 1) > MAX_BOX_TERMS:
        raise ValueError(f"box norm over p^(k+1) = {p ** (k + 1)} terms exceeds the guard")
    rows = _kernels.box_row_sums(np.ascontiguousarray(t), int(k), 1)
    mean = neumaier_sum(rows) / float(p) ** (k + 1)
    if k == 1:
        value = math.sqrt(max(mean, 0.0))
    else:
        value = max(mean, 0.0) ** (1.0 / (1 << k))
    return SeminormEstimate(value, int(k), None, None, "cyclic_box")


def u2_fourier(table):
    """``(sum_xi |f^(xi)|^4)^{1/4}`` with ``f^`` the normalised DFT on Z_p."""
    t = np.asarray(table, dtype=np.float64)
    if t.ndim != 1 or len(t) < 1:
        raise ValueError("table must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(t)):
        raise ValueError("table entries must be finite")
    fhat = np.fft.fft(t) / len(t)
    mag2 = (fhat.real ** 2 + fhat.imag ** 2)
    value = math.fsum(mag2 * mag2) ** 0.25
    return SeminormEstimate(value, 2, None, None, "fourier_u2")


def seminorm_trace(orbit, k, schedule):
    """One recursive estimate per ``(N, H)`` pair of an increasing schedule."""
    schedule = [(int(N), int(H)) for N, H in schedule]
    if not schedule:
        raise ValueError("schedule must be nonempty")
    for (n0, h0), (n1, h1) in zip(schedule, schedule[1:]):
        if n1 < n0 or h1 < h0 or (n1, h1) == (n0, h0):
            raise ValueError("schedule must be increasing")
    return [seminorm_recursive(orbit, k, N, H) for N, H in schedule]


def seminorm(orbit_or_table, k, N=None, H=None, method="recursive"):
    """Dispatch on ``method``; cyclic methods take the table directly."""
    if method == "recursive":
        return seminorm_recursive(orbit_or_table, k, N, H)
    if method == "cyclic_box":
        return box_norm_cyclic(orbit_or_table, k)
    if method == "fourier_u2":
        if k != 2:
            raise ValueError("fourier_u2 is defined for k = 2 only")
        return u2_fourier(orbit_or_table)
    raise ValueError(f"unknown seminorm method {method!r}")
