"""Wiener-Wintner maximal sums with certified two-sided bounds.

``sup_t |(1/N) sum_n a_n e^{2 pi i n t}|`` is evaluated on the grid
``t_j = j / (L N)`` by one zero-padded FFT.  The sum is a trigonometric
polynomial whose derivative in ``t`` is at most ``2 pi N max|a|``, and every
``t`` lies within ``1/(2 L N)`` of a grid point, so adding ``pi max|a| / L``
to the grid maximum gives a certified upper bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_OVERSAMPLE = 8

# rows per batch in twisted_profile_max
_BATCH_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class MaxBound:
    grid_max: float
    certified_upper: float
    L: int
    N: int
    argmax: float = 0.0

    @property
    def width(self):
        return self.certified_upper - self.grid_max

    def scaled(self, c):
        """Bounds for the sequence multiplied by ``c >= 0``."""
        if c < 0:
            raise ValueError("scale must be nonnegative")
        return MaxBound(self.grid_max * c, self.certified_upper * c, self.L, self.N, self.argmax)


def _check_L(L):
    if int(L) != L or L < 1:
        raise ValueError(f"oversample factor L must be a positive integer, got {L!r}")
    return int(L)


def grid_values(a, L):
    """``|(1/N) sum_n a_n e(n j / (L N))|`` for ``j = 0 .. LN - 1``."""
    a = np.asarray(a)
    N = a.shape[-1]
    M = L * N
    # ifft carries e^{+2 pi i n j / M} and a 1/M factor
    return np.abs(np.fft.ifft(a, M, axis=-1)) * (M / N)


def ww_max(a, L=DEFAULT_OVERSAMPLE):
    """Certified bounds on ``sup_{t in [0,1)} |(1/N) sum_{n<N} a_n e^{2 pi i n t}|``."""
    a = np.asarray(a)
    if a.ndim != 1 or a.shape[0] < 1:
        raise ValueError("ww_max needs a nonempty 1-d sequence")
    L = _check_L(L)
    N = a.shape[0]
    g = grid_values(a, L)
    j = int(np.argmax(g))
    gmax = float(g[j])
    amax = float(np.max(np.abs(a)))
    return MaxBound(gmax, gmax + math.pi * amax / L, L, N, j / (L * N))


def _check_lengths(b, c, N):
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if len(b) < N:
        raise ValueError(f"first sequence has length {len(b)} < N={N}")
    if len(c) < 2 * N - 1:
        raise ValueError(f"second sequence has length {len(c)} < 2N-1={2 * N - 1}")


def twisted_profile_max(b, c, N, L=DEFAULT_OVERSAMPLE):
    """Entry ``n`` bounds ``sup_t |(1/N) sum_m b_m c_{n+m} e^{2 pi i m t}|``."""
    b = np.asarray(b)
    c = np.asarray(c)
    _check_lengths(b, c, N)
    L = _check_L(L)
    N = int(N)
    m = np.arange(N)
    out = []
    step = max(1, _BATCH_ELEMENTS // (L * N))
    for start in range(0, N, step):
        n = np.arange(start, min(N, start + step))
        rows = b[None, :N] * c[n[:, None] + m[None, :]]
        g = grid_values(rows, L)
        idx = np.argmax(g, axis=1)
        gmax = g[np.arange(len(n)), idx]
        amax = np.max(np.abs(rows), axis=1)
        for r in range(len(n)):
            out.append(MaxBound(float(gmax[r]), float(gmax[r] + math.pi * amax[r] / L), L, N, idx[r] / (L * N)))
    return out


def ww_mean_square(b, c, N, L=DEFAULT_OVERSAMPLE, bounds=None):
    """``(1/N) sum_n certified_upper_n^2`` over :func:`twisted_profile_max`."""
    if bounds is None:
        bounds = twisted_profile_max(b, c, N, L)
    return math.fsum(mb.certified_upper ** 2 for mb in bounds) / N


def dense_sup(a, points):
    """Reference ``max_t`` over ``points`` equispaced ``t`` by direct evaluation."""
    a = np.asarray(a)
    N = len(a)
    t = np.arange(points) / points
    n = np.arange(N)
    best = 0.0
    for start in range(0, points, 4096):
        tt = t[start:start + 4096]
        vals = np.exp(2j * np.pi * np.outer(tt, n)) @ a / N
        best = max(best, float(np.max(np.abs(vals))))
    return best
