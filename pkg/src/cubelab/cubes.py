"""Averages along cubes of ``2^k - 1`` functions.

Function ``j`` (``1 <= j < 2^k``) is attached to the subset ``eps(j)`` of
``{1, ..., k}`` read off the binary digits of ``j``: index ``i`` belongs to
``eps(j)`` iff bit ``i - 1`` of ``j`` is set.  At the cube vertex
``(i_1, ..., i_k)`` function ``j`` is sampled at ``T^{e_j} x`` with
``e_j = sum_{i in eps(j)} i_i``.  For ``k = 2`` this is
``f_1(T^n x) f_2(T^m x) f_3(T^{n+m} x)``.

The top half ``2^{k-1} <= j < 2^k`` contains the functions that depend on
``i_k``; their product is ``S``.  It splits as ``S = A * B`` where ``A``
collects the ``j`` without bit ``k-2`` (they ignore ``i_{k-1}``) and ``B``
the remaining ones, whose exponents are those of ``A`` shifted by
``i_{k-1}``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import _kernels
from ._kernels import neumaier_sum
from .orbits import OrbitSample

#: refuse naive sums with more than this many cube vertices
MAX_NAIVE_TERMS = 1 << 30

# elements per batch in the FFT paths
_BATCH_ELEMENTS = 1 << 22


# --------------------------------------------------------------------------
# index convention


def subset(j, k):
    """``eps(j)`` as a sorted tuple of indices in ``{1, ..., k}``."""
    if not 1 <= j < (1 << k):
        raise ValueError(f"function index {j} out of range for k={k}")
    return tuple(i + 1 for i in range(k) if (j >> i) & 1)


def exponent(j, indices):
    """``e_j`` at the vertex ``indices = (i_1, ..., i_k)``."""
    return sum(indices[i] for i in range(len(indices)) if (j >> i) & 1)


def lower_group(k):
    return list(range(1, 1 << (k - 1)))


def top_group(k):
    return list(range(1 << (k - 1), 1 << k))


def a_group(k):
    """Top-half functions that do not depend on ``i_{k-1}``."""
    return list(range(1 << (k - 1), 3 << (k - 2)))


def b_group(k):
    """Top-half functions whose exponents are the A exponents plus ``i_{k-1}``."""
    return list(range(3 << (k - 2), 1 << k))


def required_length(k, N):
    return k * (N - 1) + 1


@dataclass(frozen=True)
class CubeSpec:
    """``k``, window ``N`` and the orbit of each function ``j``.

    ``assignment`` is either a sequence whose entry ``j - 1`` is the orbit of
    ``f_j`` or a mapping ``j -> orbit``.  It is normalised to a tuple.
    """

    k: int
    N: int
    assignment: tuple

    def __post_init__(self):
        k, N = self.k, self.N
        if int(k) != k or k < 2:
            raise ValueError(f"k must be an integer >= 2, got {k!r}")
        if int(N) != N or N < 1:
            raise ValueError(f"N must be a positive integer, got {N!r}")
        nfun = (1 << k) - 1
        assignment = self.assignment
        if isinstance(assignment, Mapping):
            missing = [j for j in range(1, nfun + 1) if j not in assignment]
            if missing or len(assignment) != nfun:
                raise ValueError(f"assignment must cover j = 1..{nfun}; missing {missing}")
            assignment = [assignment[j] for j in range(1, nfun + 1)]
        assignment = tuple(assignment)
        if len(assignment) != nfun:
            raise ValueError(f"k={k} needs {nfun} orbits, got {len(assignment)}")
        need = required_length(k, N)
        for j, o in enumerate(assignment, start=1):
            if not isinstance(o, OrbitSample):
                raise TypeError(f"f_{j} must be an OrbitSample")
            if o.length < need:
                raise ValueError(f"orbit of f_{j} has length {o.length}; k={k}, N={N} needs {need}")
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def uniform(cls, k, N, sample):
        """Every ``f_j`` is the same orbit."""
        return cls(k, N, (sample,) * ((1 << k) - 1))

    def orbit_of(self, j):
        return self.assignment[j - 1]

    def values(self):
        """Matrix whose row ``j - 1`` is the used window of ``f_j``."""
        need = required_length(self.k, self.N)
        return np.ascontiguousarray(np.stack([o.values[:need] for o in self.assignment]))

    def sup_bounds(self):
        return [o.sup_bound for o in self.assignment]


@dataclass(frozen=True)
class CubeAverageResult:
    value: float
    k: int
    N: int
    method: str
    cost_model: float


# --------------------------------------------------------------------------
# correlation


def _fft_size(n):
    return 1 << max(0, (n - 1).bit_length())


def _check_corr_lengths(b, c, N):
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if len(b) < N:
        raise ValueError(f"first sequence has length {len(b)} < N={N}")
    if len(c) < 2 * N - 1:
        raise ValueError(f"second sequence has length {len(c)} < 2N-1={2 * N - 1}")


def correlate_rows(B, C, N):
    """Row-wise ``out[r, n] = (1/N) sum_m B[r, m] C[r, n + m]`` via FFT."""
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))[:, :N]
    C = np.atleast_2d(np.asarray(C, dtype=np.float64))[:, : 2 * N - 1]
    L = _fft_size(2 * N)
    fb = np.fft.rfft(B, L, axis=1)
    fc = np.fft.rfft(C, L, axis=1)
    return np.fft.irfft(np.conj(fb) * fc, L, axis=1)[:, :N] / N


def correlation_profile(b, c, N, method="auto", threads=1):
    """``n -> (1/N) sum_{m<N} b_m c_{n+m}`` for ``n = 0..N-1``.

    ``method`` is ``"direct"`` (compensated O(N^2) sums), ``"fft"``
    (zero-padded cyclic correlation of length >= 2N) or ``"auto"``.
    """
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    _check_corr_lengths(b, c, N)
    if method == "auto":
        method = "direct" if N <= 64 else "fft"
    if method == "direct":
        return _kernels.correlation_direct(
            np.ascontiguousarray(b[:N]), np.ascontiguousarray(c[: 2 * N - 1]), N, threads
        )
    if method == "fft":
        return correlate_rows(b, c, N)[0]
    raise ValueError(f"unknown correlation method {method!r}")


# --------------------------------------------------------------------------
# cube averages


def cube_average_naive(spec, threads=1):
    """Direct ``N^{-k}`` sum over the cube, compensated, lexicographic order."""
    k, N = spec.k, spec.N
    if N ** k > MAX_NAIVE_TERMS:
        raise ValueError(f"naive sum over N^k = {N ** k} vertices exceeds the guard")
    rows = _kernels.cube_row_sums(spec.values(), k, N, threads)
    value = neumaier_sum(rows) / float(N) ** k
    return CubeAverageResult(value, k, N, "naive", float(N) ** k * ((1 << k) - 1))


def _outer_offsets(k, N, js, start, stop):
    """Offsets ``sum_{i < k-2, bit i of j} r_i`` for outer tuples ``start..stop``.

    Outer tuple ``r`` enumerates ``(i_1, ..., i_{k-2})`` lexicographically
    (``i_{k-2}`` fastest).  Returns an int array of shape ``(stop - start, len(js))``.
    """
    depth = k - 2
    flat = np.arange(start, stop)
    digits = []
    rem = flat
    for _ in range(depth):
        digits.append(rem % N)
        rem = rem // N
    digits = digits[::-1]  # digits[i] is i_{i+1}
    out = np.zeros((stop - start, len(js)), dtype=np.int64)
    for col, j in enumerate(js):
        for i in range(depth):
            if (j >> i) & 1:
                out[:, col] += digits[i]
    return out


def _group_product(vals, js, offsets, length, shifts=None):
    """Rows ``prod_{j in js} vals[j-1, offsets[:, col] + shift_j + t]``, ``t < length``."""
    rows = offsets.shape[0]
    out = np.ones((rows, length))
    t = np.arange(length)
    for col, j in enumerate(js):
        shift = 0 if shifts is None else shifts[col]
        out = out * vals[j - 1][offsets[:, col, None] + shift + t[None, :]]
    return out


def _batches(total, per_row):
    step = max(1, _BATCH_ELEMENTS // max(per_row, 1))
    for start in range(0, total, step):
        yield start, min(total, start + step)


def cube_average_fast(spec, threads=1):
    """Same average as :func:`cube_average_naive` in O(N^{k-1} log N).

    For each outer tuple ``(i_1, ..., i_{k-2})`` the double sum over
    ``(i_{k-1}, i_k)`` is a three-sequence average evaluated with one
    correlation profile.
    """
    k, N = spec.k, spec.N
    vals = spec.values()
    hi, lo = k - 1, k - 2
    js = list(range(1, 1 << k))
    groups = {(a, b): [j for j in js if ((j >> lo) & 1, (j >> hi) & 1) == (a, b)] for a in (0, 1) for b in (0, 1)}
    outer = N ** (k - 2)
    totals = []
    for start, stop in _batches(outer, 4 * N):
        off = {key: _outer_offsets(k, N, g, start, stop) for key, g in groups.items()}
        const = _group_product(vals, groups[0, 0], off[0, 0], 1)[:, 0]
        u = _group_product(vals, groups[1, 0], off[1, 0], N)
        v = _group_product(vals, groups[0, 1], off[0, 1], N)
        w = _group_product(vals, groups[1, 1], off[1, 1], 2 * N - 1)
        prof = correlate_rows(v, w, N)
        for row in range(stop - start):
            totals.append(const[row] * math.fsum(u[row] * prof[row]) / N)
    value = math.fsum(totals) / float(outer)
    cost = float(outer) * 4 * N * max(1.0, math.log2(4 * N))
    return CubeAverageResult(value, k, N, "fast", cost)


def cube_average(spec, method="fast", threads=1):
    if method == "naive":
        return cube_average_naive(spec, threads)
    if method == "fast":
        return cube_average_fast(spec, threads)
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# the S = A * B decomposition


def _check_fixed(spec, fixed):
    fixed = tuple(int(i) for i in fixed)
    if len(fixed) != spec.k - 1:
        raise ValueError(f"need {spec.k - 1} fixed indices, got {len(fixed)}")
    if any(not 0 <= i < spec.N for i in fixed):
        raise ValueError(f"fixed indices {fixed} out of range [0, {spec.N})")
    return fixed


def group_terms(spec, js, fixed, orbits=None):
    """``i_k -> prod_{j in js} f_j(T^{e_j(fixed, i_k)} x)`` for ``i_k < N``.

    ``orbits`` optionally replaces the functions: entry ``c`` is evaluated
    with the exponent pattern of ``js[c]``.
    """
    fixed = _check_fixed(spec, fixed)
    ik = np.arange(spec.N)
    out = np.ones(spec.N)
    for col, j in enumerate(js):
        base = exponent(j, fixed + (0,))
        e = base + (ik if (j >> (spec.k - 1)) & 1 else 0)
        o = spec.orbit_of(j) if orbits is None else orbits[col]
        out = out * np.asarray(o.values)[e]
    return out


def s_terms(spec, fixed):
    return group_terms(spec, top_group(spec.k), fixed)


def a_terms(spec, fixed, orbits=None):
    return group_terms(spec, a_group(spec.k), fixed, orbits)


def b_terms(spec, fixed):
    return group_terms(spec, b_group(spec.k), fixed)


def s_profile(spec, fixed):
    """``(1/N) sum_{i_k} S_{N, (i_1, ..., i_k)}`` at the fixed ``(i_1, ..., i_{k-1})``."""
    return math.fsum(s_terms(spec, fixed)) / spec.N


def lower_prefactor(spec):
    """``prod_{j < 2^{k-1}} ||f_j||_inf^2`` with the stored sup-norm bounds."""
    return math.prod(spec.orbit_of(j).sup_bound ** 2 for j in lower_group(spec.k))


def s_profile_table(spec, method="auto"):
    """All ``s_profile`` values, shape ``(N^{k-2}, N)``; row = outer tuple, column = ``i_{k-1}``."""
    k, N = spec.k, spec.N
    vals = spec.values()
    A, B = a_group(k), b_group(k)
    rows = []
    for start, stop in _batches(N ** (k - 2), 3 * N):
        ua = _group_product(vals, A, _outer_offsets(k, N, A, start, stop), N)
        ub = _group_product(vals, B, _outer_offsets(k, N, B, start, stop), 2 * N - 1)
        if method == "fft" or (method == "auto" and N > 64):
            rows.append(correlate_rows(ua, ub, N))
        else:
            rows.append(np.stack([correlation_profile(a, b, N, "direct") for a, b in zip(ua, ub)]))
    return np.concatenate(rows)


def eq5_rhs(spec, method="auto"):
    """Cauchy-Schwarz bound for ``|M_N|^2``.

    ``prod_{j < 2^{k-1}} ||f_j||^2 * N^{-(k-1)} sum_{i_1..i_{k-1}} |s_profile|^2``.
    """
    table = s_profile_table(spec, method)
    mean_sq = math.fsum((table * table).ravel()) / float(spec.N) ** (spec.k - 1)
    return lower_prefactor(spec) * mean_sq


def iter_vertices(k, N):
    return itertools.product(range(N), repeat=k)
