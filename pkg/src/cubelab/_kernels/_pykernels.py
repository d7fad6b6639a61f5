"""Pure-Python/numpy reference kernels.

Every routine here performs exactly the same sequence of IEEE operations as
its counterpart in ``_ckernels.pyx``: products are formed in ascending
function order starting from 1.0, and each output slot is accumulated with
Neumaier's compensated summation in lexicographic index order.  The numpy
code vectorises across the *outermost* index only, so each slot's
accumulation order is unchanged and the two backends agree bit for bit.
"""
import itertools

import numpy as np


def neumaier_sum(values):
    """Compensated sum of ``values`` taken in order; returns ``s + c``."""
    s = 0.0
    c = 0.0
    for x in values:
        x = float(x)
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


def _neumaier_step(s, c, x):
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c = c + np.where(big, (s - t) + x, (x - t) + s)
    return t, c


def cube_row_sums(vals, k, N, nthreads=1):
    """Row sums of the naive cube average, one row per value of ``i_1``.

    ``vals[j - 1]`` holds the orbit of function ``j``.  Row ``r`` is the
    compensated sum over ``(i_2, ..., i_k)`` of the product over ``j`` of
    ``vals[j - 1, sum_{i in eps(j)} i_i]`` with ``i_1 = r``.
    """
    vals = np.ascontiguousarray(vals, dtype=np.float64)
    nfun = (1 << k) - 1
    r = np.arange(N)
    s = np.zeros(N)
    c = np.zeros(N)
    for rest in itertools.product(range(N), repeat=k - 1):
        prod = np.ones(N)
        for j in range(1, nfun + 1):
            e = 0
            for i in range(1, k):
                if (j >> i) & 1:
                    e += rest[i - 1]
            if j & 1:
                prod = prod * vals[j - 1, e + r]
            else:
                prod = prod * vals[j - 1, e]
        s, c = _neumaier_step(s, c, prod)
    return s + c


def box_row_sums(table, k, nthreads=1):
    """Row sums of the cyclic box product average, one row per base point x.

    Row ``x`` is the compensated sum over ``(h_1, ..., h_k)`` in Z_p^k of
    the product over subsets ``eps`` (ascending bitmask) of
    ``table[(x + sum_{i in eps} h_i) mod p]``.
    """
    table = np.ascontiguousarray(table, dtype=np.float64)
    p = len(table)
    x = np.arange(p)
    s = np.zeros(p)
    c = np.zeros(p)
    for hs in itertools.product(range(p), repeat=k):
        prod = np.ones(p)
        for eps in range(1 << k):
            shift = 0
            for i in range(k):
                if (eps >> i) & 1:
                    shift += hs[i]
            prod = prod * table[(x + shift) % p]
        s, c = _neumaier_step(s, c, prod)
    return s + c


def correlation_direct(b, c, N, nthreads=1):
    """``out[n] = (1/N) sum_{m<N} b[m] c[n+m]`` by direct compensated sums."""
    b = np.ascontiguousarray(b, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    n = np.arange(N)
    s = np.zeros(N)
    comp = np.zeros(N)
    for m in range(N):
        s, comp = _neumaier_step(s, comp, b[m] * c[n + m])
    return (s + comp) / N
