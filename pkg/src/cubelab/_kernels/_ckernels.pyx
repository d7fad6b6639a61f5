# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_pykernels`` for the reference semantics.

Rows are independent work units, so the outer loop runs under ``prange``.
Each row has its own accumulator, which keeps results independent of the
thread count.
"""
import numpy as np

cimport cython
from cython.parallel cimport prange, parallel
from libc.math cimport fabs
from libc.stdlib cimport malloc, free


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def cube_row_sums(const double[:, ::1] vals, int k, Py_ssize_t N, int nthreads=1):
    cdef int nfun = (1 << k) - 1
    cdef Py_ssize_t r, t, ntail, e, rem
    cdef int j, i
    cdef double prod, s, c
    cdef Py_ssize_t* idx
    out = np.empty(N, dtype=np.float64)
    cdef double[::1] outv = out

    ntail = 1
    for i in range(k - 1):
        ntail *= N

    with nogil, parallel(num_threads=max(nthreads, 1)):
        idx = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (k + 1))
        for r in prange(N, schedule="static"):
            s = 0.0
            c = 0.0
            idx[1] = r
            for t in range(ntail):
                # decode t into (i_2, ..., i_k), i_k fastest
                rem = t
                for i in range(k, 1, -1):
                    idx[i] = rem % N
                    rem = rem // N
                prod = 1.0
                for j in range(1, nfun + 1):
                    e = 0
                    for i in range(k):
                        if (j >> i) & 1:
                            e = e + idx[i + 1]
                    prod = prod * vals[j - 1, e]
                _neumaier(&s, &c, prod)
            outv[r] = s + c
        free(idx)
    return out


def box_row_sums(const double[::1] table, int k, int nthreads=1):
    cdef Py_ssize_t p = table.shape[0]
    cdef Py_ssize_t x, t, ntail, rem, shift
    cdef int eps, i
    cdef double prod, s, c
    cdef Py_ssize_t* hs
    out = np.empty(p, dtype=np.float64)
    cdef double[::1] outv = out

    ntail = 1
    for i in range(k):
        ntail *= p

    with nogil, parallel(num_threads=max(nthreads, 1)):
        hs = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (k + 1))
        for x in prange(p, schedule="static"):
            s = 0.0
            c = 0.0
            for t in range(ntail):
                rem = t
                for i in range(k - 1, -1, -1):
                    hs[i] = rem % p
                    rem = rem // p
                prod = 1.0
                for eps in range(1 << k):
                    shift = x
                    for i in range(k):
                        if (eps >> i) & 1:
                            shift = shift + hs[i]
                    prod = prod * table[shift % p]
                _neumaier(&s, &c, prod)
            outv[x] = s + c
        free(hs)
    return out


def correlation_direct(const double[::1] b, const double[::1] c, Py_ssize_t N, int nthreads=1):
    cdef Py_ssize_t n, m
    cdef double s, comp
    out = np.empty(N, dtype=np.float64)
    cdef double[::1] outv = out
    for n in prange(N, nogil=True, schedule="static", num_threads=max(nthreads, 1)):
        s = 0.0
        comp = 0.0
        for m in range(N):
            _neumaier(&s, &comp, b[m] * c[n + m])
        outv[n] = (s + comp) / N
    return out
