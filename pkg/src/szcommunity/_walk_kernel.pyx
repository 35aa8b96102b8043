# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loop of the time-averaged walk.

Same contract as ``szcommunity._walk_kernel_py.advance``; see there.
"""

from libc.math cimport sqrt

import numpy as np


def advance(const long long[::1] indptr,
            const long long[::1] indices,
            const double[::1] data,
            double[:, ::1] psi,
            double[::1] acc,
            long long t,
            long long nsteps,
            double eps,
            long long m,
            bint directed,
            double[:, ::1] trace):
    cdef Py_ssize_t ncomp = psi.shape[0]
    cdef Py_ssize_t dim = psi.shape[1]
    cdef Py_ssize_t c, i, j, k
    cdef Py_ssize_t row = 0
    cdef bint keep_trace = trace.shape[0] > 0
    cdef double s, x, a_k, a_km, prev_k, new_k, diff, res2 = 0.0
    cdef double inv_new, inv_old
    cdef bint converged = False
    cdef double[:, ::1] nxt = np.empty((ncomp, dim), dtype=np.float64)
    cdef double[::1] amp2 = np.empty(dim, dtype=np.float64)

    with nogil:
        while row < nsteps:
            for c in range(ncomp):
                for i in range(dim):
                    s = 0.0
                    for j in range(indptr[i], indptr[i + 1]):
                        s = s + data[j] * psi[c, indices[j]]
                    nxt[c, i] = s
            for c in range(ncomp):
                for i in range(dim):
                    psi[c, i] = nxt[c, i]
            for i in range(dim):
                s = 0.0
                for c in range(ncomp):
                    x = psi[c, i]
                    s = s + x * x
                amp2[i] = s
            t = t + 1
            inv_new = 1.0 / (t + 1)
            inv_old = 1.0 / t
            res2 = 0.0
            if directed:
                for i in range(dim):
                    prev_k = acc[i]
                    new_k = prev_k + amp2[i]
                    diff = new_k * inv_new - prev_k * inv_old
                    res2 = res2 + diff * diff
                    acc[i] = new_k
            else:
                for k in range(m):
                    prev_k = acc[k] + acc[k + m]
                    new_k = prev_k + amp2[k] + amp2[k + m]
                    diff = new_k * inv_new - prev_k * inv_old
                    res2 = res2 + diff * diff
                    acc[k] = acc[k] + amp2[k]
                    acc[k + m] = acc[k + m] + amp2[k + m]
            if keep_trace:
                for k in range(m):
                    trace[row, k] = (acc[k] + acc[k + m]) * inv_new
            row = row + 1
            if sqrt(res2) < eps:
                converged = True
                break
    return t, sqrt(res2), converged
