# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled frame-integration kernel; same contract as ``_kernels_py``."""
import numpy as np
from libc.math cimport sqrt, fabs, copysign

cdef enum:
    STATUS_OK = 0
    STATUS_NULL_RESIDUAL = 1
    STATUS_SIGNATURE_FLIP = 2


cdef inline double _inner(double[:, ::1] F, Py_ssize_t a, Py_ssize_t b, Py_ssize_t n) nogil:
    cdef double acc = -F[a, 0] * F[b, 0]
    cdef Py_ssize_t i
    for i in range(1, n):
        acc += F[a, i] * F[b, i]
    return acc


cdef inline double _inner_vec(double[::1] r, double[:, ::1] F, Py_ssize_t b, Py_ssize_t n) nogil:
    cdef double acc = -r[0] * F[b, 0]
    cdef Py_ssize_t i
    for i in range(1, n):
        acc += r[i] * F[b, i]
    return acc


cdef double _defect(double[:, ::1] F, double[:, ::1] G, Py_ssize_t n) nogil:
    cdef double worst = 0.0, d
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(i, n):
            d = fabs(_inner(F, i, j, n) - G[i, j])
            if d > worst:
                worst = d
    return worst


cdef int _renorm_spacelike(double[:, ::1] F, double[::1] eta, double[::1] r, Py_ssize_t n) nogil:
    cdef Py_ssize_t k, j, i
    cdef double p, q, scale
    for k in range(n):
        for i in range(n):
            r[i] = F[k, i]
        for j in range(k):
            p = eta[j] * _inner_vec(r, F, j, n)
            for i in range(n):
                r[i] -= p * F[j, i]
        q = -r[0] * r[0]
        for i in range(1, n):
            q += r[i] * r[i]
        if q == 0.0:
            return STATUS_NULL_RESIDUAL
        if (q > 0) != (eta[k] > 0):
            return STATUS_SIGNATURE_FLIP
        scale = 1.0 / sqrt(fabs(q))
        for i in range(n):
            F[k, i] = r[i] * scale
    return STATUS_OK


cdef int _renorm_null(double[:, ::1] F, double[::1] r, Py_ssize_t n) nogil:
    cdef Py_ssize_t k, j, i, idx, jdx, kk
    cdef double p, q, a, b, c, disc, x, y, scale
    # spacelike rows: N (1), B2.. (3..n-1)
    for idx in range(n - 2):
        k = 1 if idx == 0 else idx + 2
        for i in range(n):
            r[i] = F[k, i]
        for jdx in range(idx):
            j = 1 if jdx == 0 else jdx + 2
            p = _inner_vec(r, F, j, n)
            for i in range(n):
                r[i] -= p * F[j, i]
        q = -r[0] * r[0]
        for i in range(1, n):
            q += r[i] * r[i]
        if q <= 0.0:
            return STATUS_SIGNATURE_FLIP
        scale = 1.0 / sqrt(q)
        for i in range(n):
            F[k, i] = r[i] * scale
    for kk in range(2):
        k = 2 * kk
        for jdx in range(n - 2):
            j = 1 if jdx == 0 else jdx + 2
            p = _inner(F, k, j, n)
            for i in range(n):
                F[k, i] -= p * F[j, i]
    a = _inner(F, 0, 0, n)
    b = _inner(F, 0, 2, n)
    c = _inner(F, 2, 2, n)
    if b == 0.0:
        return STATUS_NULL_RESIDUAL
    disc = b * b - a * c
    if disc < 0.0:
        return STATUS_NULL_RESIDUAL
    x = -a / (b + copysign(sqrt(disc), b))
    for i in range(n):
        F[0, i] += x * F[2, i]
    p = _inner(F, 2, 0, n)
    y = -_inner(F, 2, 2, n) / (2.0 * p)
    for i in range(n):
        F[2, i] += y * F[0, i]
    p = _inner(F, 0, 2, n)
    for i in range(n):
        F[2, i] /= p
    return STATUS_OK


cdef void _matmul(double[:, ::1] A, double[:, ::1] X, double[:, ::1] out,
                  Py_ssize_t rows, Py_ssize_t cols) nogil:
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(rows):
        for j in range(cols):
            acc = 0.0
            for k in range(rows):
                acc += A[i, k] * X[k, j]
            out[i, j] = acc


def integrate_frames(double[:, :, ::1] M, Y0, double h, G, bint null_kind, bint renorm):
    cdef Py_ssize_t K = (M.shape[0] - 1) // 2
    cdef Py_ssize_t rows = M.shape[1]
    cdef Py_ssize_t n = rows - 1
    Y_arr = np.empty((K + 1, rows, n))
    defects_arr = np.zeros(K)
    cdef double[:, :, ::1] Y = Y_arr
    cdef double[::1] defects = defects_arr
    cdef double[:, ::1] Y0v = np.ascontiguousarray(Y0, dtype=float)
    cdef double[:, ::1] Gv = np.ascontiguousarray(G, dtype=float)
    eta_arr = np.ascontiguousarray(np.diag(G), dtype=float)
    cdef double[::1] eta = eta_arr
    cdef double[:, ::1] k1 = np.empty((rows, n))
    cdef double[:, ::1] k2 = np.empty((rows, n))
    cdef double[:, ::1] k3 = np.empty((rows, n))
    cdef double[:, ::1] k4 = np.empty((rows, n))
    cdef double[:, ::1] tmp = np.empty((rows, n))
    cdef double[::1] r = np.empty(n)
    cdef Py_ssize_t step, i, j
    cdef int status = STATUS_OK
    cdef Py_ssize_t bad = -1
    for i in range(rows):
        for j in range(n):
            Y[0, i, j] = Y0v[i, j]
    with nogil:
        for step in range(K):
            _matmul(M[2 * step], Y[step], k1, rows, n)
            for i in range(rows):
                for j in range(n):
                    tmp[i, j] = Y[step, i, j] + 0.5 * h * k1[i, j]
            _matmul(M[2 * step + 1], tmp, k2, rows, n)
            for i in range(rows):
                for j in range(n):
                    tmp[i, j] = Y[step, i, j] + 0.5 * h * k2[i, j]
            _matmul(M[2 * step + 1], tmp, k3, rows, n)
            for i in range(rows):
                for j in range(n):
                    tmp[i, j] = Y[step, i, j] + h * k3[i, j]
            _matmul(M[2 * step + 2], tmp, k4, rows, n)
            for i in range(rows):
                for j in range(n):
                    Y[step + 1, i, j] = Y[step, i, j] + (h / 6.0) * (
                        k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            defects[step] = _defect(Y[step + 1], Gv, n)
            if renorm:
                if null_kind:
                    status = _renorm_null(Y[step + 1], r, n)
                else:
                    status = _renorm_spacelike(Y[step + 1], eta, r, n)
                if status != STATUS_OK:
                    bad = step + 1
                    break
    if status != STATUS_OK:
        return Y_arr[: bad + 1], defects_arr[:bad], status, bad
    return Y_arr, defects_arr, STATUS_OK, -1
