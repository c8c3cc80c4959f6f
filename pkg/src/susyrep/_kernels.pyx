# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def n_pairs(Py_ssize_t n):
    return n * (n + 1) // 2


cdef inline void _prod_add(const double[:, ::1] a, const double[:, ::1] b,
                           double[::1] out, Py_ssize_t base, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j, q
    cdef double acc
    for i in range(d):
        for j in range(d):
            acc = 0.0
            for q in range(d):
                acc += a[i, q] * b[q, j]
            out[base + i * d + j] += acc


def residual_vector(L, R):
    cdef const double[:, :, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef const double[:, :, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    cdef Py_ssize_t n = Lv.shape[0], d = Lv.shape[1], dd = d * d
    out_arr = np.zeros(n_pairs(n) * 2 * dd, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, k = 0, base, t
    with nogil:
        for i in range(n):
            for j in range(i, n):
                base = 2 * k * dd
                _prod_add(Lv[i], Rv[j], out, base, d)
                _prod_add(Lv[j], Rv[i], out, base, d)
                _prod_add(Rv[i], Lv[j], out, base + dd, d)
                _prod_add(Rv[j], Lv[i], out, base + dd, d)
                if i == j:
                    for t in range(d):
                        out[base + t * d + t] -= 2.0
                        out[base + dd + t * d + t] -= 2.0
                k += 1
    return out_arr


cdef inline void _jac_add(double[:, ::1] jac, Py_ssize_t row0,
                          Py_ssize_t a_col, const double[:, ::1] a,
                          Py_ssize_t b_col, const double[:, ::1] b,
                          Py_ssize_t d) noexcept nogil:
    # r[i, j] += sum_q a[i, q] b[q, j]
    cdef Py_ssize_t i, j, q, row
    for i in range(d):
        for j in range(d):
            row = row0 + i * d + j
            for q in range(d):
                jac[row, a_col + i * d + q] += b[q, j]
                jac[row, b_col + q * d + j] += a[i, q]


def jacobian(L, R):
    cdef const double[:, :, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef const double[:, :, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    cdef Py_ssize_t n = Lv.shape[0], d = Lv.shape[1], dd = d * d
    cdef Py_ssize_t off_r = n * dd
    jac_arr = np.zeros((n_pairs(n) * 2 * dd, 2 * n * dd), dtype=np.float64)
    cdef double[:, ::1] jac = jac_arr
    cdef Py_ssize_t i, j, k = 0, row0
    with nogil:
        for i in range(n):
            for j in range(i, n):
                row0 = 2 * k * dd
                _jac_add(jac, row0, i * dd, Lv[i], off_r + j * dd, Rv[j], d)
                _jac_add(jac, row0, j * dd, Lv[j], off_r + i * dd, Rv[i], d)
                row0 = (2 * k + 1) * dd
                _jac_add(jac, row0, off_r + i * dd, Rv[i], j * dd, Lv[j], d)
                _jac_add(jac, row0, off_r + j * dd, Rv[j], i * dd, Lv[i], d)
                k += 1
    return jac_arr


def pair_compat(cols, signs):
    cdef const cnp.int64_t[:, ::1] cv = np.ascontiguousarray(cols, dtype=np.int64)
    cdef const cnp.int64_t[:, ::1] sv = np.ascontiguousarray(signs, dtype=np.int64)
    cdef Py_ssize_t n = cv.shape[0], d = cv.shape[1]
    rowof_arr = np.empty((n, d), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] rowof = rowof_arr
    out_arr = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, i, k
    cdef bint ok
    with nogil:
        for a in range(n):
            for i in range(d):
                rowof[a, cv[a, i]] = i
        for a in range(n):
            for b in range(n):
                ok = True
                for i in range(d):
                    k = rowof[b, cv[a, i]]
                    if k == i or rowof[b, cv[a, k]] != i or \
                            sv[a, k] * sv[b, i] != -sv[a, i] * sv[b, k]:
                        ok = False
                        break
                out[a, b] = ok
    return out_arr
