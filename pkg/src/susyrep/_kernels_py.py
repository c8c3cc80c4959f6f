"""Pure numpy implementations of the hot kernels.

Same signatures and outputs as the compiled ``_kernels`` module; used when the
extension is not built or when ``SUSYREP_PURE=1``.

Residual layout: for each pair ``I <= J`` (lexicographic) two blocks of
``d*d`` entries, ``L_I R_J + L_J R_I - 2 delta_IJ 1`` then
``R_I L_J + R_J L_I - 2 delta_IJ 1``, each row-major. Variables are all
entries of ``L`` followed by all entries of ``R``, row-major.
"""

import numpy as np


def n_pairs(n):
    return n * (n + 1) // 2


def residual_vector(L, R):
    L = np.asarray(L, dtype=np.float64)
    R = np.asarray(R, dtype=np.float64)
    n, d, _ = L.shape
    eye2 = 2.0 * np.eye(d)
    out = np.empty((n_pairs(n), 2, d, d))
    k = 0
    for i in range(n):
        for j in range(i, n):
            out[k, 0] = L[i] @ R[j] + L[j] @ R[i]
            out[k, 1] = R[i] @ L[j] + R[j] @ L[i]
            if i == j:
                out[k] -= eye2
            k += 1
    return out.ravel()


def jacobian(L, R):
    L = np.asarray(L, dtype=np.float64)
    R = np.asarray(R, dtype=np.float64)
    n, d, _ = L.shape
    dd = d * d
    eye = np.eye(d)
    jac = np.zeros((n_pairs(n) * 2 * dd, 2 * n * dd))
    off_r = n * dd

    def add_product(rows, a_col, a, b_col, b):
        # d(A B)/dA = kron(1, B^T), d(A B)/dB = kron(A, 1) in row-major vec
        jac[rows, a_col : a_col + dd] += np.kron(eye, b.T)
        jac[rows, b_col : b_col + dd] += np.kron(a, eye)

    k = 0
    for i in range(n):
        for j in range(i, n):
            rows = slice((2 * k) * dd, (2 * k + 1) * dd)
            add_product(rows, i * dd, L[i], off_r + j * dd, R[j])
            add_product(rows, j * dd, L[j], off_r + i * dd, R[i])
            rows = slice((2 * k + 1) * dd, (2 * k + 2) * dd)
            add_product(rows, off_r + i * dd, R[i], j * dd, L[j])
            add_product(rows, off_r + j * dd, R[j], i * dd, L[i])
            k += 1
    return jac


def pair_compat(cols, signs):
    """``out[a, b] = 1`` iff ``M_a M_b^T`` is antisymmetric.

    ``M_a`` is the signed permutation matrix with row ``i`` holding
    ``signs[a, i]`` in column ``cols[a, i]``.
    """
    cols = np.asarray(cols, dtype=np.int64)
    signs = np.asarray(signs, dtype=np.int64)
    n, d = cols.shape
    rowof = np.empty_like(cols)
    np.put_along_axis(rowof, cols, np.broadcast_to(np.arange(d), (n, d)), axis=1)
    rng = np.arange(d)
    out = np.zeros((n, n), dtype=np.uint8)
    for a in range(n):
        # k[b, i]: row of M_b sharing a column with row i of M_a
        k = rowof[:, cols[a]]
        back = np.take_along_axis(rowof, cols[a][k], axis=1)
        sa_k = signs[a][k]
        sb_k = np.take_along_axis(signs, k, axis=1)
        ok = (k != rng) & (back == rng) & (sa_k * signs == -signs[a] * sb_k)
        out[a] = ok.all(axis=1)
    return out
