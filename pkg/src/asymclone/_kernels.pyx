# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: cyclic Jacobi sweeps and local-operator scatter.

The pure-Python twins live in ``_fallback``; both expose the same call
signatures so ``asymclone.kernels`` can swap them at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

ctypedef fused scalar_t:
    double
    double complex


cdef inline double _abs2(scalar_t x) nogil:
    if scalar_t is double:
        return x * x
    else:
        return x.real * x.real + x.imag * x.imag


cdef inline scalar_t _conj(scalar_t x) nogil:
    if scalar_t is double:
        return x
    else:
        return x.conjugate()


cdef inline double _re(scalar_t x) nogil:
    if scalar_t is double:
        return x
    else:
        return x.real


cdef double _offdiag_norm(scalar_t[:, ::1] a) nogil:
    cdef Py_ssize_t n = a.shape[0], p, q
    cdef double acc = 0.0
    for p in range(n):
        for q in range(n):
            if p != q:
                acc += _abs2(a[p, q])
    return sqrt(acc)


def jacobi_sweeps(scalar_t[:, ::1] a, scalar_t[:, ::1] v, double tol, int max_sweeps):
    """Diagonalize ``a`` in place by cyclic Jacobi rotations.

    ``v`` must enter as the identity and leaves holding the eigenvectors in
    its columns. Returns ``(sweeps_used, final_offdiag_norm)``; the caller
    decides whether the final norm is acceptable.
    """
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef int sweep = 0
    cdef double off, ah, app, aqq, theta, t, c, s
    cdef scalar_t h, e, ec, x, y

    with nogil:
        off = _offdiag_norm(a)
        while off >= tol and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    h = a[p, q]
                    ah = sqrt(_abs2(h))
                    app = _re(a[p, p])
                    aqq = _re(a[q, q])
                    if ah <= 1e-18 * (fabs(app) + fabs(aqq)) or ah < 1e-150:
                        # negligible next to the diagonal: drop it outright
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    theta = (aqq - app) / (2.0 * ah)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    e = h / ah
                    ec = _conj(e)
                    for k in range(n):
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = c * x - s * ec * y
                        a[k, q] = s * x + c * ec * y
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - s * e * y
                        a[q, k] = s * x + c * e * y
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = app - t * ah
                    a[q, q] = aqq + t * ah
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - s * ec * y
                        v[k, q] = s * x + c * ec * y
            sweep += 1
            off = _offdiag_norm(a)
    return sweep, off


cdef inline Py_ssize_t _local_col(Py_ssize_t a, const cnp.int64_t[::1] factors, Py_ssize_t f0,
                                  Py_ssize_t f1, const cnp.int64_t[::1] strides,
                                  const cnp.int64_t[::1] dims) nogil:
    cdef Py_ssize_t lc = 0, j, f
    for j in range(f0, f1):
        f = factors[j]
        lc = lc * dims[f] + (a // strides[f]) % dims[f]
    return lc


def scatter_block(const cnp.int64_t[::1] block_idx, const cnp.int64_t[::1] pos_map,
                  const cnp.int64_t[::1] strides, const cnp.int64_t[::1] dims,
                  const cnp.int64_t[::1] term_fptr, const cnp.int64_t[::1] term_factors,
                  const cnp.int64_t[::1] term_coff, const cnp.int64_t[::1] colptr,
                  const cnp.int64_t[::1] delta, const scalar_t[::1] vals, scalar_t[:, ::1] out):
    """Accumulate the local terms into ``out[i, j] = <block_i| H |block_j>``.

    Returns the number of matrix elements that left the block (zero when the
    block is an invariant subspace).
    """
    cdef Py_ssize_t nb = block_idx.shape[0], nterms = term_fptr.shape[0] - 1
    cdef Py_ssize_t j, t, a, lc, off, ent, b, i
    cdef cnp.int64_t leaked = 0
    with nogil:
        for j in range(nb):
            a = block_idx[j]
            for t in range(nterms):
                lc = _local_col(a, term_factors, term_fptr[t], term_fptr[t + 1], strides, dims)
                off = term_coff[t] + lc
                for ent in range(colptr[off], colptr[off + 1]):
                    b = a + delta[ent]
                    i = pos_map[b]
                    if i < 0:
                        leaked += 1
                    else:
                        out[i, j] += vals[ent]
    return leaked


def scatter_apply(const cnp.int64_t[::1] strides, const cnp.int64_t[::1] dims,
                  const cnp.int64_t[::1] term_fptr, const cnp.int64_t[::1] term_factors,
                  const cnp.int64_t[::1] term_coff, const cnp.int64_t[::1] colptr,
                  const cnp.int64_t[::1] delta, const scalar_t[::1] vals,
                  const scalar_t[::1] x, scalar_t[::1] y):
    """``y += (sum of local terms) @ x`` without forming the matrix."""
    cdef Py_ssize_t n = x.shape[0], nterms = term_fptr.shape[0] - 1
    cdef Py_ssize_t a, t, lc, off, ent
    cdef scalar_t xa
    with nogil:
        for a in range(n):
            xa = x[a]
            if xa == 0:
                continue
            for t in range(nterms):
                lc = _local_col(a, term_factors, term_fptr[t], term_fptr[t + 1], strides, dims)
                off = term_coff[t] + lc
                for ent in range(colptr[off], colptr[off + 1]):
                    y[a + delta[ent]] += vals[ent] * xa
