"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Signatures and in-place semantics match the Cython module exactly.
"""

import numpy as np


def _offdiag_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_sweeps(a, v, tol, max_sweeps):
    n = a.shape[0]
    sweep = 0
    off = _offdiag_norm(a)
    while off >= tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                ah = float(abs(h))
                app = float(a[p, p].real)
                aqq = float(a[q, q].real)
                if ah <= 1e-18 * (abs(app) + abs(aqq)) or ah < 1e-150:
                    # negligible next to the diagonal: drop it outright
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * ah)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                e = complex(h.real / ah, h.imag / ah) if np.iscomplexobj(a) else h / ah
                ec = np.conj(e)
                x = a[:, p].copy()
                y = a[:, q]
                a[:, p] = c * x - s * ec * y
                a[:, q] = s * x + c * ec * y
                x = a[p, :].copy()
                y = a[q, :]
                a[p, :] = c * x - s * e * y
                a[q, :] = s * x + c * e * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * ah
                a[q, q] = aqq + t * ah
                x = v[:, p].copy()
                y = v[:, q]
                v[:, p] = c * x - s * ec * y
                v[:, q] = s * x + c * ec * y
        sweep += 1
        off = _offdiag_norm(a)
    return sweep, off


def _local_cols(idx, factors, strides, dims):
    lc = np.zeros_like(idx)
    for f in factors:
        lc = lc * dims[f] + (idx // strides[f]) % dims[f]
    return lc


def _term_entries(t, term_fptr, term_factors, term_coff, colptr, dims):
    factors = term_factors[term_fptr[t]:term_fptr[t + 1]]
    ncols = int(np.prod([dims[f] for f in factors]))
    ptr = colptr[term_coff[t]:term_coff[t] + ncols + 1]
    return factors, ncols, ptr


def scatter_block(block_idx, pos_map, strides, dims, term_fptr, term_factors,
                  term_coff, colptr, delta, vals, out):
    leaked = 0
    cols_j = np.arange(block_idx.shape[0])
    for t in range(term_fptr.shape[0] - 1):
        factors, ncols, ptr = _term_entries(t, term_fptr, term_factors, term_coff, colptr, dims)
        lc = _local_cols(block_idx, factors, strides, dims)
        for col in range(ncols):
            sel = lc == col
            if not sel.any():
                continue
            src = block_idx[sel]
            jj = cols_j[sel]
            for ent in range(ptr[col], ptr[col + 1]):
                ii = pos_map[src + delta[ent]]
                ok = ii >= 0
                leaked += int((~ok).sum())
                out[ii[ok], jj[ok]] += vals[ent]
    return leaked


def scatter_apply(strides, dims, term_fptr, term_factors, term_coff, colptr,
                  delta, vals, x, y):
    idx = np.flatnonzero(x)
    for t in range(term_fptr.shape[0] - 1):
        factors, ncols, ptr = _term_entries(t, term_fptr, term_factors, term_coff, colptr, dims)
        lc = _local_cols(idx, factors, strides, dims)
        for col in range(ncols):
            src = idx[lc == col]
            if src.size == 0:
                continue
            for ent in range(ptr[col], ptr[col + 1]):
                # targets are distinct for fixed (term, entry): plain fancy add is safe
                y[src + delta[ent]] += vals[ent] * x[src]
