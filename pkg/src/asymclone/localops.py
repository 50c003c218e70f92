"""Operators written as a constant times identity plus few-body terms.

Every cloning matrix here is ``c * 1 + sum_t (local matrix on a few
factors)``. Keeping that form lets us assemble single excitation-sector
blocks, or apply the operator to a vector, without ever building the full
``prod(dims)``-sided matrix.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .densemath import DENSE_CAP, KRON_CAP, HermitianOperator
from .errors import ArgumentError, SizeError


class LocalOperatorSum:
    """``constant * 1 + sum of local terms`` on a tensor-product space."""

    def __init__(self, dims: Sequence[int], constant: complex = 0.0,
                 terms: Iterable[tuple[Sequence[int], np.ndarray]] = ()):
        self.dims = tuple(int(d) for d in dims)
        if not self.dims or any(d < 1 for d in self.dims):
            raise ArgumentError(f"bad dims {self.dims}")
        self.size = int(np.prod(self.dims, dtype=np.int64))
        if self.size > KRON_CAP:
            raise SizeError(f"space dimension {self.size} exceeds cap {KRON_CAP}")
        self.constant = constant
        merged: dict[tuple[int, ...], np.ndarray] = {}
        for factors, mat in terms:
            factors = tuple(int(f) for f in factors)
            if len(set(factors)) != len(factors) or any(
                    not 0 <= f < len(self.dims) for f in factors):
                raise ArgumentError(f"bad factor list {factors}")
            side = int(np.prod([self.dims[f] for f in factors]))
            mat = np.asarray(mat)
            if mat.shape != (side, side):
                raise ArgumentError(f"term on {factors} must be {side}x{side}, got {mat.shape}")
            if factors in merged:
                merged[factors] = merged[factors] + mat
            else:
                merged[factors] = mat
        self.terms = tuple(merged.items())

    @property
    def is_real(self) -> bool:
        return np.isreal(self.constant) and all(
            np.isrealobj(m) or not np.any(m.imag) for _, m in self.terms)

    @property
    def dtype(self):
        return np.float64 if self.is_real else np.complex128

    @cached_property
    def strides(self) -> np.ndarray:
        st = np.ones(len(self.dims), dtype=np.int64)
        for k in range(len(self.dims) - 2, -1, -1):
            st[k] = st[k + 1] * self.dims[k + 1]
        return st

    @cached_property
    def _compiled(self):
        dims = np.asarray(self.dims, dtype=np.int64)
        fptr, factors, coff, colptr, delta, vals = [0], [], [], [0], [], []
        for fac, mat in self.terms:
            factors.extend(fac)
            fptr.append(len(factors))
            coff.append(len(colptr) - 1)
            ldims = [self.dims[f] for f in fac]
            side = mat.shape[0]
            digits = np.array(np.unravel_index(np.arange(side), ldims)).T
            st = self.strides[list(fac)]
            for c in range(side):
                rows = np.flatnonzero(mat[:, c])
                for r in rows:
                    delta.append(int(np.dot(digits[r] - digits[c], st)))
                    vals.append(mat[r, c])
                colptr.append(len(delta))
        i64 = lambda x: np.ascontiguousarray(x, dtype=np.int64)  # noqa: E731
        return (i64(self.strides), i64(dims), i64(fptr), i64(factors), i64(coff),
                i64(colptr), i64(delta), np.asarray(vals, dtype=self.dtype))

    def apply(self, x: np.ndarray, dtype=None) -> np.ndarray:
        """Return ``H @ x``."""
        x = np.asarray(x)
        if x.shape != (self.size,):
            raise ArgumentError(f"vector length {x.shape} does not match {self.size}")
        dtype = np.result_type(self.dtype, x.dtype) if dtype is None else dtype
        dtype = np.complex128 if np.issubdtype(dtype, np.complexfloating) else np.float64
        xs = np.ascontiguousarray(x, dtype=dtype)
        y = self.constant * xs
        y = np.ascontiguousarray(y, dtype=dtype)
        st, dims, fptr, fac, coff, colptr, delta, vals = self._compiled
        kernels.scatter_apply(st, dims, fptr, fac, coff, colptr, delta,
                              np.ascontiguousarray(vals, dtype=dtype), xs, y)
        return y

    def expectation(self, x: np.ndarray) -> float:
        return float(np.vdot(x, self.apply(x)).real)

    def block(self, indices: np.ndarray, strict: bool = True) -> np.ndarray:
        """Matrix of the operator restricted to the given basis indices.

        With ``strict`` the indices must span an invariant subspace.
        """
        idx = np.ascontiguousarray(indices, dtype=np.int64)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[idx] = np.arange(idx.size)
        out = np.zeros((idx.size, idx.size), dtype=self.dtype)
        st, dims, fptr, fac, coff, colptr, delta, vals = self._compiled
        leaked = kernels.scatter_block(idx, pos, st, dims, fptr, fac, coff, colptr,
                                       delta, vals, out)
        if strict and leaked:
            raise ArgumentError(f"index set is not invariant ({leaked} elements leave it)")
        out[np.diag_indices(idx.size)] += self.constant
        return out

    def to_dense(self, cap: int = DENSE_CAP) -> np.ndarray:
        if self.size > cap:
            raise SizeError(f"dense side {self.size} exceeds cap {cap}")
        return self.block(np.arange(self.size))

    def to_operator(self, cap: int = DENSE_CAP) -> HermitianOperator:
        return HermitianOperator(self.to_dense(cap), self.dims)
