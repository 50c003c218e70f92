"""Dense linear algebra on tensor-product spaces.

Matrices are plain ``numpy`` arrays. :class:`HermitianOperator` and
:class:`PureState` attach the tensor-factor layout (``dims``) that partial
traces and Schmidt decompositions need. Factor 0 is the most significant
digit of a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from . import kernels
from .errors import ArgumentError, NumericalFailure, SizeError

KRON_CAP = 2 ** 20
DENSE_CAP = 4096
JACOBI_MAX_SIDE = 128
JACOBI_MAX_SWEEPS = 60
DEGENERACY_TOL = 1e-9


def _as_array(m) -> np.ndarray:
    if isinstance(m, HermitianOperator):
        return m.matrix
    if isinstance(m, PureState):
        return m.amplitudes
    return np.asarray(m)


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(x) for x in dims)
    if any(x < 1 for x in dims) or int(np.prod(dims, dtype=np.int64)) != size:
        raise ArgumentError(f"dims {dims} do not multiply to {size}")
    return dims


@dataclass(frozen=True)
class HermitianOperator:
    """A Hermitian matrix with its tensor-factor dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ArgumentError(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ArgumentError("operator has non-finite entries")
        scale = np.max(np.abs(m)) if m.size else 0.0
        if m.size and np.max(np.abs(m - m.conj().T)) > 1e-12 * max(scale, 1e-300):
            raise ArgumentError("operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", _check_dims(self.dims, m.shape[0]))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PureState:
    """A normalized state vector on ``prod(dims)`` amplitudes."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.amplitudes)
        if v.ndim != 1:
            raise ArgumentError("amplitudes must be a vector")
        if not np.all(np.isfinite(v)):
            raise ArgumentError("state has non-finite amplitudes")
        if abs(np.vdot(v, v).real - 1.0) > 1e-12:
            raise ArgumentError(f"state is not normalized (norm^2 = {np.vdot(v, v).real!r})")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", _check_dims(self.dims, v.shape[0]))

    @classmethod
    def from_vector(cls, v, dims) -> "PureState":
        """Normalize ``v`` and wrap it."""
        v = np.asarray(v, dtype=complex)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ArgumentError("cannot normalize the zero vector")
        return cls(v / nrm, tuple(dims))

    def projector(self) -> HermitianOperator:
        v = self.amplitudes
        return HermitianOperator(np.outer(v, v.conj()), self.dims)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` ascend; ``eigenvectors[:, k]`` pairs with
    ``eigenvalues[k]``. When only the top of the spectrum was requested
    ``complete`` is False and the arrays hold just that part.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    max_value: float
    max_space: np.ndarray
    degeneracy_tol: float
    residual: float
    backend: str
    complete: bool = True
    sweeps: int = field(default=0, compare=False)

    @property
    def degeneracy(self) -> int:
        return self.max_space.shape[1]


def phase_fix(v: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Rotate ``v`` so its first largest-magnitude entry is real positive."""
    v = np.asarray(v)
    mags = np.abs(v)
    top = mags.max() if v.size else 0.0
    if top == 0:
        return v
    k = int(np.flatnonzero(mags >= top * (1 - rtol))[0])
    out = v * (abs(v[k]) / v[k])
    if np.isrealobj(v):
        return out.real
    return out


def kron(a, b, cap: int = KRON_CAP):
    """Tensor product; operators keep their ``dims`` concatenated."""
    am, bm = _as_array(a), _as_array(b)
    if am.ndim != bm.ndim:
        raise ArgumentError("kron needs two matrices or two vectors")
    side = am.shape[0] * bm.shape[0]
    if side > cap:
        raise SizeError(f"tensor product side {side} exceeds cap {cap}")
    out = np.kron(am, bm)
    if isinstance(a, HermitianOperator) and isinstance(b, HermitianOperator):
        return HermitianOperator(out, a.dims + b.dims)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(out, a.dims + b.dims)
    return out


def partial_trace(op, keep: Sequence[int], dims: Sequence[int] | None = None):
    """Trace out every factor not listed in ``keep``.

    ``op`` may be a :class:`HermitianOperator`, a :class:`PureState` (traced
    as its projector) or a bare matrix with ``dims`` given. The kept factors
    stay in their original order. An empty ``keep`` returns the 1x1 trace.
    """
    if isinstance(op, PureState):
        dims = op.dims
        psi = op.amplitudes.reshape(dims)
        keep_s = sorted(set(int(k) for k in keep))
        _validate_factor_set(keep_s, len(dims))
        rest = [k for k in range(len(dims)) if k not in keep_s]
        dk = int(np.prod([dims[k] for k in keep_s], dtype=np.int64))
        a = np.transpose(psi, keep_s + rest).reshape(dk, -1)
        return HermitianOperator(a @ a.conj().T, tuple(dims[k] for k in keep_s))
    if isinstance(op, HermitianOperator):
        dims = op.dims
    if dims is None:
        raise ArgumentError("dims required for a bare matrix")
    m = _as_array(op)
    dims = _check_dims(dims, m.shape[0])
    keep_s = sorted(set(int(k) for k in keep))
    _validate_factor_set(keep_s, len(dims))
    rest = [k for k in range(len(dims)) if k not in keep_s]
    nf = len(dims)
    t = m.reshape(dims + dims)
    perm = keep_s + rest + [nf + k for k in keep_s] + [nf + k for k in rest]
    dk = int(np.prod([dims[k] for k in keep_s], dtype=np.int64))
    dr = int(np.prod([dims[k] for k in rest], dtype=np.int64))
    t = np.transpose(t, perm).reshape(dk, dr, dk, dr)
    out = np.einsum("ajbj->ab", t)
    return HermitianOperator(out, tuple(dims[k] for k in keep_s))


def _validate_factor_set(keep, nfactors):
    for k in keep:
        if not 0 <= k < nfactors:
            raise ArgumentError(f"factor index {k} out of range for {nfactors} factors")


def _group_top(values, vectors, degeneracy_tol):
    vmax = float(values[-1])
    thresh = vmax - degeneracy_tol * max(1.0, abs(vmax))
    top = vectors[:, values >= thresh]
    return vmax, top


def hermitian_eig(h, degeneracy_tol: float = DEGENERACY_TOL, backend: str = "auto",
                  top_only: bool = False, cap: int = 1 << 15) -> Spectrum:
    """Eigen-decompose a Hermitian matrix.

    ``backend`` is ``"jacobi"`` (cyclic Jacobi, compiled when available),
    ``"lapack"``, or ``"auto"`` which uses Jacobi up to ``JACOBI_MAX_SIDE``.
    With ``top_only`` the LAPACK path computes only the top eigenspace,
    widening its window until the degenerate group is fully captured.
    """
    if isinstance(h, HermitianOperator):
        m = h.matrix
    else:
        m = np.asarray(h)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ArgumentError("matrix must be square")
        scale = np.max(np.abs(m)) if m.size else 0.0
        if m.size and np.max(np.abs(m - m.conj().T)) > 1e-12 * max(scale, 1e-300):
            raise ArgumentError("matrix is not Hermitian")
    n = m.shape[0]
    if n == 0:
        raise ArgumentError("empty matrix")
    if n > cap:
        raise SizeError(f"matrix side {n} exceeds cap {cap}")
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    if backend == "auto":
        backend = "jacobi" if n <= JACOBI_MAX_SIDE else "lapack"

    sweeps = 0
    complete = True
    if backend == "jacobi":
        dtype = np.float64 if np.isrealobj(m) else np.complex128
        a = np.array(m, dtype=dtype, order="C")
        v = np.eye(n, dtype=dtype)
        normf = float(np.linalg.norm(a))
        tol = 1e-13 * normf
        sweeps, off = kernels.jacobi_sweeps(a, v, tol, JACOBI_MAX_SWEEPS)
        if off >= tol and off > 0:
            raise NumericalFailure(
                f"Jacobi did not converge in {sweeps} sweeps", residual=off)
        w = np.diagonal(a).real.copy()
        order = np.argsort(w, kind="stable")
        w, v = w[order], v[:, order]
    elif backend == "lapack":
        if top_only and n > 64:
            k = min(8, n)
            while True:
                w, v = scipy.linalg.eigh(m, subset_by_index=[n - k, n - 1], driver="evr")
                thresh = w[-1] - degeneracy_tol * max(1.0, abs(w[-1]))
                if w[0] < thresh or k == n:
                    break
                k = min(2 * k, n)
            complete = k == n
        else:
            w, v = scipy.linalg.eigh(m)
    else:
        raise ArgumentError(f"unknown backend {backend!r}")

    v = np.column_stack([phase_fix(v[:, j]) for j in range(v.shape[1])])
    if n <= DENSE_CAP or top_only:
        res = _max_residual(m, w, v)
    else:
        res = float("nan")
    hnorm = max(abs(w[0]), abs(w[-1])) if complete else abs(w[-1])
    if res > 1e-9 * max(hnorm, 1e-300):
        raise NumericalFailure(f"eigenpair residual {res:.3e} too large", residual=res)
    vmax, top = _group_top(w, v, degeneracy_tol)
    return Spectrum(w, v, vmax, top, degeneracy_tol, res, backend, complete, sweeps)


def krylov_top_eig(apply, n: int, dtype=np.float64, degeneracy_tol: float = DEGENERACY_TOL,
                   k: int = 6, seed: int = 12345) -> Spectrum:
    """Top eigenspace of a Hermitian operator given only ``x -> H x``.

    Implicitly restarted Lanczos (ARPACK) from a seeded start vector. The
    window of ``k`` eigenvalues is doubled until it reaches below the
    degenerate top group, and every returned pair is checked by residual.
    """
    if n < 3:
        raise ArgumentError("Krylov route needs side >= 3")
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n)
    if np.issubdtype(dtype, np.complexfloating):
        v0 = v0 + 1j * rng.standard_normal(n)
    lin = scipy.sparse.linalg.LinearOperator((n, n), matvec=apply, dtype=dtype)
    k = min(k, n - 2)
    while True:
        ncv = min(n - 1, max(2 * k + 1, 40))
        w, v = scipy.sparse.linalg.eigsh(lin, k=k, which="LA", tol=1e-13, v0=v0, ncv=ncv)
        order = np.argsort(w, kind="stable")
        w, v = w[order], v[:, order]
        thresh = w[-1] - degeneracy_tol * max(1.0, abs(w[-1]))
        if w[0] < thresh or k >= n - 2:
            break
        k = min(2 * k, n - 2)
    v = np.column_stack([phase_fix(v[:, j]) for j in range(v.shape[1])])
    r = np.column_stack([apply(v[:, j]) for j in range(v.shape[1])]) - v * w
    res = float(np.max(np.linalg.norm(r, axis=0)))
    if res > 1e-9 * max(abs(w[-1]), 1e-300):
        raise NumericalFailure(f"Krylov residual {res:.3e} too large", residual=res)
    vmax, top = _group_top(w, v, degeneracy_tol)
    return Spectrum(w, v, vmax, top, degeneracy_tol, res, "krylov", False, 0)


def _max_residual(m, w, v) -> float:
    r = m @ v - v * w
    return float(np.max(np.linalg.norm(r, axis=0))) if r.size else 0.0


def _symmetrizer(m: np.ndarray):
    """Return ``s`` with ``diag(s)^-1 m diag(s)`` symmetric, or None."""
    n = m.shape[0]
    mr = m.real
    if np.iscomplexobj(m) and np.any(m.imag):
        return None
    if np.any(mr < 0) or np.any((mr > 0) != (mr.T > 0)):
        return None
    # s_j^2 / s_i^2 = m_ji / m_ij along the connectivity graph
    logs = np.full(n, np.nan)
    for root in range(n):
        if not np.isnan(logs[root]):
            continue
        logs[root] = 0.0
        stack = [root]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(mr[i] > 0):
                if j == i or not np.isnan(logs[j]):
                    continue
                logs[j] = logs[i] + 0.5 * (np.log(mr[j, i]) - np.log(mr[i, j]))
                stack.append(j)
    s = np.exp(logs - logs.max())
    sym = mr * s[None, :] / s[:, None]
    if np.max(np.abs(sym - sym.T)) > 1e-12 * max(np.max(np.abs(sym)), 1e-300):
        return None
    return s


def general_max_real_eigenpair(m) -> tuple[float, np.ndarray]:
    """Dominant real eigenvalue and unit right eigenvector of a square matrix.

    Matrices with a nonnegative, diagonally symmetrizable pattern (the
    reduced cloning matrices) are solved through the symmetric similarity;
    anything else falls back to a general eigensolver and must have a real
    dominant eigenvalue.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ArgumentError("matrix must be square")
    s = _symmetrizer(m)
    if s is not None:
        sym = m.real * s[None, :] / s[:, None]
        sym = 0.5 * (sym + sym.T)
        spec = hermitian_eig(sym, degeneracy_tol=0.0)
        lam = spec.max_value
        vec = s * spec.eigenvectors[:, -1]
        vec = phase_fix(vec / np.linalg.norm(vec))
        return float(lam), vec
    w, vecs = np.linalg.eig(m)
    k = int(np.argmax(w.real))
    top = w[k]
    rivals = np.flatnonzero(np.abs(w.real - top.real) <= 1e-10 * max(1.0, abs(top)))
    if abs(top.imag) > 1e-10 * max(1.0, abs(top)) or np.any(np.abs(w[rivals].imag) > 1e-10):
        raise NumericalFailure("dominant eigenvalue is not real", residual=abs(top.imag))
    vec = vecs[:, k]
    vec = phase_fix(vec / np.linalg.norm(vec))
    if np.all(np.abs(vec.imag) <= 1e-12):
        vec = vec.real
    return float(top.real), vec


def schmidt_coefficients(psi: PureState, cut: Sequence[int]) -> np.ndarray:
    """Schmidt coefficients (descending) of ``psi`` across ``cut | rest``."""
    cut_s = sorted(set(int(k) for k in cut))
    nf = len(psi.dims)
    _validate_factor_set(cut_s, nf)
    rest = [k for k in range(nf) if k not in cut_s]
    if not cut_s or not rest:
        raise ArgumentError("cut must split the factors into two nonempty groups")
    dk = int(np.prod([psi.dims[k] for k in cut_s], dtype=np.int64))
    a = np.transpose(psi.tensor(), cut_s + rest).reshape(dk, -1)
    return np.linalg.svd(a, compute_uv=False)
