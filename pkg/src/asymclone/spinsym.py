"""Spin matrices, ladder-generated symmetric states and J_Z sector grading.

The spin matrices follow the doubled normalization in which d=2 gives the
Pauli matrices: ``sz = diag(d-1, d-3, ..., 1-d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .densemath import KRON_CAP, HermitianOperator, PureState
from .errors import ArgumentError, SizeError


@dataclass(frozen=True)
class SpinOps:
    d: int
    sx: HermitianOperator
    sy: HermitianOperator
    sz: HermitianOperator

    @property
    def raising_diag(self) -> np.ndarray:
        """Coefficients sqrt((n+1)(d-n-1)) on the first off-diagonal."""
        n = np.arange(self.d - 1)
        return np.sqrt((n + 1) * (self.d - n - 1))


def spin_operators(d: int) -> SpinOps:
    if d < 2:
        raise ArgumentError(f"spin dimension must be >= 2, got {d}")
    n = np.arange(d - 1)
    c = np.sqrt((n + 1) * (d - n - 1))
    sx = np.diag(c, 1) + np.diag(c, -1)
    sy = np.diag(-1j * c, 1) + np.diag(1j * c, -1)
    sz = np.diag((d - 1 - 2 * np.arange(d)).astype(float))
    return SpinOps(d, HermitianOperator(sx.astype(complex), (d,)),
                   HermitianOperator(sy, (d,)),
                   HermitianOperator(sz.astype(complex), (d,)))


def lowering_step(d: int) -> np.ndarray:
    """Single-site part of the collective step ``(sx - i sy) / 2``.

    It maps ``|n>`` to ``sqrt((n+1)(d-n-1)) |n+1>``, i.e. it adds one
    excitation.
    """
    n = np.arange(d - 1)
    return np.diag(np.sqrt((n + 1) * (d - n - 1)), -1)


def raising_step(d: int) -> np.ndarray:
    """Single-site part of ``(sx + i sy) / 2``: removes one excitation."""
    return lowering_step(d).T.copy()


def apply_collective(state: np.ndarray, m: int, d: int, single: np.ndarray) -> np.ndarray:
    """Apply ``sum_j single_j`` to a state on ``m`` sites of dimension ``d``."""
    t = state.reshape((d,) * m)
    out = np.zeros_like(t, dtype=np.result_type(t, single))
    for j in range(m):
        out += np.moveaxis(np.tensordot(single, t, axes=([1], [j])), 0, j)
    return out.reshape(-1)


def dicke_state(m: int, d: int, k: int) -> PureState:
    """Permutation-symmetric ``m``-site state with ``k`` excitations.

    Built from ``|0...0>`` by ``k`` collective steps, dividing by
    ``sqrt((j+1)(m(d-1)-j))`` at step ``j`` so each result is normalized.
    ``m = 0`` returns the trivial one-amplitude state.
    """
    if m < 0 or d < 2:
        raise ArgumentError("need m >= 0 and d >= 2")
    kmax = m * (d - 1)
    if not 0 <= k <= kmax:
        raise ArgumentError(f"excitation {k} outside 0..{kmax}")
    if d ** m > KRON_CAP:
        raise SizeError(f"{d}^{m} amplitudes exceed cap")
    if m == 0:
        return PureState(np.ones(1), ())
    v = np.zeros(d ** m)
    v[0] = 1.0
    step = lowering_step(d)
    for j in range(k):
        v = apply_collective(v, m, d, step) / np.sqrt((j + 1) * (kmax - j))
    v /= np.linalg.norm(v)
    return PureState(v, (d,) * m)


@dataclass(frozen=True)
class SectorPartition:
    """Basis indices grouped by the eigenvalue of the J_Z-type grading.

    ``labels`` descend; ``groups[k]`` lists (ascending) the indices with
    eigenvalue ``labels[k]``.
    """

    dims: tuple[int, ...]
    labels: tuple[int, ...]
    groups: tuple[np.ndarray, ...]
    input_sign: bool

    def group_of(self, label: int) -> np.ndarray:
        return self.groups[self.labels.index(label)]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)


def jz_values(dims: Sequence[int], flipped: bool) -> np.ndarray:
    """Diagonal of ``sum_f s_f * sz_f`` over the whole space.

    ``s_0 = -1`` when ``flipped`` (input factor enters with a minus sign),
    otherwise all signs are ``+1``.
    """
    dims = tuple(int(x) for x in dims)
    total = int(np.prod(dims, dtype=np.int64))
    if total > KRON_CAP:
        raise SizeError(f"space dimension {total} exceeds cap")
    vals = np.zeros(1, dtype=np.int64)
    for f, d in enumerate(dims):
        site = d - 1 - 2 * np.arange(d, dtype=np.int64)
        if flipped and f == 0:
            site = -site
        vals = (vals[:, None] + site[None, :]).reshape(-1)
    return vals


def sector_partition(dims: Sequence[int], flipped: bool = False) -> SectorPartition:
    if len(dims) == 0:
        raise ArgumentError("dims must be nonempty")
    vals = jz_values(dims, flipped)
    labels = np.unique(vals)[::-1]
    order = np.argsort(-vals, kind="stable")
    sorted_vals = vals[order]
    groups = []
    for lab in labels:
        lo = np.searchsorted(-sorted_vals, -lab, side="left")
        hi = np.searchsorted(-sorted_vals, -lab, side="right")
        groups.append(np.sort(order[lo:hi]))
    return SectorPartition(tuple(int(x) for x in dims), tuple(int(x) for x in labels),
                           tuple(groups), bool(flipped))
