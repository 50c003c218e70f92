"""Optimal fidelities by dense, sector-blocked and reduced-subspace routes."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .densemath import DENSE_CAP, PureState, Spectrum, hermitian_eig, krylov_top_eig
from .errors import ArgumentError, SizeError
from .spinsym import sector_partition
from .tasks import (ChshPair, CloningTask, Equatorial, ManyToN, StateDependentQubit,
                    UniversalQudit, build_R, clone_operator, embed_state_1N,
                    embed_state_MN, local_R, subspace_matrix_1N, subspace_matrix_MN)

METHODS = ("dense", "blocked", "subspace", "closed_form")
BLOCKED_QUBIT_CAP = 16
KRYLOV_MIN_SIDE = 2048  # larger sector blocks are never formed densely
DEGENERACY_TOL = 1e-9


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("ASYMCLONE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FidelityReport:
    task: CloningTask
    fidelity: float
    per_clone: tuple[float, ...]
    lambda_sub: float | None
    degeneracy: int
    method: str
    residual: float
    sector: int | None = None
    state: PureState | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class BlockedResult:
    value: float
    vector: np.ndarray = field(repr=False)
    label: int
    degeneracy: int
    residual: float
    sector_max: dict = field(default_factory=dict, repr=False)


def has_subspace_route(task: CloningTask) -> bool:
    return isinstance(task.variant, (UniversalQudit, ManyToN))


# ------------------------------------------------------------------ blocked

def _blocked_cap_ok(task: CloningTask):
    # qubit clones: N <= 16; otherwise bound by the same number of amplitudes
    limit = 2 * 2 ** BLOCKED_QUBIT_CAP
    if task.size > limit:
        raise SizeError(f"space dimension {task.size} exceeds blocked cap {limit}")


def sector_spectra(task: CloningTask, labels=None, mirror: bool = True,
                   workers: int | None = None) -> dict[int, Spectrum]:
    """Top-of-spectrum decomposition of every excitation-sector block of R.

    With ``mirror`` only sectors with a nonnegative label are diagonalized;
    the global flip symmetry gives the negative ones the same spectrum.
    """
    _blocked_cap_ok(task)
    part = sector_partition(task.dims, flipped=True)
    op = local_R(task)
    wanted = part.labels if labels is None else tuple(labels)
    todo = [lab for lab in wanted if not (mirror and lab < 0 and -lab in part.labels)]

    def solve_one(lab):
        idx = part.group_of(lab)
        if idx.size <= KRYLOV_MIN_SIDE:
            block = op.block(idx)
            return lab, hermitian_eig(block, degeneracy_tol=DEGENERACY_TOL, top_only=True)
        return lab, krylov_top_eig(_restricted_apply(op, idx), idx.size, op.dtype,
                                   degeneracy_tol=DEGENERACY_TOL)

    workers = default_workers() if workers is None else workers
    if workers > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(solve_one, todo))
    else:
        results = dict(map(solve_one, todo))
    out = {}
    for lab in wanted:
        out[lab] = results[lab] if lab in results else results[-lab]
    return out


def _restricted_apply(op, idx):
    def apply(x):
        full = np.zeros(op.size, dtype=np.result_type(op.dtype, x.dtype))
        full[idx] = x.reshape(-1)
        return op.apply(full)[idx]
    return apply


def _canonical_label(cands):
    return sorted(cands, key=lambda lab: (abs(lab), -lab))[0]


def blocked_max_eigenpair(task: CloningTask, mirror: bool = True,
                          workers: int | None = None) -> BlockedResult:
    """Maximum eigenpair of R from per-sector diagonalization.

    Reports the sector of smallest ``|label|`` attaining the maximum (the
    positive one on a tie). Labels are eigenvalues of
    ``-sz_input + sum sz_clone`` in the doubled spin normalization.
    """
    spectra = sector_spectra(task, mirror=mirror, workers=workers)
    gmax = max(s.max_value for s in spectra.values())
    thresh = gmax - DEGENERACY_TOL * max(1.0, abs(gmax))
    degeneracy = 0
    cands = []
    for lab, s in spectra.items():
        count = int(np.sum(s.eigenvalues >= thresh))
        if count:
            degeneracy += count
            cands.append(lab)
    lab = _canonical_label(cands)
    part = sector_partition(task.dims, flipped=True)
    vec = np.zeros(task.size, dtype=spectra[lab].eigenvectors.dtype)
    vec[part.group_of(lab)] = spectra[lab].eigenvectors[:, -1]
    return BlockedResult(gmax, vec, lab, degeneracy, spectra[lab].residual,
                         {k: s.max_value for k, s in spectra.items()})


# ------------------------------------------------------------- canonical state

def optimal_state(task: CloningTask, blocked: BlockedResult | None = None
                  ) -> tuple[PureState, float | None, int | None]:
    """A canonical optimal state, with the subspace eigenvalue when one exists.

    Universal and M->N tasks embed the dominant coefficient vector of the
    reduced problem in sector 0; other tasks take the top eigenvector of
    the canonical sector from the blocked solver.
    """
    v = task.variant
    if isinstance(v, UniversalQudit):
        prob = subspace_matrix_1N(v.d, v.n, task.weights)
        lam, beta_kept = prob.dominant()
        beta = np.zeros(v.n)
        beta[list(prob.kept)] = beta_kept
        return embed_state_1N(v.d, v.n, beta, 0), lam, None
    if isinstance(v, ManyToN):
        prob = subspace_matrix_MN(v.m, v.n, task.weights)
        lam, beta = prob.dominant()
        return embed_state_MN(v.m, v.n, beta, 0), lam, None
    res = blocked if blocked is not None else blocked_max_eigenpair(task)
    return PureState.from_vector(res.vector, task.dims), None, res.label


def per_clone_values(task: CloningTask, psi: PureState) -> tuple[float, ...]:
    if psi.dims != task.dims:
        raise ArgumentError(f"state layout {psi.dims} does not match task {task.dims}")
    return tuple(clone_operator(task, k).expectation(psi.amplitudes) for k in range(task.n))


# ------------------------------------------------------------------ public

def optimal_fidelity(task: CloningTask, method: str = "auto",
                     workers: int | None = None) -> FidelityReport:
    """Best weighted fidelity ``max eig R`` by the chosen route.

    ``auto`` picks the subspace route when one exists, otherwise blocked.
    Per-clone fidelities always come from the canonical optimal state, so
    they do not depend on the route.
    """
    if method == "auto":
        method = "subspace" if has_subspace_route(task) else "blocked"
    if method not in METHODS:
        raise ArgumentError(f"unknown method {method!r}; choose from {METHODS}")

    blocked = None
    if method == "blocked":
        blocked = blocked_max_eigenpair(task, workers=workers)
    psi, lam_sub, label = optimal_state(task, blocked)
    per_clone = per_clone_values(task, psi)

    if method == "dense":
        if task.size > DENSE_CAP:
            raise SizeError(f"dense route limited to side {DENSE_CAP}")
        spec = hermitian_eig(build_R(task), degeneracy_tol=DEGENERACY_TOL)
        fid, deg, res = spec.max_value, spec.degeneracy, spec.residual
    elif method == "blocked":
        b = blocked
        fid, deg, res, label = b.value, b.degeneracy, b.residual, b.label
    elif method == "subspace":
        if lam_sub is None:
            raise ArgumentError(f"{task.variant.kind} tasks have no reduced subspace route")
        fid = _fidelity_from_lambda(task, lam_sub)
        r = local_R(task)
        res = float(np.linalg.norm(r.apply(psi.amplitudes) - fid * psi.amplitudes))
        deg = _subspace_degeneracy(task)
    else:
        fid = closed_form_fidelity(task)
        if fid is None:
            raise ArgumentError("no closed form is known for this task")
        res = 0.0
        deg = _subspace_degeneracy(task) if has_subspace_route(task) else 0
    return FidelityReport(task, float(fid), per_clone, lam_sub, int(deg), method,
                          float(res), label, psi)


def _fidelity_from_lambda(task: CloningTask, lam: float) -> float:
    v = task.variant
    if isinstance(v, UniversalQudit):
        return (1.0 + lam) / (v.d + 1)
    return lam


def _subspace_degeneracy(task: CloningTask) -> int:
    """Top-eigenspace dimension implied by the reduced problem.

    1->N: one top vector per symmetric state of the other ``N'-1`` weighted
    clones, times a free ``d`` levels on each zero-weight clone. M->N: one
    per excitation sector of the ``N-M`` clones outside the string.
    """
    v = task.variant
    if isinstance(v, UniversalQudit):
        kept = int(np.count_nonzero(task.alpha > 0))
        sym = math.comb(kept + v.d - 2, kept - 1)
        return sym * v.d ** (v.n - kept)
    if isinstance(v, ManyToN):
        return v.n - v.m + 1
    return 0


# ----------------------------------------------------------- closed forms

def star_fidelity_scan(gamma: float, n: int) -> float:
    """Symmetric qubit fidelity maximized over every symmetric sector ``i``."""
    gd = 0.5 * (1.0 - 4.0 * gamma)  # gamma * Delta without dividing by gamma
    best = max(math.sqrt(4 * gamma ** 2 * (i + 1) * (n - i) + gd ** 2 * (n - 2 * i - 1) ** 2)
               for i in range(n))
    return 0.5 + gd / n + best / n


def symmetric_star_fidelity(gamma: float, n: int) -> float:
    """Optimal symmetric 1->N fidelity for a phase-covariant qubit source.

    Below ``gamma = 1/6`` the edge sectors ``i = 0, N-1`` win; above it the
    middle sector ``i = floor(N/2)`` does.
    """
    if not 0.0 <= gamma <= 0.25 or n < 1:
        raise ArgumentError("need 0 <= gamma <= 1/4 and N >= 1")
    gd = 0.5 * (1.0 - 4.0 * gamma)
    i = 0 if gamma <= 1.0 / 6.0 else n // 2
    root = math.sqrt(4 * gamma ** 2 * (i + 1) * (n - i) + gd ** 2 * (n - 2 * i - 1) ** 2)
    return 0.5 + gd / n + root / n


def universal_symmetric_fidelity(d: int, n: int) -> float:
    return 1.0 / n + 2.0 * (n - 1) / (n * (d + 1))


def chsh_lambda(alpha1: float, alpha2: float) -> float:
    return 0.5 * (math.hypot(alpha1, alpha2) + 1.0)


def closed_form_fidelity(task: CloningTask) -> float | None:
    """Analytic optimum when one is known, else None."""
    v = task.variant
    sym = task.weights.is_symmetric
    if isinstance(v, ChshPair):
        return chsh_lambda(*task.weights.alpha)
    if isinstance(v, UniversalQudit):
        if v.n == 1 or max(task.weights.alpha) == 1.0:
            return 1.0
        return universal_symmetric_fidelity(v.d, v.n) if sym else None
    if isinstance(v, (StateDependentQubit, Equatorial)):
        return symmetric_star_fidelity(v.gamma, v.n) if sym else None
    if isinstance(v, ManyToN):
        if sym and v.m == v.n - 1:
            return (v.n ** 2 + v.n - 1) / (v.n ** 2 + v.n)
        return None
    return None
