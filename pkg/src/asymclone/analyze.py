"""Per-clone fidelities, trade-off relations, economy witnesses and sweeps.

Economy is decided from the top eigenspace of R. A pure state in it whose
input marginal is maximally mixed gives a unitary (economical) cloner; a
mixture with that marginal needs an ancilla purifying the mixture.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .densemath import DENSE_CAP, PureState, hermitian_eig, partial_trace
from .errors import ArgumentError, CloningError, NumericalFailure, SizeError
from .solve import (DEGENERACY_TOL, blocked_max_eigenpair, chsh_lambda,
                    default_workers, optimal_fidelity, per_clone_values, sector_spectra)
from .spinsym import sector_partition
from .tasks import (GHZ, ChshPair, CloningTask, Equatorial, ManyToN, StateDependentQubit,
                    UniversalQudit, Weights, build_R, embed_state_1N, embed_state_MN,
                    local_R, subspace_matrix_1N, subspace_matrix_MN)

ECONOMICAL = "economical"
ANCILLA = "ancilla"
SCHMIDT_TOL = 1e-8
MARGINAL_TOL = 1e-10
HEURISTIC_RESTARTS = 32


# ---------------------------------------------------------------- fidelities

def per_clone_fidelities(psi: PureState, task: CloningTask) -> list[float]:
    """``<psi| R_n |psi>`` for every clone ``n``."""
    return list(per_clone_values(task, psi))


def per_clone_closed_form_1N(d: int, beta) -> list[float]:
    """Clone fidelities of the universal 1->N state built from ``beta``.

    ``F_n = 1/(d+1) + ((d-1) beta_n + sum beta)^2 / (d (d+1))`` with ``beta``
    first rescaled to ``(sum beta)^2 + (d-1) sum beta^2 = d``.
    """
    beta = np.asarray(beta, dtype=float)
    nrm = beta.sum() ** 2 + (d - 1) * np.dot(beta, beta)
    if nrm <= 0:
        raise ArgumentError("coefficients have zero norm")
    beta = beta * math.sqrt(d / nrm)
    s = beta.sum()
    return [1.0 / (d + 1) + ((d - 1) * b + s) ** 2 / (d * (d + 1)) for b in beta]


def singlet_fraction(f: float, d: int) -> float:
    """``p = (f (d+1) - 1) / d``; no clamping, so ``p < 0`` flags f < 1/(d+1)."""
    return (f * (d + 1) - 1.0) / d


def fidelity_of_singlet_fraction(p: float, d: int) -> float:
    return (p * d + 1.0) / (d + 1)


def monogamy_slack_1N(p: Sequence[float], d: int) -> float:
    """``(d-1)/d + (sum sqrt p)^2 / (N+d-1) - sum p``; zero on the optimal frontier."""
    p = np.asarray(p, dtype=float)
    n = p.size
    root = np.sqrt(np.clip(p, 0.0, None))
    return float((d - 1) / d + root.sum() ** 2 / (n + d - 1) - p.sum())


def tradeoff_slack_NminusOne(f: Sequence[float]) -> float:
    """``sum f - (sum sqrt(1-f))^2 - (N-1)`` for (N-1)->N qubit cloning."""
    f = np.asarray(f, dtype=float)
    root = np.sqrt(np.clip(1.0 - f, 0.0, None))
    return float(f.sum() - root.sum() ** 2 - (f.size - 1))


def chsh_monogamy(alpha1: float, alpha2: float, check: bool = True) -> tuple[float, float]:
    """Largest eigenvalue of the CHSH-pair matrix and the weighted Bell bound.

    Returns ``(lambda, 4 sqrt2 (lambda - 1/2))``; with ``check`` the formula
    is compared against dense diagonalization.
    """
    task = CloningTask.chsh([alpha1, alpha2])
    lam = chsh_lambda(alpha1, alpha2)
    if check:
        dense = hermitian_eig(build_R(task)).max_value
        if abs(dense - lam) > 1e-10:
            raise NumericalFailure(f"CHSH eigenvalue {dense!r} disagrees with {lam!r}",
                                   residual=abs(dense - lam))
    return lam, 4.0 * math.sqrt(2.0) * (lam - 0.5)


# ------------------------------------------------------------------ economy

@dataclass(frozen=True)
class Mixture:
    """``sum_k probabilities[k] |states[k]><states[k]|``."""

    probabilities: tuple[float, ...]
    states: tuple[PureState, ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return sum(1 for p in self.probabilities if p > 1e-12)

    def input_marginal(self) -> np.ndarray:
        out = 0
        for p, s in zip(self.probabilities, self.states):
            out = out + p * partial_trace(s, [0]).matrix
        return out


@dataclass(frozen=True)
class EconomyReport:
    """Whether the optimal cloner runs without an ancilla.

    ``ancilla_dim`` is None for economical cloners. ``schmidt_spectrum``
    holds the square roots of the input-marginal eigenvalues (the Schmidt
    coefficients of the witness or of a purification of the mixture).
    ``eigen_residual`` bounds ``||(R - F) v||`` over the witness vectors.
    """

    task: CloningTask
    classification: str
    ancilla_dim: int | None
    witness: PureState | Mixture = field(repr=False)
    schmidt_spectrum: tuple[float, ...]
    input_marginal_residual: float
    eigen_residual: float
    construction: str
    heuristic: bool = False
    search_deviation: float | None = None


def _marginal_residual(rho0: np.ndarray) -> float:
    d = rho0.shape[0]
    return float(np.max(np.abs(rho0 - np.eye(d) / d)))


def _schmidt_from_marginal(rho0: np.ndarray) -> tuple[float, ...]:
    w = np.linalg.eigvalsh(rho0)[::-1]
    return tuple(float(math.sqrt(max(x, 0.0))) for x in w)


def _eig_residual(op, value: float, vectors) -> float:
    return max(float(np.linalg.norm(op.apply(v) - value * v)) for v in vectors)


def _pure_report(task, psi, value, op, construction, heuristic=False, deviation=None):
    rho0 = partial_trace(psi, [0]).matrix
    return EconomyReport(task, ECONOMICAL, None, psi, _schmidt_from_marginal(rho0),
                         _marginal_residual(rho0),
                         _eig_residual(op, value, [psi.amplitudes]), construction,
                         heuristic, deviation)


def _mixture_report(task, mix, value, op, construction, ancilla_dim=None,
                    heuristic=False, deviation=None):
    rho0 = mix.input_marginal()
    res = _marginal_residual(rho0)
    if res > MARGINAL_TOL:
        raise NumericalFailure(f"mixture input marginal off by {res:.3e}", residual=res)
    k = mix.rank if ancilla_dim is None else ancilla_dim
    return EconomyReport(task, ANCILLA, int(k), mix, _schmidt_from_marginal(rho0), res,
                         _eig_residual(op, value, [s.amplitudes for s in mix.states]),
                         construction, heuristic, deviation)


def _is_max_entangled(psi: PureState) -> bool:
    rho0 = partial_trace(psi, [0]).matrix
    d = rho0.shape[0]
    s = np.array(_schmidt_from_marginal(rho0))
    return bool(np.max(np.abs(s - 1.0 / math.sqrt(d))) < SCHMIDT_TOL)


def _top_value(task: CloningTask) -> float:
    return optimal_fidelity(task, method="blocked").fidelity


def _flip(task: CloningTask, v: np.ndarray) -> np.ndarray:
    """Apply ``n -> d-1-n`` on every factor (``X`` on every qubit)."""
    t = v.reshape(task.dims)
    return np.flip(t, axis=tuple(range(t.ndim))).reshape(-1).copy()


def top_eigenspace(task: CloningTask) -> tuple[float, np.ndarray]:
    """Maximum eigenvalue of R and an orthonormal basis of its eigenspace."""
    spectra = sector_spectra(task, mirror=False)
    gmax = max(s.max_value for s in spectra.values())
    thresh = gmax - DEGENERACY_TOL * max(1.0, abs(gmax))
    part = sector_partition(task.dims, flipped=True)
    cols = []
    for lab, s in spectra.items():
        for j in np.flatnonzero(s.eigenvalues >= thresh):
            v = np.zeros(task.size, dtype=s.eigenvectors.dtype)
            v[part.group_of(lab)] = s.eigenvectors[:, j]
            cols.append(v)
    return gmax, np.column_stack(cols)


def _sector_vectors(task: CloningTask):
    """Top vectors grouped by sector label, for the qubit constructions."""
    spectra = sector_spectra(task, mirror=False)
    gmax = max(s.max_value for s in spectra.values())
    thresh = gmax - DEGENERACY_TOL * max(1.0, abs(gmax))
    part = sector_partition(task.dims, flipped=True)
    out = {}
    for lab, s in spectra.items():
        idx = np.flatnonzero(s.eigenvalues >= thresh)
        if idx.size:
            vs = np.zeros((task.size, idx.size), dtype=s.eigenvectors.dtype)
            vs[part.group_of(lab)] = s.eigenvectors[:, idx]
            out[lab] = vs
    return gmax, out


def _flip_symmetrized_witness(task: CloningTask):
    """Search ``v +- P v`` with ``P`` the global flip, sector by sector.

    For a sector with label ``L != 0`` the combination ``v + P v`` pairs it
    with sector ``-L``; inside sector 0, ``P`` acts on the degenerate top
    space and its eigenvectors are tried.
    """
    gmax, groups = _sector_vectors(task)
    for lab in sorted(groups, key=lambda x: (abs(x), -x)):
        vs = groups[lab]
        cands = []
        if lab == 0:
            pv = np.column_stack([_flip(task, vs[:, j]) for j in range(vs.shape[1])])
            p_small = vs.conj().T @ pv
            p_small = 0.5 * (p_small + p_small.conj().T)
            _, u = np.linalg.eigh(p_small)
            cands = [vs @ u[:, j] for j in range(u.shape[1])]
        else:
            for j in range(vs.shape[1]):
                w = vs[:, j] + _flip(task, vs[:, j])
                cands.append(w)
        for w in cands:
            nrm = np.linalg.norm(w)
            if nrm < 1e-8:
                continue
            psi = PureState(w / nrm, task.dims)
            if _is_max_entangled(psi):
                return gmax, psi, f"flip-symmetrized sector {lab}"
    return gmax, None, None


def _single_sector_witness(task: CloningTask):
    b = blocked_max_eigenpair(task)
    psi = PureState.from_vector(b.vector, task.dims)
    return b.value, psi


def economy_report(task: CloningTask, seed: int = 0) -> EconomyReport:
    """Classify the optimal cloner as economical or needing an ancilla.

    Constructive witnesses are tried first, in this order: a single-sector
    top eigenvector (equatorial, CHSH), the GHZ-type embedding (universal),
    the ``d``-state mixture (universal, N=2), flip-symmetrized eigenvectors
    (qubit state-dependent), a retry with one extra zero-weight clone (even
    N), and the equal mixture over sectors (M->N). Anything else goes to a
    seeded heuristic search labelled as such.
    """
    v = task.variant
    op = local_R(task)
    if isinstance(v, (Equatorial, ChshPair)):
        value, psi = _single_sector_witness(task)
        if _is_max_entangled(psi):
            return _pure_report(task, psi, value, op, "single-sector eigenvector")
    elif isinstance(v, UniversalQudit):
        return _universal_economy(task, op, seed)
    elif isinstance(v, StateDependentQubit):
        value, psi, how = _flip_symmetrized_witness(task)
        if psi is not None:
            return _pure_report(task, psi, value, op, how)
        if v.n % 2 == 0:
            return _extended_clone_report(task, op)
    elif isinstance(v, ManyToN):
        return _many_to_n_economy(task, op, seed)
    return _heuristic_report(task, op, seed)


def _universal_economy(task, op, seed):
    v = task.variant
    d, n = v.d, v.n
    prob = subspace_matrix_1N(d, n, task.weights)
    lam, kept_beta = prob.dominant()
    value = (1.0 + lam) / (d + 1)
    beta = np.zeros(n)
    beta[list(prob.kept)] = kept_beta
    nonzero = int(np.count_nonzero(np.abs(beta) > 1e-14))
    if n == 1 or nonzero == 1:
        psi = embed_state_1N(d, n, beta, 0, GHZ)
        return _pure_report(task, psi, value, op, "single pair (trivial 1->1)")
    if n > 2:
        psi = embed_state_1N(d, n, beta, 0, GHZ)
        if _is_max_entangled(psi):
            return _pure_report(task, psi, value, op, "GHZ-type embedding")
        return _heuristic_report(task, op, seed)
    states = tuple(embed_state_1N(d, n, beta, i) for i in range(d))
    mix = Mixture(tuple([1.0 / d] * d), states)
    deviation = economy_search(task, seed=seed).deviation
    return _mixture_report(task, mix, value, op, f"{d}-state sector mixture",
                           ancilla_dim=d, deviation=deviation)


def _extended_clone_report(task, op):
    """Solve with an extra zero-weight clone; that clone is the ancilla qubit."""
    v = task.variant
    big = CloningTask(StateDependentQubit(v.gamma, v.n + 1),
                      Weights(tuple(task.alpha) + (0.0,)))
    value, psi, how = _flip_symmetrized_witness(big)
    if psi is None:
        raise NumericalFailure("no maximally entangled vector after adding a clone")
    t = psi.amplitudes.reshape(-1, 2)
    u, s, _ = np.linalg.svd(t, full_matrices=False)
    probs = tuple(float(x * x) for x in s)
    states = tuple(PureState.from_vector(u[:, k], task.dims) for k in range(u.shape[1]))
    mix = Mixture(probs, states)
    return _mixture_report(task, mix, value, op,
                           f"extra zero-weight clone ({how})", ancilla_dim=2)


def _many_to_n_economy(task, op, seed):
    v = task.variant
    prob = subspace_matrix_MN(v.m, v.n, task.weights)
    lam, beta = prob.dominant()
    k = v.n - v.m + 1
    states = tuple(embed_state_MN(v.m, v.n, beta, i) for i in range(k))
    mix = Mixture(tuple([1.0 / k] * k), states)
    res = _marginal_residual(mix.input_marginal())
    if res <= MARGINAL_TOL:
        return _mixture_report(task, mix, lam, op, f"equal mixture of {k} sectors",
                               ancilla_dim=k)
    return _heuristic_report(task, op, seed)


# ------------------------------------------------------- heuristic search

@dataclass(frozen=True)
class SearchResult:
    state: PureState
    deviation: float
    entropy: float
    restarts: int


def _marginal_of(q_tensor, c):
    a = np.tensordot(q_tensor, c, axes=([2], [0]))  # (d, rest)
    return a, a @ a.conj().T


def economy_search(task: CloningTask, restarts: int = HEURISTIC_RESTARTS, seed: int = 0,
                   iters: int = 300) -> SearchResult:
    """Projected gradient ascent of the input entanglement entropy over
    normalized vectors in the top eigenspace, from seeded random starts.

    ``deviation`` is the smallest ``max |s_i - 1/sqrt d|`` over Schmidt
    coefficients found; below ``1e-8`` the top eigenspace holds a
    maximally entangled vector.
    """
    value, q = top_eigenspace(task)
    d = task.input_dim
    k = q.shape[1]
    qt = q.reshape(d, -1, k)
    rng = np.random.default_rng(seed)
    target = 1.0 / math.sqrt(d)
    best = None
    for _ in range(restarts):
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        c /= np.linalg.norm(c)
        step = 0.5
        ent = _entropy(_marginal_of(qt, c)[1])
        for _ in range(iters):
            a, rho = _marginal_of(qt, c)
            w, u = np.linalg.eigh(rho)
            g_rho = -(u * np.log(np.clip(w, 1e-300, None))) @ u.conj().T
            # dS/dc* = Q^dag (G x 1) Q c
            grad = np.tensordot(qt.conj(), g_rho @ a, axes=([0, 1], [0, 1]))
            grad = grad - np.vdot(c, grad) * c
            gn = np.linalg.norm(grad)
            if gn < 1e-13:
                break
            while step > 1e-12:
                trial = c + step * grad
                trial /= np.linalg.norm(trial)
                e2 = _entropy(_marginal_of(qt, trial)[1])
                if e2 > ent:
                    c, ent = trial, e2
                    step *= 1.5
                    break
                step *= 0.5
            else:
                break
        rho = _marginal_of(qt, c)[1]
        s = np.sqrt(np.clip(np.linalg.eigvalsh(rho), 0.0, None))
        dev = float(np.max(np.abs(s - target)))
        if best is None or dev < best[1]:
            best = (c, dev, ent)
    c, dev, ent = best
    psi = PureState.from_vector(q @ c, task.dims)
    return SearchResult(psi, dev, float(ent), restarts)


def _entropy(rho: np.ndarray) -> float:
    w = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    w = w[w > 1e-300]
    return float(-np.sum(w * np.log(w)))


def feasible_mixture(task: CloningTask, iters: int = 5000) -> Mixture:
    """A density matrix on the top eigenspace with maximally mixed input
    marginal, by alternating projections between the affine constraint set
    and the positive cone.
    """
    value, q = top_eigenspace(task)
    d = task.input_dim
    k = q.shape[1]
    qt = q.reshape(d, -1, k)
    # linear map X -> Tr_O(Q X Q^dag), written on vec(X)
    amap = np.einsum("arj,bri->abji", qt, qt.conj()).reshape(d * d, k * k)
    rows = np.vstack([amap, np.eye(k).reshape(1, -1)])
    rhs = np.concatenate([(np.eye(d) / d).reshape(-1), [1.0]])
    pinv = np.linalg.pinv(rows)
    x = np.eye(k, dtype=complex) / k
    for _ in range(iters):
        xv = x.reshape(-1)
        xv = xv - pinv @ (rows @ xv - rhs)
        x = xv.reshape(k, k)
        x = 0.5 * (x + x.conj().T)
        w, u = np.linalg.eigh(x)
        if w.min() >= -1e-14:
            break
        x = (u * np.clip(w, 0.0, None)) @ u.conj().T
    w, u = np.linalg.eigh(x)
    keep = w > 1e-12
    w = w[keep] / w[keep].sum()
    states = tuple(PureState.from_vector(q @ u[:, j], task.dims)
                   for j in np.flatnonzero(keep))
    return Mixture(tuple(float(p) for p in w), states)


def _heuristic_report(task, op, seed):
    search = economy_search(task, seed=seed)
    value = _top_value(task)
    if search.deviation < SCHMIDT_TOL:
        return _pure_report(task, search.state, value, op, "entropy ascent",
                            heuristic=True, deviation=search.deviation)
    mix = feasible_mixture(task)
    return _mixture_report(task, mix, value, op, "alternating projections",
                           heuristic=True, deviation=search.deviation)


# ------------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class TradeoffRecord:
    alpha: Weights
    fidelities: tuple[float, ...]
    singlet_fractions: tuple[float, ...] | None
    slack: float | None
    fidelity: float | None = None
    failed: bool = False
    error: str | None = None


def slack_for(task: CloningTask, fidelities: Sequence[float]):
    """Singlet fractions and trade-off slack for the task's relation, if any."""
    v = task.variant
    if isinstance(v, UniversalQudit):
        p = tuple(singlet_fraction(f, v.d) for f in fidelities)
        return p, monogamy_slack_1N(p, v.d)
    if isinstance(v, ManyToN) and v.m == v.n - 1:
        p = tuple(singlet_fraction(f, 2) for f in fidelities) if v.m == 1 else None
        return p, tradeoff_slack_NminusOne(fidelities)
    return None, None


def _sweep_point(task: CloningTask, alpha) -> TradeoffRecord:
    try:
        w = Weights(tuple(float(a) for a in alpha))
        t = task.with_weights(w.alpha)
        rep = optimal_fidelity(t)
        p, slack = slack_for(t, rep.per_clone)
        return TradeoffRecord(w, tuple(rep.per_clone), p, slack, rep.fidelity)
    except (CloningError, ArithmeticError) as exc:
        try:
            w = Weights(tuple(float(a) for a in alpha))
        except CloningError:
            w = None
        return TradeoffRecord(w, (), None, None, None, True, str(exc))


def pareto_sweep(task: CloningTask, grid, workers: int | None = None) -> list[TradeoffRecord]:
    """Optimal per-clone fidelities at every weight vector of ``grid``.

    Failed points are marked rather than aborting the sweep; records keep
    the grid order whatever the number of workers.
    """
    grid = [tuple(a) for a in grid]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda a: _sweep_point(task, a), grid))
    return [_sweep_point(task, a) for a in grid]


def weight_grid(n: int, size: int, seed: int = 0) -> list[tuple[float, ...]]:
    """Sweep grid: evenly spaced ``alpha_1`` for N=2; otherwise a seeded
    Dirichlet sample plus the simplex vertices and centroid."""
    if n < 1 or size < 1:
        raise ArgumentError("need n >= 1 and grid size >= 1")
    if n == 1:
        return [(1.0,)]
    if n == 2:
        if size == 1:
            return [(0.5, 0.5)]
        a1 = np.linspace(0.0, 1.0, size)
        return [(float(a), float(1.0 - a)) for a in a1]
    pts = [tuple(float(x) for x in row) for row in np.eye(n)]
    pts.append(tuple([1.0 / n] * n))
    rng = np.random.default_rng(seed)
    for row in rng.dirichlet(np.ones(n), size=size):
        row = row / row.sum()
        pts.append(tuple(float(x) for x in row))
    return pts


def point_seed(root: int, index: int) -> int:
    """Per-point seed derived from a root seed and the point index."""
    return int(np.random.SeedSequence([root, index]).generate_state(1)[0])


def haar_states(dims: Sequence[int], count: int, seed: int = 0):
    """Seeded Haar-random pure states on the given layout."""
    size = int(np.prod(dims))
    if size > DENSE_CAP * 16:
        raise SizeError(f"{size} amplitudes exceed the sampling cap")
    rng = np.random.default_rng(seed)
    for _ in range(count):
        v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        yield PureState(v / np.linalg.norm(v), tuple(dims))
