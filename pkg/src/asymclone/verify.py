"""Named invariant suites, run from the command line or from tests.

Each suite draws ``samples`` seeded random instances and returns one
:class:`Check` per property tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analyze
from .densemath import hermitian_eig, partial_trace
from .errors import ArgumentError
from .solve import chsh_lambda, optimal_fidelity, sector_spectra
from .tasks import (CloningTask, build_R, embed_state_MN, heisenberg_star,
                    subspace_matrix_MN)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    worst: float
    tolerance: float
    count: int


def _check(name, values, tol, lower=None):
    """Pass when every value lies within ``tol`` of 0 (or above ``lower``)."""
    values = np.asarray(list(values), dtype=float)
    if lower is None:
        worst = float(np.max(np.abs(values))) if values.size else 0.0
        ok = worst <= tol
    else:
        worst = float(np.min(values)) if values.size else 0.0
        ok = worst >= lower
    return Check(name, bool(ok), worst, tol if lower is None else lower, int(values.size))


def _generic_weights(rng, n):
    # strictly positive and pairwise distinct
    while True:
        a = rng.dirichlet(np.ones(n))
        if a.min() > 1e-3 and np.min(np.diff(np.sort(a))) > 1e-3:
            return a


def suite_methods(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    gaps_b, gaps_s = [], []
    for d, n in ((2, 2), (2, 3), (3, 2), (2, 5)):
        for _ in range(samples):
            t = CloningTask.universal(d, n, rng.dirichlet(np.ones(n)))
            f = optimal_fidelity(t, "dense").fidelity
            gaps_b.append(f - optimal_fidelity(t, "blocked").fidelity)
            gaps_s.append(f - optimal_fidelity(t, "subspace").fidelity)
    for g in (0.0, 0.1, 1 / 6, 0.25):
        for _ in range(samples):
            t = CloningTask.state_dependent(g, 3, rng.dirichlet(np.ones(3)))
            gaps_b.append(optimal_fidelity(t, "dense").fidelity
                          - optimal_fidelity(t, "blocked").fidelity)
    for m, n in ((1, 2), (2, 3), (1, 3)):
        for _ in range(samples):
            t = CloningTask.many_to_n(m, n, rng.dirichlet(np.ones(n)))
            f = optimal_fidelity(t, "dense").fidelity
            gaps_b.append(f - optimal_fidelity(t, "blocked").fidelity)
            gaps_s.append(f - optimal_fidelity(t, "subspace").fidelity)
    return [_check("dense vs blocked", gaps_b, 1e-10),
            _check("dense vs subspace", gaps_s, 1e-9)]


def suite_degeneracy(samples: int, seed: int):
    """The top eigenspace is one vector per symmetric state of N-1 qudits,
    ``C(N+d-2, N-1)`` of them, which is at least ``(d-1)(N-1)+1``."""
    rng = np.random.default_rng(seed)
    exact, lower = [], []
    for d, n in ((2, 3), (3, 2), (3, 3)):
        for _ in range(samples):
            t = CloningTask.universal(d, n, _generic_weights(rng, n))
            deg = hermitian_eig(build_R(t)).degeneracy
            exact.append(deg - math.comb(n + d - 2, n - 1))
            lower.append(deg - ((d - 1) * (n - 1) + 1))
    return [_check("top eigenspace dimension C(N+d-2, N-1)", exact, 0),
            _check("top eigenspace dimension >= (d-1)(N-1)+1", lower, 0.0, lower=0.0)]


def suite_perron(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    mins = []
    for _ in range(samples):
        t = CloningTask.universal(3, 3, rng.dirichlet(np.ones(3)))
        for s in sector_spectra(t, mirror=False).values():
            mins.append(float(s.eigenvectors[:, -1].real.min()))
    return [_check("sector top vectors nonnegative", mins, 0.0, lower=-1e-10)]


def suite_monogamy(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    frontier, random_slack = [], []
    for d, n in ((2, 3), (3, 2), (3, 3)):
        base = CloningTask.universal(d, n)
        for _ in range(samples):
            t = base.with_weights(rng.dirichlet(np.ones(n)))
            rep = optimal_fidelity(t)
            p = [analyze.singlet_fraction(f, d) for f in rep.per_clone]
            frontier.append(analyze.monogamy_slack_1N(p, d))
        for psi in analyze.haar_states(base.dims, samples, seed=int(rng.integers(2 ** 31))):
            f = analyze.per_clone_fidelities(psi, base)
            random_slack.append(analyze.monogamy_slack_1N(
                [analyze.singlet_fraction(x, d) for x in f], d))
    return [_check("singlet monogamy tight on optimal frontier", frontier, 1e-8),
            _check("singlet monogamy holds for random states", random_slack, 0.0,
                   lower=-1e-8)]


def suite_tradeoff(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    sym, slack, marg = [], [], []
    for n in (2, 3, 4):
        m = n - 1
        target = (n * n + n - 1) / (n * n + n)
        t = CloningTask.many_to_n(m, n)
        sym.append(optimal_fidelity(t, "subspace").fidelity - target)
        sym.append(optimal_fidelity(t, "dense").fidelity - target)
        for _ in range(samples):
            tw = t.with_weights(rng.dirichlet(np.ones(n)))
            rep = optimal_fidelity(tw)
            slack.append(analyze.tradeoff_slack_NminusOne(rep.per_clone))
            _, beta = subspace_matrix_MN(m, n, tw.weights).dominant()
            rho = 0
            for i in (0, 1):
                rho = rho + 0.5 * partial_trace(embed_state_MN(m, n, beta, i), [0]).matrix
            marg.append(float(np.max(np.abs(rho - np.eye(n) / n))))
    return [_check("symmetric (N-1)->N fidelity", sym, 1e-9),
            _check("(N-1)->N trade-off tight", slack, 1e-8),
            _check("two-sector mixture has maximally mixed input", marg, 1e-10)]


def suite_symmetries(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    anti, pair = [], []
    for n in (2, 3, 4):
        for _ in range(samples):
            g = float(rng.uniform(0.0, 0.25))
            t = CloningTask.state_dependent(g, n, rng.dirichlet(np.ones(n)))
            w = np.linalg.eigvalsh(build_R(t).matrix)
            wt = np.linalg.eigvalsh(heisenberg_star(t).matrix)
            anti.append(float(np.max(np.abs(np.sort(w) - np.sort(-wt)))))
            te = CloningTask.equatorial(n, rng.dirichlet(np.ones(n)))
            we = np.sort(np.linalg.eigvalsh(build_R(te).matrix))
            pair.append(float(np.max(np.abs(we + we[::-1] - 1.0))))
    return [_check("star spectrum is minus R spectrum", anti, 1e-10),
            _check("equatorial spectrum pairs as (r, 1-r)", pair, 1e-10)]


def suite_chsh(samples: int, seed: int):
    errs = []
    for a in np.linspace(0.0, 1.0, max(samples, 2)):
        lam = chsh_lambda(a, 1.0 - a)
        dense = hermitian_eig(build_R(CloningTask.chsh([a, 1.0 - a]))).max_value
        errs.append(lam - dense)
    _, bound = analyze.chsh_monogamy(0.5, 0.5)
    return [_check("CHSH eigenvalue formula", errs, 1e-10),
            _check("symmetric weighted Bell bound is 2", [bound - 2.0], 1e-10)]


def suite_economy(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    ghz, mix, equ, odd = [], [], [], []
    search_dev = []
    for d in (2, 3, 4):
        r = analyze.economy_report(CloningTask.universal(d, 3))
        ghz.append(float(np.max(np.abs(np.array(r.schmidt_spectrum) - d ** -0.5))))
        t = CloningTask.universal(d, 2, _generic_weights(rng, 2))
        r = analyze.economy_report(t, seed=seed)
        mix.append(r.input_marginal_residual)
        search_dev.append(r.search_deviation)
    for n in (2, 3, 4):
        for _ in range(samples):
            r = analyze.economy_report(CloningTask.equatorial(n, rng.dirichlet(np.ones(n))))
            equ.append(0.0 if r.classification == analyze.ECONOMICAL else 1.0)
    for n in (3, 5):
        r = analyze.economy_report(CloningTask.state_dependent(0.1, n,
                                                               rng.dirichlet(np.ones(n))))
        odd.append(0.0 if r.classification == analyze.ECONOMICAL else 1.0)
    return [_check("GHZ embedding maximally entangled (N=3)", ghz, 1e-8),
            _check("no economical witness at N=2", search_dev, 0.0, lower=1e-3),
            _check("d-state mixture input marginal (N=2)", mix, 1e-10),
            _check("equatorial cloners economical", equ, 0),
            _check("odd-N state-dependent cloners economical", odd, 0)]


SUITES = {
    "methods": suite_methods,
    "degeneracy": suite_degeneracy,
    "perron-frobenius": suite_perron,
    "monogamy": suite_monogamy,
    "tradeoff": suite_tradeoff,
    "symmetries": suite_symmetries,
    "chsh": suite_chsh,
    "economy": suite_economy,
}


def run_suite(name: str, samples: int = 10, seed: int = 0) -> list[Check]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](samples, seed))
        return out
    if name not in SUITES:
        raise ArgumentError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name](samples, seed)
