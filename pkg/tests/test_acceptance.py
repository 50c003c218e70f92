"""The twelve acceptance criteria, each at its stated tolerance.

Every test records one ``criterion N: PASS|FAIL`` line; the lines are
printed as the test runs and repeated in the pytest terminal summary.
Run this file directly to get just the summary.
"""

import math
import time

import numpy as np
import pytest

from asymclone import analyze
from asymclone.densemath import partial_trace
from asymclone.solve import (blocked_max_eigenpair, chsh_lambda, optimal_fidelity,
                             sector_spectra, symmetric_star_fidelity)
from asymclone.tasks import (CloningTask, build_R, embed_state_MN, heisenberg_star,
                             subspace_matrix_1N, subspace_matrix_MN)

from oracle import top, universal_R

RESULTS: dict[int, tuple[bool, str]] = {}

SUBSPACE_CONFIGS = ((2, 3), (3, 2), (3, 3))
RUNS = 50


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def dense_top(task):
    return optimal_fidelity(task, "dense")


def criterion3_weights(d, n):
    """The seeded weight draws shared by criteria 3, 4 and 7."""
    rng = np.random.default_rng(1000 + 10 * d + n)
    return [rng.dirichlet(np.ones(n)) for _ in range(RUNS)]


# ---------------------------------------------------------------------------

def test_c01_symmetric_universal_qubits():
    errs = []
    for n in range(2, 7):
        f = dense_top(CloningTask.universal(2, n)).fidelity
        errs.append(abs(f - (2 * n + 1) / (3 * n)))
    worst = max(errs)
    assert record(1, worst <= 1e-10, f"N=2..6, worst error {worst:.2e} <= 1e-10")


def test_c02_symmetric_universal_qudits():
    errs = []
    for d in (2, 3, 4, 5):
        for n in (2, 3):
            if d ** (n + 1) > 4096:
                continue
            f = dense_top(CloningTask.universal(d, n)).fidelity
            errs.append(abs(f - (1 / n + 2 * (n - 1) / (n * (d + 1)))))
    worst = max(errs)
    assert record(2, worst <= 1e-9, f"{len(errs)} (d,N) pairs, worst error {worst:.2e} <= 1e-9")


def test_c03_subspace_theorem():
    errs = []
    for d, n in SUBSPACE_CONFIGS:
        for a in criterion3_weights(d, n):
            lam, _ = subspace_matrix_1N(d, n, a).dominant()
            errs.append(abs((1 + lam) / (d + 1) - top(universal_R(d, a))))
    worst = max(errs)
    assert record(3, worst <= 1e-9, f"{len(errs)} runs, worst gap {worst:.2e} <= 1e-9")


def _distinct_positive(a):
    return a.min() > 0 and np.min(np.diff(np.sort(a))) > 0


def test_c04_degeneracy():
    bad = {}
    for d, n in SUBSPACE_CONFIGS:
        claim = (d - 1) * (n - 1) + 1
        for a in criterion3_weights(d, n):
            if not _distinct_positive(a):
                continue
            w = np.linalg.eigvalsh(universal_R(d, a))
            dim = int(np.sum(w >= w[-1] - 1e-9))
            if dim != claim:
                bad.setdefault((d, n), set()).add((dim, claim))
    detail = "dimension equals (d-1)(N-1)+1 in every run"
    if bad:
        detail = "; ".join(f"(d,N)={k}: found {sorted(v)[0][0]}, claimed {sorted(v)[0][1]}"
                           for k, v in bad.items())
    assert record(4, not bad, detail)


def test_c05_perron_frobenius_sectors():
    rng = np.random.default_rng(5)
    worst = math.inf
    for _ in range(20):
        t = CloningTask.universal(3, 3, rng.dirichlet(np.ones(3)))
        for s in sector_spectra(t, mirror=False).values():
            v = s.eigenvectors[:, -1]
            assert np.max(np.abs(np.imag(v))) < 1e-10
            worst = min(worst, float(v.real.min()))
    assert record(5, worst >= -1e-10, f"smallest entry {worst:.2e} >= -1e-10")


def test_c06_state_dependent_formula():
    errs = []
    for n in (2, 3, 4, 5):
        for g in np.linspace(0.0, 0.25, 26):
            g = float(g)
            f = dense_top(CloningTask.state_dependent(g, n)).fidelity
            errs.append(abs(symmetric_star_fidelity(g, n) - f))
        errs.append(abs(symmetric_star_fidelity(1 / 6, n) - (2 * n + 1) / (3 * n)))
    errs.append(abs(symmetric_star_fidelity(0.25, 2) - (0.5 + math.sqrt(2) / 4)))
    errs.append(abs(symmetric_star_fidelity(0.25, 3) - 5 / 6))
    for n in (2, 3):
        errs.append(abs(dense_top(CloningTask.equatorial(n)).fidelity
                        - symmetric_star_fidelity(0.25, n)))
    worst = max(errs)
    assert record(6, worst <= 1e-9, f"26-point grid, N=2..5, worst error {worst:.2e} <= 1e-9")


def test_c07_singlet_monogamy():
    frontier, random_min = [], math.inf
    for d, n in SUBSPACE_CONFIGS:
        base = CloningTask.universal(d, n)
        for a in criterion3_weights(d, n):
            rep = optimal_fidelity(base.with_weights(a))
            p = [analyze.singlet_fraction(f, d) for f in rep.per_clone]
            frontier.append(abs(analyze.monogamy_slack_1N(p, d)))
        for psi in analyze.haar_states(base.dims, 100, seed=70 + d * 10 + n):
            p = [analyze.singlet_fraction(f, d)
                 for f in analyze.per_clone_fidelities(psi, base)]
            random_min = min(random_min, analyze.monogamy_slack_1N(p, d))
    worst = max(frontier)
    ok = worst <= 1e-8 and random_min >= -1e-8
    assert record(7, ok, f"frontier |slack| {worst:.2e} <= 1e-8, "
                         f"Haar minimum {random_min:.3e} >= -1e-8")


def test_c08_n_minus_one_to_n():
    rng = np.random.default_rng(8)
    sym, slack, marg = [], [], []
    for n in (2, 3, 4):
        m = n - 1
        t = CloningTask.many_to_n(m, n)
        assert t.size <= 80
        target = (n * n + n - 1) / (n * n + n)
        sym.append(abs(optimal_fidelity(t, "subspace").fidelity - target))
        sym.append(abs(dense_top(t).fidelity - target))
        for _ in range(20):
            tw = t.with_weights(rng.dirichlet(np.ones(n)))
            rep = optimal_fidelity(tw, "subspace")
            slack.append(abs(analyze.tradeoff_slack_NminusOne(rep.per_clone)))
            _, beta = subspace_matrix_MN(m, n, tw.weights).dominant()
            rho = sum(0.5 * partial_trace(embed_state_MN(m, n, beta, i), [0]).matrix
                      for i in (0, 1))
            marg.append(float(np.max(np.abs(rho - np.eye(n) / n))))
    ok = max(sym) <= 1e-9 and max(slack) <= 1e-8 and max(marg) <= 1e-10
    assert record(8, ok, f"fidelity {max(sym):.2e} <= 1e-9, slack {max(slack):.2e} <= 1e-8, "
                         f"marginal {max(marg):.2e} <= 1e-10")


def test_c09_economy():
    rng = np.random.default_rng(9)
    notes, ok = [], True
    # (a) GHZ embedding at N=3
    ghz = 0.0
    for d in (2, 3, 4):
        r = analyze.economy_report(CloningTask.universal(d, 3))
        ok &= r.classification == analyze.ECONOMICAL
        ghz = max(ghz, float(np.max(np.abs(np.array(r.schmidt_spectrum) - d ** -0.5))))
    ok &= ghz <= 1e-8
    notes.append(f"(a) Schmidt {ghz:.1e}")
    # (b) N=2 interior weights need a d-term mixture
    dev, res = math.inf, 0.0
    for d in (2, 3, 4):
        t = CloningTask.universal(d, 2, [0.65, 0.35])
        r = analyze.economy_report(t, seed=0)
        ok &= r.classification == analyze.ANCILLA and r.ancilla_dim == d
        dev = min(dev, r.search_deviation)
        res = max(res, r.input_marginal_residual)
    ok &= dev > 1e-3 and res <= 1e-10
    notes.append(f"(b) deviation {dev:.3f}, marginal {res:.1e}")
    # (c) equatorial
    equ = 0
    for n in (2, 3, 4):
        for _ in range(10):
            r = analyze.economy_report(CloningTask.equatorial(n, rng.dirichlet(np.ones(n))))
            equ += r.classification == analyze.ECONOMICAL
    ok &= equ == 30
    notes.append(f"(c) {equ}/30 economical")
    # (d) odd-N state-dependent
    odd = 0
    for n in (3, 5):
        r = analyze.economy_report(CloningTask.state_dependent(0.1, n,
                                                               rng.dirichlet(np.ones(n))))
        odd += r.classification == analyze.ECONOMICAL and r.construction.startswith("flip")
    ok &= odd == 2
    notes.append(f"(d) {odd}/2 economical")
    assert record(9, ok, ", ".join(notes))


def test_c10_chsh():
    errs = []
    for a in np.linspace(0.0, 1.0, 11):
        dense = top(build_R(CloningTask.chsh([a, 1.0 - a])).matrix)
        errs.append(abs(chsh_lambda(a, 1.0 - a) - dense))
    _, bound = analyze.chsh_monogamy(0.5, 0.5)
    # a bound of 2 on the weighted sum is the same as <B01>^2 + <B02>^2 <= 8
    ok = max(errs) <= 1e-10 and abs(bound - 2.0) <= 1e-10
    assert record(10, ok, f"11-point grid {max(errs):.2e} <= 1e-10, bound {bound:.12f}")


@pytest.mark.slow
def test_c11_blocked_performance():
    n = 14
    t = CloningTask.universal(2, n)
    t0 = time.perf_counter()
    res = blocked_max_eigenpair(t)
    elapsed = time.perf_counter() - t0
    err = abs(res.value - (2 * n + 1) / (3 * n))
    ok = elapsed < 60.0 and err <= 1e-8
    assert record(11, ok, f"N=14 in {elapsed:.1f} s < 60 s, error {err:.2e} <= 1e-8")


def test_c12_spectral_symmetries():
    rng = np.random.default_rng(12)
    anti, pair = [], []
    for n in (2, 3, 4):
        for g in (0.0, 0.07, 1 / 6, 0.2, 0.25):
            t = CloningTask.state_dependent(g, n, rng.dirichlet(np.ones(n)))
            w = np.linalg.eigvalsh(build_R(t).matrix)
            wt = np.linalg.eigvalsh(heisenberg_star(t).matrix)
            anti.append(float(np.max(np.abs(np.sort(w) - np.sort(-wt)))))
        te = CloningTask.equatorial(n, rng.dirichlet(np.ones(n)))
        we = np.sort(np.linalg.eigvalsh(build_R(te).matrix))
        pair.append(float(np.max(np.abs(we + we[::-1] - 1.0))))
    ok = max(anti) <= 1e-10 and max(pair) <= 1e-10
    assert record(12, ok, f"anti-spectrum {max(anti):.2e}, pairing {max(pair):.2e} <= 1e-10")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
