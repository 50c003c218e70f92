import math

import numpy as np
import pytest

from asymclone import analyze
from asymclone.analyze import (ANCILLA, ECONOMICAL, economy_report, economy_search,
                               feasible_mixture, monogamy_slack_1N, pareto_sweep,
                               per_clone_closed_form_1N, singlet_fraction, slack_for,
                               tradeoff_slack_NminusOne, weight_grid)
from asymclone.densemath import partial_trace
from asymclone.errors import ArgumentError
from asymclone.solve import optimal_fidelity
from asymclone.tasks import CloningTask, build_R, subspace_matrix_1N
from asymclone.verify import run_suite


def test_per_clone_closed_form_matches_state():
    for d, alpha in ((2, [0.8, 0.2]), (3, [0.5, 0.3, 0.2])):
        t = CloningTask.universal(d, len(alpha), alpha)
        _, beta = subspace_matrix_1N(d, len(alpha), alpha).dominant()
        assert np.allclose(per_clone_closed_form_1N(d, beta),
                           optimal_fidelity(t).per_clone, atol=1e-12)
    with pytest.raises(ArgumentError):
        per_clone_closed_form_1N(2, [0.0, 0.0])


def test_singlet_fraction_round_trip():
    assert analyze.fidelity_of_singlet_fraction(singlet_fraction(0.8, 3), 3) == pytest.approx(0.8)
    assert singlet_fraction(1 / 3, 2) == pytest.approx(0.0)


def test_monogamy_tight_on_frontier():
    for a in np.linspace(0, 1, 7):
        t = CloningTask.universal(2, 2, [a, 1 - a])
        p = [singlet_fraction(f, 2) for f in optimal_fidelity(t).per_clone]
        assert abs(monogamy_slack_1N(p, 2)) < 1e-10


def test_tradeoff_relation():
    t = CloningTask.many_to_n(2, 3, [0.5, 0.3, 0.2])
    assert abs(tradeoff_slack_NminusOne(optimal_fidelity(t).per_clone)) < 1e-10
    p, slack = slack_for(CloningTask.many_to_n(1, 2), [5 / 6, 5 / 6])
    assert p is not None and abs(slack) < 1e-12
    assert slack_for(CloningTask.equatorial(2), [0.8, 0.8]) == (None, None)


def test_chsh_monogamy():
    lam, bound = analyze.chsh_monogamy(0.5, 0.5)
    assert math.isclose(bound, 2.0, abs_tol=1e-12)
    lam, bound = analyze.chsh_monogamy(1.0, 0.0)
    assert math.isclose(bound, 2 * math.sqrt(2), abs_tol=1e-12)


def _witness_checks(rep):
    t = rep.task
    r = build_R(t).matrix
    f = optimal_fidelity(t, "dense").fidelity
    states = rep.witness.states if rep.classification == ANCILLA else (rep.witness,)
    for s in states:
        assert np.linalg.norm(r @ s.amplitudes - f * s.amplitudes) < 1e-8
    assert rep.input_marginal_residual <= 1e-10


@pytest.mark.parametrize("task", [CloningTask.universal(2, 3, [0.5, 0.3, 0.2]),
                                  CloningTask.universal(3, 1),
                                  CloningTask.universal(3, 3, [0.0, 0.0, 1.0]),
                                  CloningTask.equatorial(3, [0.2, 0.3, 0.5]),
                                  CloningTask.chsh([0.7, 0.3]),
                                  CloningTask.state_dependent(0.1, 3, [0.5, 0.3, 0.2]),
                                  CloningTask.state_dependent(0.1, 4)],
                         ids=str)
def test_economical_witnesses(task):
    rep = economy_report(task)
    assert rep.classification == ECONOMICAL and rep.ancilla_dim is None
    assert not rep.heuristic
    d = task.input_dim
    assert np.allclose(rep.schmidt_spectrum, [d ** -0.5] * d, atol=1e-8)
    _witness_checks(rep)


@pytest.mark.parametrize("d", [2, 3])
def test_pair_of_clones_needs_ancilla(d):
    rep = economy_report(CloningTask.universal(d, 2, [0.7, 0.3]))
    assert rep.classification == ANCILLA and rep.ancilla_dim == d
    assert rep.search_deviation > 1e-3
    _witness_checks(rep)


def test_many_to_n_mixture():
    rep = economy_report(CloningTask.many_to_n(1, 3, [0.5, 0.3, 0.2]))
    assert rep.classification == ANCILLA and rep.ancilla_dim == 3
    _witness_checks(rep)


def test_even_n_state_dependent_falls_back_or_economical():
    rep = economy_report(CloningTask.state_dependent(0.2, 2, [0.6, 0.4]))
    _witness_checks(rep)
    if rep.classification == ANCILLA:
        assert rep.ancilla_dim == 2


def test_search_finds_symmetric_qubit_witness():
    res = economy_search(CloningTask.universal(2, 3), restarts=4, seed=1)
    assert res.deviation < 1e-6


def test_feasible_mixture():
    t = CloningTask.universal(2, 2, [0.6, 0.4])
    mix = feasible_mixture(t)
    assert math.isclose(sum(mix.probabilities), 1.0)
    assert np.max(np.abs(mix.input_marginal() - np.eye(2) / 2)) < 1e-10


def test_sweep_grid_and_order():
    grid = weight_grid(2, 5)
    assert grid[0] == (0.0, 1.0) and grid[-1] == (1.0, 0.0)
    t = CloningTask.universal(2, 2)
    one = pareto_sweep(t, grid, workers=1)
    many = pareto_sweep(t, grid, workers=3)
    assert [r.fidelities for r in one] == [r.fidelities for r in many]
    assert all(abs(r.slack) < 1e-10 for r in one)
    assert one[0].fidelities[1] == pytest.approx(1.0)
    g3 = weight_grid(3, 4, seed=2)
    assert len(g3) == 3 + 1 + 4 and g3 == weight_grid(3, 4, seed=2)
    with pytest.raises(ArgumentError):
        weight_grid(0, 3)


def test_sweep_marks_bad_points():
    recs = pareto_sweep(CloningTask.universal(2, 2), [(0.5, 0.5), (0.9, 0.9)])
    assert not recs[0].failed
    assert recs[1].failed and recs[1].error


def test_haar_states_are_seeded():
    a = [s.amplitudes for s in analyze.haar_states((2, 2), 3, seed=4)]
    b = [s.amplitudes for s in analyze.haar_states((2, 2), 3, seed=4)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    rho = partial_trace(analyze.haar_states((2, 3), 1).__next__(), [1]).matrix
    assert np.isclose(np.trace(rho).real, 1.0)
    assert analyze.point_seed(0, 1) != analyze.point_seed(0, 2)


def test_verify_suites_pass():
    checks = run_suite("all", samples=3, seed=1)
    names = [c.name for c in checks if not c.passed]
    assert not names
    with pytest.raises(ArgumentError):
        run_suite("nothing")
