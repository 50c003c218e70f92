import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymclone.densemath import (HermitianOperator, PureState, general_max_real_eigenpair,
                                 hermitian_eig, krylov_top_eig, kron, partial_trace,
                                 phase_fix, schmidt_coefficients)
from asymclone.errors import ArgumentError, NumericalFailure, SizeError


def random_hermitian(rng, n, complex_=True):
    a = rng.standard_normal((n, n))
    if complex_:
        a = a + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


def test_hermitian_operator_rejects_nonhermitian():
    with pytest.raises(ArgumentError):
        HermitianOperator(np.array([[0, 1], [0, 0]]), (2,))


def test_hermitian_operator_is_read_only():
    h = HermitianOperator(np.eye(2), (2,))
    with pytest.raises(ValueError):
        h.matrix[0, 0] = 5


def test_pure_state_norm_checked():
    with pytest.raises(ArgumentError):
        PureState(np.array([1.0, 1.0]), (2,))
    s = PureState.from_vector([1.0, 1.0], (2,))
    assert np.isclose(np.linalg.norm(s.amplitudes), 1.0)


def test_dims_must_match_size():
    with pytest.raises(ArgumentError):
        PureState(np.array([1.0, 0, 0, 0]), (2, 3))


@pytest.mark.parametrize("backend", ["jacobi", "lapack"])
@pytest.mark.parametrize("complex_", [False, True])
def test_eig_matches_numpy(backend, complex_):
    rng = np.random.default_rng(3)
    h = random_hermitian(rng, 40, complex_)
    spec = hermitian_eig(h, backend=backend)
    assert np.allclose(spec.eigenvalues, np.linalg.eigvalsh(h), atol=1e-11)
    assert spec.residual < 1e-10
    v = spec.eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(40), atol=1e-10)


def test_degenerate_top_space():
    d = np.diag([3.0, 3.0, 3.0, 1.0, 0.0])
    q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((5, 5)))
    spec = hermitian_eig(q @ d @ q.T)
    assert spec.degeneracy == 3
    assert np.isclose(spec.max_value, 3.0)


def test_top_only_widens_window():
    w = np.concatenate([np.linspace(0, 1, 190), [2.0] * 10])
    q, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((200, 200)))
    spec = hermitian_eig((q * w) @ q.T, backend="lapack", top_only=True)
    assert spec.degeneracy == 10
    assert not spec.complete


def test_krylov_top_matches_dense():
    rng = np.random.default_rng(5)
    h = random_hermitian(rng, 300, complex_=False)
    spec = krylov_top_eig(lambda x: h @ x, 300)
    assert np.isclose(spec.max_value, np.linalg.eigvalsh(h)[-1], atol=1e-10)
    assert spec.backend == "krylov"


def test_eig_cap():
    with pytest.raises(SizeError):
        hermitian_eig(np.eye(10), cap=5)


def test_jacobi_sweep_budget_reports_failure(monkeypatch):
    from asymclone import densemath
    monkeypatch.setattr(densemath, "JACOBI_MAX_SWEEPS", 1)
    h = random_hermitian(np.random.default_rng(2), 30)
    with pytest.raises(NumericalFailure):
        hermitian_eig(h, backend="jacobi")


def test_phase_fix_first_largest_entry_positive():
    v = np.array([0.5j, -0.5j, 0.1])
    out = phase_fix(v)
    assert np.isclose(out[0], 0.5)


def test_kron_concatenates_dims():
    a = HermitianOperator(np.eye(2), (2,))
    b = HermitianOperator(np.eye(3), (3,))
    assert kron(a, b).dims == (2, 3)
    with pytest.raises(SizeError):
        kron(np.eye(4), np.eye(4), cap=8)


def test_partial_trace_of_bell_pair():
    bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    assert np.allclose(partial_trace(bell, [0]).matrix, np.eye(2) / 2)
    assert np.allclose(partial_trace(bell.projector(), [1]).matrix, np.eye(2) / 2)
    assert np.isclose(partial_trace(bell, []).matrix[0, 0], 1.0)


def test_partial_trace_of_product_keeps_order():
    rng = np.random.default_rng(0)
    rhos = []
    for d in (2, 3, 2):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        r = a @ a.conj().T
        rhos.append(r / np.trace(r))
    full = np.kron(np.kron(rhos[0], rhos[1]), rhos[2])
    out = partial_trace(full, [2, 0], dims=(2, 3, 2))
    assert out.dims == (2, 2)
    assert np.allclose(out.matrix, np.kron(rhos[0], rhos[2]))


def test_schmidt_coefficients():
    psi = PureState(np.array([np.sqrt(0.7), 0, 0, np.sqrt(0.3)]), (2, 2))
    assert np.allclose(schmidt_coefficients(psi, [0]), [np.sqrt(0.7), np.sqrt(0.3)])


def test_general_eigenpair_nonsymmetric():
    m = np.array([[1.6, 0.8], [0.2, 0.4]])
    lam, vec = general_max_real_eigenpair(m)
    assert np.isclose(lam, 1.721110255092798, atol=1e-12)
    assert np.allclose(m @ vec, lam * vec)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 24), st.integers(0, 10 ** 6), st.booleans())
def test_eig_reconstructs(n, seed, complex_):
    h = random_hermitian(np.random.default_rng(seed), n, complex_)
    spec = hermitian_eig(h)
    v, w = spec.eigenvectors, spec.eigenvalues
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_partial_trace_preserves_trace(seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    psi = PureState.from_vector(v, (2, 3, 2))
    for keep in ([0], [1], [0, 2], [1, 2]):
        rho = partial_trace(psi, keep).matrix
        assert np.isclose(np.trace(rho).real, 1.0)
        assert np.linalg.eigvalsh(rho).min() > -1e-12
