"""Independent reference constructions used to check the package.

Everything here is built from explicit Kronecker products of small
matrices, sharing no code with asymclone.
"""

import numpy as np

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def embed_pair(a, b, n_sites, i, j, d):
    """``a`` on site ``i`` and ``b`` on site ``j`` of ``n_sites`` qudits."""
    ops = [np.eye(d)] * n_sites
    ops = list(ops)
    ops[i], ops[j] = a, b
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


def pair_operator(t, n_sites, i, j, d):
    """Two-site operator ``t`` (on ``d*d``) acting on sites ``i < j``."""
    out = np.zeros((d ** n_sites,) * 2, dtype=complex)
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    coef = t[a * d + b, c * d + e]
                    if coef == 0:
                        continue
                    ea = np.zeros((d, d))
                    ea[a, c] = 1
                    eb = np.zeros((d, d))
                    eb[b, e] = 1
                    out += coef * embed_pair(ea, eb, n_sites, i, j, d)
    return out


def universal_R(d, alpha):
    n = len(alpha)
    bell = np.zeros(d * d)
    bell[[k * (d + 1) for k in range(d)]] = 1 / np.sqrt(d)
    proj = np.outer(bell, bell)
    size = d ** (n + 1)
    r = np.eye(size, dtype=complex) / (d + 1)
    for k, a in enumerate(alpha):
        r += a * d / (d + 1) * pair_operator(proj, n + 1, 0, k + 1, d)
    return r


def state_dependent_R(gamma, alpha):
    n = len(alpha)
    r = 0.5 * np.eye(2 ** (n + 1), dtype=complex)
    for k, a in enumerate(alpha):
        r += a * (gamma * embed_pair(X, X, n + 1, 0, k + 1, 2)
                  - gamma * embed_pair(Y, Y, n + 1, 0, k + 1, 2)
                  + 0.5 * (1 - 4 * gamma) * embed_pair(Z, Z, n + 1, 0, k + 1, 2))
    return r


def top(r):
    return float(np.linalg.eigvalsh(r)[-1])
