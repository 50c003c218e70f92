"""Cloning tasks, their Choi-type matrices and the reduced subspace problems.

A task couples an input factor (index 0) to ``N`` clone factors. Its
figure-of-merit matrix is always ``R = sum_n alpha_n R_n`` with each
``R_n`` acting on the pair (input, clone n); the maximum eigenvalue of
``R`` is the best achievable weighted fidelity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .densemath import DENSE_CAP, KRON_CAP, HermitianOperator, PureState
from .errors import ArgumentError, SizeError, ValidationError
from .localops import LocalOperatorSum
from .spinsym import dicke_state, spin_operators

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


# ---------------------------------------------------------------- weights

@dataclass(frozen=True)
class Weights:
    """Convex asymmetry weights, one per clone."""

    alpha: tuple[float, ...]

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        if not a:
            raise ArgumentError("at least one weight is required")
        if any(not math.isfinite(x) or x < 0 for x in a):
            raise ArgumentError(f"weights must be finite and nonnegative: {a}")
        if abs(math.fsum(a) - 1.0) > 1e-12:
            raise ArgumentError(f"weights must sum to 1, got {math.fsum(a)!r}")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def symmetric(cls, n: int) -> "Weights":
        return cls((1.0 / n,) * n)

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "Weights":
        v = np.asarray(values, dtype=float)
        if np.any(v < 0) or v.sum() <= 0:
            raise ArgumentError("weights must be nonnegative with a positive sum")
        v = v / v.sum()
        # push the rounding residue into the largest entry so fsum is exact-ish
        v[np.argmax(v)] += 1.0 - math.fsum(v)
        return cls(tuple(v))

    def __len__(self):
        return len(self.alpha)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.alpha)

    @property
    def is_symmetric(self) -> bool:
        a = self.alpha
        return max(a) - min(a) <= 1e-12


# --------------------------------------------------------------- variants

@dataclass(frozen=True)
class UniversalQudit:
    d: int
    n: int
    kind = "universal"

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise ArgumentError("universal cloning needs d >= 2 and N >= 1")


@dataclass(frozen=True)
class StateDependentQubit:
    gamma: float
    n: int
    kind = "state-dependent"

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 0.25 or self.n < 1:
            raise ArgumentError("need 0 <= gamma <= 1/4 and N >= 1")


@dataclass(frozen=True)
class Equatorial:
    n: int
    kind = "equatorial"

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError("N must be >= 1")

    @property
    def gamma(self) -> float:
        return 0.25


@dataclass(frozen=True)
class ManyToN:
    m: int
    n: int
    kind = "many-to-n"

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise ArgumentError("M -> N cloning needs 1 <= M < N")


@dataclass(frozen=True)
class ChshPair:
    kind = "chsh"

    @property
    def n(self) -> int:
        return 2


Variant = Union[UniversalQudit, StateDependentQubit, Equatorial, ManyToN, ChshPair]


@dataclass(frozen=True)
class CloningTask:
    variant: Variant
    weights: Weights

    def __post_init__(self):
        if len(self.weights) != self.variant.n:
            raise ArgumentError(
                f"{self.variant.kind} task with N={self.variant.n} needs "
                f"{self.variant.n} weights, got {len(self.weights)}")

    # convenience constructors -----------------------------------------
    @classmethod
    def universal(cls, d, n, alpha=None):
        return cls(UniversalQudit(d, n), _weights(alpha, n))

    @classmethod
    def state_dependent(cls, gamma, n, alpha=None):
        return cls(StateDependentQubit(gamma, n), _weights(alpha, n))

    @classmethod
    def equatorial(cls, n, alpha=None):
        return cls(Equatorial(n), _weights(alpha, n))

    @classmethod
    def many_to_n(cls, m, n, alpha=None):
        return cls(ManyToN(m, n), _weights(alpha, n))

    @classmethod
    def chsh(cls, alpha=None):
        return cls(ChshPair(), _weights(alpha, 2))

    def with_weights(self, alpha) -> "CloningTask":
        return CloningTask(self.variant, _weights(alpha, self.n))

    # layout -----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.variant.n

    @property
    def alpha(self) -> np.ndarray:
        return self.weights.as_array()

    @property
    def input_dim(self) -> int:
        v = self.variant
        if isinstance(v, UniversalQudit):
            return v.d
        if isinstance(v, ManyToN):
            return v.m + 1
        return 2

    @property
    def clone_dim(self) -> int:
        v = self.variant
        return v.d if isinstance(v, UniversalQudit) else 2

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.input_dim,) + (self.clone_dim,) * self.n

    @property
    def size(self) -> int:
        return self.input_dim * self.clone_dim ** self.n

    @property
    def gamma(self) -> float | None:
        return getattr(self.variant, "gamma", None)

    def to_dict(self) -> dict:
        v = self.variant
        out = {"variant": v.kind}
        for key in ("d", "gamma", "m", "n"):
            if key in getattr(type(v), "__dataclass_fields__", {}):
                out[key] = getattr(v, key)
        if isinstance(v, ChshPair):
            out["n"] = 2
        out["alpha"] = list(self.weights.alpha)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CloningTask":
        kind = data.get("variant")
        alpha = data.get("alpha")
        try:
            if kind == "universal":
                return cls.universal(int(data["d"]), int(data["n"]), alpha)
            if kind == "state-dependent":
                return cls.state_dependent(float(data["gamma"]), int(data["n"]), alpha)
            if kind == "equatorial":
                return cls.equatorial(int(data["n"]), alpha)
            if kind == "many-to-n":
                return cls.many_to_n(int(data["m"]), int(data["n"]), alpha)
            if kind == "chsh":
                return cls.chsh(alpha)
        except KeyError as exc:
            raise ArgumentError(f"task block missing field {exc}") from None
        raise ArgumentError(f"unknown task variant {kind!r}")


def _weights(alpha, n) -> Weights:
    if alpha is None:
        return Weights.symmetric(n)
    if isinstance(alpha, Weights):
        return alpha
    return Weights(tuple(alpha))


# ------------------------------------------------------------ primitives

def bell_state(d: int) -> PureState:
    """``(1/sqrt d) sum_i |ii>``."""
    if d < 2:
        raise ArgumentError("d must be >= 2")
    v = np.zeros(d * d)
    v[np.arange(d) * (d + 1)] = 1.0 / math.sqrt(d)
    return PureState(v, (d, d))


def _bell_projector(d: int) -> np.ndarray:
    b = bell_state(d).amplitudes
    return np.outer(b, b)


def _pair_term(task: CloningTask) -> tuple[float, np.ndarray]:
    """``(constant, T)`` with ``R_n = constant * 1 + T_(0,n)``."""
    v = task.variant
    if isinstance(v, UniversalQudit):
        d = v.d
        return 1.0 / (d + 1), (d / (d + 1)) * _bell_projector(d)
    if isinstance(v, (StateDependentQubit, Equatorial)):
        g = v.gamma
        # assembled term by term so gamma = 0 needs no special case
        t = (g * np.kron(PAULI_X, PAULI_X) - g * np.kron(PAULI_Y, PAULI_Y)
             + 0.5 * (1.0 - 4.0 * g) * np.kron(PAULI_Z, PAULI_Z))
        return 0.5, t.real
    if isinstance(v, ManyToN):
        s = spin_operators(v.m + 1)
        t = (np.kron(s.sx.matrix, PAULI_X) - np.kron(s.sy.matrix, PAULI_Y)
             + np.kron(s.sz.matrix, PAULI_Z)) / (2.0 * (v.m + 2))
        return 0.5, t.real
    if isinstance(v, ChshPair):
        chsh = math.sqrt(2.0) * (np.kron(PAULI_X, PAULI_X) - np.kron(PAULI_Y, PAULI_Y))
        return 0.5, (chsh / (4.0 * math.sqrt(2.0))).real
    raise ArgumentError(f"unsupported variant {v!r}")


def local_R(task: CloningTask) -> LocalOperatorSum:
    """``R`` for the task as a sum of pair terms (no dense matrix built)."""
    if task.size > KRON_CAP:
        raise SizeError(f"space dimension {task.size} exceeds cap {KRON_CAP}")
    const, t = _pair_term(task)
    terms = [((0, k + 1), a * t) for k, a in enumerate(task.alpha) if a != 0]
    return LocalOperatorSum(task.dims, const, terms)


def clone_operator(task: CloningTask, clone: int) -> LocalOperatorSum:
    """Single-clone figure of merit ``R_n`` (0-based ``clone``)."""
    if not 0 <= clone < task.n:
        raise ArgumentError(f"clone index {clone} out of range")
    const, t = _pair_term(task)
    return LocalOperatorSum(task.dims, const, [((0, clone + 1), t)])


def build_R(task: CloningTask, cap: int = DENSE_CAP) -> HermitianOperator:
    """Dense ``R`` for the task; raises :class:`SizeError` above ``cap``."""
    if task.size > cap:
        raise SizeError(f"R side {task.size} exceeds dense cap {cap}")
    return local_R(task).to_operator(cap)


def heisenberg_star(task: CloningTask, cap: int = DENSE_CAP) -> HermitianOperator:
    """``-Y_0 R Y_0`` for qubit 1->N tasks: an anisotropic Heisenberg star.

    Its ground states are the top eigenvectors of ``R`` rotated by ``Y_0``
    and its spectrum is minus that of ``R``.
    """
    if task.input_dim != 2 or task.clone_dim != 2 or isinstance(task.variant, ManyToN):
        raise ArgumentError("the star form exists for qubit 1->N tasks only")
    r = build_R(task, cap).matrix
    y0 = np.kron(PAULI_Y, np.eye(task.size // 2))
    out = -(y0 @ r @ y0)
    return HermitianOperator(np.real_if_close(out), task.dims)


# ----------------------------------------------------------- distributions

_N_GAUSS = 256
_PRESETS = ("uniform-sphere", "equator", "poles", "belt")


def _gauss_integrate(func, knots: np.ndarray) -> float:
    x, w = np.polynomial.legendre.leggauss(_N_GAUSS)
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        if b <= a:
            continue
        t = 0.5 * (b - a) * x + 0.5 * (a + b)
        total += 0.5 * (b - a) * float(np.dot(w, func(t)))
    return total


@dataclass(frozen=True)
class Distribution:
    """Phase-independent input distribution ``f(theta)`` on the Bloch sphere.

    ``f`` is a density with respect to ``dtheta dphi``; it integrates to 1
    over ``[0, pi] x [0, 2 pi)``. Either a named preset or a table of
    ``(theta, f)`` knots joined linearly.
    """

    preset: str | None = None
    params: tuple[float, ...] = ()
    knots: tuple[tuple[float, float], ...] = ()
    _scale: float = field(default=1.0, repr=False)

    def __post_init__(self):
        if self.preset is None:
            k = np.asarray(self.knots, dtype=float)
            if k.ndim != 2 or k.shape[1] != 2 or k.shape[0] < 2:
                raise ArgumentError("knots must be a list of at least two [theta, f] pairs")
            if np.any(np.diff(k[:, 0]) <= 0) or k[0, 0] < 0 or k[-1, 0] > math.pi + 1e-12:
                raise ArgumentError("knot angles must increase within [0, pi]")
            if np.any(k[:, 1] < 0):
                raise ArgumentError("density values must be nonnegative")
        elif self.preset not in _PRESETS:
            raise ArgumentError(f"unknown preset {self.preset!r}; choose from {_PRESETS}")
        elif self.preset == "belt":
            if len(self.params) != 2 or not 0 <= self.params[0] < self.params[1] <= math.pi:
                raise ArgumentError("belt needs 0 <= theta0 < theta1 <= pi")

    @classmethod
    def from_knots(cls, knots, normalize: bool = False) -> "Distribution":
        dist = cls(knots=tuple((float(a), float(b)) for a, b in knots))
        if normalize:
            total = dist._moment(lambda t: np.ones_like(t))
            if total <= 0:
                raise ArgumentError("density integrates to zero")
            dist = cls(knots=dist.knots, _scale=1.0 / total)
        return dist

    @classmethod
    def parse(cls, text: str) -> "Distribution":
        """``preset:NAME[:a,b]`` or a path to a JSON distribution document."""
        if text.startswith("preset:"):
            parts = text.split(":")
            params = tuple(float(x) for x in parts[2].split(",")) if len(parts) > 2 else ()
            return cls(preset=parts[1], params=params)
        try:
            data = json.loads(Path(text).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ArgumentError(f"cannot read distribution {text!r}: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "Distribution":
        if "preset" in data and "knots" in data:
            raise ArgumentError("give either preset or knots, not both")
        if "preset" in data:
            params = data.get("params", ())
            if isinstance(params, dict):
                params = (params["theta0"], params["theta1"])
            return cls(preset=data["preset"], params=tuple(float(p) for p in params))
        if "knots" in data:
            return cls.from_knots(data["knots"], normalize=bool(data.get("normalize", False)))
        raise ArgumentError("distribution needs a 'preset' or 'knots' field")

    def density(self, theta):
        """``f(theta)`` for the continuous kinds (not for Dirac presets)."""
        theta = np.asarray(theta, dtype=float)
        if self.preset == "uniform-sphere":
            return np.sin(theta) / (4 * math.pi)
        if self.preset == "belt":
            t0, t1 = self.params
            inside = (theta >= t0) & (theta <= t1)
            return np.where(inside, np.sin(theta), 0.0) / (
                2 * math.pi * (math.cos(t0) - math.cos(t1)))
        if self.preset is None:
            k = np.asarray(self.knots)
            return self._scale * np.interp(theta, k[:, 0], k[:, 1], left=0.0, right=0.0)
        raise ArgumentError(f"preset {self.preset!r} is a point mass")

    def _breakpoints(self) -> np.ndarray:
        if self.preset == "belt":
            return np.array(self.params, dtype=float)
        if self.preset is None:
            return np.asarray(self.knots)[:, 0]
        return np.array([0.0, math.pi])

    def _moment(self, g) -> float:
        """``int f(theta) g(theta) dtheta dphi`` (phi gives a factor 2 pi)."""
        if self.preset == "equator":
            return float(g(np.array([math.pi / 2]))[0])
        if self.preset == "poles":
            return float(0.5 * (g(np.array([0.0]))[0] + g(np.array([math.pi]))[0]))
        return 2 * math.pi * _gauss_integrate(lambda t: self.density(t) * g(t),
                                              self._breakpoints())

    def total(self) -> float:
        return self._moment(lambda t: np.ones_like(t))


def gamma_of(dist: Distribution) -> float:
    """Concentration ``(1/4) int f sin^2(theta)``: 0 at the poles, 1/4 on the equator."""
    total = dist.total()
    if abs(total - 1.0) > 1e-8:
        raise ArgumentError(f"distribution is not normalized (integral {total!r})")
    g = 0.25 * dist._moment(lambda t: np.sin(t) ** 2)
    return min(max(g, 0.0), 0.25)


def validate_phase_covariance(dist: Distribution) -> tuple[float, float, float, float]:
    """Magnitudes of the four moments that must vanish for the qubit ``R`` form.

    In order: ``f cos(theta)``, ``f e^{i phi} sin(theta)``,
    ``f e^{i phi} sin(2 theta)``, ``f e^{2 i phi} sin^2(theta)``. The last
    three carry a nonzero Fourier mode in ``phi`` and vanish identically
    because every supported density is ``phi``-independent.
    """
    r1 = abs(dist._moment(np.cos))
    return (r1, 0.0, 0.0, 0.0)


# ------------------------------------------------------- subspace problems

@dataclass(frozen=True)
class SubspaceProblem:
    """Reduced eigenproblem on a nonorthogonal spanning set.

    ``coeff_matrix`` acts on coefficient vectors: the state
    ``sum_j beta_j |v_j>`` is an eigenvector of ``R`` iff ``beta`` is a
    right eigenvector of ``coeff_matrix``. ``gram[i, j] = <v_i|v_j>``.
    ``labels`` name the spanning vectors (clone index, or bit string).
    ``kept`` maps rows back to original clone indices (1->N only).
    """

    coeff_matrix: np.ndarray
    gram: np.ndarray
    labels: tuple
    kept: tuple[int, ...]
    n_sectors: int

    def normalize(self, beta) -> np.ndarray:
        beta = np.asarray(beta, dtype=float)
        nrm2 = float(beta @ self.gram @ beta)
        if nrm2 <= 0:
            raise ArgumentError("coefficient vector has zero norm")
        return beta / math.sqrt(nrm2)

    def dominant(self) -> tuple[float, np.ndarray]:
        """Dominant eigenvalue and its Gram-normalized coefficient vector."""
        from .densemath import general_max_real_eigenpair
        lam, vec = general_max_real_eigenpair(self.coeff_matrix)
        vec = np.real_if_close(vec).real
        if vec.sum() < 0:
            vec = -vec
        return lam, self.normalize(vec)


def subspace_matrix_1N(d: int, n: int, alpha) -> SubspaceProblem:
    """Reduced ``N' x N'`` problem for universal 1->N cloning.

    Clones with zero weight are dropped; ``kept`` lists the survivors.
    Entries ``alpha_n (1 + (d-1) delta_nm)``; the fidelity bound is
    ``(1 + lambda) / (d + 1)``.
    """
    w = _weights(alpha, n).as_array()
    kept = tuple(int(k) for k in np.flatnonzero(w > 0))
    if not kept:
        raise ArgumentError("all weights are zero")
    a = w[list(kept)]
    k = len(kept)
    pattern = np.ones((k, k)) + (d - 1) * np.eye(k)
    coeff = a[:, None] * pattern
    gram = pattern / d
    return SubspaceProblem(coeff, gram, kept, kept, (d - 1) * (n - 1) + 1)


def weight_strings(m: int, n: int) -> list[tuple[int, ...]]:
    """Length-``n`` bit tuples of weight ``m``, increasing as integers
    with clone 1 the most significant bit."""
    out = []
    for ones in combinations(range(n), m):
        bits = [0] * n
        for j in ones:
            bits[j] = 1
        out.append(tuple(bits))
    out.sort(key=lambda b: int("".join(map(str, b)), 2))
    return out


def subspace_matrix_MN(m: int, n: int, alpha, cap: int = DENSE_CAP) -> SubspaceProblem:
    """Reduced problem for universal M->N qubit cloning over weight-M strings.

    Diagonal ``1/(M+2) + (M+1)/(M+2) sum_{x_k=1} alpha_k``. For strings
    ``x, y`` overlapping in ``M-1`` places, the element in row ``y``,
    column ``x`` is ``alpha_k / (M+2)`` with ``k`` the bit where ``y`` has
    a 1 and ``x`` a 0. The dominant eigenvalue is the fidelity bound itself.
    """
    ManyToN(m, n)
    w = _weights(alpha, n).as_array()
    if math.comb(n, m) > cap:
        raise SizeError(f"C({n},{m}) strings exceed cap {cap}")
    strings = weight_strings(m, n)
    xs = np.array(strings)
    k = len(strings)
    coeff = np.zeros((k, k))
    overlap = xs @ xs.T
    for i in range(k):
        coeff[i, i] = 1.0 / (m + 2) + (m + 1) / (m + 2) * float(w[xs[i] == 1].sum())
        for j in np.flatnonzero(overlap[i] == m - 1):
            gained = np.flatnonzero((xs[i] == 1) & (xs[j] == 0))[0]
            coeff[i, j] = w[gained] / (m + 2)
    gram = 1.0 / (m + 1 - overlap)
    return SubspaceProblem(coeff, gram, tuple(strings), tuple(range(n)), n - m + 1)


# ---------------------------------------------------------- state embedding

GHZ = "ghz"
DICKE = "dicke"


def ghz_like(m: int, d: int) -> PureState:
    """``(1/sqrt d) sum_i |i...i>`` on ``m`` qudits."""
    if m == 0:
        return PureState(np.ones(1), ())
    v = np.zeros(d ** m)
    step = sum(d ** j for j in range(m))
    v[np.arange(d) * step] = 1.0 / math.sqrt(d)
    return PureState(v, (d,) * m)


def is_permutation_symmetric(state: PureState, tol: float = 1e-10) -> bool:
    t = state.tensor()
    m = t.ndim
    for i in range(m - 1):
        if np.max(np.abs(t - np.swapaxes(t, i, i + 1)), initial=0.0) > tol:
            return False
    return True


def _place(t_ones: np.ndarray, ones: Sequence[int], t_zeros: np.ndarray,
           zeros: Sequence[int]) -> np.ndarray:
    """Outer product with the factors of each tensor dropped at given sites."""
    joint = np.multiply.outer(t_ones, t_zeros)
    order = list(ones) + list(zeros)
    return np.transpose(joint, np.argsort(order))


def embed_state_1N(d: int, n: int, beta, i: int = 0, phi=DICKE) -> PureState:
    """``sum_n beta_n |B>_(0,n) |Phi>_(others)`` on ``d^(N+1)`` amplitudes.

    ``phi`` is ``"dicke"`` (ladder state with ``i`` excitations),
    ``"ghz"``, or a symmetric :class:`PureState` on ``N-1`` qudits. ``beta``
    is rescaled so that ``(sum beta)^2 + (d-1) sum beta^2 = d``.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (n,):
        raise ArgumentError(f"need {n} coefficients, got {beta.shape}")
    if d ** (n + 1) > KRON_CAP:
        raise SizeError("state exceeds size cap")
    if isinstance(phi, PureState):
        if phi.dims != (d,) * (n - 1):
            raise ArgumentError("custom symmetric state has the wrong layout")
        if not is_permutation_symmetric(phi):
            raise ValidationError("custom state is not permutation symmetric")
        phi_state = phi
    elif phi == DICKE:
        if not 0 <= i <= (d - 1) * (n - 1):
            raise ArgumentError(f"sector index {i} outside 0..{(d - 1) * (n - 1)}")
        phi_state = dicke_state(n - 1, d, i)
    elif phi == GHZ:
        phi_state = ghz_like(n - 1, d)
    else:
        raise ArgumentError(f"unknown symmetric-state choice {phi!r}")

    nrm = beta.sum() ** 2 + (d - 1) * np.dot(beta, beta)
    if nrm <= 0:
        raise ArgumentError("coefficients have zero norm")
    beta = beta * math.sqrt(d / nrm)

    bell = bell_state(d).amplitudes.reshape(d, d)
    phi_t = phi_state.tensor()
    dtype = np.result_type(phi_t, float)
    psi = np.zeros((d,) * (n + 1), dtype=dtype)
    for k in range(n):
        if beta[k] == 0:
            continue
        others = [s for s in range(1, n + 1) if s != k + 1]
        psi += beta[k] * _place(bell, [0, k + 1], phi_t, others)
    v = psi.reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-10:
        raise ValidationError(f"embedded state norm {norm!r} disagrees with the Gram relation")
    return PureState(v / norm, (d,) * (n + 1))


def spanning_state_MN(m: int, n: int, x: Sequence[int], i: int) -> np.ndarray:
    """``|psi_{x,i}>``: input level ``k`` correlated with ``k`` excitations
    on the ``x_k = 1`` clones; the other clones hold ``i`` excitations."""
    ones = [j + 1 for j in range(n) if x[j] == 1]
    zeros = [j + 1 for j in range(n) if x[j] == 0]
    rest = dicke_state(n - m, 2, i).tensor()
    out = np.zeros((m + 1,) + (2,) * n)
    for k in range(m + 1):
        out[k] = _place(dicke_state(m, 2, k).tensor(), [s - 1 for s in ones],
                        rest, [s - 1 for s in zeros])
    return out.reshape(-1) / math.sqrt(m + 1)


def embed_state_MN(m: int, n: int, beta, i: int = 0) -> PureState:
    """``sum_x beta_x |psi_{x,i}>`` normalized through the Gram matrix."""
    ManyToN(m, n)
    if not 0 <= i <= n - m:
        raise ArgumentError(f"sector index {i} outside 0..{n - m}")
    strings = weight_strings(m, n)
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (len(strings),):
        raise ArgumentError(f"need {len(strings)} coefficients")
    if (m + 1) * 2 ** n > KRON_CAP:
        raise SizeError("state exceeds size cap")
    xs = np.array(strings)
    gram = 1.0 / (m + 1 - xs @ xs.T)
    nrm2 = float(beta @ gram @ beta)
    if nrm2 <= 0:
        raise ArgumentError("coefficients have zero norm")
    beta = beta / math.sqrt(nrm2)
    v = np.zeros((m + 1) * 2 ** n)
    for b, x in zip(beta, strings):
        if b != 0:
            v += b * spanning_state_MN(m, n, x, i)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-10:
        raise ValidationError(f"embedded state norm {norm!r} disagrees with the Gram relation")
    return PureState(v / norm, (m + 1,) + (2,) * n)
