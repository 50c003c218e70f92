"""Optimal asymmetric quantum cloning from the maximum eigenvalue of a
Choi-type matrix R."""

__version__ = "0.1.0"

from .errors import (ArgumentError, CloningError, NumericalFailure, SizeError,  # noqa: E402
                     ValidationError)
from .densemath import (HermitianOperator, PureState, Spectrum, hermitian_eig,  # noqa: E402
                        kron, partial_trace, schmidt_coefficients)
from .spinsym import dicke_state, sector_partition, spin_operators  # noqa: E402
from .tasks import (CloningTask, Distribution, Weights, bell_state, build_R,  # noqa: E402
                    embed_state_1N, embed_state_MN, gamma_of, subspace_matrix_1N,
                    subspace_matrix_MN)
from .solve import (FidelityReport, blocked_max_eigenpair, closed_form_fidelity,  # noqa: E402
                    optimal_fidelity, symmetric_star_fidelity)
from .analyze import (EconomyReport, TradeoffRecord, chsh_monogamy,  # noqa: E402
                      economy_report, monogamy_slack_1N, pareto_sweep,
                      per_clone_fidelities, singlet_fraction, tradeoff_slack_NminusOne)
from .kernels import BACKEND  # noqa: E402

__all__ = [
    "ArgumentError", "CloningError", "NumericalFailure", "SizeError", "ValidationError",
    "HermitianOperator", "PureState", "Spectrum", "hermitian_eig", "kron", "partial_trace",
    "schmidt_coefficients", "dicke_state", "sector_partition", "spin_operators",
    "CloningTask", "Distribution", "Weights", "bell_state", "build_R", "embed_state_1N",
    "embed_state_MN", "gamma_of", "subspace_matrix_1N", "subspace_matrix_MN",
    "FidelityReport", "blocked_max_eigenpair", "closed_form_fidelity", "optimal_fidelity",
    "symmetric_star_fidelity", "EconomyReport", "TradeoffRecord", "chsh_monogamy",
    "economy_report", "monogamy_slack_1N", "pareto_sweep", "per_clone_fidelities",
    "singlet_fraction", "tradeoff_slack_NminusOne", "BACKEND",
]
