"""Quantum speed limit and non-Markovianity of a photon polarization qubit
dephased by a two-peaked Gaussian frequency environment."""

__version__ = "0.1.0"

from .errors import (CuspError, NoTransitionError, NumericalDomainError, ParameterError,
                     PhotonQslError, QuadratureError)
from .spectral import EXPERIMENTAL, SpectralParams
from .dephasing import DensityMatrix2, evolve, kappa, kappa_dot, pure_state
from .qsl import QslBounds, qsl_time
from .nonmarkov import NonMarkovReport, analyze, blp, rhp

__all__ = [
    "__version__",
    "CuspError", "NoTransitionError", "NumericalDomainError", "ParameterError",
    "PhotonQslError", "QuadratureError",
    "EXPERIMENTAL", "SpectralParams",
    "DensityMatrix2", "evolve", "kappa", "kappa_dot", "pure_state",
    "QslBounds", "qsl_time",
    "NonMarkovReport", "analyze", "blp", "rhp",
]
