"""cweig: Coulomb/Tricomi cross-product eigenvalues for a step-medium
radial boundary value problem, with independent shooting verification."""

from .errors import (
    AccuracyLossError,
    BracketError,
    ConvergenceError,
    CweigError,
    DomainError,
    HypothesisError,
    PoleError,
)
from .specfun import (
    FnValue,
    MediumProfile,
    Params,
    bessel_halfint,
    coulomb_F,
    coulomb_norm,
    tricomi_Q,
    tricomi_psi,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyLossError",
    "BracketError",
    "ConvergenceError",
    "CweigError",
    "DomainError",
    "FnValue",
    "HypothesisError",
    "MediumProfile",
    "Params",
    "PoleError",
    "bessel_halfint",
    "coulomb_F",
    "coulomb_norm",
    "tricomi_Q",
    "tricomi_psi",
    "__version__",
]
