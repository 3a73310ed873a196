"""Numerical tools for quasi-Hermitian quantum systems with a positive-definite metric."""

__version__ = "0.1.0"

from .biorth import (
    BiorthogonalBasis,
    QuasiHermitianSystem,
    apply_spectral,
    completeness_residual,
    diagonalize,
    expand_coefficients,
    make_system,
    observable_from_hermitian,
    reconstruct,
)
from .intertwiner import IntertwinerSolution, canonicalize_metric, solve_metric
from .metric import (
    KetPair,
    MetricOperator,
    apply_metric,
    eta_adjoint,
    eta_inner,
    make_metric,
    quasi_hermiticity_residual,
)
from .numkernel import EigenDecomposition, hermitian_eigen, nullspace_gram, pd_sqrt_pair
from .quadrature import QuadratureGrid, gauss_hermite, hermite_function, integrate
from .swanson import SwansonModel, SwansonParams, build_model, energy, spectral_apply, verify_model
from .transform import HermitianBasis, TransformTable, build_table, change_representation, roundtrip_residual

__all__ = [
    "__version__",
    "BiorthogonalBasis",
    "QuasiHermitianSystem",
    "apply_spectral",
    "completeness_residual",
    "diagonalize",
    "expand_coefficients",
    "make_system",
    "observable_from_hermitian",
    "reconstruct",
    "IntertwinerSolution",
    "canonicalize_metric",
    "solve_metric",
    "KetPair",
    "MetricOperator",
    "apply_metric",
    "eta_adjoint",
    "eta_inner",
    "make_metric",
    "quasi_hermiticity_residual",
    "EigenDecomposition",
    "hermitian_eigen",
    "nullspace_gram",
    "pd_sqrt_pair",
    "QuadratureGrid",
    "gauss_hermite",
    "hermite_function",
    "integrate",
    "SwansonModel",
    "SwansonParams",
    "build_model",
    "energy",
    "spectral_apply",
    "verify_model",
    "HermitianBasis",
    "TransformTable",
    "build_table",
    "change_representation",
    "roundtrip_residual",
]
