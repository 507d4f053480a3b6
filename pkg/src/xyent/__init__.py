"""Entropy asymptotics of spin blocks in a two-temperature XY chain.

Core pipeline: closed-form correlation symbol -> Fourier coefficients ->
truncated block Toeplitz matrices -> paired skew-spectrum -> block entropy
and its large-n density limit.  A dense Fock-space oracle cross-checks the
whole chain for small blocks, and a thin HTTP service plus CLI expose the
computations with a shared coefficient cache.
"""

__version__ = "0.1.0"

from .config import RunConfig, parse_config
from .entropy import (
    EntropyReport,
    binary_entropy,
    block_entropy,
    convergence_report,
    entropy_density_limit,
    equilibrium_entropy_density,
)
from .errors import ConfigError, ConvergenceError, DomainError, InvariantViolation
from .fock import run_oracle_suite
from .model import (
    Breakpoints,
    ChainParams,
    dispersion,
    dispersion_slope,
    integration_breakpoints,
    spectral_bound,
    thermal_weight,
)
from .quadrature import (
    CoefficientCache,
    QuadratureSpec,
    default_cache,
    fourier_coefficient,
    integrate_periodic,
)
from .spectrum import BlockSpectrum, CanonicalRotation, canonical_rotation, skew_eigenvalues
from .symbol import symbol_value, symbol_values, twopoint_components
from .toeplitz import BlockToeplitz, assemble, correlation_matrix, operator_norm

__all__ = [
    "__version__",
    "Breakpoints",
    "BlockSpectrum",
    "BlockToeplitz",
    "CanonicalRotation",
    "ChainParams",
    "CoefficientCache",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EntropyReport",
    "InvariantViolation",
    "QuadratureSpec",
    "RunConfig",
    "assemble",
    "binary_entropy",
    "block_entropy",
    "canonical_rotation",
    "convergence_report",
    "correlation_matrix",
    "default_cache",
    "dispersion",
    "dispersion_slope",
    "entropy_density_limit",
    "equilibrium_entropy_density",
    "fourier_coefficient",
    "integrate_periodic",
    "integration_breakpoints",
    "operator_norm",
    "parse_config",
    "run_oracle_suite",
    "skew_eigenvalues",
    "spectral_bound",
    "symbol_value",
    "symbol_values",
    "thermal_weight",
    "twopoint_components",
]
