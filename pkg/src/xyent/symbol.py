"""Matrix symbol of the steady-state Majorana correlation operator.

The steady state of the two-reservoir chain is quasi-free, so it is fixed by
a momentum-space 2-point operator with Pauli components

    s0(xi) = 1/2 - (1/2) w(delta, beta; mu) sign(kappa),
    s1     = 0,
    (s2, s3)(xi) = -(1/2) w(beta, delta; mu) (-gamma sin xi, cos xi - lam) / mu,

``w`` being the thermal weight.  The deviation of the Majorana correlation
matrix from the identity is block Toeplitz with the anti-Hermitian symbol

    a(xi) = i [[ g(xi), c(xi)   ],
               [ conj(c)(xi), g(xi) ]],

    g(xi) = w(delta, beta; mu) sign(kappa),
    c(xi) = (q(xi) / mu(xi)) w(beta, delta; mu),

where q is the complex pairing amplitude (|q| = mu).  At isolated zeros of
mu the ratio q/mu is undefined but both weights vanish, so a(xi) extends
continuously by 0; :func:`symbol_values` substitutes that limit.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import DomainError
from .model import ChainParams, complex_dispersion, dispersion, dispersion_slope, thermal_weight

__all__ = ["TwoPointComponents", "SymbolValue", "twopoint_components", "symbol_value", "symbol_values"]

# Below this the dispersion is treated as singular (q/mu undefined).
MU_FLOOR = 1e-14


@dataclasses.dataclass(frozen=True)
class TwoPointComponents:
    """Pauli components (s0, s1, s2, s3) of the 2-point operator at one angle."""

    xi: float
    s0: float
    s1: float
    s2: float
    s3: float


@dataclasses.dataclass(frozen=True)
class SymbolValue:
    """The 2x2 symbol a(xi) at one angle."""

    xi: float
    matrix: np.ndarray  # complex, shape (2, 2), anti-Hermitian


def twopoint_components(params: ChainParams, xi: float) -> TwoPointComponents:
    """Scalar 2-point components at momentum ``xi``.

    Raises
    ------
    DomainError
        If mu(xi) <= 1e-14: the direction vector (s2, s3)/|..| is undefined
        at a dispersion zero.
    """
    xi = float(xi)
    m = float(dispersion(params, xi))
    if m <= MU_FLOOR:
        raise DomainError(f"dispersion vanishes at xi={xi!r}; 2-point components are singular there")
    sgn = float(np.sign(dispersion_slope(params, xi)))
    w_db = float(thermal_weight(params.delta, params.beta, m))
    w_bd = float(thermal_weight(params.beta, params.delta, m))
    s0 = 0.5 - 0.5 * w_db * sgn
    s2 = -0.5 * w_bd * (-params.gamma * np.sin(xi)) / m
    s3 = -0.5 * w_bd * (np.cos(xi) - params.lam) / m
    return TwoPointComponents(xi=xi, s0=s0, s1=0.0, s2=float(s2), s3=float(s3))


def symbol_values(params: ChainParams, xi) -> np.ndarray:
    """Vectorized symbol evaluation; ``xi`` of shape (...,) gives (..., 2, 2).

    sign(kappa) is taken as 0 exactly at kappa zeros; quadrature never places
    nodes there, so the convention is irrelevant for integrals.  Dispersion
    zeros get the continuous limit a = 0.
    """
    xi = np.asarray(xi, dtype=float)
    m = dispersion(params, xi)
    regular = m > MU_FLOOR
    m_safe = np.where(regular, m, 1.0)

    g = thermal_weight(params.delta, params.beta, m) * np.sign(dispersion_slope(params, xi))
    c = complex_dispersion(params, xi) / m_safe * thermal_weight(params.beta, params.delta, m)
    g = np.where(regular, g, 0.0)
    c = np.where(regular, c, 0.0)

    out = np.empty(xi.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1j * g
    out[..., 1, 1] = 1j * g
    out[..., 0, 1] = 1j * c
    out[..., 1, 0] = 1j * np.conj(c)
    return out


def symbol_value(params: ChainParams, xi: float) -> SymbolValue:
    """The symbol at a single angle (anti-Hermitian 2x2 complex matrix)."""
    return SymbolValue(xi=float(xi), matrix=symbol_values(params, np.asarray(float(xi))))
