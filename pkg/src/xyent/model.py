"""Chain parameters and the scalar spectral functions built from them.

The chain couples, at its two ends, to heat reservoirs held at inverse
temperatures ``beta_L`` and ``beta_R``.  Everything downstream is phrased in
terms of the mean and half-difference

    beta  = (beta_R + beta_L) / 2,      delta = (beta_R - beta_L) / 2,

the quasiparticle dispersion

    mu(xi)    = sqrt((cos xi - lam)^2 + gamma^2 sin^2 xi),

its squared-dispersion derivative

    kappa(xi) = 2 lam sin xi - (1 - gamma^2) sin 2 xi  =  d/dxi [mu^2](xi),

whose sign selects the reservoir that dominates transport at momentum xi,
and the two-temperature thermal weight

    w(a, a'; m) = sinh(a m) / (cosh(a m) + cosh(a' m)).

All momentum functions are 2 pi periodic and vectorized over ``xi``.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import DomainError

__all__ = [
    "ChainParams",
    "Breakpoints",
    "dispersion",
    "dispersion_slope",
    "complex_dispersion",
    "thermal_weight",
    "spectral_bound",
    "integration_breakpoints",
]

TWO_PI = 2.0 * math.pi

# Origin tags for integration breakpoints.
KAPPA_ZERO = "kappa-zero"
MU_ZERO = "mu-zero"


@dataclasses.dataclass(frozen=True)
class ChainParams:
    """Reservoir temperatures and chain couplings.

    Parameters
    ----------
    beta_L, beta_R:
        Inverse temperatures of the left/right reservoir, both >= 0
        (0 means infinite temperature).
    gamma:
        In-plane anisotropy, restricted to (-1, 1).
    lam:
        Transverse magnetic field (any real value).
    """

    beta_L: float
    beta_R: float
    gamma: float
    lam: float

    def __post_init__(self) -> None:
        for name in ("beta_L", "beta_R", "gamma", "lam"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or math.isnan(float(value)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.beta_L < 0.0 or self.beta_R < 0.0:
            raise DomainError(
                f"inverse temperatures must be >= 0, got beta_L={self.beta_L}, beta_R={self.beta_R}"
            )
        if not -1.0 < self.gamma < 1.0:
            raise DomainError(f"gamma must lie strictly inside (-1, 1), got gamma={self.gamma}")

    @property
    def beta(self) -> float:
        """Mean inverse temperature (beta_R + beta_L) / 2."""
        return 0.5 * (self.beta_R + self.beta_L)

    @property
    def delta(self) -> float:
        """Half the reservoir asymmetry, (beta_R - beta_L) / 2."""
        return 0.5 * (self.beta_R - self.beta_L)

    @property
    def theorem_domain(self) -> bool:
        """True iff 0 <= delta < beta < inf, i.e. 0 < beta_L <= beta_R < inf."""
        return 0.0 <= self.delta < self.beta < math.inf


@dataclasses.dataclass(frozen=True)
class Breakpoints:
    """Angles in [0, 2 pi) where integrands lose smoothness.

    ``angles`` is sorted and deduplicated (tolerance 1e-12); ``origins`` holds
    the matching tag, one of ``"kappa-zero"``, ``"mu-zero"`` or the merged
    ``"kappa-zero+mu-zero"`` when both coincide.
    """

    angles: tuple[float, ...]
    origins: tuple[str, ...]

    def by_origin(self, tag: str) -> tuple[float, ...]:
        return tuple(a for a, o in zip(self.angles, self.origins) if tag in o)


def dispersion(params: ChainParams, xi):
    """Quasiparticle dispersion mu(xi) >= 0."""
    xi = np.asarray(xi, dtype=float)
    return np.hypot(np.cos(xi) - params.lam, params.gamma * np.sin(xi))


def dispersion_slope(params: ChainParams, xi):
    """Derivative of the squared dispersion, 2 lam sin xi - (1-gamma^2) sin 2xi."""
    xi = np.asarray(xi, dtype=float)
    return 2.0 * params.lam * np.sin(xi) - (1.0 - params.gamma**2) * np.sin(2.0 * xi)


def complex_dispersion(params: ChainParams, xi):
    """Complex pairing amplitude -gamma sin xi - i (cos xi - lam).

    Its modulus equals ``dispersion(params, xi)``; its phase is the Bogoliubov
    angle that rotates the quasiparticle basis at momentum xi.
    """
    xi = np.asarray(xi, dtype=float)
    return -params.gamma * np.sin(xi) - 1j * (np.cos(xi) - params.lam)


def thermal_weight(alpha: float, alpha_prime: float, m):
    """Two-temperature weight sinh(alpha m) / (cosh(alpha m) + cosh(alpha' m)).

    Evaluated overflow-safely for arbitrarily large ``alpha * m`` by factoring
    out exp(max(|alpha|, |alpha'|) m); all remaining exponents are <= 0.  For
    alpha >= 0 the value lies in [0, 1).
    """
    m = np.asarray(m, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    alpha_prime = np.asarray(alpha_prime, dtype=float)
    top = np.maximum(np.abs(alpha), np.abs(alpha_prime)) * m
    ep = np.exp(alpha * m - top)
    em = np.exp(-alpha * m - top)
    fp = np.exp(alpha_prime * m - top)
    fm = np.exp(-alpha_prime * m - top)
    out = (ep - em) / (ep + em + fp + fm)
    return out if out.ndim else float(out)


def spectral_bound(params: ChainParams, require_positive: bool = False) -> float:
    """Upper bound tanh(beta_R (1 + |lam|) / 2) on the correlation spectrum.

    For beta_R >= beta_L (the ordering of the asymptotic theorem) every
    truncated correlation operator built from these parameters has operator
    norm at most this value, which is < 1 whenever beta_R < inf.  With the
    reservoirs swapped the roles of beta_L and beta_R swap accordingly.
    With ``require_positive`` a zero bound (infinite-temperature right
    reservoir) raises :class:`DomainError` instead of being returned.
    """
    bound = math.tanh(0.5 * params.beta_R * (1.0 + abs(params.lam)))
    if require_positive and bound == 0.0:
        raise DomainError("spectral bound is 0 (beta_R = 0); a strictly positive bound was required")
    return bound


def _wrap(angle: float) -> float:
    """Reduce to [0, 2 pi) with the 2 pi endpoint folded to 0."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if abs(a - TWO_PI) <= 1e-12:
        a = 0.0
    return a


def integration_breakpoints(params: ChainParams) -> Breakpoints:
    """All angles where quadrature panels must split, tagged by origin.

    kappa zeros: sin xi = 0 (always 0 and pi) plus the interior pair
    +-arccos(lam / (1 - gamma^2)) whenever |lam| <= 1 - gamma^2.  mu zeros:
    cos xi = lam together with gamma sin xi = 0, i.e. arccos(lam) (and its
    mirror) for gamma = 0 with |lam| <= 1, or xi in {0, pi} for lam = +-1.
    """
    gamma, lam = params.gamma, params.lam
    found: list[tuple[float, str]] = [(0.0, KAPPA_ZERO), (math.pi, KAPPA_ZERO)]

    ratio = lam / (1.0 - gamma**2)
    if abs(ratio) <= 1.0:
        xi0 = math.acos(ratio)
        found.append((_wrap(xi0), KAPPA_ZERO))
        found.append((_wrap(TWO_PI - xi0), KAPPA_ZERO))

    if gamma == 0.0:
        if abs(lam) <= 1.0:
            xi0 = math.acos(lam)
            found.append((_wrap(xi0), MU_ZERO))
            found.append((_wrap(TWO_PI - xi0), MU_ZERO))
    elif lam == 1.0:
        found.append((0.0, MU_ZERO))
    elif lam == -1.0:
        found.append((math.pi, MU_ZERO))

    found.sort(key=lambda item: item[0])
    angles: list[float] = []
    origins: list[str] = []
    for angle, origin in found:
        if angles and abs(angle - angles[-1]) <= 1e-12:
            if origin not in origins[-1]:
                origins[-1] = KAPPA_ZERO + "+" + MU_ZERO
        else:
            angles.append(angle)
            origins.append(origin)
    return Breakpoints(angles=tuple(angles), origins=tuple(origins))
