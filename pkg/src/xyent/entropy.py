"""Block entropies and their large-n density limit.

The von Neumann entropy of an n-site block is a sum of pair entropies

    h(x) = -((1+x)/2) log((1+x)/2) - ((1-x)/2) log((1-x)/2),

one per eigenvalue magnitude of the truncated correlation matrix.  By the
first Szego limit theorem for block Toeplitz truncations the density
``S_n / n`` converges to a constant that collapses, via the hyperbolic
identities

    w(beta,delta;m) + w(delta,beta;m) = tanh(beta_R m / 2),
    w(beta,delta;m) - w(delta,beta;m) = tanh(beta_L m / 2),

to the mean of two single-reservoir integrals:

    C = (1/2) (1/2pi) * integral of  h(tanh(beta_R mu/2)) + h(tanh(beta_L mu/2)).

That tanh form is what gets integrated (it is cancellation-free and needs
panel splits only at dispersion zeros); the finite-n ladder converging to
the same number is the actual evidence that truncated spectra and symbol
integrals describe one and the same operator.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.special import xlogy

from .errors import DomainError
from .model import ChainParams, Breakpoints, dispersion, integration_breakpoints, spectral_bound
from .quadrature import CoefficientCache, QuadratureSpec, integrate_periodic
from .spectrum import BlockSpectrum, skew_eigenvalues
from .toeplitz import assemble

__all__ = [
    "binary_entropy",
    "block_entropy",
    "entropy_density_limit",
    "equilibrium_entropy_density",
    "EntropyReport",
    "convergence_report",
    "DEFAULT_LADDER",
]

DEFAULT_LADDER = (32, 64, 128, 256, 512)

H_DOMAIN_TOL = 1e-9


def binary_entropy(x):
    """Pair entropy h(x) of the eigenvalue pair (1 +- x)/2, in nats.

    Even in x, maximal h(0) = log 2, h(+-1) = 0.  Evaluated via x log x with
    the t -> 0 limit handled exactly, so there is no cancellation near the
    endpoints.  Inputs may stray outside [-1, 1] by at most 1e-9 (they are
    clipped); anything further raises :class:`DomainError`.
    """
    arr = np.asarray(x, dtype=float)
    if np.abs(arr).max(initial=0.0) > 1.0 + H_DOMAIN_TOL:
        raise DomainError(f"binary_entropy argument outside [-1 - 1e-9, 1 + 1e-9]: {arr!r}")
    arr = np.clip(arr, -1.0, 1.0)
    up = 0.5 * (1.0 + arr)
    dn = 0.5 * (1.0 - arr)
    out = -(xlogy(up, up) + xlogy(dn, dn)) + 0.0   # + 0.0 normalizes -0.0 at the endpoints
    return out if out.ndim else float(out)


def block_entropy(spectrum) -> float:
    """Total block entropy: sum of pair entropies over the spectrum.

    Accepts a :class:`BlockSpectrum` or a bare array of eigenvalue
    magnitudes in [0, 1].
    """
    lam = spectrum.lambdas if isinstance(spectrum, BlockSpectrum) else np.asarray(spectrum, dtype=float)
    return float(np.sum(binary_entropy(lam)))


def _mu_zero_breakpoints(params: ChainParams) -> Breakpoints:
    bp = integration_breakpoints(params)
    keep = [(a, o) for a, o in zip(bp.angles, bp.origins) if "mu-zero" in o]
    return Breakpoints(angles=tuple(a for a, _ in keep), origins=tuple(o for _, o in keep))


def _density_integral(betas: tuple[float, ...], params: ChainParams, spec: QuadratureSpec | None) -> float:
    for b in betas:
        if not math.isfinite(b):
            raise DomainError("entropy density limits require finite inverse temperatures")
    spec = spec or QuadratureSpec()
    if spec.breakpoints is None:
        # Only dispersion zeros are kinks of the integrand; sign(kappa) never enters.
        spec = dataclasses.replace(spec, breakpoints=_mu_zero_breakpoints(params))

    def integrand(xi: np.ndarray) -> np.ndarray:
        m = dispersion(params, xi)
        acc = np.zeros_like(m)
        for b in betas:
            acc += binary_entropy(np.tanh(0.5 * b * m))
        return acc / len(betas)

    value, _ = integrate_periodic(integrand, spec, vectorized=True)
    return float(value.real)


def entropy_density_limit(params: ChainParams, spec: QuadratureSpec | None = None) -> float:
    """Large-n limit C of S_n / n for the two-reservoir steady state.

    Satisfies h(rho_bound) <= C <= log 2 with rho_bound the spectral bound,
    so the limit is strictly positive whenever beta_R < inf.
    """
    return _density_integral((params.beta_R, params.beta_L), params, spec)


def equilibrium_entropy_density(
    beta_eq: float, gamma: float, lam: float, spec: QuadratureSpec | None = None
) -> float:
    """Entropy density limit of the equilibrium chain at one temperature."""
    params = ChainParams(beta_L=beta_eq, beta_R=beta_eq, gamma=gamma, lam=lam)
    return _density_integral((beta_eq,), params, spec)


@dataclasses.dataclass(frozen=True)
class EntropyReport:
    """Finite-n entropy ladder next to the limiting constants.

    ``deviations[i] = |entropies[i]/ns[i] - limit|``; the fit fields hold a
    least-squares model ``S_n - C n ~ a log n + b`` describing the observed
    subleading behaviour (reported, never asserted).
    """

    params: ChainParams
    ns: tuple[int, ...]
    entropies: tuple[float, ...]
    densities: tuple[float, ...]
    deviations: tuple[float, ...]
    limit: float
    limit_eq_mean: float       # equilibrium constant at the mean temperature
    limit_eq_left: float
    limit_eq_right: float
    split_residual: float      # |limit - (limit_eq_left + limit_eq_right)/2|
    rho_bound: float
    h_rho: float
    fit_log_coeff: float
    fit_const_coeff: float
    fit_residual: float


def convergence_report(
    params: ChainParams,
    ns: tuple[int, ...] = DEFAULT_LADDER,
    spec: QuadratureSpec | None = None,
    cache: CoefficientCache | None = None,
) -> EntropyReport:
    """Entropy ladder S_n over ``ns`` with densities, deviations and limits.

    Thanks to the coefficient cache the ladder costs little more than its
    largest member: T_m for m < n reuses every coefficient of T_n.
    """
    ns = tuple(sorted(set(int(n) for n in ns)))
    if not ns or ns[0] < 1:
        raise DomainError(f"block sizes must be positive integers, got {ns}")

    limit = entropy_density_limit(params, spec)
    eq_mean = equilibrium_entropy_density(params.beta, params.gamma, params.lam, spec)
    eq_left = equilibrium_entropy_density(params.beta_L, params.gamma, params.lam, spec)
    eq_right = equilibrium_entropy_density(params.beta_R, params.gamma, params.lam, spec)

    entropies = []
    for n in ns:
        spectrum = skew_eigenvalues(assemble(params, n, spec, cache))
        entropies.append(block_entropy(spectrum))
    entropies = tuple(entropies)
    densities = tuple(s / n for s, n in zip(entropies, ns))
    deviations = tuple(abs(d - limit) for d in densities)

    # Subleading model S_n - C n ~ a log n + b (least squares; diagnostic only).
    resid = np.array(entropies) - limit * np.array(ns)
    if len(ns) >= 2:
        basis = np.column_stack([np.log(ns), np.ones(len(ns))])
        coef, *_ = np.linalg.lstsq(basis, resid, rcond=None)
        fit_log, fit_const = float(coef[0]), float(coef[1])
        fit_residual = float(np.abs(basis @ coef - resid).max())
    else:
        fit_log, fit_const, fit_residual = 0.0, float(resid[0]), 0.0

    rho = spectral_bound(params)
    return EntropyReport(
        params=params,
        ns=ns,
        entropies=entropies,
        densities=densities,
        deviations=deviations,
        limit=limit,
        limit_eq_mean=eq_mean,
        limit_eq_left=eq_left,
        limit_eq_right=eq_right,
        split_residual=abs(limit - 0.5 * (eq_left + eq_right)),
        rho_bound=rho,
        h_rho=float(binary_entropy(rho)),
        fit_log_coeff=fit_log,
        fit_const_coeff=fit_const,
        fit_residual=fit_residual,
    )
