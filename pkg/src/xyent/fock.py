"""Brute-force Fock-space oracle for small blocks (n <= 10).

Everything here works with dense 2^n x 2^n matrices and no spectral theory:
Jordan-Wigner fermions, their Majorana combinations, the rotated fermion
modes defined by a canonical rotation of the correlation matrix, and the
explicit product density matrix of the block.  The point is independence --
these routines validate the Toeplitz/spectrum/entropy pipeline from the
operator-algebra side, so they deliberately avoid sharing code with it.

Conventions: site 1 is the leftmost tensor factor, the annihilator on a
single site is [[0, 1], [0, 0]] in the (empty, occupied) basis, and strings
of sigma_3 sit to the left of the active site.  Majoranas are

    d_{2j-1} = b_j + b_j^*,    d_{2j} = i (b_j - b_j^*),

and for a rotation Q the new modes are c_i = sum_k ((tau^{-1} blocks) Q)_{2i-1,k} d_k
with tau = [[1, 1], [i, -i]]; Q = 1 recovers the Jordan-Wigner fermions.
"""

from __future__ import annotations

import dataclasses
import itertools
from functools import lru_cache

import numpy as np
from scipy.special import xlogy

from .errors import ConfigError, DomainError
from .model import (
    ChainParams,
    dispersion,
    dispersion_slope,
    integration_breakpoints,
    thermal_weight,
)
from .quadrature import QuadratureSpec, integrate_periodic
from .spectrum import CanonicalRotation
from .symbol import MU_FLOOR

__all__ = [
    "MAX_SITES",
    "jw_fermions",
    "majoranas",
    "rotated_fermions",
    "ReducedDensityMatrix",
    "reduced_density_matrix",
    "state_entropy",
    "moment_check",
    "fermion_moment_check",
    "wick_check",
    "factorization_check",
    "basis_orthonormality_check",
    "run_oracle_suite",
]

MAX_SITES = 10

_ANNIHILATOR = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_TAU_INV = 0.5 * np.array([[1.0, -1.0j], [1.0, 1.0j]], dtype=complex)


def _check_sites(n: int) -> int:
    n = int(n)
    if not 1 <= n <= MAX_SITES:
        raise ConfigError(f"Fock-space oracle supports 1 <= n <= {MAX_SITES}, got n={n}")
    return n


@lru_cache(maxsize=None)
def _jw_cached(n: int) -> tuple[np.ndarray, ...]:
    ops = []
    for j in range(n):
        factors = [_SIGMA_Z] * j + [_ANNIHILATOR] + [np.eye(2, dtype=complex)] * (n - 1 - j)
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ops.append(op)
    return tuple(ops)


def jw_fermions(n: int) -> list[np.ndarray]:
    """Annihilators b_1 .. b_n on the 2^n-dimensional block Fock space."""
    return [op.copy() for op in _jw_cached(_check_sites(n))]


def majoranas(n: int) -> list[np.ndarray]:
    """Self-adjoint Majoranas d_1 .. d_2n with {d_k, d_l} = 2 delta_kl."""
    out = []
    for b in jw_fermions(n):
        bd = b.conj().T
        out.append(b + bd)
        out.append(1j * (b - bd))
    return out


def rotated_fermions(n: int, rotation) -> list[np.ndarray]:
    """Fermion modes c_i attached to a rotation of the Majorana basis.

    ``rotation`` is a :class:`CanonicalRotation` or a bare real orthogonal
    (2n, 2n) matrix.  The returned operators satisfy the canonical
    anticommutation relations for any orthogonal input.
    """
    n = _check_sites(n)
    q = rotation.q if isinstance(rotation, CanonicalRotation) else np.asarray(rotation, dtype=float)
    if q.shape != (2 * n, 2 * n):
        raise ConfigError(f"rotation must be {2 * n} x {2 * n}, got {q.shape}")
    blocks = np.kron(np.eye(n, dtype=complex), _TAU_INV)
    rows = (blocks @ q)[0::2, :]                       # rows 2i-1 in 1-based labelling
    d = majoranas(n)
    dim = 2**n
    out = []
    for i in range(n):
        acc = np.zeros((dim, dim), dtype=complex)
        for k in range(2 * n):
            acc += rows[i, k] * d[k]
        out.append(acc)
    return out


@dataclasses.dataclass(frozen=True)
class ReducedDensityMatrix:
    """Dense block state together with the mode weights that built it."""

    n: int
    matrix: np.ndarray         # (2^n, 2^n) complex, Hermitian, trace 1
    lambdas: tuple[float, ...]


def reduced_density_matrix(n: int, lambdas, c_ops: list[np.ndarray]) -> ReducedDensityMatrix:
    """Product state prod_i [(1+l_i)/2 c_i^* c_i + (1-l_i)/2 c_i c_i^*].

    The factors commute (disjoint modes), so the product order is
    immaterial; ascending mode order is used.  Weights must lie in [0, 1].
    """
    n = _check_sites(n)
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (n,):
        raise ConfigError(f"expected {n} mode weights, got shape {lam.shape}")
    if lam.min() < 0.0 or lam.max() > 1.0:
        raise DomainError(f"mode weights must lie in [0, 1], got {lam!r}")
    rho = np.eye(2**n, dtype=complex)
    for weight, c in zip(lam, c_ops):
        cd = c.conj().T
        rho = rho @ (0.5 * (1.0 + weight) * (cd @ c) + 0.5 * (1.0 - weight) * (c @ cd))
    return ReducedDensityMatrix(n=n, matrix=rho, lambdas=tuple(float(x) for x in lam))


def state_entropy(rho) -> float:
    """Von Neumann entropy -tr(rho log rho) by dense diagonalization."""
    m = rho.matrix if isinstance(rho, ReducedDensityMatrix) else np.asarray(rho)
    p = np.linalg.eigvalsh(m)
    p = np.clip(p, 0.0, None)
    return float(-np.sum(xlogy(p, p)))


# ---------------------------------------------------------------------------
# Consistency checks
# ---------------------------------------------------------------------------


def moment_check(rho, d_ops: list[np.ndarray], omega_matrix: np.ndarray) -> float:
    """Max |tr(rho d_k d_l) - Omega_kl| over all Majorana pairs."""
    m = rho.matrix if isinstance(rho, ReducedDensityMatrix) else np.asarray(rho)
    k = len(d_ops)
    measured = np.empty((k, k), dtype=complex)
    rho_d = [m @ d for d in d_ops]
    for a in range(k):
        for b in range(k):
            measured[a, b] = np.trace(rho_d[a] @ d_ops[b])
    return float(np.abs(measured - np.asarray(omega_matrix)).max())


def _occupation_weight(params: ChainParams, xi: np.ndarray) -> np.ndarray:
    """(s0 - s3)(xi): the momentum kernel of the b^* b correlations."""
    m = dispersion(params, xi)
    regular = m > MU_FLOOR
    ratio = np.where(regular, (np.cos(xi) - params.lam) / np.where(regular, m, 1.0), 0.0)
    s0 = 0.5 - 0.5 * thermal_weight(params.delta, params.beta, m) * np.sign(dispersion_slope(params, xi))
    s3 = -0.5 * thermal_weight(params.beta, params.delta, m) * ratio
    return s0 - s3


def fermion_moment_check(
    rho,
    b_ops: list[np.ndarray],
    params: ChainParams,
    spec: QuadratureSpec | None = None,
) -> float:
    """Max |tr(rho b_j^* b_k) - (1/2pi) int (s0 - s3) e^{-i(k-j)xi}| over j, k.

    Unlike :func:`moment_check` this compares against a fresh quadrature of
    the closed-form 2-point kernel, so it pins down the Fourier convention
    of the assembled correlation matrix, not just internal consistency.
    """
    m = rho.matrix if isinstance(rho, ReducedDensityMatrix) else np.asarray(rho)
    n = len(b_ops)
    spec = spec or QuadratureSpec()
    if spec.breakpoints is None:
        spec = dataclasses.replace(spec, breakpoints=integration_breakpoints(params))

    expected_by_offset = {}
    for offset in range(-(n - 1), n):
        val, _ = integrate_periodic(
            lambda xi, off=offset: _occupation_weight(params, xi) * np.exp(-1j * off * xi),
            spec,
            vectorized=True,
        )
        expected_by_offset[offset] = val

    worst = 0.0
    for j in range(n):
        bdag = b_ops[j].conj().T
        for k in range(n):
            measured = np.trace(m @ bdag @ b_ops[k])
            worst = max(worst, abs(measured - expected_by_offset[k - j]))
    return float(worst)


def _pairing_sum(pairs: np.ndarray, order: tuple[int, ...]) -> complex:
    """Sum over pairings with permutation signs, built from 2-point values."""
    if not order:
        return 1.0 + 0.0j
    first, rest = order[0], order[1:]
    total = 0.0 + 0.0j
    for i, partner in enumerate(rest):
        sub = rest[:i] + rest[i + 1:]
        total += (-1.0) ** i * pairs[first, partner] * _pairing_sum(pairs, sub)
    return total


def wick_check(rho, d_ops: list[np.ndarray], indices: tuple[int, ...]) -> float:
    """|tr(rho d_{i1} ... d_{im}) - pairing sum| for one Majorana monomial.

    Odd-length monomials are compared against 0.  Indices are 1-based and
    may repeat; the pairing sum uses the measured 2-point values, so the
    check probes quasi-freeness of the state itself.
    """
    m = rho.matrix if isinstance(rho, ReducedDensityMatrix) else np.asarray(rho)
    idx = tuple(int(i) - 1 for i in indices)
    if any(not 0 <= i < len(d_ops) for i in idx):
        raise ConfigError(f"Majorana indices out of range 1..{len(d_ops)}: {indices}")
    if len(idx) > 8:
        raise ConfigError("wick_check supports monomials up to degree 8")

    mono = m
    for i in idx:
        mono = mono @ d_ops[i]
    measured = np.trace(mono)
    if len(idx) % 2:
        return float(abs(measured))

    k = len(d_ops)
    pair_vals = np.empty((k, k), dtype=complex)
    rho_d = [m @ d for d in d_ops]
    for a in range(k):
        for b in range(k):
            pair_vals[a, b] = np.trace(rho_d[a] @ d_ops[b])
    predicted = _pairing_sum(pair_vals[np.ix_(idx, idx)], tuple(range(len(idx))))
    return float(abs(measured - predicted))


def _mode_operators(c: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    cd = c.conj().T
    return {(1, 1): cd @ c, (1, 2): cd, (2, 1): c, (2, 2): c @ cd}


def factorization_check(n: int, c_ops: list[np.ndarray], rho) -> float:
    """Residual of the quasi-free factorization over all mode multi-indices.

    For every choice of (alpha_i, beta_i) the expectation of the ordered
    product of e^{(i)}_{alpha_i beta_i} must equal the product of diagonal
    single-mode expectations (zero unless every alpha_i = beta_i).  The
    graded commutation rules the factorization rests on are also verified
    as operator identities.
    """
    n = _check_sites(n)
    m = rho.matrix if isinstance(rho, ReducedDensityMatrix) else np.asarray(rho)
    e = [_mode_operators(c) for c in c_ops]

    worst = 0.0
    # Same-mode products contract: e_ab e_cd = delta_bc e_ad.
    for i in range(n):
        for (a, b), (c, d) in itertools.product(e[i].keys(), repeat=2):
            lhs = e[i][(a, b)] @ e[i][(c, d)]
            rhs = e[i][(a, d)] if b == c else np.zeros_like(lhs)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    # Distinct modes commute up to the parity sign (-1)^{(a+b)(c+d)}.
    for i, j in itertools.combinations(range(n), 2):
        for (a, b), (c, d) in itertools.product(e[i].keys(), repeat=2):
            sign = (-1.0) ** ((a + b) * (c + d))
            lhs = e[i][(a, b)] @ e[j][(c, d)]
            rhs = sign * e[j][(c, d)] @ e[i][(a, b)]
            worst = max(worst, float(np.abs(lhs - rhs).max()))

    for combo in itertools.product(((1, 1), (1, 2), (2, 1), (2, 2)), repeat=n):
        prod = np.eye(2**n, dtype=complex)
        for i, ab in enumerate(combo):
            prod = prod @ e[i][ab]
        lhs = np.trace(m @ prod)
        rhs = 1.0 + 0.0j
        for i, (a, b) in enumerate(combo):
            rhs = 0.0j if a != b else rhs * np.trace(m @ e[i][(a, a)])
        worst = max(worst, float(abs(lhs - rhs)))
    return worst


def basis_orthonormality_check(n: int, c_ops: list[np.ndarray]) -> float:
    """Orthonormality of the 4^n ordered products of mode operators.

    tr(E_A E_B^*) must equal prod_i delta_{A_i B_i}; additionally every
    diagonal single-mode operator has normalized trace 1/2.
    """
    n = _check_sites(n)
    e = [_mode_operators(c) for c in c_ops]
    labels = list(itertools.product(((1, 1), (1, 2), (2, 1), (2, 2)), repeat=n))
    products = []
    for combo in labels:
        prod = np.eye(2**n, dtype=complex)
        for i, ab in enumerate(combo):
            prod = prod @ e[i][ab]
        products.append(prod)

    worst = 0.0
    for i in range(n):
        for a in (1, 2):
            worst = max(worst, abs(np.trace(e[i][(a, a)]) / 2**n - 0.5))
    for ia, ib in itertools.product(range(len(labels)), repeat=2):
        value = np.trace(products[ia] @ products[ib].conj().T)
        target = 1.0 if labels[ia] == labels[ib] else 0.0
        worst = max(worst, abs(value - target))
    return float(worst)


def _car_residual(ops: list[np.ndarray]) -> float:
    """Max violation of {b_i, b_j} = 0 and {b_i, b_j^*} = delta_ij."""
    dim = ops[0].shape[0]
    eye = np.eye(dim, dtype=complex)
    worst = 0.0
    for i, bi in enumerate(ops):
        for j, bj in enumerate(ops):
            worst = max(worst, float(np.abs(bi @ bj + bj @ bi).max()))
            target = eye if i == j else np.zeros((dim, dim))
            bjd = bj.conj().T
            worst = max(worst, float(np.abs(bi @ bjd + bjd @ bi - target).max()))
    return worst


def run_oracle_suite(
    params: ChainParams,
    n_values=(1, 2, 3, 4, 5),
    spec: QuadratureSpec | None = None,
    seed: int = 0,
) -> dict:
    """Run every brute-force cross-check and collect a JSON-able report.

    Per block size: trace, positivity, entropy agreement with the spectral
    route, Majorana moments against the assembled correlation matrix, and
    fermion moments against a fresh quadrature of the closed-form kernel.
    Degree-independent algebra checks (anticommutators, Wick, factorization,
    basis orthonormality) run once at small fixed sizes.
    """
    from .entropy import block_entropy
    from .spectrum import canonical_rotation, skew_eigenvalues
    from .toeplitz import assemble, correlation_matrix

    checks: list[dict] = []

    def record(name: str, residual: float, tolerance: float, **extra) -> None:
        entry = {
            "name": name,
            "residual": float(residual),
            "tolerance": float(tolerance),
            "passed": bool(residual <= tolerance),
        }
        entry.update(extra)
        checks.append(entry)

    for n in sorted({int(v) for v in n_values}):
        _check_sites(n)
        t = assemble(params, n, spec=spec)
        omega = correlation_matrix(params, n, spec=spec)
        lambdas = skew_eigenvalues(t)
        rotation = canonical_rotation(t)
        c_ops = rotated_fermions(n, rotation)
        rho = reduced_density_matrix(n, lambdas.lambdas, c_ops)

        eigs = np.linalg.eigvalsh(rho.matrix)
        record(f"trace_one[n={n}]", abs(np.trace(rho.matrix) - 1.0), 1e-12)
        record(f"positivity[n={n}]", max(0.0, -float(eigs.min())), 1e-12,
               min_eigenvalue=float(eigs.min()))
        record(f"entropy_match[n={n}]",
               abs(state_entropy(rho) - block_entropy(lambdas)), 1e-9)
        record(f"majorana_moments[n={n}]",
               moment_check(rho, majoranas(n), omega), 1e-8)
        record(f"fermion_moments[n={n}]",
               fermion_moment_check(rho, jw_fermions(n), params, spec=spec), 1e-8)

    # Algebra checks at fixed sizes; they do not depend on the block size.
    record("car_jw[n=4]", _car_residual(jw_fermions(4)), 1e-12)
    rng = np.random.default_rng(seed)
    q_rand, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    record("car_rotated[n=3]", _car_residual(rotated_fermions(3, q_rand)), 1e-12,
           seed=int(seed))

    n = 3
    t = assemble(params, n, spec=spec)
    c_ops = rotated_fermions(n, canonical_rotation(t))
    rho = reduced_density_matrix(n, skew_eigenvalues(t).lambdas, c_ops)
    d_ops = majoranas(n)
    worst_even = 0.0
    for quad in itertools.product(range(1, 2 * n + 1), repeat=4):
        worst_even = max(worst_even, wick_check(rho, d_ops, quad))
    record(f"wick_four_point[n={n}]", worst_even, 1e-9)
    worst_odd = 0.0
    for single in range(1, 2 * n + 1):
        worst_odd = max(worst_odd, wick_check(rho, d_ops, (single,)))
    for triple in itertools.product(range(1, 2 * n + 1), repeat=3):
        worst_odd = max(worst_odd, wick_check(rho, d_ops, triple))
    record(f"wick_odd[n={n}]", worst_odd, 1e-12)
    record(f"factorization[n={n}]", factorization_check(n, c_ops, rho), 1e-9)
    record("orthonormality[n=2]", basis_orthonormality_check(
        2, rotated_fermions(2, canonical_rotation(assemble(params, 2, spec=spec)))), 1e-12)

    return {
        "params": {
            "beta_L": params.beta_L,
            "beta_R": params.beta_R,
            "gamma": params.gamma,
            "lambda": params.lam,
        },
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
