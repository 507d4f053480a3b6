"""Spectra and canonical form of real skew-symmetric matrices.

A real skew-symmetric ``T`` of size 2n has purely imaginary eigenvalues
``+- i lambda_j`` with ``lambda_j >= 0``; equivalently the Hermitian matrix
``i T`` has the real spectrum ``+- lambda_j``, which is what gets
diagonalized here.  The same eigenvectors yield a real orthogonal ``Q``
with

    Q T Q^t = direct sum over j of  [[0, lambda_j], [-lambda_j, 0]],

planes ordered by descending lambda: if ``v`` is a unit eigenvector of
``i T`` for ``lambda > 0`` then ``sqrt(2) Re v`` and ``sqrt(2) Im v`` are
orthonormal and span the j-th rotation plane (orthogonality across planes
is automatic because the +lambda and -lambda eigenspaces of ``i T`` are
orthogonal, even for repeated lambda).  Zero modes receive a real
orthonormal kernel basis.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg as la

from .errors import InvariantViolation
from .toeplitz import BlockToeplitz

__all__ = ["BlockSpectrum", "CanonicalRotation", "skew_eigenvalues", "canonical_rotation"]

PAIRING_TOL = 1e-10
OVERSHOOT_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-10
CANONICAL_TOL = 1e-8

_CLAMP_HI = 1.0 - 1e-15


@dataclasses.dataclass(frozen=True)
class BlockSpectrum:
    """Nonnegative eigenvalue representatives, descending, with diagnostics."""

    n: int
    lambdas: np.ndarray        # shape (n,), descending, in [0, 1 - 1e-15]
    pairing_residual: float    # max |lambda_k^+ + lambda_k^-| over matched pairs


@dataclasses.dataclass(frozen=True)
class CanonicalRotation:
    """Real orthogonal Q (element of O(2n)) with Q T Q^t in canonical skew form."""

    n: int
    q: np.ndarray              # shape (2n, 2n), Q Q^t = 1 within 1e-10
    canonical_residual: float  # max |Q T Q^t - canonical form| entry


def _as_skew(t) -> np.ndarray:
    entries = t.entries if isinstance(t, BlockToeplitz) else np.asarray(t, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] % 2:
        raise InvariantViolation(f"expected a 2n x 2n matrix, got shape {entries.shape}")
    scale = float(np.abs(entries).max()) or 1.0
    if float(np.abs(entries + entries.T).max()) > 1e-12 * scale:
        raise InvariantViolation("input matrix is not skew-symmetric")
    return entries


def skew_eigenvalues(t) -> BlockSpectrum:
    """Eigenvalue magnitudes lambda_1 >= ... >= lambda_n of a skew matrix.

    Diagonalizes the Hermitian matrix i T and matches the spectrum into
    +-lambda pairs by symmetric sorting; a pairing residual above 1e-10 or
    an overshoot beyond 1 + 1e-9 raises :class:`InvariantViolation`.
    """
    entries = _as_skew(t)
    n = entries.shape[0] // 2
    w = la.eigvalsh(1j * entries)                       # ascending, +- symmetric
    pairing_residual = float(np.abs(w + w[::-1]).max())
    if pairing_residual > PAIRING_TOL:
        raise InvariantViolation(f"eigenvalue pairing residual {pairing_residual:.3e} exceeds {PAIRING_TOL}")
    lam = 0.5 * (w[::-1][:n] - w[:n])                   # descending, noise-averaged
    overshoot = float(lam[0] - 1.0)
    if overshoot > OVERSHOOT_TOL:
        raise InvariantViolation(f"eigenvalue exceeds 1 by {overshoot:.3e}")
    lam = np.clip(lam, 0.0, _CLAMP_HI)
    return BlockSpectrum(n=n, lambdas=lam, pairing_residual=pairing_residual)


def canonical_rotation(t) -> CanonicalRotation:
    """Orthogonal Q bringing a skew matrix to canonical form.

    The rotation planes follow the descending eigenvalue order used by
    :func:`skew_eigenvalues`; zero modes sit last with zero blocks.
    """
    entries = _as_skew(t)
    dim = entries.shape[0]
    n = dim // 2

    scale = float(np.abs(entries).max())
    if scale == 0.0:
        return CanonicalRotation(n=n, q=np.eye(dim), canonical_residual=0.0)

    w, v = la.eigh(1j * entries)
    ztol = max(1e-12, dim * np.finfo(float).eps * float(np.abs(w).max()))
    pos = np.nonzero(w > ztol)[0][::-1]                 # descending lambda
    null = np.nonzero(np.abs(w) <= ztol)[0]
    if 2 * len(pos) + len(null) != dim or len(null) % 2:
        raise InvariantViolation("positive/zero eigenspaces do not pair up")

    rows = np.empty((dim, dim))
    lam_planes = np.zeros(n)
    for j, idx in enumerate(pos):
        vec = v[:, idx]
        u1 = np.sqrt(2.0) * vec.real
        u2 = np.sqrt(2.0) * vec.imag
        u1 /= np.linalg.norm(u1)
        u2 -= (u1 @ u2) * u1                            # tiny in-plane polish
        u2 /= np.linalg.norm(u2)
        if u1 @ entries @ u2 < 0.0:
            u2 = -u2
        rows[2 * j] = u1
        rows[2 * j + 1] = u2
        lam_planes[j] = w[idx]
    if len(null):
        # The kernel of a real skew matrix has a real basis; extract one.
        kern = np.concatenate([v[:, null].real, v[:, null].imag], axis=1)
        u, s, _ = np.linalg.svd(kern, full_matrices=False)
        if int((s > 1e-8).sum()) != len(null):
            raise InvariantViolation("could not extract a real kernel basis")
        rows[2 * len(pos):] = u[:, : len(null)].T

    q = rows
    ortho = float(np.abs(q @ q.T - np.eye(dim)).max())
    if ortho > ORTHOGONALITY_TOL:
        raise InvariantViolation(f"rotation rows are not orthonormal: residual {ortho:.3e}")

    canon = np.zeros_like(entries)
    for j in range(n):
        canon[2 * j, 2 * j + 1] = lam_planes[j]
        canon[2 * j + 1, 2 * j] = -lam_planes[j]
    residual = float(np.abs(q @ entries @ q.T - canon).max())
    if residual > CANONICAL_TOL:
        raise InvariantViolation(f"canonical form residual {residual:.3e} exceeds {CANONICAL_TOL}")
    return CanonicalRotation(n=n, q=q, canonical_residual=residual)
