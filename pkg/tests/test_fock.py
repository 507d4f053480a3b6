"""Dense Fock-space oracle: operator algebra, states, and cross-checks.

The checks here are the independent route that certifies the Toeplitz /
spectrum / entropy pipeline: everything is done with explicit 2^n x 2^n
matrices and compared against the spectral quantities.
"""

import itertools
import json

import numpy as np
import pytest

from xyent.entropy import binary_entropy, block_entropy
from xyent.errors import ConfigError, DomainError
from xyent.fock import (
    MAX_SITES,
    basis_orthonormality_check,
    factorization_check,
    fermion_moment_check,
    jw_fermions,
    majoranas,
    moment_check,
    reduced_density_matrix,
    rotated_fermions,
    run_oracle_suite,
    state_entropy,
    wick_check,
)
from xyent.model import ChainParams
from xyent.spectrum import canonical_rotation, skew_eigenvalues
from xyent.toeplitz import assemble, correlation_matrix

REF = ChainParams(beta_L=1.0, beta_R=3.0, gamma=0.5, lam=0.3)
SECOND = ChainParams(beta_L=0.5, beta_R=2.0, gamma=-0.4, lam=1.2)


def _car_worst(ops):
    dim = ops[0].shape[0]
    worst = 0.0
    for i, bi in enumerate(ops):
        for j, bj in enumerate(ops):
            worst = max(worst, np.abs(bi @ bj + bj @ bi).max())
            target = np.eye(dim) if i == j else 0.0
            bjd = bj.conj().T
            worst = max(worst, np.abs(bi @ bjd + bjd @ bi - target).max())
    return worst


def test_jw_fermions_explicit_small():
    b = jw_fermions(2)
    ann = np.array([[0, 1], [0, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2, dtype=complex)
    np.testing.assert_array_equal(b[0], np.kron(ann, eye))   # site 1: leftmost factor
    np.testing.assert_array_equal(b[1], np.kron(sz, ann))    # string to the left


def test_jw_car_exact():
    for n in (1, 2, 3, 4):
        assert _car_worst(jw_fermions(n)) == 0.0  # 0/1 matrices: exact in floats


def test_majoranas_self_adjoint_and_clifford():
    for n in (1, 3):
        d = majoranas(n)
        assert len(d) == 2 * n
        eye = np.eye(2**n)
        for k, dk in enumerate(d):
            np.testing.assert_array_equal(dk, dk.conj().T)
            for l, dl in enumerate(d):
                anti = dk @ dl + dl @ dk
                target = 2.0 * eye if k == l else 0.0 * eye
                np.testing.assert_allclose(anti, target, atol=1e-15)


def test_rotated_fermions_identity_recovers_jw():
    n = 3
    b = jw_fermions(n)
    c = rotated_fermions(n, np.eye(2 * n))
    for x, y in zip(b, c):
        np.testing.assert_allclose(x, y, atol=1e-15)


def test_rotated_fermions_keep_car():
    rng = np.random.default_rng(2)
    for n in (2, 3):
        q, _ = np.linalg.qr(rng.normal(size=(2 * n, 2 * n)))
        assert _car_worst(rotated_fermions(n, q)) < 1e-13


def test_rotated_fermions_shape_guard():
    with pytest.raises(ConfigError):
        rotated_fermions(2, np.eye(6))


def test_single_mode_density_matrix():
    b = jw_fermions(1)
    rho = reduced_density_matrix(1, [0.6], b)
    np.testing.assert_allclose(rho.matrix, np.diag([0.2, 0.8]), atol=1e-15)
    assert state_entropy(rho) == pytest.approx(binary_entropy(0.6), abs=1e-14)


def test_density_matrix_validation():
    b = jw_fermions(2)
    with pytest.raises(DomainError):
        reduced_density_matrix(2, [0.5, 1.2], b)
    with pytest.raises(ConfigError):
        reduced_density_matrix(2, [0.5], b)
    with pytest.raises(ConfigError):
        jw_fermions(MAX_SITES + 1)


def test_product_order_invariance():
    # factors act on disjoint modes, so any mode ordering gives the same state
    n = 3
    t = assemble(REF, n)
    lam = skew_eigenvalues(t).lambdas
    c = rotated_fermions(n, canonical_rotation(t))
    rho = reduced_density_matrix(n, lam, c)
    perm = [2, 0, 1]
    rho_perm = reduced_density_matrix(n, [lam[i] for i in perm], [c[i] for i in perm])
    np.testing.assert_allclose(rho.matrix, rho_perm.matrix, atol=1e-13)


def _state(params, n):
    t = assemble(params, n)
    lam = skew_eigenvalues(t).lambdas
    c = rotated_fermions(n, canonical_rotation(t))
    return t, lam, reduced_density_matrix(n, lam, c)


def test_state_is_physical():
    for params in (REF, SECOND):
        for n in (1, 2, 3):
            _, _, rho = _state(params, n)
            assert abs(np.trace(rho.matrix) - 1.0) < 1e-12
            eigs = np.linalg.eigvalsh(rho.matrix)
            assert eigs.min() >= -1e-12
            np.testing.assert_allclose(rho.matrix, rho.matrix.conj().T, atol=1e-13)


def test_entropy_equivalence_dense_vs_spectral():
    for params in (REF, SECOND):
        for n in (1, 2, 3, 4):
            t, lam, rho = _state(params, n)
            assert state_entropy(rho) == pytest.approx(
                block_entropy(np.asarray(lam)), abs=1e-9
            )


def test_majorana_moments_match_correlation_matrix():
    for params in (REF, SECOND):
        n = 3
        _, _, rho = _state(params, n)
        omega = correlation_matrix(params, n)
        assert moment_check(rho, majoranas(n), omega) <= 1e-8
        # a deliberately transposed correlation matrix must be detected
        assert moment_check(rho, majoranas(n), omega.T) > 1e-3


def test_fermion_moments_match_momentum_kernel():
    for params in (REF, SECOND):
        n = 3
        _, _, rho = _state(params, n)
        assert fermion_moment_check(rho, jw_fermions(n), params) <= 1e-8


def test_rotated_modes_diagonalize_the_state():
    # In the basis that brings the skew matrix to canonical form the state
    # has occupation (1 + lambda_i) / 2 per mode, no cross terms, and no
    # anomalous <c_i c_j> pairs.
    n = 3
    for params in (REF, SECOND):
        t, lam, rho = _state(params, n)
        c_ops = rotated_fermions(n, canonical_rotation(t))
        for i, ci in enumerate(c_ops):
            for j, cj in enumerate(c_ops):
                occ = np.trace(rho.matrix @ ci.conj().T @ cj)
                target = (1.0 + lam[i]) / 2.0 if i == j else 0.0
                assert abs(occ - target) <= 1e-8
                assert abs(np.trace(rho.matrix @ ci @ cj)) <= 1e-9


def test_wick_four_point_and_odd():
    n = 2
    _, _, rho = _state(REF, n)
    d = majoranas(n)
    for quad in itertools.product(range(1, 2 * n + 1), repeat=4):
        assert wick_check(rho, d, quad) <= 1e-9
    for idx in range(1, 2 * n + 1):
        assert wick_check(rho, d, (idx,)) <= 1e-12
    assert wick_check(rho, d, (1, 2, 3)) <= 1e-12
    # repeated indices reduce via d^2 = 1 and stay consistent
    assert wick_check(rho, d, (2, 2, 1, 3)) <= 1e-9


def test_wick_six_point():
    n = 2
    _, _, rho = _state(REF, n)
    d = majoranas(n)
    rng = np.random.default_rng(8)
    for _ in range(10):
        idx = tuple(rng.integers(1, 2 * n + 1, size=6))
        assert wick_check(rho, d, idx) <= 1e-9


def test_wick_index_guards():
    _, _, rho = _state(REF, 2)
    d = majoranas(2)
    with pytest.raises(ConfigError):
        wick_check(rho, d, (0,))
    with pytest.raises(ConfigError):
        wick_check(rho, d, (5,))
    with pytest.raises(ConfigError):
        wick_check(rho, d, tuple([1] * 10))


def test_factorization_and_orthonormality():
    n = 2
    t = assemble(REF, n)
    lam = skew_eigenvalues(t).lambdas
    c = rotated_fermions(n, canonical_rotation(t))
    rho = reduced_density_matrix(n, lam, c)
    assert factorization_check(n, c, rho) <= 1e-9
    assert basis_orthonormality_check(n, c) <= 1e-12


def test_oracle_suite_report():
    report = run_oracle_suite(REF, n_values=(1, 2, 3), seed=123)
    assert report["passed"] is True
    names = [c["name"] for c in report["checks"]]
    assert "entropy_match[n=2]" in names
    assert "car_jw[n=4]" in names
    assert any(name.startswith("wick_four_point") for name in names)
    for check in report["checks"]:
        assert check["residual"] <= check["tolerance"]
    json.dumps(report)  # must be JSON-serializable as-is


def test_oracle_suite_rejects_large_blocks():
    with pytest.raises(ConfigError):
        run_oracle_suite(REF, n_values=(1, 64))
