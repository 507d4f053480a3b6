"""Assembly of the truncated block Toeplitz matrices and their certificates."""

import numpy as np
import pytest

from xyent.errors import ConfigError
from xyent.model import ChainParams, spectral_bound
from xyent.quadrature import CoefficientCache, QuadratureSpec
from xyent.toeplitz import BlockToeplitz, assemble, correlation_matrix, operator_norm

REF = ChainParams(beta_L=1.0, beta_R=3.0, gamma=0.5, lam=0.3)
SECOND = ChainParams(beta_L=0.5, beta_R=2.0, gamma=-0.4, lam=1.2)

# frozen: entry (1,3) in 1-based indexing = block (0,1) entry (0,0) = a_hat(1)[0,0]
T_13 = 0.0554411292626862429


def test_frozen_entry():
    t = assemble(REF, 2)
    assert t.entries[0, 2] == pytest.approx(T_13, abs=1e-13)


def test_exact_skew_and_residuals():
    for params in (REF, SECOND):
        t = assemble(params, 6)
        assert np.array_equal(t.entries, -t.entries.T)  # exact after certification
        assert t.imag_residual <= 1e-9
        assert t.skew_residual <= 1e-9
        # quadrature noise is in fact much smaller than the certified bound
        assert t.imag_residual < 1e-11
        assert t.skew_residual < 1e-11


def test_block_structure_shift_identity():
    t = assemble(REF, 5).entries
    # blocks depend on k - j only: shifting down the diagonal is exact reuse
    assert np.array_equal(t[0:2, 2:4], t[2:4, 4:6])
    assert np.array_equal(t[2:4, 0:2], t[4:6, 2:4])
    assert np.array_equal(t[0:2, 0:2], t[8:10, 8:10])


def test_nesting():
    cache = CoefficientCache()
    small = assemble(REF, 3, cache=cache).entries
    large = assemble(REF, 5, cache=cache).entries
    # the leading principal 6x6 submatrix is the n = 3 truncation, exactly
    assert np.array_equal(large[:6, :6], small)


def test_infinite_temperature_is_zero_matrix():
    t = assemble(ChainParams(0.0, 0.0, 0.5, 0.3), 4)
    assert np.array_equal(t.entries, np.zeros((8, 8)))
    assert t.imag_residual == 0.0


def test_operator_norm_below_spectral_bound():
    for params in (REF, SECOND):
        t = assemble(params, 16)
        assert operator_norm(t) <= spectral_bound(params) + 1e-9
    # also accepts a bare ndarray
    assert operator_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0)


def test_correlation_matrix_properties():
    n = 6
    omega = correlation_matrix(REF, n)
    assert omega.shape == (2 * n, 2 * n)
    np.testing.assert_allclose(omega, np.conj(omega.T), atol=1e-15)  # Hermitian
    eigs = np.linalg.eigvalsh(omega)
    # Omega = 1 + iT has spectrum 1 +- lambda_i inside [0, 2]
    assert eigs.min() >= -1e-12
    assert eigs.max() <= 2.0 + 1e-12
    assert np.trace(omega).real == pytest.approx(2 * n, abs=1e-12)


def test_invalid_block_size():
    with pytest.raises(ConfigError):
        assemble(REF, 0)
    with pytest.raises(ConfigError):
        assemble(REF, -3)


def test_cache_shared_across_sizes():
    cache = CoefficientCache()
    spec = QuadratureSpec()
    assemble(REF, 4, spec=spec, cache=cache)
    assert len(cache) == 7  # x in -3..3
    assemble(REF, 6, spec=spec, cache=cache)
    assert len(cache) == 11  # only x in {-5,-4,4,5} added


def test_dataclass_fields():
    t = assemble(REF, 2)
    assert isinstance(t, BlockToeplitz)
    assert t.n == 2
    assert t.entries.dtype == np.float64
