import numpy as np
import pytest

from chiraltor import numlin
from chiraltor.errors import NonSquare, ThresholdOnSpectrum


def test_det_empty_and_known():
    assert numlin.det(np.zeros((0, 0))) == 1.0
    assert abs(numlin.det([[1, 2], [3, 4]]) - (-2.0)) < 1e-14


def test_det_rejects_nonsquare():
    with pytest.raises(NonSquare):
        numlin.det(np.zeros((2, 3)))


def test_kernel_image_rank_one():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    kernel, image = numlin.kernel_image(a)
    assert kernel.dim == 1 and image.dim == 1
    assert np.linalg.norm(a @ kernel.vectors) < 1e-12
    # bases are orthonormal
    assert np.allclose(kernel.vectors.conj().T @ kernel.vectors, np.eye(1))
    assert np.allclose(image.vectors.conj().T @ image.vectors, np.eye(1))


def test_kernel_image_zero_matrix():
    kernel, image = numlin.kernel_image(np.zeros((3, 4)))
    assert kernel.dim == 4 and image.dim == 0
    kernel, image = numlin.kernel_image(np.zeros((0, 3)))
    assert kernel.dim == 3 and image.dim == 0


def test_kernel_image_counts_add_up():
    rng = np.random.default_rng(3)
    for _ in range(10):
        rows, cols = rng.integers(1, 6, size=2)
        a = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
        kernel, image = numlin.kernel_image(a)
        assert kernel.dim + image.dim == cols


def _defective_with_spectrum(eigs, rng):
    """Non-normal matrix with the given spectrum (a Jordan-ish block mix)."""
    n = len(eigs)
    t = np.diag(np.asarray(eigs, dtype=complex))
    for i in range(n - 1):
        t[i, i + 1] = 1.0  # upper triangular part makes it defective
    s = numlin.random_invertible(rng, n)
    return s @ t @ np.linalg.inv(s)


def test_spectral_partition_splits_moduli():
    rng = np.random.default_rng(0)
    eigs = [0.5, 0.5, 3.0, -4.0, 2.0j]
    a = _defective_with_spectrum(eigs, rng)
    low, high, low_eigs, high_eigs = numlin.spectral_partition(a, 1.0, 1e-6)
    assert low.dim == 2 and high.dim == 3
    assert np.all(np.abs(low_eigs) <= 1.0)
    assert np.all(np.abs(high_eigs) > 1.0)
    # spans are invariant under a
    for basis in (low, high):
        img = a @ basis.vectors
        proj = basis.vectors @ (basis.vectors.conj().T @ img)
        assert np.linalg.norm(img - proj) < 1e-8 * np.linalg.norm(a)


def test_spectral_partition_zero_threshold_keeps_kernel_low():
    rng = np.random.default_rng(1)
    a = _defective_with_spectrum([0.0, 0.0, 2.0, 5.0], rng)
    low, high, low_eigs, high_eigs = numlin.spectral_partition(a, 0.0, 1e-8)
    assert low.dim == 2 and high.dim == 2
    assert np.max(np.abs(low_eigs)) < 1e-6


def test_spectral_partition_threshold_on_spectrum():
    rng = np.random.default_rng(2)
    a = _defective_with_spectrum([1.0, 2.0, 3.0], rng)
    with pytest.raises(ThresholdOnSpectrum) as exc:
        numlin.spectral_partition(a, 2.0, 1e-3)
    assert len(exc.value.nearest) <= 3
    assert min(abs(m - 2.0) for m in exc.value.nearest) < 1e-6


def test_spectral_partition_empty():
    low, high, le, he = numlin.spectral_partition(np.zeros((0, 0)), 1.0, 1e-8)
    assert low.dim == high.dim == 0 and le.size == he.size == 0


def test_random_unimodular_exact_inverse():
    rng = np.random.default_rng(7)
    for n in (0, 1, 3, 6):
        t, tinv = numlin.random_unimodular(rng, n)
        assert np.array_equal(t @ tinv, np.eye(n, dtype=complex))
        # Gaussian-integer entries, determinant a unit
        assert np.all(np.rint(t.real) == t.real) and np.all(np.rint(t.imag) == t.imag)
        if n:
            assert abs(abs(np.linalg.det(t)) - 1.0) < 1e-9


def test_random_invertible_is_well_conditioned():
    rng = np.random.default_rng(8)
    a = numlin.random_invertible(rng, 5)
    assert np.linalg.cond(a) < numlin.MAX_COND
