"""Dense complex linear algebra kernel.

Determinants, rank/kernel/image bases, and generalized-eigenspace
partitions of possibly non-normal matrices.  Everything operates on
small dense ``complex128`` arrays; rank decisions are made relative to
the largest singular value.  Invariant subspaces are extracted from a
reordered complex Schur form, never from eigenvector matrices, so that
defective matrices are handled correctly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NonSquare, ThresholdOnSpectrum

#: relative singular-value cutoff deciding numerical rank
RANK_TOL = 1e-10

#: eigenvalues whose moduli differ by less than this (relative to the
#: spectral radius) are treated as a single cluster
CLUSTER_REL = 1e-8

#: moduli below this fraction of the spectral radius count as zero; wide
#: enough to absorb the O(sqrt(eps)) splitting of a defective zero
ZERO_REL = 1e-6


@dataclass(frozen=True)
class SubspaceBasis:
    """Columns of ``vectors`` span a subspace of C^ambient_dim."""

    ambient_dim: int
    vectors: np.ndarray  # shape (ambient_dim, dim)
    tol_used: float

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def as_cmatrix(m) -> np.ndarray:
    """Coerce input to a finite complex 2d array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2d array, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def det(m) -> complex:
    """Determinant of a square complex matrix; the 0x0 determinant is 1."""
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"determinant needs a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(a))


def kernel_image(m, tol: float = RANK_TOL):
    """Orthonormal bases of the null space and column space of ``m``.

    Rank is the number of singular values exceeding ``tol`` times the
    largest one.  Always satisfies dim(kernel) + dim(image) = cols.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    a = as_cmatrix(m)
    rows, cols = a.shape
    if min(rows, cols) == 0 or not np.any(a):
        kernel = np.eye(cols, dtype=complex)
        image = np.zeros((rows, 0), dtype=complex)
        return SubspaceBasis(cols, kernel, tol), SubspaceBasis(rows, image, tol)
    u, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > tol * s[0]))
    kernel = vh[rank:].conj().T
    image = u[:, :rank]
    return SubspaceBasis(cols, kernel, tol), SubspaceBasis(rows, image, tol)


def _cluster_moduli(eigs: np.ndarray, cluster_tol: float):
    """Chain-cluster eigenvalues by modulus; returns lists of indices."""
    order = np.argsort(np.abs(eigs))
    clusters: list[list[int]] = []
    last_mod = None
    for idx in order:
        mod = abs(eigs[idx])
        if last_mod is not None and mod - last_mod <= cluster_tol:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
        last_mod = mod
    return clusters


def spectral_partition(a, threshold: float, gap_tol: float):
    """Split C^n into generalized eigenspaces of ``a`` by eigenvalue modulus.

    Returns ``(low, high, low_eigs, high_eigs)`` where ``low`` spans the
    sum of generalized eigenspaces for eigenvalues with |lam| <= threshold
    and ``high`` the complementary sum.  Both spans are invariant under
    ``a``.  Eigenvalue multisets carry algebraic multiplicity.

    Raises ThresholdOnSpectrum when some eigenvalue cluster sits within
    ``gap_tol`` of the threshold, so the split would be ill-defined.
    Numerically-zero clusters are always assigned to the low side (the
    modulus interval is closed at 0), so ``threshold = 0`` is legal.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    if n != a.shape[1]:
        raise NonSquare(f"spectral partition needs a square matrix, got {a.shape}")
    if threshold < 0 or gap_tol < 0:
        raise ValueError("threshold and gap_tol must be nonnegative")
    empty = np.zeros((n, 0), dtype=complex)
    if n == 0:
        return (
            SubspaceBasis(0, empty, gap_tol),
            SubspaceBasis(0, empty, gap_tol),
            np.zeros(0, dtype=complex),
            np.zeros(0, dtype=complex),
        )

    eigs = np.linalg.eigvals(a)
    radius = float(np.max(np.abs(eigs)))
    cluster_tol = CLUSTER_REL * radius
    zero_tol = max(gap_tol, ZERO_REL * radius)

    low_idx: list[int] = []
    high_idx: list[int] = []
    for cluster in _cluster_moduli(eigs, cluster_tol):
        mod = float(np.mean(np.abs(eigs[cluster])))
        if mod <= zero_tol:
            low_idx.extend(cluster)  # the zero group always lies in [0, threshold]
        elif abs(mod - threshold) <= gap_tol:
            moduli = np.sort(np.abs(eigs))
            nearest = moduli[np.argsort(np.abs(moduli - threshold))][:3]
            raise ThresholdOnSpectrum(threshold, nearest)
        elif mod < threshold:
            low_idx.extend(cluster)
        else:
            high_idx.extend(cluster)

    # Separating cut between the two modulus groups; the Schur sort
    # callback then classifies each diagonal entry unambiguously.
    if not high_idx:
        cut = radius + 1.0
    elif not low_idx:
        cut = 0.5 * float(np.min(np.abs(eigs[high_idx])))
    else:
        cut = 0.5 * (
            float(np.max(np.abs(eigs[low_idx])))
            + float(np.min(np.abs(eigs[high_idx])))
        )

    t_low, z_low, sdim_low = sla.schur(
        a, output="complex", sort=lambda lam: abs(lam) <= cut
    )
    t_high, z_high, sdim_high = sla.schur(
        a, output="complex", sort=lambda lam: abs(lam) > cut
    )
    if sdim_low != len(low_idx) or sdim_high != len(high_idx):  # pragma: no cover
        raise ThresholdOnSpectrum(threshold, np.sort(np.abs(eigs))[:3])

    low = z_low[:, :sdim_low]
    high = z_high[:, :sdim_high]
    low_eigs = np.diag(t_low)[:sdim_low].copy()
    high_eigs = np.diag(t_high)[:sdim_high].copy()
    return (
        SubspaceBasis(n, low, gap_tol),
        SubspaceBasis(n, high, gap_tol),
        low_eigs,
        high_eigs,
    )


# Small Gaussian-integer units and elementary multipliers used by the
# unimodular factory below.
_UNITS = (1 + 0j, -1 + 0j, 1j, -1j)
_MULTS = (1 + 0j, -1 + 0j, 1j, -1j, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j)

#: condition-number ceiling for randomly generated invertible matrices
MAX_COND = 1e6


def random_unimodular(rng: np.random.Generator, n: int):
    """Random Gaussian-integer matrix with unit determinant and its exact inverse.

    Built from elementary row operations with small Gaussian-integer
    multipliers, so both the matrix and its inverse have exactly
    representable integer entries and their product is exactly the
    identity in floating point.  Redraws until the condition number is
    below MAX_COND.
    """
    if n == 0:
        z = np.zeros((0, 0), dtype=complex)
        return z, z.copy()
    while True:
        t = np.eye(n, dtype=complex)
        tinv = np.eye(n, dtype=complex)
        for i in range(n):
            u = _UNITS[rng.integers(len(_UNITS))]
            t[i] *= u
            tinv[:, i] /= u
        if n > 1:
            for _ in range(2 * n):
                i, j = rng.choice(n, size=2, replace=False)
                m = _MULTS[rng.integers(len(_MULTS))]
                t[i] += m * t[j]
                tinv[:, j] -= m * tinv[:, i]
        if np.linalg.cond(t) < MAX_COND:
            return t, tinv


def random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random complex Gaussian matrix, redrawn until well conditioned."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    while True:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(a) < MAX_COND:
            return a
