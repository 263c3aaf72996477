"""Cochain complexes of odd length with chirality operators.

A complex is a graded family C^0 -> C^1 -> ... -> C^d of finite
dimensional complex vector spaces with boundary maps whose square
vanishes; a chirality operator is an involution swapping degrees j and
d-j.  This module provides validation, cohomology with chosen cocycle
representatives, the signature-type operator B = G d + d G and its
square, and extraction of the spectral subcomplex spanned by the
generalized eigenvectors of B^2 below a modulus threshold.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numlin
from .errors import ThresholdOnSpectrum
from .numlin import RANK_TOL, SubspaceBasis, as_cmatrix

#: relative tolerance for structural residuals (boundary square, involution)
STRUCT_TOL = 1e-10

#: relative tolerance for commutation / leakage residuals of B^2
COMMUTE_TOL = 1e-8


@dataclass(frozen=True)
class CochainComplex:
    """Graded complex vector spaces with boundary maps.

    ``dims`` has d+1 entries and ``boundaries[j]`` maps degree j to
    degree j+1, stored as a (dims[j+1], dims[j]) matrix.
    """

    dims: tuple
    boundaries: tuple

    def __init__(self, dims, boundaries):
        object.__setattr__(self, "dims", tuple(int(n) for n in dims))
        object.__setattr__(
            self, "boundaries", tuple(as_cmatrix(b) for b in boundaries)
        )
        if len(self.boundaries) != len(self.dims) - 1:
            raise ValueError(
                f"{len(self.dims)} dims require {len(self.dims) - 1} boundary "
                f"maps, got {len(self.boundaries)}"
            )

    @property
    def d(self) -> int:
        return len(self.dims) - 1

    @property
    def r(self) -> int:
        return (self.d + 1) // 2

    def boundary(self, j: int) -> np.ndarray:
        """Boundary map out of degree j; zero-shaped outside 0..d-1."""
        if 0 <= j < self.d:
            return self.boundaries[j]
        if j == -1:
            return np.zeros((self.dims[0], 0), dtype=complex)
        if j == self.d:
            return np.zeros((0, self.dims[self.d]), dtype=complex)
        raise IndexError(f"degree {j} out of range")


@dataclass(frozen=True)
class ChiralityOperator:
    """Degree-swapping involution; ``blocks[j]`` maps degree j to d-j."""

    blocks: tuple

    def __init__(self, blocks):
        object.__setattr__(self, "blocks", tuple(as_cmatrix(b) for b in blocks))

    @property
    def d(self) -> int:
        return len(self.blocks) - 1


@dataclass(frozen=True)
class CohomologyFrame:
    """Chosen cocycle representatives whose classes form bases of H^j.

    ``reps[j]`` is a (dims[j], betti[j]) matrix with representatives as
    columns.
    """

    reps: tuple
    betti: tuple

    def __init__(self, reps, betti):
        object.__setattr__(self, "reps", tuple(as_cmatrix(m) for m in reps))
        object.__setattr__(self, "betti", tuple(int(b) for b in betti))

    def is_acyclic(self) -> bool:
        return all(b == 0 for b in self.betti)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    degree: int | None
    residual: float

    def __str__(self):
        where = "" if self.degree is None else f" at degree {self.degree}"
        return f"{self.code}{where} (residual {self.residual:.3e})"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple
    residuals: dict = field(default_factory=dict)

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(str(i) for i in self.issues)


def _norm(a) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def validate(c: CochainComplex, g: ChiralityOperator | None = None,
             check_adjoint_compat: bool = False) -> ValidationReport:
    """Check the structural invariants of a complex and optional chirality.

    Reports, per failure: NotOddLength, ShapeMismatch,
    BoundarySquareNonzero(j), ChiralityNotInvolution(j).  With
    ``check_adjoint_compat`` an informational ChiralityNotAdjoint issue is
    added when G d G differs from the Hermitian adjoint of d (an optional
    compatibility, not required for any construction here).
    """
    issues = []
    residuals = {}
    d = c.d
    if d % 2 == 0 or d < 1:
        issues.append(ValidationIssue("NotOddLength", None, float(d)))

    shapes_ok = True
    for j in range(d):
        if c.boundaries[j].shape != (c.dims[j + 1], c.dims[j]):
            issues.append(ValidationIssue("ShapeMismatch", j, 0.0))
            shapes_ok = False
    if g is not None:
        if len(g.blocks) != d + 1:
            issues.append(ValidationIssue("ShapeMismatch", None, 0.0))
            shapes_ok = False
        else:
            for j in range(d + 1):
                if g.blocks[j].shape != (c.dims[d - j], c.dims[j]):
                    issues.append(ValidationIssue("ShapeMismatch", j, 0.0))
                    shapes_ok = False

    if shapes_ok:
        for j in range(d - 1):
            res = _norm(c.boundaries[j + 1] @ c.boundaries[j])
            scale = _norm(c.boundaries[j + 1]) * _norm(c.boundaries[j])
            residuals[f"dd[{j}]"] = res
            if res > STRUCT_TOL * max(scale, 1.0):
                issues.append(ValidationIssue("BoundarySquareNonzero", j, res))
        if g is not None:
            for j in range(d + 1):
                prod = g.blocks[d - j] @ g.blocks[j]
                res = _norm(prod - np.eye(c.dims[j]))
                residuals[f"gg[{j}]"] = res
                if res > STRUCT_TOL * max(_norm(g.blocks[d - j]) * _norm(g.blocks[j]), 1.0):
                    issues.append(ValidationIssue("ChiralityNotInvolution", j, res))
            if check_adjoint_compat:
                for j in range(d):
                    gdg = g.blocks[j + 1] @ c.boundaries[j] @ g.blocks[d - j]
                    res = _norm(gdg - c.boundary(d - j - 1).conj().T)
                    residuals[f"adj[{j}]"] = res
                    if res > COMMUTE_TOL * max(_norm(gdg), 1.0):
                        issues.append(ValidationIssue("ChiralityNotAdjoint", j, res))

    return ValidationReport(not issues, tuple(issues), residuals)


def cohomology(c: CochainComplex, tol: float = RANK_TOL) -> CohomologyFrame:
    """Cohomology of the complex with deterministic representatives.

    For each degree the kernel basis of the outgoing boundary is scanned
    in order and a vector is kept whenever it is independent of the
    incoming image together with the representatives kept so far.
    """
    reps = []
    betti = []
    for j in range(c.d + 1):
        n = c.dims[j]
        kernel, _ = numlin.kernel_image(c.boundary(j), tol)
        _, image = numlin.kernel_image(c.boundary(j - 1), tol)
        # orthonormal span of image, grown greedily by accepted reps
        q = image.vectors.copy()
        kept = []
        for i in range(kernel.dim):
            v = kernel.vectors[:, i]
            resid = v - q @ (q.conj().T @ v) if q.size else v.copy()
            if np.linalg.norm(resid) > tol * max(np.linalg.norm(v), 1.0):
                kept.append(v)
                resid /= np.linalg.norm(resid)
                q = np.hstack([q, resid[:, None]]) if q.size else resid[:, None]
        reps.append(
            np.stack(kept, axis=1) if kept else np.zeros((n, 0), dtype=complex)
        )
        betti.append(len(kept))
    return CohomologyFrame(tuple(reps), tuple(betti))


@dataclass(frozen=True)
class SignatureOperator:
    """The operator B = G d + d G in block form, and B^2 per degree.

    ``gd[j]`` is the component C^j -> C^{d-j-1} (None at j = d) and
    ``dg[j]`` the component C^j -> C^{d-j+1} (None at j = 0).  ``b2[j]``
    is the restriction of B^2 to degree j.
    """

    gd: tuple
    dg: tuple
    b2: tuple


def signature_operator(c: CochainComplex, g: ChiralityOperator) -> SignatureOperator:
    """Assemble B = G d + d G and B^2 = G d G d + d G d G per degree."""
    d = c.d
    gd = []
    dg = []
    b2 = []
    for j in range(d + 1):
        gd.append(g.blocks[j + 1] @ c.boundaries[j] if j < d else None)
        dg.append(c.boundaries[d - j] @ g.blocks[j] if j >= 1 else None)
        term = np.zeros((c.dims[j], c.dims[j]), dtype=complex)
        if j < d:
            # G d G d: C^j -> C^{j+1} -> C^{d-j-1} -> C^{d-j} -> C^j
            term = term + g.blocks[d - j] @ c.boundaries[d - j - 1] @ gd[j]
        if j >= 1:
            # d G d G: C^j -> C^{d-j} -> C^{d-j+1} -> C^{j-1} -> C^j
            term = term + c.boundaries[j - 1] @ g.blocks[d - j + 1] @ dg[j]
        b2.append(term)
    return SignatureOperator(tuple(gd), tuple(dg), tuple(b2))


@dataclass(frozen=True)
class SpectralSplit:
    """Per-degree generalized-eigenspace split of B^2 at a modulus threshold.

    The low complex (and its chirality) is re-expressed in the
    coordinates of ``low_bases`` so downstream code sees an ordinary
    complex.  ``high_eigs[j]`` is the eigenvalue multiset of B^2 on the
    high part of degree j.  ``leakage`` is the largest norm with which a
    boundary or chirality map escapes its invariant subspace.
    """

    threshold: float
    low_bases: tuple
    high_bases: tuple
    low_complex: CochainComplex
    low_gamma: ChiralityOperator
    high_eigs: tuple
    low_eigs: tuple
    leakage: float


def default_gap_tol(b2) -> float:
    """Gap tolerance scaled to the largest spectral radius of B^2."""
    radius = 0.0
    for m in b2:
        if m.shape[0]:
            radius = max(radius, float(np.max(np.abs(np.linalg.eigvals(m)))))
    return numlin.CLUSTER_REL * max(radius, 1.0)


def spectral_subcomplex(
    c: CochainComplex,
    g: ChiralityOperator,
    lam: float,
    gap_tol: float | None = None,
) -> SpectralSplit:
    """Split the complex into its B^2 spectral parts at modulus ``lam``.

    The low part carries the full cohomology, the high part is acyclic.
    Raises ThresholdOnSpectrum if ``lam`` is within ``gap_tol`` of some
    eigenvalue modulus of B^2.
    """
    d = c.d
    sig = signature_operator(c, g)
    if gap_tol is None:
        gap_tol = default_gap_tol(sig.b2)

    low_b, high_b, low_e, high_e = [], [], [], []
    for j in range(d + 1):
        lo, hi, le, he = numlin.spectral_partition(sig.b2[j], lam, gap_tol)
        low_b.append(lo)
        high_b.append(hi)
        low_e.append(le)
        high_e.append(he)

    # Re-express boundary and chirality maps in low coordinates; the
    # discarded high block measures how far the subspaces fail to be
    # invariant numerically.
    full = [np.hstack([low_b[j].vectors, high_b[j].vectors]) for j in range(d + 1)]
    low_dims = [low_b[j].dim for j in range(d + 1)]
    leakage = 0.0
    low_boundaries = []
    for j in range(d):
        if c.dims[j + 1]:
            coords = np.linalg.solve(full[j + 1], c.boundaries[j] @ low_b[j].vectors)
        else:
            coords = np.zeros((0, low_dims[j]), dtype=complex)
        block = coords[: low_dims[j + 1]]
        # a compressed block at pure leakage level is genuinely zero
        if _norm(block) <= COMMUTE_TOL * _norm(c.boundaries[j]):
            block = np.zeros_like(block)
        low_boundaries.append(block)
        leakage = max(leakage, _norm(coords[low_dims[j + 1]:]))
    low_gamma_blocks = []
    for j in range(d + 1):
        if c.dims[d - j]:
            coords = np.linalg.solve(full[d - j], g.blocks[j] @ low_b[j].vectors)
        else:
            coords = np.zeros((0, low_dims[j]), dtype=complex)
        low_gamma_blocks.append(coords[: low_dims[d - j]])
        leakage = max(leakage, _norm(coords[low_dims[d - j]:]))

    return SpectralSplit(
        threshold=float(lam),
        low_bases=tuple(low_b),
        high_bases=tuple(high_b),
        low_complex=CochainComplex(tuple(low_dims), tuple(low_boundaries)),
        low_gamma=ChiralityOperator(tuple(low_gamma_blocks)),
        high_eigs=tuple(high_e),
        low_eigs=tuple(low_e),
        leakage=leakage,
    )
