"""Determinant-line formalism.

Wedge elements represent elements of the top exterior power of a graded
piece (or its dual) as a list of vectors plus a scalar.  The module
provides the dual pairing, push-forward along a chirality operator, and
the canonical scalar comparing a tensor of wedge elements with a
cohomology frame through the canonical isomorphism between the
determinant line of a complex and the determinant line of its
cohomology.

Convention: the determinant line of the zero space is C with basis 1;
transition determinants are taken with column order
{image of previous complement | frame representatives | complement},
and the canonical scalar is the alternating product of those
determinants with exponent (-1)^j.  Any quantity certified by this
package is either quadratic in this scalar or covariant under the
convention, so the particular consistent choice is immaterial; it is
frozen here for reproducibility.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import numlin
from .cochain import ChiralityOperator, CochainComplex, CohomologyFrame
from .errors import DegreeMismatch, FrameMismatch, SingularBasis
from .numlin import RANK_TOL, as_cmatrix


@dataclass(frozen=True)
class WedgeElement:
    """scale * (v_1 ^ ... ^ v_n) in Det(C^degree), or its inverse functional.

    ``vectors`` holds the v_i as columns; ``exponent`` is +1 for an
    element of the determinant line and -1 for its dual.
    """

    degree: int
    exponent: int
    vectors: np.ndarray
    scale: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "vectors", as_cmatrix(self.vectors))
        object.__setattr__(self, "scale", complex(self.scale))
        if self.exponent not in (+1, -1):
            raise ValueError("exponent must be +1 or -1")
        if self.vectors.shape[0] != self.vectors.shape[1]:
            raise ValueError("a wedge element needs dim C^j vectors")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def inverse(self) -> "WedgeElement":
        """The unique dual element pairing to 1 with this one."""
        return replace(self, exponent=-self.exponent)


def standard_wedge(dim: int, degree: int, scale: complex = 1.0,
                   exponent: int = +1) -> WedgeElement:
    """Wedge of the standard basis of C^dim, times ``scale``."""
    return WedgeElement(degree, exponent, np.eye(dim, dtype=complex), scale)


@dataclass(frozen=True)
class DetHCoordinate:
    """coord times the frame element of the determinant line of cohomology.

    The frame element is h_0 (x) h_1^{-1} (x) ... with h_j the wedge of
    the degree-j representatives of ``frame``.
    """

    frame: CohomologyFrame
    coord: complex

    def scaled(self, z: complex) -> "DetHCoordinate":
        return DetHCoordinate(self.frame, self.coord * complex(z))


def pair(dual: WedgeElement, elem: WedgeElement, tol: float = RANK_TOL) -> complex:
    """Evaluate a dual wedge element on a wedge element of the same degree.

    Equals (elem.scale / dual.scale) times the determinant of the matrix
    expressing elem's vectors in dual's vectors; in particular
    pair(c.inverse(), c) == 1.
    """
    if dual.exponent != -1 or elem.exponent != +1:
        raise ValueError("pair() needs a dual (-1) and a plain (+1) wedge element")
    if dual.degree != elem.degree or dual.dim != elem.dim:
        raise DegreeMismatch(
            f"cannot pair degree {dual.degree} (dim {dual.dim}) with "
            f"degree {elem.degree} (dim {elem.dim})"
        )
    ratio = elem.scale / dual.scale
    if dual.dim == 0:
        return ratio
    sv = np.linalg.svd(dual.vectors, compute_uv=False)
    if sv[-1] <= tol * sv[0]:
        raise SingularBasis("dual wedge vectors are linearly dependent")
    m = np.linalg.solve(dual.vectors, elem.vectors)
    return ratio * complex(np.linalg.det(m))


def gamma_push(g: ChiralityOperator, w: WedgeElement) -> WedgeElement:
    """Image of a wedge element under the map induced by the chirality."""
    if w.exponent != +1:
        raise ValueError("gamma_push acts on plain (+1) wedge elements")
    block = g.blocks[w.degree]
    return WedgeElement(g.d - w.degree, +1, block @ w.vectors, w.scale)


def _complement_basis(boundary: np.ndarray, tol: float,
                      rng: np.random.Generator | None = None) -> np.ndarray:
    """Basis of a complement of ker(boundary) inside its domain.

    Default: the right singular vectors above the rank cutoff.  With an
    rng, the complement is re-randomized (mixed by an invertible map and
    shifted along the kernel); the canonical scalar must not depend on
    this choice.
    """
    rows, cols = boundary.shape
    if cols == 0 or rows == 0 or not np.any(boundary):
        return np.zeros((cols, 0), dtype=complex)
    _, s, vh = np.linalg.svd(boundary)
    k = int(np.sum(s > tol * s[0]))
    base = vh[:k].conj().T
    if rng is not None and k:
        kern = vh[k:].conj().T
        mix = numlin.random_invertible(rng, k)
        shift = rng.standard_normal((cols - k, k)) + 1j * rng.standard_normal(
            (cols - k, k)
        )
        base = base @ mix + kern @ shift
    return base


def milnor_scalar(
    c: CochainComplex,
    chains,
    frame: CohomologyFrame,
    tol: float = RANK_TOL,
    rng: np.random.Generator | None = None,
) -> complex:
    """Scalar s with phi(c_0 (x) c_1^{-1} (x) ...) = s * (frame element).

    Per degree, a complement b^j of the kernel of the boundary is chosen
    (so the boundary images of b^j form a basis of the next image), the
    basis {d b^{j-1} | frame reps | b^j} of C^j is assembled, and the
    transition determinant D_j of chains[j] against it is taken; the
    result is the alternating product of the D_j.  The value does not
    depend on the choice of complements.
    """
    d = c.d
    if len(chains) != d + 1:
        raise ValueError(f"need {d + 1} chains, got {len(chains)}")
    if len(frame.reps) != d + 1:
        raise FrameMismatch("frame has the wrong number of degrees")
    comps = [_complement_basis(c.boundary(j), tol, rng) for j in range(d + 1)]

    s = 1.0 + 0.0j
    for j in range(d + 1):
        n = c.dims[j]
        w = chains[j]
        if w.degree != j or w.exponent != +1 or w.dim != n:
            raise ValueError(f"chains[{j}] is not a full wedge of degree {j}")
        if frame.reps[j].shape[0] != n:
            raise FrameMismatch(f"frame representatives at degree {j} have wrong size")
        if n == 0:
            dj = w.scale
        else:
            prev = c.boundary(j - 1) @ comps[j - 1] if j > 0 else np.zeros(
                (n, 0), dtype=complex
            )
            basis = np.hstack([prev, frame.reps[j], comps[j]])
            if basis.shape != (n, n):
                raise FrameMismatch(
                    f"degree {j}: image ({prev.shape[1]}) + frame "
                    f"({frame.reps[j].shape[1]}) + complement ({comps[j].shape[1]}) "
                    f"does not fill dimension {n}"
                )
            dj = w.scale * complex(np.linalg.det(np.linalg.solve(basis, w.vectors)))
        s = s * dj if j % 2 == 0 else s / dj
    return s
