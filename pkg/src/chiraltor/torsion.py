"""Torsion quadratic form, refined torsion, and Cappell-Miller torsion.

The torsion quadratic form of a pair (complex, chirality) is evaluated
on coordinates relative to a cohomology frame, either directly from its
defining pairing product, through the equivalent halved product over the
lower half of the degrees, or through a spectral split of the square of
the signature operator (graded determinant of the high part times the
form of the low subcomplex).  The refined torsion is the canonical
element normalizing the quadratic form to 1, and the Cappell-Miller
torsion is its square.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import detline
from .cochain import (
    ChiralityOperator,
    CochainComplex,
    CohomologyFrame,
    SpectralSplit,
    cohomology,
    signature_operator,
    spectral_subcomplex,
)
from .detline import DetHCoordinate, WedgeElement, gamma_push, milnor_scalar, pair, standard_wedge
from .errors import BNotInvertible, FrameMismatch, NotAcyclic, ThresholdOnSpectrum
from .numlin import RANK_TOL, random_unimodular

#: modulus below which a chain pairing counts as degenerate and the
#: chains are re-randomized
DEGENERATE_PAIRING = 1e-12

#: relative margin on the smallest eigenvalue modulus of B^2 below which
#: the signature operator counts as non-invertible
INVERTIBLE_MARGIN = 1e-8


@dataclass(frozen=True)
class TorsionReport:
    """Result of a torsion evaluation.

    ``graded_det_factor`` is the alternating-weighted product of high
    eigenvalues of B^2 (1 on the direct path).  ``residuals`` carries
    diagnostic norms such as the smallest chain pairing modulus and the
    spectral leakage.
    """

    tau_value: complex
    path: str
    graded_det_factor: complex = 1.0 + 0.0j
    residuals: dict = None


def _check_frame(c: CochainComplex, frame: CohomologyFrame):
    if len(frame.reps) != c.d + 1:
        raise FrameMismatch("frame has the wrong number of degrees")
    for j, rep in enumerate(frame.reps):
        if rep.shape != (c.dims[j], frame.betti[j]):
            raise FrameMismatch(f"frame representatives at degree {j} have shape "
                                f"{rep.shape}, expected ({c.dims[j]}, {frame.betti[j]})")


def _chain_attempts(c: CochainComplex, max_attempts: int = 5):
    """Standard-basis chains first, then seeded unimodular re-randomizations."""
    yield [standard_wedge(c.dims[j], j) for j in range(c.d + 1)], None
    for attempt in range(1, max_attempts):
        rng = np.random.default_rng(0xC0C4A1 + attempt)
        chains = [
            WedgeElement(j, +1, random_unimodular(rng, c.dims[j])[0])
            for j in range(c.d + 1)
        ]
        yield chains, rng


def _pairing_product(c, g, chains, halved: bool):
    """The alternating pairing product over all degrees, or its halved square."""
    d = c.d
    degrees = range(c.r) if halved else range(d + 1)
    prod = 1.0 + 0.0j
    smallest = np.inf
    for j in degrees:
        p = pair(chains[j].inverse(), gamma_push(g, chains[d - j]))
        smallest = min(smallest, abs(p))
        prod = prod / p if j % 2 == 0 else prod * p
    if halved:
        prod = prod**2
    return prod, smallest


def _tau(c, g, x, halved: bool) -> TorsionReport:
    _check_frame(c, x.frame)
    last = None
    for chains, rng in _chain_attempts(c):
        prod, smallest = _pairing_product(c, g, chains, halved)
        if smallest < DEGENERATE_PAIRING or not np.isfinite(prod):
            continue
        s = milnor_scalar(c, chains, x.frame, rng=rng)
        if abs(s) < DEGENERATE_PAIRING or not np.isfinite(s):
            continue
        value = (x.coord / s) ** 2 * prod
        return TorsionReport(
            tau_value=value,
            path="halved" if halved else "direct",
            residuals={"min_pairing": float(smallest)},
        )
    raise RuntimeError("could not find nondegenerate chains; last product "
                       f"was {last!r}")


def tau_evaluate(c: CochainComplex, g: ChiralityOperator,
                 x: DetHCoordinate) -> TorsionReport:
    """Torsion quadratic form at ``x``, from the defining pairing product.

    Chains are chosen as standard basis wedges (re-randomized with a
    seeded generator if a pairing degenerates); the result is chain
    independent.
    """
    return _tau(c, g, x, halved=False)


def tau_evaluate_halved(c: CochainComplex, g: ChiralityOperator,
                        x: DetHCoordinate) -> TorsionReport:
    """Same value as tau_evaluate via the squared half-product over j < r."""
    return _tau(c, g, x, halved=True)


def empty_frame(c: CochainComplex) -> CohomologyFrame:
    """The frame of an acyclic complex: no representatives anywhere."""
    return CohomologyFrame(
        tuple(np.zeros((n, 0), dtype=complex) for n in c.dims),
        (0,) * (c.d + 1),
    )


def tau_hat_acyclic(c: CochainComplex, g: ChiralityOperator) -> complex:
    """The torsion of an acyclic complex as a number (form evaluated at 1)."""
    frame = cohomology(c)
    if not frame.is_acyclic():
        raise NotAcyclic(f"betti numbers are {frame.betti}")
    return tau_evaluate(c, g, DetHCoordinate(empty_frame(c), 1.0)).tau_value


def _b2_eigs(c, g):
    b2 = signature_operator(c, g).b2
    return [np.linalg.eigvals(m) if m.shape[0] else np.zeros(0, complex) for m in b2]


def b2_eig_moduli(c: CochainComplex, g: ChiralityOperator) -> np.ndarray:
    """Sorted eigenvalue moduli of B^2 across all degrees.

    Convenience for picking spectral thresholds inside genuine gaps.
    """
    eigs = _b2_eigs(c, g)
    if not any(e.size for e in eigs):
        return np.zeros(0)
    return np.sort(np.abs(np.concatenate([e for e in eigs if e.size])))


def spectral_gap_thresholds(c: CochainComplex, g: ChiralityOperator,
                            rel_gap: float = 1e-6) -> list[float]:
    """Candidate thresholds: midpoints of the gaps between distinct moduli.

    Includes 0 when no modulus sits at 0, and always a value beyond the
    spectral radius.  Returned thresholds are safely separated from every
    eigenvalue modulus.
    """
    mods = b2_eig_moduli(c, g)
    if mods.size == 0:
        return [0.0, 1.0]
    radius = float(mods[-1])
    floor = rel_gap * max(radius, 1.0)
    out = []
    if mods[0] > floor:
        out.append(0.0)
    distinct = [float(mods[0])]
    for m in mods[1:]:
        if m - distinct[-1] > floor:
            distinct.append(float(m))
    for a, b in zip(distinct, distinct[1:]):
        out.append(0.5 * (a + b))
    out.append(2.0 * radius + 1.0)
    return out


def _require_b_invertible(eigs_per_degree):
    radius = max((float(np.max(np.abs(e))) for e in eigs_per_degree if e.size),
                 default=0.0)
    smallest = min((float(np.min(np.abs(e))) for e in eigs_per_degree if e.size),
                   default=np.inf)
    if smallest <= INVERTIBLE_MARGIN * max(radius, 1.0):
        raise BNotInvertible(
            f"smallest eigenvalue modulus of B^2 is {smallest:.3e}"
        )


def _graded_product(eigs_per_degree, sign_shift: int = 0) -> complex:
    """prod_j (prod of eigs at degree j)^((-1)^(j+sign_shift) * j)."""
    out = 1.0 + 0.0j
    for j, eigs in enumerate(eigs_per_degree):
        if j == 0 or eigs.size == 0:
            continue
        block = complex(np.prod(eigs))
        out *= block ** ((-1) ** (j + sign_shift) * j)
    return out


def tau_hat_via_detB(c: CochainComplex, g: ChiralityOperator) -> complex:
    """Acyclic torsion from the graded determinant of B^2 (B invertible)."""
    eigs = _b2_eigs(c, g)
    _require_b_invertible(eigs)
    return _graded_product(eigs)


@dataclass(frozen=True)
class RefinedTorsionElement:
    """The canonical element of the determinant line of cohomology.

    ``r_sign`` is the overall parity factor (-1)^R with
    R = sum_{j<r} dim C^j (dim C^j - 1) / 2.  The coordinate does not
    depend on the internal chain choices, including its sign.
    """

    value: DetHCoordinate
    r_sign: int


def rho_refined(c: CochainComplex, g: ChiralityOperator,
                frame: CohomologyFrame,
                rng: np.random.Generator | None = None) -> RefinedTorsionElement:
    """Refined torsion: the canonical normalizing element in the given frame.

    Chains for the lower half of the degrees are chosen (standard basis,
    or randomized when ``rng`` is given); the upper half is their
    chirality push-forward, and the parity sign is applied.
    """
    _check_frame(c, frame)
    d, r = c.d, c.r
    if rng is None:
        lower = [standard_wedge(c.dims[j], j) for j in range(r)]
    else:
        lower = [
            WedgeElement(j, +1, random_unimodular(rng, c.dims[j])[0])
            for j in range(r)
        ]
    chains = lower + [gamma_push(g, lower[d - j]) for j in range(r, d + 1)]
    parity = sum(n * (n - 1) // 2 for n in c.dims[:r])
    sign = -1 if parity % 2 else 1
    coord = sign * milnor_scalar(c, chains, frame, rng=rng)
    return RefinedTorsionElement(DetHCoordinate(frame, coord), sign)


@dataclass(frozen=True)
class CappellMillerElement:
    """coord times (frame element) tensor (frame element)."""

    coord: complex


def cappell_miller(c: CochainComplex, g: ChiralityOperator,
                   frame: CohomologyFrame) -> CappellMillerElement:
    """The square of the refined torsion; dual to the quadratic form."""
    rho = rho_refined(c, g, frame)
    return CappellMillerElement(rho.value.coord**2)


def cappell_miller_via_detB(c: CochainComplex, g: ChiralityOperator) -> complex:
    """Acyclic Cappell-Miller number from the graded determinant of B^2."""
    eigs = _b2_eigs(c, g)
    _require_b_invertible(eigs)
    return _graded_product(eigs, sign_shift=1)


def _project_frame(c: CochainComplex, split: SpectralSplit,
                   frame: CohomologyFrame) -> CohomologyFrame:
    """Frame of the low subcomplex matching the given frame classwise.

    Representatives are projected onto the low subspace along the high
    subspace and re-expressed in low coordinates; since the high part is
    acyclic this preserves cohomology classes under the
    inclusion-induced isomorphism.
    """
    reps = []
    for j in range(c.d + 1):
        full = np.hstack([split.low_bases[j].vectors, split.high_bases[j].vectors])
        k = split.low_bases[j].dim
        if c.dims[j]:
            coords = np.linalg.solve(full, frame.reps[j])
            reps.append(coords[:k])
        else:
            reps.append(np.zeros((k, 0), dtype=complex))
    return CohomologyFrame(tuple(reps), frame.betti)


def tau_via_spectral(c: CochainComplex, g: ChiralityOperator, lam: float,
                     x: DetHCoordinate,
                     gap_tol: float | None = None) -> TorsionReport:
    """Torsion form via a spectral split of B^2 at modulus ``lam``.

    Equals the direct path: the graded determinant of the high part
    times the form of the low subcomplex at the mapped coordinate.
    """
    _check_frame(c, x.frame)
    split = spectral_subcomplex(c, g, lam, gap_tol)
    factor = _graded_product(split.high_eigs)
    low_frame = _project_frame(c, split, x.frame)
    low = tau_evaluate(split.low_complex, split.low_gamma,
                       DetHCoordinate(low_frame, x.coord))
    residuals = dict(low.residuals or {})
    residuals["leakage"] = split.leakage
    return TorsionReport(
        tau_value=factor * low.tau_value,
        path=f"spectral({lam})",
        graded_det_factor=factor,
        residuals=residuals,
    )


def cappell_miller_truncated(c: CochainComplex, g: ChiralityOperator, lam: float,
                             frame: CohomologyFrame,
                             gap_tol: float | None = None) -> CappellMillerElement:
    """Cappell-Miller element via a spectral split; independent of ``lam``."""
    _check_frame(c, frame)
    split = spectral_subcomplex(c, g, lam, gap_tol)
    prefactor = _graded_product(split.high_eigs, sign_shift=1)
    low_frame = _project_frame(c, split, frame)
    low = cappell_miller(split.low_complex, split.low_gamma, low_frame)
    return CappellMillerElement(prefactor * low.coord)


def graded_det_multiplicativity(c: CochainComplex, g: ChiralityOperator,
                                lam: float, mu: float,
                                gap_tol: float | None = None):
    """Graded product over (lam, inf) vs the split through mu; returns (lhs, rhs).

    Both thresholds must be off the spectrum of every degree of B^2.
    """
    if not 0 <= lam <= mu:
        raise ValueError("need 0 <= lam <= mu")
    split_lam = spectral_subcomplex(c, g, lam, gap_tol)
    split_mu = spectral_subcomplex(c, g, mu, gap_tol)
    lhs = _graded_product(split_lam.high_eigs)
    middle = []
    for j in range(c.d + 1):
        hi = split_lam.high_eigs[j]
        middle.append(hi[np.abs(hi) <= mu] if hi.size else hi)
    rhs = _graded_product(tuple(middle)) * _graded_product(split_mu.high_eigs)
    return lhs, rhs
