"""Generators of valid (complex, chirality) pairs.

Two families: seeded random complexes with prescribed betti numbers,
built from a block-shift normal form conjugated by random unimodular
Gaussian-integer matrices (so every structural identity holds exactly in
floating point and every entry is a Gaussian integer, which the exact
verification path can consume losslessly); and a twisted combinatorial
circle whose boundary is a cyclic shift carrying a holonomy scalar on
the closing edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numlin
from .cochain import ChiralityOperator, CochainComplex
from .errors import UnrealizableSpec

# nonzero Gaussian-integer weights for the block-shift diagonal
_WEIGHTS = (
    1 + 0j, -1 + 0j, 2 + 0j, 3 + 0j, 1j, 2j,
    1 + 1j, 1 - 1j, 2 + 1j, 1 + 2j, -1 + 1j, 2 - 1j,
)


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of a generated instance.

    kind 'random': odd length ``d``, per-degree dimensions for the lower
    half (mirrored to the upper half), full betti target list, and a
    seed.  kind 'circle': holonomy ``mu`` and cell count ``n``.
    """

    kind: str
    d: int = 1
    half_dims: tuple = ()
    betti: tuple = ()
    mu: complex = 2.0 + 0.0j
    n: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "half_dims", tuple(int(x) for x in self.half_dims))
        object.__setattr__(self, "betti", tuple(int(x) for x in self.betti))
        object.__setattr__(self, "mu", complex(self.mu))
        if self.kind not in ("random", "circle"):
            raise ValueError(f"unknown model kind {self.kind!r}")


def _solve_ranks(dims, betti):
    """Boundary ranks forced by dims and betti; None if infeasible."""
    d = len(dims) - 1
    ranks = []
    prev = 0
    for j in range(d + 1):
        r = dims[j] - betti[j] - prev
        if r < 0:
            return None
        ranks.append(r)
        prev = r
    if ranks[d] != 0:
        return None
    for j in range(d):
        if ranks[j] > dims[j + 1]:
            return None
    return ranks[:d]


def gen_random(spec: ModelSpec):
    """Seeded random complex with chirality and prescribed betti numbers.

    The boundary in degree j is T_{j+1} S_j T_j^{-1} where S_j is a
    weighted block shift of the prescribed rank and the T_j are random
    unimodular Gaussian-integer matrices, so the boundary square vanishes
    exactly.  The chirality pairs degree j with d-j through a random
    unimodular map and its exact inverse (odd length means there is no
    middle degree).
    """
    if spec.kind != "random":
        raise ValueError("gen_random needs a spec of kind 'random'")
    d = spec.d
    if d < 1 or d % 2 == 0:
        raise UnrealizableSpec(f"length must be odd and positive, got {d}")
    r = (d + 1) // 2
    if len(spec.half_dims) != r:
        raise UnrealizableSpec(f"need {r} lower-half dimensions, got {len(spec.half_dims)}")
    if len(spec.betti) != d + 1:
        raise UnrealizableSpec(f"need {d + 1} betti targets, got {len(spec.betti)}")
    dims = list(spec.half_dims) + [spec.half_dims[d - j] for j in range(r, d + 1)]
    if any(n < 0 for n in dims) or any(b < 0 for b in spec.betti):
        raise UnrealizableSpec("dimensions and betti targets must be nonnegative")
    ranks = _solve_ranks(dims, spec.betti)
    if ranks is None:
        raise UnrealizableSpec(
            f"no boundary ranks realize dims {tuple(dims)} with betti {spec.betti}"
        )

    rng = np.random.default_rng(spec.seed)
    trans = [numlin.random_unimodular(rng, n) for n in dims]

    boundaries = []
    for j in range(d):
        # domain coordinates: [image of previous | harmonic | coimage]
        s = np.zeros((dims[j + 1], dims[j]), dtype=complex)
        for i in range(ranks[j]):
            s[i, dims[j] - ranks[j] + i] = _WEIGHTS[rng.integers(len(_WEIGHTS))]
        boundaries.append(trans[j + 1][0] @ s @ trans[j][1])

    gamma_blocks: list = [None] * (d + 1)
    for j in range(r):
        u, uinv = numlin.random_unimodular(rng, dims[j])
        gamma_blocks[j] = u
        gamma_blocks[d - j] = uinv
    return CochainComplex(tuple(dims), tuple(boundaries)), ChiralityOperator(
        tuple(gamma_blocks)
    )


def gen_circle(mu: complex, n: int = 1):
    """Twisted cellular cochain complex of a circle with ``n`` cells.

    C^0 = C^1 = C^n; the boundary is the cyclic shift with holonomy
    ``mu`` on the closing edge minus the identity; the chirality swaps
    the two degrees by identity blocks.  For n = 1 the boundary is the
    1x1 matrix [mu - 1].
    """
    mu = complex(mu)
    if mu == 0:
        raise ValueError("holonomy must be nonzero")
    if n < 1:
        raise ValueError("need at least one cell")
    shift = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        shift[i + 1, i] = 1.0
    shift[0, n - 1] = mu
    boundary = shift - np.eye(n, dtype=complex)
    eye = np.eye(n, dtype=complex)
    return (
        CochainComplex((n, n), (boundary,)),
        ChiralityOperator((eye, eye.copy())),
    )


def generate(spec: ModelSpec):
    """Dispatch on the model kind."""
    if spec.kind == "circle":
        return gen_circle(spec.mu, spec.n)
    return gen_random(spec)


def random_spec(seed: int, d: int, max_dim: int = 8,
                acyclic: bool = False) -> ModelSpec:
    """A feasible random ModelSpec: symmetric dims, realizable mixed betti.

    Parameterized by boundary ranks mirrored around the middle, which
    makes the chirality shape constraint dim C^j = dim C^{d-j} automatic.
    With ``acyclic`` all betti targets are zero.
    """
    rng = np.random.default_rng(seed)
    r = (d + 1) // 2
    while True:
        ranks = [int(rng.integers(1, 4)) for _ in range(r)]  # ranks[j], j < r
        full_ranks = ranks + [ranks[d - 1 - j] for j in range(r, d)]
        betti = [0] * (d + 1)
        if not acyclic:
            half_betti = [int(rng.integers(0, 3)) for _ in range(r)]
            betti = half_betti + [half_betti[d - j] for j in range(r, d + 1)]
        dims = []
        ok = True
        for j in range(d + 1):
            prev = full_ranks[j - 1] if j > 0 else 0
            here = full_ranks[j] if j < d else 0
            n = betti[j] + prev + here
            if n > max_dim:
                ok = False
                break
            dims.append(n)
        if ok:
            return ModelSpec(
                kind="random",
                d=d,
                half_dims=tuple(dims[:r]),
                betti=tuple(betti),
                seed=int(rng.integers(2**63 - 1)),
            )
