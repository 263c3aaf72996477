import numpy as np
import pytest

import chiraltor as ct
from chiraltor.errors import UnrealizableSpec


def test_gen_random_structural_identities_exact():
    for seed in range(6):
        spec = ct.random_spec(seed, 3)
        c, g = ct.gen_random(spec)
        d = c.d
        for j in range(d - 1):
            prod = c.boundaries[j + 1] @ c.boundaries[j]
            assert not np.any(prod)  # exactly zero in float64
        for j in range(d + 1):
            eye = g.blocks[d - j] @ g.blocks[j]
            assert np.array_equal(eye, np.eye(c.dims[j], dtype=complex))


def test_gen_random_entries_are_gaussian_integers():
    c, g = ct.gen_random(ct.random_spec(3, 5))
    for m in list(c.boundaries) + list(g.blocks):
        assert np.all(np.rint(m.real) == m.real)
        assert np.all(np.rint(m.imag) == m.imag)


def test_gen_random_hits_betti_targets():
    for seed in range(10):
        spec = ct.random_spec(seed, 3)
        c, _ = ct.gen_random(spec)
        assert ct.cohomology(c).betti == spec.betti


def test_gen_random_seeded_reproducibility():
    spec = ct.random_spec(11, 3)
    c1, g1 = ct.gen_random(spec)
    c2, g2 = ct.gen_random(spec)
    assert all(np.array_equal(a, b) for a, b in zip(c1.boundaries, c2.boundaries))
    assert all(np.array_equal(a, b) for a, b in zip(g1.blocks, g2.blocks))


def test_gen_random_rejects_infeasible():
    with pytest.raises(UnrealizableSpec):
        # a 1-dimensional degree cannot carry betti 2
        ct.gen_random(ct.ModelSpec(kind="random", d=1, half_dims=(1,), betti=(2, 2)))
    with pytest.raises(UnrealizableSpec):
        ct.gen_random(ct.ModelSpec(kind="random", d=2, half_dims=(1,), betti=(0, 0, 0)))


def test_random_spec_respects_max_dim():
    for seed in range(20):
        spec = ct.random_spec(seed, 5, max_dim=8)
        c, _ = ct.gen_random(spec)
        assert max(c.dims) <= 8
    spec = ct.random_spec(0, 3, acyclic=True)
    assert all(b == 0 for b in spec.betti)


def test_circle_model():
    for n in (1, 2, 5):
        c, g = ct.gen_circle(2.0, n=n)
        assert ct.validate(c, g).ok
        assert ct.cohomology(c).betti == (0, 0)
    c, _ = ct.gen_circle(1.0, n=4)
    assert ct.cohomology(c).betti == (1, 1)
    with pytest.raises(ValueError):
        ct.gen_circle(0.0)
    with pytest.raises(ValueError):
        ct.gen_circle(2.0, n=0)


def test_generate_dispatch():
    from chiraltor.models import generate

    c, g = generate(ct.ModelSpec(kind="circle", mu=3.0, n=2))
    assert c.dims == (2, 2)
    spec = ct.random_spec(1, 1)
    c, g = generate(spec)
    assert c.d == 1
