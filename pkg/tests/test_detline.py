import numpy as np
import pytest

import chiraltor as ct
from chiraltor import detline
from chiraltor.errors import DegreeMismatch, SingularBasis


def test_pair_self_is_one():
    rng = np.random.default_rng(0)
    for n in (0, 1, 4):
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        w = ct.WedgeElement(2, +1, v if n else np.zeros((0, 0)), scale=1.5 - 0.5j)
        assert abs(ct.pair(w.inverse(), w) - 1.0) < 1e-10


def test_pair_scale_ratio_and_determinant():
    a = ct.WedgeElement(0, +1, np.eye(2), scale=2.0)
    b = ct.WedgeElement(0, +1, [[1, 1], [0, 1]], scale=3.0)
    # det of transition is 1, so only the scale ratio remains
    assert abs(ct.pair(a.inverse(), b) - 1.5) < 1e-14
    c = ct.WedgeElement(0, +1, 2 * np.eye(2), scale=2.0)
    assert abs(ct.pair(a.inverse(), c) - 4.0) < 1e-14


def test_pair_rejects_mismatch_and_singular():
    a = ct.WedgeElement(0, +1, np.eye(2))
    b = ct.WedgeElement(1, +1, np.eye(2))
    with pytest.raises(DegreeMismatch):
        ct.pair(a.inverse(), b)
    with pytest.raises(ValueError):
        ct.pair(a, a)  # both plain
    sing = ct.WedgeElement(0, +1, [[1, 1], [1, 1]])
    with pytest.raises(SingularBasis):
        ct.pair(sing.inverse(), a)


def test_gamma_push():
    c, g = ct.gen_random(ct.random_spec(0, 3))
    w = ct.standard_wedge(c.dims[1], 1, scale=2.0j)
    pushed = ct.gamma_push(g, w)
    assert pushed.degree == c.d - 1
    assert pushed.scale == 2.0j
    assert np.allclose(pushed.vectors, g.blocks[1])


def test_milnor_scalar_tiny_complex():
    # 0 -> C --(a)--> C -> 0 is acyclic; with standard chains the scalar is a
    a = 2.0
    c = ct.CochainComplex((1, 1), (np.array([[a]], dtype=complex),))
    frame = ct.CohomologyFrame((np.zeros((1, 0)), np.zeros((1, 0))), (0, 0))
    chains = [ct.standard_wedge(1, 0), ct.standard_wedge(1, 1)]
    s = ct.milnor_scalar(c, chains, frame)
    assert abs(s - a) < 1e-12


def test_milnor_scalar_complement_invariance():
    c, _ = ct.gen_random(ct.random_spec(5, 3))
    frame = ct.cohomology(c)
    chains = [ct.standard_wedge(c.dims[j], j) for j in range(c.d + 1)]
    base = ct.milnor_scalar(c, chains, frame)
    for seed in range(5):
        rng = np.random.default_rng(seed)
        s = ct.milnor_scalar(c, chains, frame, rng=rng)
        assert abs(s - base) < 1e-8 * abs(base)


def test_milnor_scalar_chain_rescaling():
    # scaling the degree-j chain by z multiplies the scalar by z^((-1)^j)
    c, _ = ct.gen_random(ct.random_spec(5, 3))
    frame = ct.cohomology(c)
    chains = [ct.standard_wedge(c.dims[j], j) for j in range(c.d + 1)]
    base = ct.milnor_scalar(c, chains, frame)
    z = 2.0 - 1.0j
    scaled = list(chains)
    scaled[1] = ct.standard_wedge(c.dims[1], 1, scale=z)
    s = ct.milnor_scalar(c, scaled, frame)
    assert abs(s - base / z) < 1e-10 * abs(base / z)


def test_det_h_coordinate_scaling():
    frame = ct.CohomologyFrame((np.zeros((1, 0)), np.zeros((1, 0))), (0, 0))
    x = ct.DetHCoordinate(frame, 2.0)
    assert x.scaled(3.0j).coord == 6.0j
