import numpy as np
import pytest

import chiraltor as ct
from chiraltor import torsion
from chiraltor.errors import BNotInvertible, NotAcyclic, ThresholdOnSpectrum


def tiny_pair(a=2.0):
    c = ct.CochainComplex((1, 1), (np.array([[a]], dtype=complex),))
    g = ct.ChiralityOperator((np.eye(1, dtype=complex), np.eye(1, dtype=complex)))
    return c, g


def mixed_instance(seed, d=3):
    c, g = ct.gen_random(ct.random_spec(seed, d))
    return c, g, ct.cohomology(c)


def test_tau_hat_tiny():
    a = 3.0 - 1.0j
    c, g = tiny_pair(a)
    value = ct.tau_hat_acyclic(c, g)
    assert abs(value - a ** -2) < 1e-12 * abs(a ** -2)
    via_b = ct.tau_hat_via_detB(c, g)
    assert abs(via_b - a ** -2) < 1e-12 * abs(a ** -2)


def test_tau_hat_requires_acyclic():
    c, g = ct.gen_circle(1.0, n=2)
    with pytest.raises(NotAcyclic):
        ct.tau_hat_acyclic(c, g)


def test_det_b_path_requires_invertible():
    c, g = ct.gen_circle(1.0, n=2)  # non-acyclic, so B is singular
    with pytest.raises(BNotInvertible):
        ct.tau_hat_via_detB(c, g)


def test_rho_normalizes_tau():
    for seed in range(8):
        c, g, frame = mixed_instance(seed)
        rho = ct.rho_refined(c, g, frame)
        value = ct.tau_evaluate(c, g, rho.value).tau_value
        assert abs(value - 1.0) < 1e-10


def test_rho_normalizes_tau_in_any_frame():
    # the normalization is frame independent: mix the representatives
    c, g, frame = mixed_instance(1)
    rng = np.random.default_rng(42)
    reps = []
    for j in range(c.d + 1):
        b = frame.betti[j]
        mix = ct.numlin.random_invertible(rng, b) if b else np.zeros((0, 0))
        reps.append(frame.reps[j] @ mix if b else frame.reps[j])
    other = ct.CohomologyFrame(tuple(reps), frame.betti)
    rho = ct.rho_refined(c, g, other)
    assert abs(ct.tau_evaluate(c, g, rho.value).tau_value - 1.0) < 1e-9


def test_rho_chain_choice_invariance():
    c, g, frame = mixed_instance(3)
    base = ct.rho_refined(c, g, frame).value.coord
    for seed in range(5):
        coord = ct.rho_refined(c, g, frame, rng=np.random.default_rng(seed)).value.coord
        assert abs(coord - base) < 1e-8 * abs(base)


def test_halved_equals_direct():
    for seed in range(8):
        c, g, frame = mixed_instance(seed)
        x = ct.DetHCoordinate(frame, 1.3 - 0.4j)
        direct = ct.tau_evaluate(c, g, x).tau_value
        halved = ct.tau_evaluate_halved(c, g, x).tau_value
        assert abs(halved - direct) < 1e-10 * abs(direct)


def test_quadratic_homogeneity():
    c, g, frame = mixed_instance(2)
    x = ct.DetHCoordinate(frame, 1.0)
    base = ct.tau_evaluate(c, g, x).tau_value
    rng = np.random.default_rng(0)
    for _ in range(5):
        z = complex(rng.standard_normal(), rng.standard_normal())
        value = ct.tau_evaluate(c, g, x.scaled(z)).tau_value
        assert abs(value - z ** 2 * base) < 1e-12 * abs(z ** 2 * base)


def test_spectral_path_matches_direct():
    for seed in (0, 4, 7):
        c, g, frame = mixed_instance(seed)
        x = ct.DetHCoordinate(frame, 1.0)
        direct = ct.tau_evaluate(c, g, x).tau_value
        for lam in torsion.spectral_gap_thresholds(c, g):
            report = ct.tau_via_spectral(c, g, lam, x)
            assert abs(report.tau_value - direct) < 1e-7 * abs(direct), lam
            assert report.path == f"spectral({lam})"


def test_spectral_path_threshold_on_spectrum():
    c, g = tiny_pair(2.0)
    frame = torsion.empty_frame(c)
    with pytest.raises(ThresholdOnSpectrum) as exc:
        ct.tau_via_spectral(c, g, 4.0, ct.DetHCoordinate(frame, 1.0))
    assert min(abs(m - 4.0) for m in exc.value.nearest) < 1e-8


def test_cappell_miller_duality():
    for seed in range(6):
        c, g, frame = mixed_instance(seed)
        x = ct.DetHCoordinate(frame, 1.0)
        tau = ct.tau_evaluate(c, g, x).tau_value
        cm = ct.cappell_miller(c, g, frame)
        assert abs(tau * cm.coord - 1.0) < 1e-10


def test_cappell_miller_acyclic_det_b():
    for seed in range(4):
        c, g = ct.gen_random(ct.random_spec(seed, 3, acyclic=True))
        frame = torsion.empty_frame(c)
        try:
            via_b = ct.cappell_miller_via_detB(c, g)
        except BNotInvertible:
            continue
        cm = ct.cappell_miller(c, g, frame)
        assert abs(cm.coord - via_b) < 1e-8 * abs(via_b)


def test_cappell_miller_truncated_independent_of_threshold():
    c, g, frame = mixed_instance(5)
    base = ct.cappell_miller(c, g, frame).coord
    for lam in torsion.spectral_gap_thresholds(c, g):
        cm = ct.cappell_miller_truncated(c, g, lam, frame)
        assert abs(cm.coord - base) < 1e-7 * abs(base)


def test_graded_det_multiplicativity():
    c, g, _ = mixed_instance(6)
    ths = torsion.spectral_gap_thresholds(c, g)
    for i in range(len(ths)):
        for k in range(i, len(ths)):
            lhs, rhs = ct.graded_det_multiplicativity(c, g, ths[i], ths[k])
            assert abs(lhs - rhs) < 1e-9 * abs(lhs)
    with pytest.raises(ValueError):
        ct.graded_det_multiplicativity(c, g, ths[-1], ths[0])


def test_spectral_gap_thresholds_avoid_spectrum():
    c, g, _ = mixed_instance(7)
    mods = torsion.b2_eig_moduli(c, g)
    for lam in torsion.spectral_gap_thresholds(c, g):
        if lam == 0.0:
            continue
        assert np.min(np.abs(mods - lam)) > 1e-8
