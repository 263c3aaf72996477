"""Torsion quadratic forms on determinant lines of finite cochain complexes.

Public surface: complex/chirality containers and validation, cohomology
frames, wedge-element determinant-line calculus, the torsion quadratic
form and its equivalent evaluation paths, the refined torsion element,
the Cappell-Miller torsion, instance generators, an exact-arithmetic
oracle, and a JSON instance format with a CLI.
"""

from .cochain import (
    ChiralityOperator,
    CochainComplex,
    CohomologyFrame,
    SpectralSplit,
    cohomology,
    signature_operator,
    spectral_subcomplex,
    validate,
)
from .detline import (
    DetHCoordinate,
    WedgeElement,
    gamma_push,
    milnor_scalar,
    pair,
    standard_wedge,
)
from .errors import (
    BNotInvertible,
    ChiraltorError,
    DegreeMismatch,
    FrameMismatch,
    NonSquare,
    NotAcyclic,
    SingularBasis,
    ThresholdOnSpectrum,
    UnrealizableSpec,
)
from .models import ModelSpec, gen_circle, gen_random, random_spec
from .numlin import SubspaceBasis, det, kernel_image, spectral_partition
from .torsion import (
    CappellMillerElement,
    RefinedTorsionElement,
    TorsionReport,
    cappell_miller,
    cappell_miller_truncated,
    cappell_miller_via_detB,
    graded_det_multiplicativity,
    rho_refined,
    tau_evaluate,
    tau_evaluate_halved,
    tau_hat_acyclic,
    tau_hat_via_detB,
    tau_via_spectral,
)

__version__ = "0.1.0"
