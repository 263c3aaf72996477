"""Instance file format (JSON) and report assembly.

An instance file carries the odd length, per-degree dimensions, boundary
and chirality matrices, and optionally a cohomology frame and the model
parameters it was generated from.  Complex entries are encoded either as
``[re, im]`` float pairs or as ``{"num": [p_re, q_re, p_im, q_im]}``
rational quadruples; the rational encoding is lossless and is required
by the exact verification path.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import oracle
from .cochain import ChiralityOperator, CochainComplex, CohomologyFrame
from .models import ModelSpec

SCHEMA_VERSION = "1"


class ParseError(Exception):
    """Malformed instance file; message carries field diagnostics."""


@dataclass
class Instance:
    """Parsed instance: floating data plus the exact lift when available."""

    complex: CochainComplex
    chirality: ChiralityOperator
    frame: CohomologyFrame | None
    model: ModelSpec | None
    exact: bool
    exact_complex: oracle.ExactComplex | None = None
    exact_chirality: oracle.ExactChirality | None = None
    exact_frame_reps: tuple | None = None
    digest: str = ""


def _decode_entry(value, where: str):
    """Returns (complex, QQi-or-None)."""
    if isinstance(value, dict):
        quad = value.get("num")
        if (
            not isinstance(quad, list)
            or len(quad) != 4
            or not all(isinstance(x, int) for x in quad)
            or quad[1] == 0
            or quad[3] == 0
        ):
            raise ParseError(f"{where}: rational entry must be {{'num': [p_re, q_re, p_im, q_im]}} with nonzero denominators")
        re = Fraction(quad[0], quad[1])
        im = Fraction(quad[2], quad[3])
        return complex(float(re), float(im)), oracle.QQi(re, im)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        return complex(value[0], value[1]), None
    raise ParseError(f"{where}: entry must be [re, im] or a rational quadruple")


def _decode_matrix(data, rows: int, cols: int, where: str):
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"{where}: expected {rows} rows")
    fmat = np.zeros((rows, cols), dtype=complex)
    qmat = oracle._qzeros(rows, cols)
    exact = True
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{where}, row {i}: expected {cols} entries")
        for j, value in enumerate(row):
            z, q = _decode_entry(value, f"{where}[{i}][{j}]")
            fmat[i, j] = z
            if q is None:
                exact = False
            else:
                qmat[i][j] = q
    return fmat, (qmat if exact else None)


def parse_instance(text: str | bytes) -> Instance:
    """Parse an instance file; raises ParseError with field diagnostics."""
    if isinstance(text, str):
        text = text.encode()
    digest = hashlib.sha256(text).hexdigest()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    for key in ("d", "dims", "boundaries", "chirality"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    d = data["d"]
    dims = data["dims"]
    if not isinstance(d, int) or not isinstance(dims, list) or len(dims) != d + 1:
        raise ParseError("field 'dims' must list d+1 dimensions")
    if not all(isinstance(n, int) and n >= 0 for n in dims):
        raise ParseError("field 'dims' must hold nonnegative integers")
    if not isinstance(data["boundaries"], list) or len(data["boundaries"]) != d:
        raise ParseError(f"field 'boundaries' must list {d} matrices")
    if not isinstance(data["chirality"], list) or len(data["chirality"]) != d + 1:
        raise ParseError(f"field 'chirality' must list {d + 1} matrices")

    boundaries, qbounds = [], []
    for j in range(d):
        f, q = _decode_matrix(
            data["boundaries"][j], dims[j + 1], dims[j], f"boundaries[{j}]"
        )
        boundaries.append(f)
        qbounds.append(q)
    gammas, qgammas = [], []
    for j in range(d + 1):
        f, q = _decode_matrix(
            data["chirality"][j], dims[d - j], dims[j], f"chirality[{j}]"
        )
        gammas.append(f)
        qgammas.append(q)

    frame = None
    qreps = None
    if "frame" in data and data["frame"] is not None:
        reps_data = data["frame"].get("reps") if isinstance(data["frame"], dict) else None
        if not isinstance(reps_data, list) or len(reps_data) != d + 1:
            raise ParseError(f"field 'frame.reps' must list {d + 1} matrices")
        reps, qrep_list, betti = [], [], []
        for j in range(d + 1):
            if not isinstance(reps_data[j], list):
                raise ParseError(f"frame.reps[{j}] must be a matrix")
            cols = len(reps_data[j][0]) if reps_data[j] else 0
            f, q = _decode_matrix(reps_data[j], dims[j], cols, f"frame.reps[{j}]") if dims[j] else (
                np.zeros((0, 0), dtype=complex), oracle._qzeros(0, 0)
            )
            reps.append(f)
            qrep_list.append(q)
            betti.append(f.shape[1])
        frame = CohomologyFrame(tuple(reps), tuple(betti))
        if all(q is not None for q in qrep_list):
            qreps = tuple(qrep_list)

    model = None
    if isinstance(data.get("model"), dict) and "kind" in data["model"]:
        m = data["model"]
        try:
            model = ModelSpec(
                kind=m["kind"],
                d=m.get("d", d),
                half_dims=tuple(m.get("half_dims", ())),
                betti=tuple(m.get("betti", ())),
                mu=complex(*m.get("mu", (2.0, 0.0))),
                n=m.get("n", 1),
                seed=m.get("seed", 0),
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"field 'model': {exc}") from exc

    exact = all(q is not None for q in qbounds) and all(q is not None for q in qgammas)
    inst = Instance(
        complex=CochainComplex(tuple(dims), tuple(boundaries)),
        chirality=ChiralityOperator(tuple(gammas)),
        frame=frame,
        model=model,
        exact=exact,
        digest=digest,
    )
    if exact:
        inst.exact_complex = oracle.ExactComplex(tuple(dims), tuple(qbounds))
        inst.exact_chirality = oracle.ExactChirality(tuple(qgammas))
        inst.exact_frame_reps = qreps
    return inst


def _encode_complex(z: complex, exact: bool):
    if exact:
        re = Fraction(z.real)
        im = Fraction(z.imag)
        return {"num": [re.numerator, re.denominator, im.numerator, im.denominator]}
    return [z.real, z.imag]


def _gaussian_integral(matrices) -> bool:
    for m in matrices:
        if m.size and (
            np.any(np.rint(m.real) != m.real) or np.any(np.rint(m.imag) != m.imag)
        ):
            return False
    return True


def instance_to_json(c: CochainComplex, g: ChiralityOperator,
                     frame: CohomologyFrame | None = None,
                     model: ModelSpec | None = None,
                     exact: bool | None = None) -> str:
    """Serialize an instance; rational encoding when entries allow (or forced)."""
    matrices = list(c.boundaries) + list(g.blocks)
    if exact is None:
        exact = _gaussian_integral(matrices)

    def enc(mat):
        return [[_encode_complex(z, exact) for z in row] for row in mat]

    data = {
        "schema_version": SCHEMA_VERSION,
        "d": c.d,
        "dims": list(c.dims),
        "boundaries": [enc(b) for b in c.boundaries],
        "chirality": [enc(b) for b in g.blocks],
    }
    if frame is not None:
        data["frame"] = {"reps": [enc(r) for r in frame.reps]}
    if model is not None:
        data["model"] = {
            "kind": model.kind,
            "d": model.d,
            "half_dims": list(model.half_dims),
            "betti": list(model.betti),
            "mu": [model.mu.real, model.mu.imag],
            "n": model.n,
            "seed": model.seed,
        }
    return json.dumps(data, indent=2)


def complex_pair(z: complex):
    return [float(np.real(z)), float(np.imag(z))]
